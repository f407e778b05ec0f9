"""Feasibility and synthesis of unital qubit channels between state pairs.

Decide whether a unital (or any) quantum channel maps a pair of qubit
density matrices (rho1, rho2) onto a target pair (tau1, tau2), construct
an explicit Kraus-form witness when one exists, and cross-validate every
closed-form decision against brute-force grid oracles.
"""

from .canonical import CanonicalForm, PauliDiagonalParams, canonicalize
from .errors import (
    DegenerateInputSpan,
    DimensionMismatch,
    InfeasibleInstance,
    NotCPTP,
    NotHermitian,
    NotPositive,
    NotTraceOne,
    NotUnit,
    NotUnitary,
    OutOfRange,
    RejectionExhausted,
    TraceMismatch,
    UnifeasError,
)
from .feasibility import (
    Decision,
    ParabolaCoeffs,
    ProblemInstance,
    ViolatedInequality,
    ViolatingParameter,
    decide_alberti_uhlmann,
    decide_degenerate,
    decide_unital,
    dim_operator_system,
    matrix_majorization_2x2,
    parabola_coeffs,
)
from .oracle import (
    GridSpec,
    SearchResult,
    ando_majorization_grid,
    example1_channel,
    example_family,
    example_map,
    grid_condition_iii,
    grid_condition_iv,
    random_channel_search,
    random_instance,
    scan_condition_v,
    vertex_covering_ts,
)
from .qmat2 import (
    BlochVector,
    adjugate,
    bloch,
    conjugate,
    det2,
    eigenvalues_herm,
    from_bloch,
    hs_inner,
    trace_norm,
    validate_density,
)
from .synth import (
    Channel,
    VerificationReport,
    choi,
    choose_c,
    fujiwara_algoet_interval,
    pauli_channel,
    synthesize,
    verify_channel,
)

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "CanonicalForm",
    "Channel",
    "Decision",
    "DegenerateInputSpan",
    "DimensionMismatch",
    "GridSpec",
    "InfeasibleInstance",
    "NotCPTP",
    "NotHermitian",
    "NotPositive",
    "NotTraceOne",
    "NotUnit",
    "NotUnitary",
    "OutOfRange",
    "ParabolaCoeffs",
    "PauliDiagonalParams",
    "ProblemInstance",
    "RejectionExhausted",
    "SearchResult",
    "TraceMismatch",
    "UnifeasError",
    "VerificationReport",
    "ViolatedInequality",
    "ViolatingParameter",
    "adjugate",
    "ando_majorization_grid",
    "bloch",
    "canonicalize",
    "choi",
    "choose_c",
    "conjugate",
    "decide_alberti_uhlmann",
    "decide_degenerate",
    "decide_unital",
    "det2",
    "dim_operator_system",
    "eigenvalues_herm",
    "example1_channel",
    "example_family",
    "example_map",
    "from_bloch",
    "fujiwara_algoet_interval",
    "grid_condition_iii",
    "grid_condition_iv",
    "hs_inner",
    "matrix_majorization_2x2",
    "parabola_coeffs",
    "pauli_channel",
    "random_channel_search",
    "random_instance",
    "scan_condition_v",
    "synthesize",
    "trace_norm",
    "validate_density",
    "verify_channel",
    "vertex_covering_ts",
]
