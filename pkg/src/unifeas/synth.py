"""Construction and verification of witnessing unital channels.

Given a feasible instance, build an explicit channel in Kraus form that
maps rho_j to tau_j, is trace preserving, unital and completely positive.
The dim-3 route conjugates a Pauli mixing channel by the alignment
unitaries from `canonical`; the sigma_z eigenvalue of the mixing channel is
free within the interval allowed by the Fujiwara-Algoet conditions and is
selected by a pluggable policy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .canonical import canonicalize, z_aligning_unitary
from .errors import InfeasibleInstance, NotCPTP
from .feasibility import (
    ProblemInstance,
    _affine_span_decomposition,
    decide_unital,
    dim_operator_system,
)
from .qmat2 import IDENTITY2, PAULIS, bloch, trace_norm

DEFAULT_VERIFY_TOL = 1e-9
_TP_TOL = 1e-10
# Alignment roundoff allowance when a feasible instance canonicalizes to
# scale factors a hair outside the unit square.
_CLAMP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Channel:
    """A channel in Kraus form: X -> sum_i K_i X K_i^dagger.

    Kraus form is completely positive by construction; trace preservation
    (sum K_i^dagger K_i = I) is validated at construction time.  The
    provenance tag records which constructor produced the channel
    (synthesized, pauli_diagonal, example_map, example1, search, user).
    """

    kraus: tuple[np.ndarray, ...]
    provenance: str = "user"

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise NotCPTP("a channel needs at least one Kraus operator")
        acc = sum(k.conj().T @ k for k in ops)
        resid = trace_norm(acc - IDENTITY2)
        if resid > _TP_TOL:
            raise NotCPTP(f"sum K^dagger K deviates from identity by {resid:.3e}")
        for k in ops:
            k.flags.writeable = False
        object.__setattr__(self, "kraus", ops)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.zeros((2, 2), dtype=complex)
        for k in self.kraus:
            out += k @ x @ k.conj().T
        return out


@dataclass(frozen=True)
class VerificationReport:
    """Residuals of the channel contract, checked against a tolerance.

    `passed` is true iff tp_residual, unital_residual and every mapping
    residual are within the tolerance and the Choi matrix is positive
    semidefinite up to it.
    """

    tp_residual: float
    unital_residual: float
    choi_min_eig: float
    mapping_residuals: tuple[float, float]
    passed: bool


def fujiwara_algoet_interval(
    a: float, b: float, tol: float = 0.0
) -> Optional[tuple[float, float]]:
    """Allowed sigma_z eigenvalues c for a CPTP map scaling (sx, sy) by (a, b).

    Returns [|a+b|-1, 1-|a-b|], nonempty exactly when max(|a|, |b|) <= 1;
    None when empty.  An interval inverted by less than `tol` (roundoff on
    the boundary of the unit square) collapses to its midpoint.
    """
    lo = abs(a + b) - 1.0
    hi = 1.0 - abs(a - b)
    if lo > hi:
        if lo - hi <= tol:
            mid = (lo + hi) / 2.0
            return (mid, mid)
        return None
    return (lo, hi)


def choose_c(interval: Optional[tuple[float, float]], policy: str = "midpoint") -> float:
    """Pick the sigma_z eigenvalue from a Fujiwara-Algoet interval.

    Policies: midpoint (default), zero_if_contained (0 clipped into the
    interval), min, max.
    """
    if interval is None:
        raise ValueError("empty Fujiwara-Algoet interval has no admissible c")
    lo, hi = interval
    if policy == "midpoint":
        return (lo + hi) / 2.0
    if policy == "zero_if_contained":
        return min(max(0.0, lo), hi)
    if policy == "min":
        return lo
    if policy == "max":
        return hi
    raise ValueError(f"unknown c policy: {policy!r}")


def pauli_channel(a: float, b: float, c: float) -> Channel:
    """Random-Pauli channel with transfer eigenvalues (a, b, c).

    Kraus operators are sqrt(p_i) * sigma_i with the mixing probabilities
        p0 = (1+a+b+c)/4, p1 = (1+a-b-c)/4,
        p2 = (1-a+b-c)/4, p3 = (1-a-b+c)/4;
    raises NotCPTP when any probability is below -1e-12 (the
    Fujiwara-Algoet conditions fail).
    """
    probs = np.array(
        [
            (1.0 + a + b + c) / 4.0,
            (1.0 + a - b - c) / 4.0,
            (1.0 - a + b - c) / 4.0,
            (1.0 - a - b + c) / 4.0,
        ]
    )
    if np.any(probs < -1e-12):
        raise NotCPTP(
            f"mixing probabilities {probs.tolist()} are not all nonnegative"
        )
    kraus = [
        np.sqrt(p) * sigma for p, sigma in zip(probs, PAULIS) if p > 0.0
    ]
    if not kraus:  # all probabilities rounded to zero cannot happen (sum is 1)
        kraus = [IDENTITY2.copy()]
    return Channel(tuple(kraus), provenance="pauli_diagonal")


def choi_of_map(apply_fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Choi matrix sum_ij E_ij (x) T(E_ij) of an arbitrary linear map."""
    c = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            c[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = apply_fn(e)
    return c


def choi(ch: Channel) -> np.ndarray:
    """Choi matrix of a Kraus channel; trace 2 for trace-preserving maps."""
    c = np.zeros((4, 4), dtype=complex)
    for k in ch.kraus:
        w = np.asarray(k).T.reshape(-1)
        c += np.outer(w, w.conj())
    return c


def kraus_from_choi(c: np.ndarray, cutoff: float = 1e-12) -> list[np.ndarray]:
    """Kraus operators of a (nearly) PSD Choi matrix via eigendecomposition."""
    vals, vecs = np.linalg.eigh(np.asarray(c, dtype=complex))
    ops = []
    for lam, vec in zip(vals, vecs.T):
        if lam > cutoff:
            ops.append(np.sqrt(lam) * vec.reshape(2, 2).T)
    return ops


def _conjugated_kraus(base: Channel, left: np.ndarray, right: np.ndarray):
    """Kraus set of X -> left . base(right^dagger X right) . left^dagger."""
    return tuple(left @ k @ right.conj().T for k in base.kraus)


def synthesize(inst: ProblemInstance, policy: str = "midpoint") -> Channel:
    """Explicit unital CPTP channel with T(rho_j) = tau_j.

    Raises InfeasibleInstance (carrying the Decision) when no such channel
    exists.  For dim-3 inputs the channel is V . S(U^dagger X U) . V^dagger
    with S a Pauli mixing channel whose sigma_z eigenvalue is chosen by
    `policy`; degenerate inputs use a scaled-depolarizing construction on
    the anchor state (dim 2) or the full depolarizing channel (dim 1).
    """
    decision = decide_unital(inst)
    if not decision.feasible:
        raise InfeasibleInstance(decision)
    dim = dim_operator_system(inst.rho1, inst.rho2)

    if dim == 1:
        return Channel(pauli_channel(0.0, 0.0, 0.0).kraus, provenance="synthesized")

    if dim == 2:
        anchor, _, _ = _affine_span_decomposition(inst)
        rho_a = inst.rho1 if anchor == 1 else inst.rho2
        tau_a = inst.tau1 if anchor == 1 else inst.tau2
        b_rho = np.array(bloch(rho_a))
        b_tau = np.array(bloch(tau_a))
        r_rho = float(np.linalg.norm(b_rho))
        r_tau = float(np.linalg.norm(b_tau))
        shrink = min(r_tau / r_rho, 1.0)
        u_in = z_aligning_unitary(b_rho / r_rho)
        if r_tau > 1e-12:
            u_out = z_aligning_unitary(b_tau / r_tau)
        else:
            u_out = IDENTITY2.copy()
        base = pauli_channel(shrink, shrink, shrink)
        return Channel(
            _conjugated_kraus(base, u_out, u_in), provenance="synthesized"
        )

    form = canonicalize(inst)
    a, b = form.a, form.b
    if max(abs(a), abs(b)) > 1.0:
        # Feasibility was already certified, so any excess is alignment
        # roundoff; pull back onto the unit square.
        a = min(max(a, -1.0), 1.0)
        b = min(max(b, -1.0), 1.0)
    interval = fujiwara_algoet_interval(a, b, tol=_CLAMP_TOL)
    c = choose_c(interval, policy)
    base = pauli_channel(a, b, c)
    return Channel(
        _conjugated_kraus(base, form.V, form.U), provenance="synthesized"
    )


def verify_channel(
    ch: Channel, inst: ProblemInstance, tol: float = DEFAULT_VERIFY_TOL
) -> VerificationReport:
    """Residual report: trace preservation, unitality, complete positivity
    and the two mapping constraints, each compared against `tol`."""
    tp_acc = sum(k.conj().T @ k for k in ch.kraus)
    un_acc = sum(k @ k.conj().T for k in ch.kraus)
    tp_residual = trace_norm(tp_acc - IDENTITY2)
    unital_residual = trace_norm(un_acc - IDENTITY2)
    choi_min_eig = float(np.linalg.eigvalsh(choi(ch))[0])
    mapping = (
        trace_norm(ch.apply(inst.rho1) - inst.tau1),
        trace_norm(ch.apply(inst.rho2) - inst.tau2),
    )
    passed = bool(
        tp_residual <= tol
        and unital_residual <= tol
        and choi_min_eig >= -tol
        and max(mapping) <= tol
    )
    return VerificationReport(
        tp_residual=tp_residual,
        unital_residual=unital_residual,
        choi_min_eig=choi_min_eig,
        mapping_residuals=mapping,
        passed=passed,
    )
