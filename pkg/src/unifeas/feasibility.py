"""Exact feasibility decisions for simultaneous two-state qubit conversion.

Three decision procedures, all closed form:

* `decide_alberti_uhlmann` -- existence of *some* channel mapping
  (rho1, rho2) to (tau1, tau2), via the trace-norm inequality family
  ||rho1 - t rho2||_1 >= ||tau1 - t tau2||_1 for all t >= 0, decided by
  root analysis of two quadratics (no sampling).
* `decide_unital` -- existence of a *unital* channel, via three
  determinant inequalities on the input/output pairs.
* `decide_degenerate` -- the special cases where {I, rho1, rho2} spans
  fewer than three dimensions.

Every infeasible verdict carries a machine-checkable witness: either a
named inequality with both sides, or a parameter value t at which a
trace-norm comparison fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .errors import DimensionMismatch, TraceMismatch
from .qmat2 import (
    IDENTITY2,
    adjugate,
    bloch,
    det_herm,
    trace_norm,
    validate_density,
)

# Symmetric absolute tolerance for every closed-form inequality check.
DECISION_TOL = 1e-12
# Tolerance for the equality constraints of the degenerate (dim < 3) paths.
DEGENERATE_TOL = 1e-10
# Singular-value cutoff for the rank of the Bloch coefficient matrix.
RANK_CUTOFF = 1e-10


@dataclass(frozen=True)
class ViolatedInequality:
    """A required inequality lhs >= rhs that failed (lhs < rhs)."""

    name: str
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ViolatingParameter:
    """A parameter t at which a norm comparison lhs_norm >= rhs_norm fails.

    For the Alberti-Uhlmann decision the norms are ||rho1 - t rho2||_1 and
    ||tau1 - t tau2||_1 (t >= 0).  For majorization-based verdicts they are
    the trace norms of the *traceless parts* of rho1 - t rho2 and
    tau1 - t tau2 (t real), which for equal-trace pairs fail strictly
    exactly where majorization fails.
    """

    t: float
    lhs_norm: float
    rhs_norm: float


Witness = Union[ViolatedInequality, ViolatingParameter, None]


@dataclass(frozen=True)
class Decision:
    """Feasibility verdict plus witness and per-inequality slack margins."""

    verdict: str  # "feasible" | "infeasible"
    witness: Witness
    margins: tuple[tuple[str, float], ...]

    @property
    def feasible(self) -> bool:
        return self.verdict == "feasible"


class ParabolaCoeffs(NamedTuple):
    """Coefficients of t^2*a2 + t*a1 + a0 (see `parabola_coeffs`)."""

    a2: float
    a1: float
    a0: float


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """The quadruple (rho1, rho2, tau1, tau2) of validated density matrices."""

    rho1: np.ndarray
    rho2: np.ndarray
    tau1: np.ndarray
    tau2: np.ndarray

    def __post_init__(self):
        for name in ("rho1", "rho2", "tau1", "tau2"):
            object.__setattr__(self, name, validate_density(getattr(self, name)))

    @property
    def states(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (self.rho1, self.rho2, self.tau1, self.tau2)


def _feasible(margins) -> Decision:
    return Decision("feasible", None, tuple(margins))


def _infeasible(witness, margins) -> Decision:
    return Decision("infeasible", witness, tuple(margins))


def dim_operator_system(rho1: np.ndarray, rho2: np.ndarray) -> int:
    """Dimension (1, 2 or 3) of span{I, rho1, rho2}.

    Equals 1 + rank of the 2x3 matrix of Bloch coefficient rows, with the
    rank read off singular values above `RANK_CUTOFF`.
    """
    rows = np.array([bloch(rho1), bloch(rho2)], dtype=float)
    svals = np.linalg.svd(rows, compute_uv=False)
    return 1 + int(np.count_nonzero(svals > RANK_CUTOFF))


def adjugate_inner(a: np.ndarray, b: np.ndarray) -> float:
    """tr(a^# b) for Hermitian a, b (a real number)."""
    return float(np.trace(adjugate(a) @ b).real)


def parabola_coeffs(inst: ProblemInstance) -> ParabolaCoeffs:
    """Coefficients of the majorization-difference parabola.

    a2 = det(tau2) - det(rho2),
    a1 = -(tr(rho1^# rho2) - tr(tau1^# tau2)),
    a0 = det(tau1) - det(rho1).

    The unital decision depends only on (a0, a2, a1^2); see `decide_unital`.
    """
    a2 = det_herm(inst.tau2) - det_herm(inst.rho2)
    a1 = adjugate_inner(inst.tau1, inst.tau2) - adjugate_inner(inst.rho1, inst.rho2)
    a0 = det_herm(inst.tau1) - det_herm(inst.rho1)
    return ParabolaCoeffs(a2, a1, a0)


def matrix_majorization_2x2(a: np.ndarray, b: np.ndarray, tol: float = DECISION_TOL) -> bool:
    """True iff a is majorized by b (a = T(b) for some unital channel T).

    For equal-trace Hermitian 2x2 matrices this is exactly
    det(a) >= det(b); unequal traces raise TraceMismatch.
    """
    tr_a = float(np.trace(a).real)
    tr_b = float(np.trace(b).real)
    if abs(tr_a - tr_b) > 1e-10:
        raise TraceMismatch(f"traces differ: {tr_a!r} vs {tr_b!r}")
    return det_herm(a) >= det_herm(b) - tol


# ---------------------------------------------------------------------------
# Quadratic sign analysis on intervals (exact up to floating point).
# ---------------------------------------------------------------------------

_INF = math.inf


def _quad_roots(c2: float, c1: float, c0: float) -> tuple[float, float]:
    """Real roots of c2 t^2 + c1 t + c0 (c2 != 0, disc > 0), ascending."""
    disc = c1 * c1 - 4.0 * c2 * c0
    s = math.sqrt(disc)
    # Numerically stable split: the larger-magnitude root first.
    if c1 >= 0.0:
        q = -(c1 + s) / 2.0
    else:
        q = -(c1 - s) / 2.0
    if q != 0.0:
        r1, r2 = q / c2, c0 / q
    else:  # c1 == 0 and c0*c2 <= 0
        r = math.sqrt(-c0 / c2) if c0 != 0.0 else 0.0
        r1, r2 = -r, r
    return (r1, r2) if r1 <= r2 else (r2, r1)


def _neg_intervals(c2: float, c1: float, c0: float) -> list[tuple[float, float]]:
    """Open intervals on which c2 t^2 + c1 t + c0 < 0."""
    if c2 == 0.0:
        if c1 == 0.0:
            return [(-_INF, _INF)] if c0 < 0.0 else []
        root = -c0 / c1
        return [(-_INF, root)] if c1 > 0.0 else [(root, _INF)]
    disc = c1 * c1 - 4.0 * c2 * c0
    if c2 > 0.0:
        if disc <= 0.0:
            return []
        lo, hi = _quad_roots(c2, c1, c0)
        return [(lo, hi)]
    if disc <= 0.0:
        return [(-_INF, _INF)]
    lo, hi = _quad_roots(c2, c1, c0)
    return [(-_INF, lo), (hi, _INF)]


def _clip_nonnegative(intervals) -> list[tuple[float, float]]:
    out = []
    for lo, hi in intervals:
        if hi <= 0.0:
            continue
        out.append((max(lo, 0.0), hi))
    return out


def _intersect(xs, ys) -> list[tuple[float, float]]:
    out = []
    for alo, ahi in xs:
        for blo, bhi in ys:
            lo, hi = max(alo, blo), min(ahi, bhi)
            if lo < hi:
                out.append((lo, hi))
    return out


def _quad_eval(c2: float, c1: float, c0: float, t: float) -> float:
    return (c2 * t + c1) * t + c0


def _quad_min_on(c2, c1, c0, lo, hi) -> tuple[float, float]:
    """(min value, argmin) of the quadratic on the closed interval [lo, hi].

    lo is finite; hi may be +inf, in which case a quadratic unbounded below
    reports (-inf, argmin at an arbitrarily large t).
    """
    best = (_quad_eval(c2, c1, c0, lo), lo)
    if math.isfinite(hi):
        cand = (_quad_eval(c2, c1, c0, hi), hi)
        if cand[0] < best[0]:
            best = cand
    else:
        if c2 < 0.0 or (c2 == 0.0 and c1 < 0.0):
            return (-_INF, _INF)
    if c2 > 0.0:
        vertex = -c1 / (2.0 * c2)
        if lo < vertex < hi:
            cand = (_quad_eval(c2, c1, c0, vertex), vertex)
            if cand[0] < best[0]:
                best = cand
    return best


def _witness_candidates(intervals) -> list[float]:
    """Deterministic interior sample points of a union of open intervals."""
    cands = []
    for lo, hi in intervals:
        if math.isfinite(lo) and math.isfinite(hi):
            cands.append((lo + hi) / 2.0)
        elif math.isfinite(lo):
            cands.extend([lo + 1.0, lo + 10.0])
        elif math.isfinite(hi):
            cands.extend([hi - 1.0, hi - 10.0])
        else:
            cands.extend([-10.0, 0.0, 10.0])
    return cands


# ---------------------------------------------------------------------------
# Decisions
# ---------------------------------------------------------------------------


def decide_alberti_uhlmann(inst: ProblemInstance) -> Decision:
    """Exact verdict of ||rho1 - t rho2||_1 >= ||tau1 - t tau2||_1 for all t >= 0.

    No sampling is involved.  The reduction:

      ||M||_1^2 = tr(M^2) + 2|det M| and tr(M^2) = (tr M)^2 - 2 det M give
      ||M||_1^2 = (tr M)^2 - 4*min(det M, 0) for Hermitian M.  Both
      differences rho1 - t*rho2 and tau1 - t*tau2 have trace 1 - t, so the
      norm inequality at a given t is equivalent to

          min(q_rho(t), 0) <= min(q_tau(t), 0),

      where q(t) = det(s1 - t*s2) = det(s1) - t*tr(s1^# s2) + t^2*det(s2).
      Where q_tau(t) >= 0 this holds automatically; where q_tau(t) < 0 it
      requires q_tau(t) >= q_rho(t).  Both q_tau and the difference
      q_tau - q_rho are quadratics in t, so the quantifier over t >= 0
      reduces to sign analysis on intervals with computable endpoints.
    """
    r1, r2, t1, t2 = inst.states
    # Densities are PSD up to the validation tolerance; clamp their
    # determinants at zero so validation noise cannot fabricate a sign
    # change in the leading or constant coefficient.
    q_tau = (max(det_herm(t2), 0.0), -adjugate_inner(t1, t2), max(det_herm(t1), 0.0))
    q_rho = (max(det_herm(r2), 0.0), -adjugate_inner(r1, r2), max(det_herm(r1), 0.0))
    diff = tuple(a - b for a, b in zip(q_tau, q_rho))

    region = _clip_nonnegative(_neg_intervals(*q_tau))
    if not region:
        return _feasible([("au_min_margin", _INF)])

    worst = _INF
    for lo, hi in region:
        val, _ = _quad_min_on(*diff, lo, hi)
        worst = min(worst, val)
    if worst >= -DECISION_TOL:
        return _feasible([("au_min_margin", worst)])

    violating = _intersect(_neg_intervals(*diff), region)
    best: Optional[tuple[float, float, float, float]] = None
    for t in _witness_candidates(violating):
        lhs = trace_norm(r1 - t * r2)
        rhs = trace_norm(t1 - t * t2)
        gap = rhs - lhs
        if best is None or gap > best[0]:
            best = (gap, t, lhs, rhs)
    assert best is not None
    _, t_w, lhs, rhs = best
    return _infeasible(
        ViolatingParameter(t_w, lhs, rhs), [("au_min_margin", worst)]
    )


def _traceless_part_norm(m: np.ndarray) -> float:
    tr = np.trace(m).real
    return trace_norm(m - (tr / 2.0) * IDENTITY2)


def decide_unital(inst: ProblemInstance, tol: float = DECISION_TOL) -> Decision:
    """Existence of a unital channel mapping (rho1, rho2) to (tau1, tau2).

    With (a2, a1, a0) = `parabola_coeffs(inst)` the condition is

        a0 >= 0,  a2 >= 0,  a1^2 <= 4*a0*a2,

    each checked with symmetric absolute tolerance `tol`.  Inputs spanning
    an operator system of dimension < 3 are routed to `decide_degenerate`.
    """
    dim = dim_operator_system(inst.rho1, inst.rho2)
    if dim < 3:
        return decide_degenerate(inst, dim)
    a2, a1, a0 = parabola_coeffs(inst)
    disc_slack = 4.0 * a0 * a2 - a1 * a1
    margins = [("det1_slack", a0), ("det2_slack", a2), ("disc_slack", disc_slack)]
    if a0 >= -tol and a2 >= -tol and disc_slack >= -tol:
        return _feasible(margins)
    if a0 < -tol:
        witness = ViolatedInequality(
            "det_tau1_ge_det_rho1", det_herm(inst.tau1), det_herm(inst.rho1)
        )
        return _infeasible(witness, margins)
    if a2 < -tol:
        witness = ViolatedInequality(
            "det_tau2_ge_det_rho2", det_herm(inst.tau2), det_herm(inst.rho2)
        )
        return _infeasible(witness, margins)
    # Discriminant violation: majorization of tau1 - t*tau2 by rho1 - t*rho2
    # fails somewhere.  The difference of determinants along t is the
    # quadratic a2 t^2 - a1 t + a0 (note the sign of a1: expanding
    # det(s1 - t s2) produces -t*tr(s1^# s2), so the t-linear term of
    # det(tau diff) - det(rho diff) is +[tr(rho1^# rho2) - tr(tau1^# tau2)]
    # = -a1).  Its minimizer is the most violating parameter.
    if a2 > tol:
        t_w = a1 / (2.0 * a2)
    else:
        # Degenerate parabola: pick an interior point of the negativity set.
        neg = _neg_intervals(a2, -a1, a0)
        t_w = _witness_candidates(neg)[0]
    lhs = _traceless_part_norm(inst.rho1 - t_w * inst.rho2)
    rhs = _traceless_part_norm(inst.tau1 - t_w * inst.tau2)
    return _infeasible(ViolatingParameter(t_w, lhs, rhs), margins)


def _affine_span_decomposition(inst: ProblemInstance):
    """For dim-2 inputs, express the non-anchor state over {I, anchor}.

    Returns (anchor, lam, mu) with anchor in {1, 2} such that
    rho_other = lam*I + mu*rho_anchor, where "other" is the remaining index.
    The anchor is the state with nonvanishing Bloch part.
    """
    b1 = np.array(bloch(inst.rho1))
    b2 = np.array(bloch(inst.rho2))
    n1 = float(np.dot(b1, b1))
    if n1 > RANK_CUTOFF**2:
        mu = float(np.dot(b2, b1)) / n1
        return 1, (1.0 - mu) / 2.0, mu
    n2 = float(np.dot(b2, b2))
    mu = float(np.dot(b1, b2)) / n2 if n2 > RANK_CUTOFF**2 else 0.0
    return 2, (1.0 - mu) / 2.0, mu


def decide_degenerate(inst: ProblemInstance, dim: int) -> Decision:
    """Feasibility when span{I, rho1, rho2} has dimension 1 or 2.

    dim 1: both inputs are I/2, which every unital channel fixes, so the
    instance is feasible iff tau1 = tau2 = I/2.

    dim 2: the inputs satisfy an affine relation rho_other = lam*I +
    mu*rho_anchor which any linear unital map transports to the outputs,
    so feasibility requires tau_other = lam*I + mu*tau_anchor plus a
    unital conversion rho_anchor -> tau_anchor, i.e. majorization
    (det(tau_anchor) >= det(rho_anchor)).
    """
    actual = dim_operator_system(inst.rho1, inst.rho2)
    if dim != actual:
        raise DimensionMismatch(f"supplied dim {dim}, computed {actual}")
    half_eye = IDENTITY2 / 2.0

    if dim == 1:
        res1 = trace_norm(inst.tau1 - half_eye)
        res2 = trace_norm(inst.tau2 - half_eye)
        margins = [
            ("tau1_fixed_point_slack", DEGENERATE_TOL - res1),
            ("tau2_fixed_point_slack", DEGENERATE_TOL - res2),
        ]
        if res1 <= DEGENERATE_TOL and res2 <= DEGENERATE_TOL:
            return _feasible(margins)
        name = "tau1_is_maximally_mixed" if res1 > DEGENERATE_TOL else "tau2_is_maximally_mixed"
        res = max(res1, res2)
        return _infeasible(ViolatedInequality(name, DEGENERATE_TOL, res), margins)

    anchor, lam, mu = _affine_span_decomposition(inst)
    if anchor == 1:
        rho_a, tau_a, tau_o = inst.rho1, inst.tau1, inst.tau2
        consist_name, det_name, det_slack_name = (
            "tau2_matches_affine_span",
            "det_tau1_ge_det_rho1",
            "det1_slack",
        )
    else:
        rho_a, tau_a, tau_o = inst.rho2, inst.tau2, inst.tau1
        consist_name, det_name, det_slack_name = (
            "tau1_matches_affine_span",
            "det_tau2_ge_det_rho2",
            "det2_slack",
        )
    resid = trace_norm(tau_o - (lam * IDENTITY2 + mu * tau_a))
    det_slack = det_herm(tau_a) - det_herm(rho_a)
    margins = [
        (consist_name + "_slack", DEGENERATE_TOL - resid),
        (det_slack_name, det_slack),
    ]
    if resid > DEGENERATE_TOL:
        return _infeasible(
            ViolatedInequality(consist_name, DEGENERATE_TOL, resid), margins
        )
    if det_slack < -DECISION_TOL:
        return _infeasible(
            ViolatedInequality(det_name, det_herm(tau_a), det_herm(rho_a)), margins
        )
    return _feasible(margins)
