"""Independent brute-force validators and reference fixtures.

Grid oracles evaluate the defining trace-norm / majorization inequalities
pointwise, sharing no algebra with the closed-form decisions they check.
They are one-sided: a grid can certify a violation but never feasibility,
so a passing sweep only means "consistent with feasible".

Also here: the one-parameter family of worked instances used throughout
the test suite, the non-unital channel that generates it, an explicit
unital channel for the c=0 member, and a randomized constructive search
over mixtures of unitaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import least_squares

from .errors import NotCPTP, OutOfRange, RejectionExhausted
from .feasibility import (
    ProblemInstance,
    _neg_intervals,
    _witness_candidates,
    decide_unital,
    parabola_coeffs,
)
from .qmat2 import from_bloch, trace_norm
from .synth import Channel, choi_of_map, kraus_from_choi

GRID_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Uniform sampling of [-bound, bound] with `count` points per axis."""

    count: int = 201
    bound: float = 20.0
    includes_endpoints: bool = True

    def __post_init__(self):
        if self.count < 3:
            raise ValueError(f"count must be >= 3, got {self.count}")
        if not self.bound > 0.0:
            raise ValueError(f"bound must be positive, got {self.bound}")

    def axis(self) -> np.ndarray:
        if self.includes_endpoints:
            return np.linspace(-self.bound, self.bound, self.count)
        return np.linspace(-self.bound, self.bound, self.count + 2)[1:-1]


class PlaneCheck(NamedTuple):
    """Result of a two-parameter grid sweep; worst = most violating point."""

    holds: bool
    beta: float
    gamma: float
    margin: float


class SpaceCheck(NamedTuple):
    """Result of a three-parameter grid sweep."""

    holds: bool
    alpha: float
    beta: float
    gamma: float
    margin: float


class LineCheck(NamedTuple):
    """Result of a one-parameter scan."""

    holds: bool
    t: float
    margin: float


def _norm_grid(alpha: float, s1, s2, betas: np.ndarray, gammas: np.ndarray):
    """Trace norms of alpha*I + beta*s1 + gamma*s2 over the (beta, gamma) mesh."""
    b = betas[:, None]
    g = gammas[None, :]
    m00 = alpha + b * s1[0, 0].real + g * s2[0, 0].real
    m11 = alpha + b * s1[1, 1].real + g * s2[1, 1].real
    re01 = b * s1[0, 1].real + g * s2[0, 1].real
    im01 = b * s1[0, 1].imag + g * s2[0, 1].imag
    half_tr = (m00 + m11) / 2.0
    det = m00 * m11 - (re01 * re01 + im01 * im01)
    spread = np.sqrt(np.maximum(half_tr * half_tr - det, 0.0))
    return np.abs(half_tr + spread) + np.abs(half_tr - spread)


def _plane_margins(inst: ProblemInstance, alpha: float, grid: GridSpec):
    axis = grid.axis()
    lhs = _norm_grid(alpha, inst.rho1, inst.rho2, axis, axis)
    rhs = _norm_grid(alpha, inst.tau1, inst.tau2, axis, axis)
    return axis, lhs - rhs


def grid_condition_iv(inst: ProblemInstance, grid: GridSpec) -> PlaneCheck:
    """Check ||I/2 + b*tau1 + g*tau2||_1 <= ||I/2 + b*rho1 + g*rho2||_1 on a grid."""
    axis, margins = _plane_margins(inst, 0.5, grid)
    flat = int(np.argmin(margins))
    i, j = np.unravel_index(flat, margins.shape)
    worst = float(margins[i, j])
    return PlaneCheck(worst >= -GRID_TOL, float(axis[i]), float(axis[j]), worst)


def grid_condition_iii(inst: ProblemInstance, grid: GridSpec) -> SpaceCheck:
    """Three-parameter variant with the identity coefficient swept too."""
    axis = grid.axis()
    best: Optional[SpaceCheck] = None
    for alpha in axis:
        _, margins = _plane_margins(inst, float(alpha), grid)
        flat = int(np.argmin(margins))
        i, j = np.unravel_index(flat, margins.shape)
        worst = float(margins[i, j])
        if best is None or worst < best.margin:
            best = SpaceCheck(True, float(alpha), float(axis[i]), float(axis[j]), worst)
    assert best is not None
    return SpaceCheck(best.margin >= -GRID_TOL, best.alpha, best.beta, best.gamma, best.margin)


def _det_diff_scan(inst: ProblemInstance, ts: np.ndarray) -> np.ndarray:
    """det(tau1 - t*tau2) - det(rho1 - t*rho2), evaluated entrywise."""

    def dets(s1, s2):
        m00 = s1[0, 0].real - ts * s2[0, 0].real
        m11 = s1[1, 1].real - ts * s2[1, 1].real
        re01 = s1[0, 1].real - ts * s2[0, 1].real
        im01 = s1[0, 1].imag - ts * s2[0, 1].imag
        return m00 * m11 - (re01 * re01 + im01 * im01)

    return dets(inst.tau1, inst.tau2) - dets(inst.rho1, inst.rho2)


def scan_condition_v(inst: ProblemInstance, ts: np.ndarray) -> LineCheck:
    """Majorization of tau1 - t*tau2 by rho1 - t*rho2 on a grid of real t.

    The pairs share the trace 1 - t, so the equal-trace determinant
    criterion applies pointwise: the margin at t is
    det(tau1 - t*tau2) - det(rho1 - t*rho2).
    """
    ts = np.asarray(ts, dtype=float)
    margins = _det_diff_scan(inst, ts)
    idx = int(np.argmin(margins))
    worst = float(margins[idx])
    return LineCheck(worst >= -GRID_TOL, float(ts[idx]), worst)


def vertex_covering_ts(
    inst: ProblemInstance,
    bound: float = 50.0,
    count: int = 1001,
    window: float = 2.0,
    window_count: int = 201,
) -> np.ndarray:
    """Scan grid for `scan_condition_v` that cannot miss a violation.

    A symmetric sweep of [-bound, bound] refined around the extremum of the
    determinant-difference parabola and around interior points of its
    negativity set, so an infeasible instance always exposes a violating t.
    """
    a2, a1, a0 = parabola_coeffs(inst)
    pieces = [np.linspace(-bound, bound, count)]
    # det(tau1 - t*tau2) - det(rho1 - t*rho2) = a2*t^2 - a1*t + a0.
    if abs(a2) > 1e-15:
        vertex = a1 / (2.0 * a2)
        for center in (vertex, -vertex):
            pieces.append(np.linspace(center - window, center + window, window_count))
    for probe in _witness_candidates(_neg_intervals(a2, -a1, a0)):
        pieces.append(np.linspace(probe - window, probe + window, window_count))
    return np.unique(np.concatenate(pieces))


def ando_majorization_grid(
    a: np.ndarray, b: np.ndarray, ts: np.ndarray, tol: float = GRID_TOL
) -> bool:
    """Grid check of the order-free majorization test for a majorized by b:
    ||I - t*a||_1 <= ||I - t*b||_1 for every sampled real t."""
    ts = np.asarray(ts, dtype=float)

    def norms(s):
        m00 = 1.0 - ts * s[0, 0].real
        m11 = 1.0 - ts * s[1, 1].real
        re01 = -ts * s[0, 1].real
        im01 = -ts * s[0, 1].imag
        half_tr = (m00 + m11) / 2.0
        det = m00 * m11 - (re01 * re01 + im01 * im01)
        spread = np.sqrt(np.maximum(half_tr * half_tr - det, 0.0))
        return np.abs(half_tr + spread) + np.abs(half_tr - spread)

    return bool(np.all(norms(a) <= norms(b) + tol))


# ---------------------------------------------------------------------------
# Worked fixtures
# ---------------------------------------------------------------------------


def example_family(c: float) -> ProblemInstance:
    """One-parameter instance family, c in [0, 1].

    The outputs are the images of the inputs under `example_map(1/2, 1/2)`,
    so some channel always exists; a *unital* one exists only for c below
    a threshold near 0.608.
    """
    if not 0.0 <= c <= 1.0:
        raise OutOfRange(f"family parameter must lie in [0, 1], got {c!r}")
    w = math.sqrt(c * (1.0 - c))
    rho1 = np.array(
        [[c, 0.75j * w], [-0.75j * w, 1.0 - c]], dtype=complex
    )
    rho2 = np.array([[0.2, 0.4], [0.4, 0.8]], dtype=complex)
    tau1 = np.array(
        [[(1.0 + c) / 2.0, 0.375j * w], [-0.375j * w, (1.0 - c) / 2.0]],
        dtype=complex,
    )
    tau2 = np.array([[0.6, 0.2], [0.2, 0.4]], dtype=complex)
    return ProblemInstance(rho1, rho2, tau1, tau2)


def example_map(p: float, kappa: float) -> Channel:
    """The (generally non-unital) channel generating `example_family`.

    Acts as rho -> [[rho00 + (1-p) rho11, kappa*rho01],
                    [kappa*rho10,          p*rho11]];
    CPTP exactly when 1 >= p >= kappa^2.
    """
    if p > 1.0 + 1e-12 or p < kappa * kappa - 1e-12:
        raise NotCPTP(f"requires 1 >= p >= kappa^2, got p={p!r}, kappa={kappa!r}")
    k1 = np.array([[1.0, 0.0], [0.0, kappa]], dtype=complex)
    k2 = np.array([[0.0, math.sqrt(max(1.0 - p, 0.0))], [0.0, 0.0]], dtype=complex)
    k3 = np.array(
        [[0.0, 0.0], [0.0, math.sqrt(max(p - kappa * kappa, 0.0))]], dtype=complex
    )
    return Channel((k1, k2, k3), provenance="example_map")


def example1_apply(rho: np.ndarray) -> np.ndarray:
    """Unital CPTP map sending the c=0 family member's inputs to its outputs."""
    rho = np.asarray(rho, dtype=complex)
    coh = rho[0, 1] + rho[1, 0]
    mix = (rho[0, 0] + rho[1, 1]) / 2.0
    return np.array(
        [[mix + coh / 8.0, coh / 4.0], [coh / 4.0, mix - coh / 8.0]], dtype=complex
    )


def example1_apply_nontp_variant(rho: np.ndarray) -> np.ndarray:
    """One-entry variant of `example1_apply` with the bottom-right built from
    rho00 + rho01 instead of rho00 + rho11; not trace preserving.  Kept as a
    fixture to pin down the discrepancy."""
    rho = np.asarray(rho, dtype=complex)
    coh = rho[0, 1] + rho[1, 0]
    top = (rho[0, 0] + rho[1, 1]) / 2.0 + coh / 8.0
    bottom = (rho[0, 0] + rho[0, 1]) / 2.0 - coh / 8.0
    return np.array([[top, coh / 4.0], [coh / 4.0, bottom]], dtype=complex)


def example1_channel() -> Channel:
    """`example1_apply` as a Kraus channel (via its Choi eigendecomposition)."""
    kraus = kraus_from_choi(choi_of_map(example1_apply))
    return Channel(tuple(kraus), provenance="example1")


# ---------------------------------------------------------------------------
# Randomized generators and constructive search
# ---------------------------------------------------------------------------


def _random_density(rng: np.random.Generator) -> np.ndarray:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius = 0.5 * rng.uniform() ** (1.0 / 3.0)
    return from_bloch(1.0, radius * direction)


def random_instance(seed: int, mode: str = "any", max_draws: int = 100_000) -> ProblemInstance:
    """Deterministic random instance; `mode` in {any, feasible, infeasible}
    rejection-samples against `decide_unital` (cap `max_draws`)."""
    if mode not in ("any", "feasible", "infeasible"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        inst = ProblemInstance(*(_random_density(rng) for _ in range(4)))
        if mode == "any":
            return inst
        feasible = decide_unital(inst).feasible
        if feasible == (mode == "feasible"):
            return inst
    raise RejectionExhausted(f"no {mode} instance within {max_draws} draws")


@dataclass(frozen=True)
class SearchResult:
    """Outcome of `random_channel_search`; channel is None when not found."""

    found: bool
    channel: Optional[Channel]
    best_residual: float
    restarts_used: int


def _mixture_from_params(x: np.ndarray, n_unitaries: int):
    """Stack of unitaries (n, 2, 2) plus simplex weights from a flat vector."""
    angles = x[: 3 * n_unitaries].reshape(n_unitaries, 3)
    psi, theta, lam = angles[:, 0], angles[:, 1], angles[:, 2]
    ct, st = np.cos(theta), np.sin(theta)
    phase_psi, phase_lam = np.exp(1j * psi), np.exp(1j * lam)
    unitaries = np.empty((n_unitaries, 2, 2), dtype=complex)
    unitaries[:, 0, 0] = ct
    unitaries[:, 0, 1] = -phase_lam * st
    unitaries[:, 1, 0] = phase_psi * st
    unitaries[:, 1, 1] = phase_psi * phase_lam * ct
    raw = x[3 * n_unitaries :]
    weights = raw * raw + 1e-12
    weights = weights / weights.sum()
    return unitaries, weights


def _mixture_apply(unitaries, weights, state):
    rotated = unitaries @ state @ unitaries.conj().transpose(0, 2, 1)
    return np.tensordot(weights, rotated, axes=1)


def random_channel_search(
    inst: ProblemInstance,
    budget: int = 12,
    n_unitaries: int = 3,
    seed: int = 0,
    threshold: float = 1e-6,
) -> SearchResult:
    """Search for a mixed-unitary channel mapping rho_j -> tau_j.

    Mixtures of unitaries are unital by construction, so this is an
    independent constructive check of the closed-form decisions: it
    minimizes sum_j ||T(rho_j) - tau_j||_1 by random restarts (`budget` of
    them) with local least-squares refinement, declaring success below
    `threshold`.
    """
    rng = np.random.default_rng(seed)
    n_params = 4 * n_unitaries

    def residuals(x):
        unitaries, weights = _mixture_from_params(x, n_unitaries)
        out = np.empty(8)
        for j, (src, dst) in enumerate(
            ((inst.rho1, inst.tau1), (inst.rho2, inst.tau2))
        ):
            d = _mixture_apply(unitaries, weights, src) - dst
            out[4 * j : 4 * j + 4] = (
                d[0, 0].real,
                d[1, 1].real,
                d[0, 1].real,
                d[0, 1].imag,
            )
        return out

    def objective(x) -> float:
        unitaries, weights = _mixture_from_params(x, n_unitaries)
        return sum(
            trace_norm(_mixture_apply(unitaries, weights, src) - dst)
            for src, dst in ((inst.rho1, inst.tau1), (inst.rho2, inst.tau2))
        )

    best_x = None
    best_val = math.inf
    for restart in range(budget):
        if restart == 0:
            x0 = np.concatenate([np.zeros(3 * n_unitaries), np.ones(n_unitaries)])
        else:
            x0 = np.concatenate(
                [
                    rng.uniform(0.0, 2.0 * math.pi, size=3 * n_unitaries),
                    rng.uniform(0.5, 1.5, size=n_unitaries),
                ]
            )
        fit = least_squares(
            residuals, x0, method="trf", xtol=1e-12, ftol=1e-12, gtol=1e-12,
            max_nfev=40,
        )
        val = objective(fit.x)
        if val < best_val:
            best_val, best_x = val, fit.x
        if best_val <= threshold:
            break
    restarts_used = restart + 1

    if best_val <= threshold:
        unitaries, weights = _mixture_from_params(best_x, n_unitaries)
        kraus = tuple(math.sqrt(w) * u for w, u in zip(weights, unitaries))
        return SearchResult(True, Channel(kraus, provenance="search"), best_val, restarts_used)
    return SearchResult(False, None, best_val, restarts_used)
