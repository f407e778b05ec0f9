"""End-to-end acceptance suite.

One test per acceptance criterion, each printing a single PASS/FAIL line
(run `pytest tests/test_acceptance.py -s` to see them live).  Tolerances
are pinned here and nowhere else.
"""

import numpy as np
import pytest

from unifeas.canonical import canonicalize
from unifeas.errors import InfeasibleInstance
from unifeas.feasibility import (
    decide_unital,
    matrix_majorization_2x2,
    parabola_coeffs,
)
from unifeas.oracle import (
    GridSpec,
    example1_apply,
    example1_apply_nontp_variant,
    example1_channel,
    example_family,
    example_map,
    grid_condition_iv,
    random_channel_search,
    random_instance,
    scan_condition_v,
    vertex_covering_ts,
)
from unifeas.qmat2 import PAULIS, SIGMA_X, from_bloch, trace_norm
from unifeas.synth import choi, choi_of_map, pauli_channel, synthesize, verify_channel

TETRA_VERTICES = np.array(
    [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)]
)


def criterion(number: int, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# Shared random-instance pool (deterministic seed stream)
# ---------------------------------------------------------------------------


class PoolItem:
    def __init__(self, seed):
        self.seed = seed
        self.instance = random_instance(seed)
        self.decision = decide_unital(self.instance)
        self.margins = dict(self.decision.margins)


@pytest.fixture(scope="module")
def pool():
    items = []
    seed = 0
    feasible = 0
    disc_violating = 0
    while not (len(items) >= 1000 and feasible >= 260 and disc_violating >= 260):
        item = PoolItem(seed)
        items.append(item)
        if item.decision.feasible:
            feasible += 1
        elif item.margins.get("disc_slack", 0.0) <= -1e-3:
            disc_violating += 1
        seed += 1
    return items


def boundary_equation_residual(c: float) -> float:
    return abs((0.7 * c - 0.3) ** 2 - 0.8 * (1 - c) * (0.25 - 21 * c / 64))


def test_criterion_1_family_threshold():
    lo, hi = 0.0, 1.0
    assert decide_unital(example_family(lo)).feasible
    assert not decide_unital(example_family(hi)).feasible
    for _ in range(80):
        mid = (lo + hi) / 2.0
        if decide_unital(example_family(mid)).feasible:
            lo = mid
        else:
            hi = mid
    c_star = (lo + hi) / 2.0
    resid = boundary_equation_residual(c_star)
    ok = abs(c_star - 0.6082) <= 5e-4 and resid <= 1e-9
    criterion(
        1, ok,
        f"unital feasibility threshold of the example family: c* = {c_star:.7f} "
        f"(|c* - 0.6082| = {abs(c_star - 0.6082):.2e} <= 5e-4, boundary equation "
        f"residual {resid:.2e} <= 1e-9)",
    )


def test_criterion_2_determinant_boundary():
    worst_formula = 0.0
    for c in np.arange(0.0, 1.0 + 1e-12, 0.1):
        _, _, a0 = parabola_coeffs(example_family(float(c)))
        worst_formula = max(worst_formula, abs(a0 - (1 - c) * (0.25 - 21 * c / 64)))
    # the slack det(tau1) - det(rho1) changes sign at 16/21
    lo, hi = 0.7, 0.8
    for _ in range(60):
        mid = (lo + hi) / 2.0
        _, _, a0 = parabola_coeffs(example_family(mid))
        if a0 > 0.0:
            lo = mid
        else:
            hi = mid
    root = (lo + hi) / 2.0
    ok = worst_formula <= 1e-12 and abs(root - 16.0 / 21.0) <= 1e-9
    criterion(
        2, ok,
        f"det slack equals (1-c)(1/4 - 21c/64) within {worst_formula:.2e} <= 1e-12 "
        f"and changes sign at {root:.10f} (|root - 16/21| = "
        f"{abs(root - 16.0 / 21.0):.2e} <= 1e-9)",
    )


def test_criterion_3_example_1():
    inst = example_family(0.0)
    synth_report = verify_channel(synthesize(inst), inst)
    explicit_report = verify_channel(example1_channel(), inst)
    checks = []
    for name, report in (("synthesized", synth_report), ("explicit", explicit_report)):
        checks.append(report.tp_residual <= 1e-10)
        checks.append(report.unital_residual <= 1e-10)
        checks.append(report.choi_min_eig >= -1e-10)
        checks.append(max(report.mapping_residuals) <= 1e-9)
    # the one-entry variant of the explicit map leaks trace on coherences
    leak = abs(np.trace(example1_apply_nontp_variant(SIGMA_X)))
    preserved = abs(np.trace(example1_apply(SIGMA_X)))
    checks.append(leak > 1e-6)
    checks.append(preserved <= 1e-12)
    criterion(
        3, all(checks),
        "c=0 member: synthesized and explicit channels pass at "
        f"(tp {synth_report.tp_residual:.1e}/{explicit_report.tp_residual:.1e}, "
        f"unital {synth_report.unital_residual:.1e}/{explicit_report.unital_residual:.1e}, "
        f"choi {synth_report.choi_min_eig:.1e}/{explicit_report.choi_min_eig:.1e}, "
        f"map {max(synth_report.mapping_residuals):.1e}/"
        f"{max(explicit_report.mapping_residuals):.1e}); "
        f"one-entry variant leaks trace {leak:.3f} > 1e-6",
    )


def test_criterion_4_example_2():
    inst = example_family(2.0 / 3.0)
    infeasible = not decide_unital(inst).feasible
    major1 = matrix_majorization_2x2(inst.tau1, inst.rho1)
    major2 = matrix_majorization_2x2(inst.tau2, inst.rho2)
    channel = example_map(0.5, 0.5)
    choi_min = float(np.linalg.eigvalsh(choi(channel))[0])
    resid = max(
        trace_norm(channel.apply(inst.rho1) - inst.tau1),
        trace_norm(channel.apply(inst.rho2) - inst.tau2),
    )
    ok = infeasible and major1 and major2 and choi_min >= -1e-12 and resid <= 1e-12
    criterion(
        4, ok,
        "c=2/3 member: no simultaneous unital channel "
        f"(infeasible={infeasible}) although tau_j is majorized by rho_j "
        f"componentwise ({major1}, {major2}) and a non-unital channel maps the "
        f"pair exactly (choi min eig {choi_min:.1e} >= -1e-12, mapping residual "
        f"{resid:.1e} <= 1e-12)",
    )


def test_criterion_5_internal_consistency(pool):
    items = pool[:1000]
    assert len(items) == 1000
    disagreements = 0
    for item in items:
        form = canonicalize(item.instance)
        by_scale = max(abs(form.a), abs(form.b)) <= 1.0 + 1e-9
        by_scan = scan_condition_v(item.instance, vertex_covering_ts(item.instance)).holds
        if not (item.decision.feasible == by_scale == by_scan):
            disagreements += 1
    criterion(
        5, disagreements == 0,
        "closed-form decision, canonical scale factors and the majorization "
        f"scan agree on {len(items)} random instances "
        f"({disagreements} disagreements)",
    )


def test_criterion_6_grid_oracle_soundness(pool):
    grid = GridSpec(401, 50.0)
    feasible = [i for i in pool if i.decision.feasible][:250]
    violating = [
        i
        for i in pool
        if not i.decision.feasible and i.margins.get("disc_slack", 0.0) <= -1e-3
    ][:250]
    assert len(feasible) == 250 and len(violating) == 250
    false_alarms = sum(
        0 if grid_condition_iv(i.instance, grid).holds else 1 for i in feasible
    )
    misses = sum(
        1 if grid_condition_iv(i.instance, grid).holds else 0 for i in violating
    )
    ok = false_alarms == 0 and misses == 0
    criterion(
        6, ok,
        f"401x401 grid over [-50, 50]^2: no violation on {len(feasible)} feasible "
        f"instances ({false_alarms} false alarms) and a violating (beta, gamma) "
        f"for all {len(violating)} infeasible instances with discriminant slack "
        f"<= -1e-3 ({misses} misses)",
    )


def test_criterion_7_trace_norm_contraction(pool):
    feasible = [i for i in pool if i.decision.feasible][:200]
    assert len(feasible) == 200
    worst = -np.inf
    for item in feasible:
        channel = synthesize(item.instance)
        rng = np.random.default_rng(item.seed + 7_000_000)
        for _ in range(50):
            h = from_bloch(rng.uniform(-2, 2), rng.uniform(-2, 2, size=3))
            worst = max(worst, trace_norm(channel.apply(h)) - trace_norm(h))
    criterion(
        7, worst <= 1e-10,
        f"trace-norm contraction of 200 synthesized channels on 50 random "
        f"Hermitian matrices each (worst excess {worst:.2e} <= 1e-10)",
    )


def _pauli_transfer_apply(a, b, c):
    # linear extension to arbitrary (non-Hermitian) inputs, as choi_of_map
    # probes the map on matrix units
    def apply(x):
        x = np.asarray(x, dtype=complex)
        coeffs = [np.trace(sigma @ x) / 2.0 for sigma in PAULIS]
        scales = (1.0, a, b, c)
        return sum(s * w * sigma for s, w, sigma in zip(scales, coeffs, PAULIS))

    return apply


def test_criterion_8_tetrahedron_exactness():
    rng = np.random.default_rng(8)
    gradients = np.array(
        [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], dtype=float
    ) / 4.0
    worst_inside = np.inf
    worst_outside = -np.inf
    # vertices lie on the boundary too
    for vertex in TETRA_VERTICES:
        worst_inside = min(
            worst_inside, float(np.linalg.eigvalsh(choi(pauli_channel(*vertex)))[0])
        )
    for facet in range(4):
        corners = TETRA_VERTICES[[i for i in range(4) if i != facet]]
        normal = gradients[facet] / np.linalg.norm(gradients[facet])
        for _ in range(25):
            point = rng.dirichlet(np.ones(3)) @ corners
            eig_on = float(np.linalg.eigvalsh(choi(pauli_channel(*point)))[0])
            worst_inside = min(worst_inside, eig_on)
            outside = point - 1e-3 * normal
            eig_out = float(
                np.linalg.eigvalsh(choi_of_map(_pauli_transfer_apply(*outside)))[0]
            )
            worst_outside = max(worst_outside, eig_out)
    ok = worst_inside >= -1e-12 and worst_outside < -1e-6
    criterion(
        8, ok,
        "Pauli mixing channels are CPTP exactly on the (1,1,1)/(1,-1,-1)/"
        "(-1,1,-1)/(-1,-1,1) tetrahedron: boundary Choi min eig "
        f">= {worst_inside:.1e} (>= -1e-12), 1e-3 outside <= {worst_outside:.1e} "
        "(< -1e-6)",
    )


def test_criterion_9_constructive_oracle_concordance(pool):
    feasible = [i for i in pool if i.decision.feasible][:50]
    solid_infeasible = [
        i
        for i in pool
        if not i.decision.feasible
        and min(slack for _, slack in i.decision.margins) <= -1e-2
    ][:50]
    assert len(feasible) == 50 and len(solid_infeasible) == 50
    found = 0
    for item in feasible:
        result = random_channel_search(item.instance, seed=item.seed)
        if result.found and result.best_residual <= 1e-6:
            found += 1
    rejected = 0
    min_best = np.inf
    for item in solid_infeasible:
        result = random_channel_search(item.instance, seed=item.seed)
        min_best = min(min_best, result.best_residual)
        if not result.found and result.best_residual >= 1e-3:
            rejected += 1
    ok = found == 50 and rejected == 50
    criterion(
        9, ok,
        f"mixed-unitary search certifies {found}/50 feasible instances at "
        f"residual <= 1e-6 and stays above 1e-3 (min {min_best:.2e}) on "
        f"{rejected}/50 solidly infeasible instances",
    )
