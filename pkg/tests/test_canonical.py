import numpy as np
import pytest

from unifeas.canonical import (
    CanonicalForm,
    PauliDiagonalParams,
    canonicalize,
    orthogonal_direction,
    rotation_conjugator,
    rotation_svd_2x2,
    z_aligning_unitary,
)
from unifeas.errors import DegenerateInputSpan, NotUnit
from unifeas.feasibility import ProblemInstance, decide_unital
from unifeas.oracle import example_family, random_instance
from unifeas.qmat2 import (
    IDENTITY2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    bloch,
    conjugate,
    from_bloch,
)

HALF = IDENTITY2 / 2


def n_dot_sigma(n):
    return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


class TestOrthogonalDirection:
    def test_xy_plane_pair(self):
        n = orthogonal_direction(HALF + 0.3 * SIGMA_X, HALF + 0.2 * SIGMA_Y)
        np.testing.assert_allclose(np.abs(n), [0, 0, 1], atol=1e-14)

    def test_zx_plane_pair(self):
        n = orthogonal_direction(HALF + 0.3 * SIGMA_Z, HALF + 0.2 * SIGMA_X)
        np.testing.assert_allclose(np.abs(n), [0, 1, 0], atol=1e-14)

    def test_fully_degenerate_tiebreak(self):
        np.testing.assert_array_equal(orthogonal_direction(HALF, HALF), [0, 0, 1])

    def test_collinear_prefers_z(self):
        n = orthogonal_direction(HALF + 0.3 * SIGMA_X, HALF - 0.1 * SIGMA_X)
        np.testing.assert_allclose(n, [0, 0, 1], atol=1e-14)

    def test_z_spanned_prefers_y(self):
        n = orthogonal_direction(HALF + 0.3 * SIGMA_Z, HALF + 0.1 * SIGMA_Z)
        np.testing.assert_allclose(n, [0, 1, 0], atol=1e-14)

    def test_orthogonality_random(self, rng):
        for _ in range(100):
            b1, b2 = rng.uniform(-0.4, 0.4, size=(2, 3))
            rho1, rho2 = from_bloch(1.0, b1), from_bloch(1.0, b2)
            n = orthogonal_direction(rho1, rho2)
            assert np.linalg.norm(n) == pytest.approx(1.0, abs=1e-12)
            assert abs(np.dot(n, b1)) < 1e-10
            assert abs(np.dot(n, b2)) < 1e-10


class TestZAligningUnitary:
    def test_north_pole(self):
        np.testing.assert_allclose(z_aligning_unitary([0, 0, 1]), IDENTITY2, atol=0)

    def test_south_pole(self):
        u = z_aligning_unitary([0, 0, -1])
        np.testing.assert_allclose(conjugate(u, -SIGMA_Z), SIGMA_Z, atol=1e-15)
        assert u[0, 1].real > 0 and u[0, 1].imag == 0

    def test_x_axis(self):
        u = z_aligning_unitary([1, 0, 0])
        np.testing.assert_allclose(conjugate(u, SIGMA_X), SIGMA_Z, atol=1e-15)

    def test_rejects_unnormalized(self):
        with pytest.raises(NotUnit):
            z_aligning_unitary([0, 0, 2])

    def test_random_directions(self, rng):
        for _ in range(200):
            n = rng.normal(size=3)
            n /= np.linalg.norm(n)
            u = z_aligning_unitary(n)
            np.testing.assert_allclose(
                u.conj().T @ u, IDENTITY2, atol=1e-12
            )
            np.testing.assert_allclose(conjugate(u, n_dot_sigma(n)), SIGMA_Z, atol=1e-10)
            assert np.linalg.det(u) == pytest.approx(1.0, abs=1e-12)
            assert u[0, 0].imag == pytest.approx(0.0, abs=1e-14)
            assert u[0, 0].real >= 0.0


class TestRotationConjugator:
    def test_zero_is_identity(self):
        np.testing.assert_array_equal(rotation_conjugator(0.0), IDENTITY2)

    def test_pi_is_sigma_z(self):
        u = rotation_conjugator(np.pi)
        np.testing.assert_allclose(u, SIGMA_Z, atol=1e-15)
        np.testing.assert_allclose(conjugate(u, SIGMA_X), -SIGMA_X, atol=1e-15)

    def test_quarter_turn(self):
        # conjugation by diag(1, i) sends sigma_x to -sigma_y
        u = rotation_conjugator(np.pi / 2)
        np.testing.assert_allclose(conjugate(u, SIGMA_X), -SIGMA_Y, atol=1e-15)

    def test_rotation_action(self, rng):
        for phi in rng.uniform(-6, 6, size=20):
            u = rotation_conjugator(phi)
            np.testing.assert_allclose(
                conjugate(u, SIGMA_X), np.cos(phi) * SIGMA_X - np.sin(phi) * SIGMA_Y,
                atol=1e-14,
            )
            np.testing.assert_allclose(
                conjugate(u, SIGMA_Y), np.sin(phi) * SIGMA_X + np.cos(phi) * SIGMA_Y,
                atol=1e-14,
            )


def rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


class TestRotationSvd:
    def test_reconstruction_random(self, rng):
        for _ in range(300):
            m = rng.uniform(-3, 3, size=(2, 2))
            alpha, s1, s2, beta = rotation_svd_2x2(m)
            assert s1 >= abs(s2) - 1e-12
            np.testing.assert_allclose(
                rotation(alpha) @ np.diag([s1, s2]) @ rotation(beta).T, m, atol=1e-12
            )

    def test_reflection_sign(self):
        alpha, s1, s2, beta = rotation_svd_2x2(np.diag([1.0, -1.0]))
        assert s1 == pytest.approx(1.0)
        assert s2 == pytest.approx(-1.0)

    def test_matches_lapack_magnitudes(self, rng):
        for _ in range(100):
            m = rng.uniform(-2, 2, size=(2, 2))
            _, s1, s2, _ = rotation_svd_2x2(m)
            np.testing.assert_allclose(
                sorted([abs(s1), abs(s2)], reverse=True),
                np.linalg.svd(m, compute_uv=False),
                atol=1e-12,
            )


def assert_canonical_invariants(inst: ProblemInstance, form: CanonicalForm):
    for u in (form.U, form.V):
        np.testing.assert_allclose(u.conj().T @ u, IDENTITY2, atol=1e-10)
    for j, (rho, tau) in enumerate(((inst.rho1, inst.tau1), (inst.rho2, inst.tau2))):
        assert abs(bloch(conjugate(form.U, rho)).z) <= 1e-9
        assert abs(bloch(conjugate(form.V, tau)).z) <= 1e-9
        # image reconstruction in the aligned frame
        rx, ry = form.input_xy[j]
        expected = from_bloch(1.0, (form.a * rx, form.b * ry, 0.0))
        np.testing.assert_allclose(conjugate(form.V, tau), expected, atol=1e-9)
    np.testing.assert_allclose(form.input_xy @ form.map_matrix, form.output_xy, atol=1e-9)
    assert abs(np.linalg.det(form.input_xy)) > 1e-10
    assert form.a >= 0.0


class TestCanonicalize:
    def test_identity_map(self):
        inst = ProblemInstance(
            HALF + 0.3 * SIGMA_X, HALF + 0.2 * SIGMA_Y,
            HALF + 0.3 * SIGMA_X, HALF + 0.2 * SIGMA_Y,
        )
        form = canonicalize(inst)
        assert form.a == pytest.approx(1.0, abs=1e-12)
        assert form.b == pytest.approx(1.0, abs=1e-12)
        # U and V implement the same frame change up to column phases
        overlap = form.U.conj().T @ form.V
        np.testing.assert_allclose(np.abs(overlap), IDENTITY2, atol=1e-10)
        assert_canonical_invariants(inst, form)

    def test_uniform_shrink(self):
        inst = ProblemInstance(
            HALF + 0.3 * SIGMA_X, HALF + 0.2 * SIGMA_Y,
            HALF + 0.15 * SIGMA_X, HALF + 0.1 * SIGMA_Y,
        )
        form = canonicalize(inst)
        assert sorted([form.a, form.b]) == pytest.approx([0.5, 0.5], abs=1e-12)
        assert_canonical_invariants(inst, form)

    def test_family_zero(self):
        inst = example_family(0.0)
        form = canonicalize(inst)
        assert max(abs(form.a), abs(form.b)) <= 1.0 + 1e-9
        assert decide_unital(inst).feasible
        assert_canonical_invariants(inst, form)

    def test_degenerate_input_rejected(self):
        inst = ProblemInstance(HALF, HALF, HALF, HALF)
        with pytest.raises(DegenerateInputSpan):
            canonicalize(inst)

    def test_invariants_random(self):
        for seed in range(200):
            inst = random_instance(seed)
            assert_canonical_invariants(inst, canonicalize(inst))

    def test_positivity_matches_decision(self):
        for seed in range(300):
            inst = random_instance(seed)
            form = canonicalize(inst)
            positive = PauliDiagonalParams(form.a, form.b, 0.0).is_positive(1e-9)
            assert positive == decide_unital(inst).feasible


class TestPauliDiagonalParams:
    def test_positivity_square(self):
        assert PauliDiagonalParams(1.0, -1.0, 0.0).is_positive()
        assert not PauliDiagonalParams(1.2, 0.0, 0.0).is_positive()

    def test_cptp_tetrahedron_vertices(self):
        for vertex in [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]:
            assert PauliDiagonalParams(*vertex).is_cptp(1e-15)

    def test_cptp_fails_outside(self):
        assert not PauliDiagonalParams(1.0, 1.0, 0.0).is_cptp()
