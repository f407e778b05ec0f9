"""Reduction of a dim-3 instance to Pauli-diagonal normal form.

Pipeline: find the Bloch direction orthogonal to both input states, rotate
it onto the z axis (and likewise for the outputs), read off the planar
(x, y) Bloch coordinates, extract the real 2x2 matrix mapping input rows to
output rows, and diagonalize it with a closed-form rotation SVD.  The two
rotation angles fold back into the alignment unitaries, leaving a map that
just scales sigma_x by `a` and sigma_y by `b` (the sign of a possible
reflection is carried by `b`; `a` is kept nonnegative).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateInputSpan, NotUnit
from .feasibility import ProblemInstance, dim_operator_system
from .qmat2 import bloch, conjugate

ORTHO_CUTOFF = 1e-10


class PauliDiagonalParams(NamedTuple):
    """Eigenvalues (a, b, c) of a map diagonal in the Pauli basis."""

    a: float
    b: float
    c: float

    def is_positive(self, tol: float = 0.0) -> bool:
        """Positivity as a map on span{I, sx, sy}: |a|, |b| <= 1."""
        return abs(self.a) <= 1.0 + tol and abs(self.b) <= 1.0 + tol

    def is_cptp(self, tol: float = 0.0) -> bool:
        """Complete positivity + trace preservation: |a+b| <= 1+c, |a-b| <= 1-c."""
        return (
            abs(self.a + self.b) <= 1.0 + self.c + tol
            and abs(self.a - self.b) <= 1.0 - self.c + tol
        )


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Aligned frame of an instance.

    U, V are the (folded) alignment unitaries; `input_xy` and `output_xy`
    hold the planar (x, y) Bloch coordinates of U^dagger rho_j U and
    V^dagger tau_j V as rows; `map_matrix` is the row-convention matrix
    with input_xy @ map_matrix = output_xy, diagonal diag(a, b) up to
    roundoff in this frame.
    """

    U: np.ndarray
    V: np.ndarray
    input_xy: np.ndarray
    output_xy: np.ndarray
    map_matrix: np.ndarray
    a: float
    b: float


def orthogonal_direction(rho1: np.ndarray, rho2: np.ndarray) -> np.ndarray:
    """Unit 3-vector orthogonal to both Bloch coefficient vectors.

    Generic case: normalized cross product.  Degenerate spans fall back to
    a deterministic tie-break preferring the largest |n_z|, then |n_y|,
    with the preferred component made positive.
    """
    b1 = np.array(bloch(rho1), dtype=float)
    b2 = np.array(bloch(rho2), dtype=float)
    n = np.cross(b1, b2)
    nn = float(np.linalg.norm(n))
    if nn > ORTHO_CUTOFF:
        return n / nn
    # Span is at most a line; pick its direction from the longer vector.
    d = b1 if np.dot(b1, b1) >= np.dot(b2, b2) else b2
    dn = float(np.linalg.norm(d))
    if dn <= ORTHO_CUTOFF:
        return np.array([0.0, 0.0, 1.0])
    dhat = d / dn
    for axis_index in (2, 1):  # prefer z, then y
        axis = np.zeros(3)
        axis[axis_index] = 1.0
        cand = axis - np.dot(axis, dhat) * dhat
        cn = float(np.linalg.norm(cand))
        if cn > ORTHO_CUTOFF:
            cand = cand / cn
            if cand[axis_index] < 0.0:
                cand = -cand
            return cand
    raise AssertionError("unreachable: z and y projections cannot both vanish")


def z_aligning_unitary(n) -> np.ndarray:
    """Unitary U with U^dagger (n . sigma) U = sigma_z.

    Columns are the +/- eigenvectors of n . sigma; the phase convention is
    det(U) = 1 with a real nonnegative (0, 0) entry, and for the antipodal
    direction (where that entry vanishes) a real positive (0, 1) entry.
    """
    n = np.asarray(n, dtype=float)
    norm = float(np.linalg.norm(n))
    if abs(norm - 1.0) > 1e-10:
        raise NotUnit(f"direction has norm {norm!r}")
    nx, ny, nz = n
    if nz < 0.0 and abs(nx) <= 1e-12 and abs(ny) <= 1e-12:
        # n = -z: rotate by pi about the y axis.
        return np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    theta = math.acos(min(1.0, max(-1.0, nz)))
    phi = math.atan2(ny, nx)
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array(
        [
            [c, -s * np.exp(-1j * phi)],
            [s * np.exp(1j * phi), c],
        ],
        dtype=complex,
    )


def rotation_conjugator(phi: float) -> np.ndarray:
    """diag(1, e^{i phi}); conjugation by it rotates (sigma_x, sigma_y) by phi."""
    return np.array([[1.0, 0.0], [0.0, np.exp(1j * phi)]], dtype=complex)


def rotation_svd_2x2(m: np.ndarray) -> tuple[float, float, float, float]:
    """Closed-form SVD of a real 2x2 matrix using rotations only.

    Returns (alpha, s1, s2, beta) with m = R(alpha) @ diag(s1, s2) @ R(beta).T,
    R the counterclockwise rotation matrix, s1 >= |s2| >= 0 up to sign:
    s1 >= 0 always, and a reflection in m is absorbed as s2 < 0.
    """
    m = np.asarray(m, dtype=float)
    e = (m[0, 0] + m[1, 1]) / 2.0
    f = (m[0, 0] - m[1, 1]) / 2.0
    g = (m[1, 0] + m[0, 1]) / 2.0
    h = (m[1, 0] - m[0, 1]) / 2.0
    q = math.hypot(e, h)  # (s1 + s2) / 2
    r = math.hypot(f, g)  # (s1 - s2) / 2
    sum_angle = math.atan2(g, f)  # alpha + beta
    diff_angle = math.atan2(h, e)  # alpha - beta
    alpha = (sum_angle + diff_angle) / 2.0
    beta = (sum_angle - diff_angle) / 2.0
    return alpha, q + r, q - r, beta


def _rotation_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _planar_rows(u: np.ndarray, states) -> np.ndarray:
    rows = []
    for state in states:
        v = bloch(conjugate(u, state))
        rows.append([v.x, v.y])
    return np.array(rows)


def canonicalize(inst: ProblemInstance) -> CanonicalForm:
    """Align input and output operator systems with the x-y Bloch plane.

    Requires dim_operator_system(rho1, rho2) == 3 (raises
    DegenerateInputSpan otherwise); the output span may be degenerate.
    """
    if dim_operator_system(inst.rho1, inst.rho2) < 3:
        raise DegenerateInputSpan("input states span less than three dimensions")
    u0 = z_aligning_unitary(orthogonal_direction(inst.rho1, inst.rho2))
    v0 = z_aligning_unitary(orthogonal_direction(inst.tau1, inst.tau2))
    r_pre = _planar_rows(u0, (inst.rho1, inst.rho2))
    s_pre = _planar_rows(v0, (inst.tau1, inst.tau2))
    det_r = float(np.linalg.det(r_pre))
    if abs(det_r) <= ORTHO_CUTOFF:
        raise DegenerateInputSpan(f"planar coordinate matrix is singular: det = {det_r!r}")
    map_pre = np.linalg.solve(r_pre, s_pre)

    alpha, a, b, beta = rotation_svd_2x2(map_pre)
    u = u0 @ rotation_conjugator(alpha)
    v = v0 @ rotation_conjugator(beta)
    input_xy = _planar_rows(u, (inst.rho1, inst.rho2))
    output_xy = _planar_rows(v, (inst.tau1, inst.tau2))
    map_matrix = _rotation_matrix(alpha).T @ map_pre @ _rotation_matrix(beta)
    return CanonicalForm(
        U=u,
        V=v,
        input_xy=input_xy,
        output_xy=output_xy,
        map_matrix=map_matrix,
        a=a,
        b=b,
    )
