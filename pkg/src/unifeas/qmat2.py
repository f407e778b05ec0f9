"""Closed-form 2x2 complex matrix algebra.

Everything in this module is exact arithmetic on 2x2 arrays: adjugates,
determinants, Hermitian eigenvalues, trace norms, Bloch coordinates and
unitary conjugation.  No iterative linear algebra is used at this size.

Conventions
-----------
Matrices are plain ``numpy`` arrays of shape (2, 2) and dtype complex.
``Herm2`` and ``DensityMatrix`` are aliases documenting the contract a
function expects; Hermiticity and state validity are *checked* by
``require_herm`` / ``validate_density``, never silently repaired.

Bloch coordinates are Pauli *coefficients*:

    rho = (tr/2) * I + x * sigma_x + y * sigma_y + z * sigma_z

so pure states sit at radius 1/2, not 1.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import NotHermitian, NotPositive, NotTraceOne, NotUnitary

CMat2 = np.ndarray
Herm2 = np.ndarray
DensityMatrix = np.ndarray

TOL_HERM = 1e-12
TOL_TP = 1e-10
TOL_PSD = 1e-10

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in PAULIS:
    _m.flags.writeable = False


class BlochVector(NamedTuple):
    """Pauli coefficients (x, y, z); a density matrix has x^2+y^2+z^2 <= 1/4."""

    x: float
    y: float
    z: float

    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))


def as_cmat2(m) -> CMat2:
    """Coerce to a finite complex (2, 2) array."""
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def require_herm(m, tol: float = TOL_HERM) -> Herm2:
    """Validate Hermiticity; raises NotHermitian with the residual."""
    a = as_cmat2(m)
    resid = abs(a[0, 1] - np.conj(a[1, 0]))
    diag_imag = max(abs(a[0, 0].imag), abs(a[1, 1].imag))
    if resid > tol or diag_imag > tol:
        raise NotHermitian(
            f"off-diagonal residual {resid:.3e}, diagonal imaginary part "
            f"{diag_imag:.3e} (tolerance {tol:.1e})"
        )
    return a


def adjugate(m: CMat2) -> CMat2:
    """Adjugate [[d, -b], [-c, a]]; satisfies m @ adjugate(m) = det(m) * I."""
    m = np.asarray(m)
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def det2(m: CMat2) -> complex:
    """Determinant ad - bc."""
    m = np.asarray(m)
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def det_herm(m: Herm2) -> float:
    """Determinant of a Hermitian matrix, as a real number."""
    return float(det2(m).real)


def eigenvalues_herm(h: Herm2) -> tuple[float, float]:
    """Eigenvalues of a Hermitian 2x2 matrix, sorted descending.

    Closed form tr/2 +- sqrt((tr/2)^2 - det); a discriminant within
    -1e-14 of zero is clamped to zero (degenerate spectrum).
    """
    h = np.asarray(h)
    half_tr = float(h[0, 0].real + h[1, 1].real) / 2.0
    disc = half_tr * half_tr - float(det2(h).real)
    if disc < 0.0:
        disc = 0.0
    s = math.sqrt(disc)
    return (half_tr + s, half_tr - s)


def trace_norm(h: Herm2) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    lam1, lam2 = eigenvalues_herm(h)
    return abs(lam1) + abs(lam2)


def hs_inner(a: CMat2, b: CMat2) -> complex:
    """Hilbert-Schmidt inner product tr(a^dagger b)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return complex(np.sum(np.conj(a) * b))


def bloch(rho: Herm2) -> BlochVector:
    """Pauli coefficients of a Hermitian matrix (see module docstring)."""
    rho = np.asarray(rho)
    x = rho[0, 1].real
    y = -rho[0, 1].imag
    z = (rho[0, 0].real - rho[1, 1].real) / 2.0
    return BlochVector(float(x), float(y), float(z))


def from_bloch(trace: float, v) -> Herm2:
    """Inverse of `bloch`: (trace/2) * I + x sx + y sy + z sz."""
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    half = trace / 2.0
    return np.array(
        [[half + z, x - 1j * y], [x + 1j * y, half - z]], dtype=complex
    )


def conjugate(u: CMat2, a: CMat2, tol: float = 1e-8) -> CMat2:
    """Unitary conjugation u^dagger a u; preserves trace, det and spectrum."""
    u = np.asarray(u)
    resid = np.linalg.norm(u.conj().T @ u - IDENTITY2)
    if resid > tol:
        raise NotUnitary(f"||U^dagger U - I|| = {resid:.3e} > {tol:.1e}")
    return u.conj().T @ np.asarray(a) @ u


def validate_density(
    h,
    tol_trace: float = TOL_TP,
    tol_psd: float = TOL_PSD,
    tol_herm: float = TOL_HERM,
) -> DensityMatrix:
    """Validate a density matrix and return a read-only copy.

    Raises NotHermitian / NotTraceOne / NotPositive, each naming the
    violated invariant with the residual.
    """
    a = require_herm(h, tol=tol_herm)
    tr = a[0, 0].real + a[1, 1].real
    if abs(tr - 1.0) > tol_trace:
        raise NotTraceOne(f"trace = {tr!r}, residual {abs(tr - 1.0):.3e}")
    lam_min = eigenvalues_herm(a)[1]
    if lam_min < -tol_psd:
        raise NotPositive(f"minimal eigenvalue {lam_min:.3e} < -{tol_psd:.1e}")
    out = a.copy()
    out.flags.writeable = False
    return out
