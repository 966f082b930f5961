"""
Dense linear-algebra kernel for the fixed small dimensions of a two-qubit
system: real 3-vectors, real 3x3 matrices and complex 4x4 Hermitian matrices.

Eigenvalues and singular values come from a cyclic Jacobi sweep written over
NumPy arrays. The eigen/SVD routines of numpy.linalg are not called here, so
tests can use them as an independent reference.
"""

from __future__ import annotations

import logging
import math
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from bincorr.config import SETTINGS, TOL
from bincorr.errors import NonFinite, NotHermitian, ZeroVector

logger = logging.getLogger(__name__)

Vec3: TypeAlias = npt.NDArray[np.float64]
Mat3: TypeAlias = npt.NDArray[np.float64]
ComplexMatrix4: TypeAlias = npt.NDArray[np.complex128]

_TINY = np.finfo(np.float64).tiny


# ---------------------------------------------------------------------------
# Construction / validation
# ---------------------------------------------------------------------------


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def as_vec3(v: npt.ArrayLike, name: str = "vector") -> Vec3:
    """Return a read-only float64 copy of a 3-vector.

    Raises:
        ValueError: If the shape is not (3,).
        NonFinite: If any component is NaN or Inf.
    """
    arr = np.array(v, dtype=np.float64)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have shape (3,), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} has non-finite components: {arr}")
    return _frozen(arr)


def as_mat3(m: npt.ArrayLike, name: str = "matrix") -> Mat3:
    """Return a read-only float64 copy of a 3x3 matrix."""
    arr = np.array(m, dtype=np.float64)
    if arr.shape != (3, 3):
        raise ValueError(f"{name} must have shape (3, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} has non-finite entries")
    return _frozen(arr)


def as_cmatrix(m: npt.ArrayLike, dim: int = 4, name: str = "matrix") -> ComplexMatrix4:
    """Return a read-only complex128 copy of a dim x dim matrix."""
    arr = np.array(m, dtype=np.complex128)
    if arr.shape != (dim, dim):
        raise ValueError(f"{name} must have shape ({dim}, {dim}), got {arr.shape}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise NonFinite(f"{name} has non-finite entries")
    return _frozen(arr)


def hermiticity_residual(m: np.ndarray) -> float:
    """max |m - m^dagger| entrywise."""
    return float(np.max(np.abs(m - m.conj().T)))


# ---------------------------------------------------------------------------
# Jacobi eigensolver
# ---------------------------------------------------------------------------


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi_eigh(
    a: np.ndarray,
    off_tol: float | None = None,
    max_sweeps: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a real-symmetric or Hermitian matrix.

    Each (p, q) rotation first removes the phase of a[p, q] with a diagonal
    unitary, then applies a real Givens rotation that zeroes it. Works in
    the dtype of `a` (real input never picks up imaginary parts).

    Returns:
        (eigenvalues ascending, eigenvectors as columns).
    """
    off_tol = SETTINGS.jacobi.off_tol if off_tol is None else off_tol
    max_sweeps = SETTINGS.jacobi.max_sweeps if max_sweeps is None else max_sweeps

    a = np.array(a, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    scale = max(float(np.linalg.norm(a)), _TINY)

    for sweep in range(max_sweeps):
        if _off_norm(a) < off_tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase_conj = np.conj(apq / r)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                g = np.array([[c, s], [-s * phase_conj, c * phase_conj]], dtype=a.dtype)

                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        logger.warning(
            "Jacobi reached %d sweeps with off-diagonal norm %.3e",
            max_sweeps, _off_norm(a),
        )

    w = np.real(np.diag(a)).astype(np.float64)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigh(m: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian 4x4 matrix.

    Returns:
        (eigenvalues ascending, unitary whose columns are eigenvectors).

    Raises:
        NotHermitian: If max |m - m^dagger| exceeds the hermitian tolerance.
    """
    arr = as_cmatrix(m)
    residual = hermiticity_residual(arr)
    if residual > TOL.hermitian:
        raise NotHermitian(
            f"max |m - m^dagger| = {residual:.3e} exceeds {TOL.hermitian:.1e}"
        )
    sym = 0.5 * (arr + arr.conj().T)
    return _jacobi_eigh(sym)


def hermitian_eigenvalues(m: npt.ArrayLike) -> np.ndarray:
    """All four eigenvalues of a Hermitian 4x4 matrix, ascending."""
    w, _ = hermitian_eigh(m)
    return w


def symmetric3_singular_values(m: npt.ArrayLike) -> np.ndarray:
    """Singular values of a real 3x3 matrix, descending.

    Taken as the norms |m v_i| over the eigenvectors v_i of m^T m, which
    keeps small values at absolute precision where square roots of the
    eigenvalues would not.
    """
    arr = as_mat3(m)
    _, v = _jacobi_eigh(arr.T @ arr)
    sv = np.linalg.norm(arr @ v, axis=0)
    return np.sort(sv)[::-1].copy()


def rank_from_singular_values(sv: np.ndarray, abs_tol: float | None = None) -> int:
    abs_tol = TOL.rank_abs if abs_tol is None else abs_tol
    if not abs_tol > 0:
        raise ValueError(f"abs_tol must be positive, got {abs_tol}")
    return int(np.count_nonzero(np.asarray(sv) > abs_tol))


def numeric_rank(m: npt.ArrayLike, abs_tol: float | None = None) -> int:
    """Number of singular values strictly greater than abs_tol."""
    return rank_from_singular_values(symmetric3_singular_values(m), abs_tol)


def det3(m: npt.ArrayLike) -> float:
    """Determinant of a 3x3 matrix by cofactor expansion along the first row."""
    a = as_mat3(m)
    return float(
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )


def orthogonal_complement_basis(v: npt.ArrayLike) -> tuple[Vec3, Vec3]:
    """Two orthonormal vectors spanning the plane perpendicular to v.

    The first is v x e_k where e_k is the standard basis vector along the
    smallest |component| of v (first index on ties); the second completes
    the right-handed frame.

    Raises:
        ZeroVector: If ||v|| = 0.
    """
    vec = as_vec3(v)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ZeroVector("orthogonal complement of the zero vector is undefined")
    unit = vec / norm

    e = np.zeros(3)
    e[int(np.argmin(np.abs(unit)))] = 1.0
    u1 = np.cross(unit, e)
    u1 /= np.linalg.norm(u1)
    u2 = np.cross(unit, u1)
    u2 /= np.linalg.norm(u2)
    return _frozen(u1), _frozen(u2)


def gram_determinant(vectors: npt.ArrayLike) -> float:
    """det(V V^T) for three row vectors; zero iff they are dependent."""
    rows = np.array(vectors, dtype=np.float64)
    if rows.shape != (3, 3):
        raise ValueError(f"expected three 3-vectors, got shape {rows.shape}")
    return det3(rows @ rows.T)
