"""
States of the two-qubit system and their Pauli (Bloch) form.

Basis order is |a1 b1>, |a1 b2>, |a2 b1>, |a2 b2> with subsystem A as the left
Kronecker factor. Validation happens once, at construction; every function
that receives a PureState or DensityMatrix may assume its invariants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from bincorr.config import TOL
from bincorr.errors import BlochOutOfBall, InvalidState, NotNormalized, NotPositive
from bincorr.linalg import (
    ComplexMatrix4,
    Mat3,
    Vec3,
    as_cmatrix,
    as_mat3,
    as_vec3,
    hermitian_eigenvalues,
    hermiticity_residual,
)

# ---------------------------------------------------------------------------
# Pauli constants
# ---------------------------------------------------------------------------

IDENTITY2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)

# sigma_i (x) 1, 1 (x) sigma_j and sigma_i (x) sigma_j, stacked for einsum.
_A_OPS = np.stack([np.kron(s, IDENTITY2) for s in PAULIS])
_B_OPS = np.stack([np.kron(IDENTITY2, s) for s in PAULIS])
_AB_OPS = np.stack([[np.kron(si, sj) for sj in PAULIS] for si in PAULIS])


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector in the product basis.

    Attributes:
        amplitudes: Four complex amplitudes, read-only.
    """

    amplitudes: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        amp = np.array(self.amplitudes, dtype=np.complex128)
        if amp.shape != (4,):
            raise ValueError(f"amplitudes must have shape (4,), got {amp.shape}")
        if not np.all(np.isfinite(amp.real) & np.isfinite(amp.imag)):
            raise NotNormalized("amplitudes contain non-finite values")
        norm2 = float(np.sum(np.abs(amp) ** 2))
        if abs(norm2 - 1.0) > TOL.normalization:
            raise NotNormalized(
                f"sum |amplitude|^2 = {norm2:.12g}, expected 1 within {TOL.normalization:.1e}"
            )
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_unnormalized(cls, amplitudes: npt.ArrayLike) -> PureState:
        amp = np.asarray(amplitudes, dtype=np.complex128)
        return cls(amp / np.linalg.norm(amp))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite 4x4 operator.

    Raises:
        InvalidState: With invariant "hermitian" or "trace".
        NotPositive: If the smallest eigenvalue is below -psd tolerance.
    """

    rho: ComplexMatrix4

    def __post_init__(self) -> None:
        rho = np.array(as_cmatrix(self.rho, name="rho"))
        residual = hermiticity_residual(rho)
        if residual > TOL.hermitian:
            raise InvalidState(
                "hermitian", f"max |rho - rho^dagger| = {residual:.3e} > {TOL.hermitian:.1e}"
            )
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > TOL.trace:
            raise InvalidState("trace", f"Tr(rho) = {trace:.12g}, expected 1")
        min_eig = float(hermitian_eigenvalues(rho)[0])
        if min_eig < -TOL.psd:
            raise NotPositive(f"smallest eigenvalue {min_eig:.3e} < -{TOL.psd:.1e}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)


@dataclass(frozen=True, eq=False)
class BlochForm:
    """Real parameters (a, b, F) of the Pauli expansion of rho."""

    a: Vec3
    b: Vec3
    f: Mat3

    def __post_init__(self) -> None:
        a = as_vec3(self.a, "a")
        b = as_vec3(self.b, "b")
        f = as_mat3(self.f, "F")
        limit = 1.0 + TOL.bloch_bounds
        for name, vec in (("a", a), ("b", b)):
            norm = float(np.linalg.norm(vec))
            if norm > limit:
                raise InvalidState("bloch_bounds", f"|{name}| = {norm:.12g} > 1")
        worst = float(np.max(np.abs(f)))
        if worst > limit:
            raise InvalidState("bloch_bounds", f"max |F_ij| = {worst:.12g} > 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "f", f)

    def to_dict(self) -> dict:
        return {"a": self.a.tolist(), "b": self.b.tolist(), "F": self.f.tolist()}


@dataclass(frozen=True, eq=False)
class QubitOperator:
    """Operator on a single qubit (2x2 complex matrix)."""

    matrix: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", as_cmatrix(self.matrix, dim=2, name="operator"))


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _real_trace(value: complex, what: str) -> float:
    """Drop the imaginary residue of a trace that is real analytically."""
    if abs(value.imag) > TOL.imag_residue:
        raise InvalidState(
            "hermitian", f"Im {what} = {value.imag:.3e} exceeds {TOL.imag_residue:.1e}"
        )
    return float(value.real)


def expectation(rho: DensityMatrix, op: npt.ArrayLike) -> float:
    """Tr(rho . op) for a Hermitian operator on the joint space."""
    return _real_trace(complex(np.trace(rho.rho @ np.asarray(op))), "Tr(rho op)")


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    return expectation(rho, rho.rho)


def is_pure(rho: DensityMatrix) -> bool:
    return purity(rho) >= 1.0 - TOL.purity


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def density_from_pure(psi: PureState) -> DensityMatrix:
    """|psi><psi|."""
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))


def to_density(state: PureState | DensityMatrix) -> DensityMatrix:
    if isinstance(state, PureState):
        return density_from_pure(state)
    return state


def bloch_decompose(rho: DensityMatrix) -> BlochForm:
    """a_i = Tr(rho s_i(x)1), b_j = Tr(rho 1(x)s_j), F_ij = Tr(rho s_i(x)s_j)."""
    # Tr(rho M) = sum_kl rho_kl M_lk
    a = np.einsum("kl,ilk->i", rho.rho, _A_OPS)
    b = np.einsum("kl,jlk->j", rho.rho, _B_OPS)
    f = np.einsum("kl,ijlk->ij", rho.rho, _AB_OPS)

    residue = max(np.max(np.abs(a.imag)), np.max(np.abs(b.imag)), np.max(np.abs(f.imag)))
    if residue > TOL.imag_residue:
        raise InvalidState(
            "hermitian", f"Pauli traces carry imaginary residue {residue:.3e}"
        )
    return BlochForm(a.real, b.real, f.real)


def bloch_assemble(bf: BlochForm) -> DensityMatrix:
    """rho = 1/4 (1(x)1 + a.s(x)1 + 1(x)b.s + sum F_ij s_i(x)s_j).

    Raises:
        NotPositive: If the assembled matrix is not positive semidefinite.
            The bounds on (a, b, F) alone do not imply positivity.
    """
    rho = (
        np.eye(4, dtype=np.complex128)
        + np.einsum("i,ikl->kl", bf.a, _A_OPS)
        + np.einsum("j,jkl->kl", bf.b, _B_OPS)
        + np.einsum("ij,ijkl->kl", bf.f, _AB_OPS)
    ) / 4.0
    return DensityMatrix(rho)


def _as_blocks(rho: DensityMatrix) -> np.ndarray:
    # rho[(i,j),(k,l)] -> t[i,j,k,l] with i,k on A and j,l on B
    return rho.rho.reshape(2, 2, 2, 2)


def partial_trace_A(rho: DensityMatrix) -> np.ndarray:
    """Trace out subsystem A, returning rho_B."""
    return np.einsum("ijil->jl", _as_blocks(rho))


def partial_trace_B(rho: DensityMatrix) -> np.ndarray:
    """Trace out subsystem B, returning rho_A."""
    return np.einsum("ijkj->ik", _as_blocks(rho))


def partial_transpose_B(rho: DensityMatrix) -> ComplexMatrix4:
    """Transpose over subsystem B: <i j|rho^TB|k l> = <i l|rho|k j>."""
    t = _as_blocks(rho).transpose(0, 3, 2, 1)
    return t.reshape(4, 4).copy()


def observable_from_bloch(x: npt.ArrayLike) -> QubitOperator:
    """Q = 1/2 (1 + x.s), spectrum (1 +- |x|)/2 inside [0, 1].

    Raises:
        BlochOutOfBall: If |x| > 1.
    """
    vec = as_vec3(x, "x")
    norm = float(np.linalg.norm(vec))
    if norm > 1.0 + TOL.bloch_ball:
        raise BlochOutOfBall(f"|x| = {norm:.15g} exceeds 1")
    matrix = 0.5 * (IDENTITY2 + np.einsum("i,ikl->kl", vec, np.stack(PAULIS)))
    return QubitOperator(matrix)


def joint_operator(q: QubitOperator, r: QubitOperator) -> ComplexMatrix4:
    """q (x) r with A as the left factor."""
    return np.kron(q.matrix, r.matrix)
