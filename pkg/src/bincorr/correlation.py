"""
Covariance of local observables and the correlation matrix C = F - a b^T.

Two independent routes to the same number:
    covariance_direct  -- 4x4 / 2x2 matrix traces, no Bloch shortcut
    covariance_via_C   -- 1/4 x . C y from the cached correlation matrix
Agreement between them is checked by the verify suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from bincorr.config import TOL
from bincorr.errors import BlochOutOfBall
from bincorr.linalg import (
    Mat3,
    Vec3,
    as_mat3,
    as_vec3,
    orthogonal_complement_basis,
    rank_from_singular_values,
    symmetric3_singular_values,
)
from bincorr.qstate import (
    IDENTITY2,
    DensityMatrix,
    QubitOperator,
    _real_trace,
    bloch_decompose,
    joint_operator,
    observable_from_bloch,
    partial_trace_A,
    partial_trace_B,
)


@dataclass(frozen=True, eq=False)
class ObservablePair:
    """Bloch vectors (x, y) of Q_A and R_B, each inside the closed unit ball."""

    x: Vec3
    y: Vec3

    def __post_init__(self) -> None:
        for name in ("x", "y"):
            vec = as_vec3(getattr(self, name), name)
            norm = float(np.linalg.norm(vec))
            if norm > 1.0 + TOL.bloch_ball:
                raise BlochOutOfBall(f"|{name}| = {norm:.15g} exceeds 1")
            object.__setattr__(self, name, vec)

    def to_dict(self) -> dict:
        return {"x": self.x.tolist(), "y": self.y.tolist()}


@dataclass(frozen=True, eq=False)
class CorrMatrix:
    """C with its singular values (descending) and numeric rank, computed once."""

    c: Mat3
    singular_values: np.ndarray
    rank: int

    @classmethod
    def from_matrix(cls, c: npt.ArrayLike, abs_tol: float | None = None) -> CorrMatrix:
        mat = as_mat3(c, "C")
        sv = symmetric3_singular_values(mat)
        sv.setflags(write=False)
        return cls(mat, sv, rank_from_singular_values(sv, abs_tol))

    def to_dict(self) -> dict:
        return {
            "C": self.c.tolist(),
            "singular_values": self.singular_values.tolist(),
            "rank": self.rank,
        }


def covariance_direct(rho: DensityMatrix, pair: ObservablePair) -> float:
    """Tr(rho X Y) - Tr(rho_A Q) Tr(rho_B R) by explicit matrix products."""
    q = observable_from_bloch(pair.x)
    r = observable_from_bloch(pair.y)
    x_op = joint_operator(q, QubitOperator(IDENTITY2))
    y_op = joint_operator(QubitOperator(IDENTITY2), r)

    joint = complex(np.trace(rho.rho @ x_op @ y_op))
    mean_x = complex(np.trace(partial_trace_B(rho) @ q.matrix))
    mean_y = complex(np.trace(partial_trace_A(rho) @ r.matrix))
    return _real_trace(joint - mean_x * mean_y, "covariance")


def correlation_matrix(rho: DensityMatrix) -> CorrMatrix:
    """C = F - a b^T from the Bloch form of rho."""
    bf = bloch_decompose(rho)
    return CorrMatrix.from_matrix(bf.f - np.outer(bf.a, bf.b))


def covariance_via_C(cm: CorrMatrix, pair: ObservablePair) -> float:
    """1/4 x . (C y)."""
    return 0.25 * float(pair.x @ (cm.c @ pair.y))


def zero_correlation_plane(cm: CorrMatrix, y: npt.ArrayLike) -> tuple[Vec3, Vec3]:
    """Orthonormal basis of the plane of x giving zero correlation against y.

    Every x in the span is perpendicular to C y. When C y vanishes every x
    qualifies; the plane perpendicular to y is returned in that case.
    """
    yv = as_vec3(y, "y")
    y_prime = cm.c @ yv
    if np.linalg.norm(y_prime) < TOL.zero_correlation:
        return orthogonal_complement_basis(yv)
    return orthogonal_complement_basis(y_prime)
