"""
Separability decisions for two-qubit states.

Decision paths:
    classify_pure_by_rank  -- rank of C is 0 (separable) or 3 (entangled)
    binary_protocol        -- up to three zero/non-zero correlation probes
                              against one fixed observable on B

Ground-truth oracles, independent of C:
    schmidt_rank       -- numpy SVD of the 2x2 amplitude matrix
    ppt_is_separable   -- spectrum of the partial transpose over B

The protocol never over-claims on mixed input: zero correlations do not
imply separability there, and non-zero ones do not imply entanglement, so
the label is Indeterminate unless the caller asserts purity.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional

import numpy as np
import numpy.typing as npt

from bincorr.config import SETTINGS, TOL
from bincorr.correlation import (
    CorrMatrix,
    ObservablePair,
    correlation_matrix,
    covariance_direct,
    covariance_via_C,
    zero_correlation_plane,
)
from bincorr.errors import DependentProbes, RankContradiction, ZeroVector
from bincorr.linalg import Vec3, as_vec3, gram_determinant, hermitian_eigenvalues
from bincorr.qstate import (
    DensityMatrix,
    PureState,
    density_from_pure,
    is_pure,
    partial_transpose_B,
    purity,
    to_density,
)
from bincorr.states import werner

if TYPE_CHECKING:
    from bincorr.shotsim import ShotRecord

logger = logging.getLogger(__name__)

MIXED_NONZERO_DETAIL = "non-zero correlation on mixed input"
MIXED_ZERO_DETAIL = "zero correlations on mixed input"


class Label(Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    INDETERMINATE = "Indeterminate"


class Basis(Enum):
    """Which decision path produced a verdict."""

    RANK_DICHOTOMY = "RankDichotomy"
    BINARY_PROTOCOL = "BinaryProtocol"
    SCHMIDT_ORACLE = "SchmidtOracle"
    PPT_ORACLE = "PPTOracle"


@dataclass(frozen=True)
class Verdict:
    label: Label
    basis: Basis
    detail: str = ""

    def to_dict(self) -> dict:
        return {"label": self.label.value, "basis": self.basis.value, "detail": self.detail}


@dataclass(frozen=True)
class CorrelationReading:
    """One zero/non-zero answer from a correlation oracle.

    Attributes:
        covariance: Exact value or finite-shot estimate.
        is_zero: The binary outcome the protocol consumes.
        record: Shot statistics when the reading came from the simulator.
    """

    covariance: float
    is_zero: bool
    record: Optional[ShotRecord] = None


CorrOracle = Callable[[ObservablePair], CorrelationReading]


@dataclass(frozen=True, eq=False)
class Probe:
    x: Vec3
    covariance: float
    is_zero: bool
    record: Optional[ShotRecord] = None

    def to_dict(self) -> dict:
        out = {"x": self.x.tolist(), "covariance": self.covariance, "is_zero": self.is_zero}
        if self.record is not None:
            out["shots"] = self.record.to_dict()
        return out


@dataclass(frozen=True, eq=False)
class ProtocolTrace:
    """Every probe the protocol ran, in order, against the fixed y.

    measurements_used is the 1-based index of the first non-zero probe,
    or 3 when all probes read zero.
    """

    y: Vec3
    probes: tuple[Probe, ...] = field(default_factory=tuple)
    measurements_used: int = 0

    def to_dict(self) -> dict:
        return {
            "y": self.y.tolist(),
            "probes": [p.to_dict() for p in self.probes],
            "measurements_used": self.measurements_used,
        }


@dataclass(frozen=True, eq=False)
class WernerReport:
    xi: float
    pair: ObservablePair
    covariance: float
    reference: float
    ppt_separable: bool
    c_matrix: CorrMatrix

    def to_dict(self) -> dict:
        return {
            "xi": self.xi,
            **self.pair.to_dict(),
            "covariance": self.covariance,
            "reference": self.reference,
            "ppt_separable": self.ppt_separable,
            "C": self.c_matrix.c.tolist(),
        }


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def exact_oracle(rho: DensityMatrix, zero_tol: float | None = None) -> CorrOracle:
    """Correlation oracle backed by the exact correlation matrix of rho."""
    zero_tol = TOL.zero_correlation if zero_tol is None else zero_tol
    cm = correlation_matrix(rho)

    def read(pair: ObservablePair) -> CorrelationReading:
        c = covariance_via_C(cm, pair)
        return CorrelationReading(c, abs(c) < zero_tol)

    return read


def schmidt_rank(psi: PureState) -> int:
    """Rank of the 2x2 amplitude matrix M[i][j] = <a_i b_j|psi>."""
    sv = np.linalg.svd(psi.amplitudes.reshape(2, 2), compute_uv=False)
    return int(np.count_nonzero(sv > TOL.schmidt))


def _min_pt_eigenvalue(rho: DensityMatrix) -> float:
    return float(hermitian_eigenvalues(partial_transpose_B(rho))[0])


def ppt_is_separable(rho: DensityMatrix) -> bool:
    """True iff rho^TB has no eigenvalue below -psd tolerance."""
    return _min_pt_eigenvalue(rho) >= -TOL.psd


def schmidt_verdict(psi: PureState) -> Verdict:
    rank = schmidt_rank(psi)
    label = Label.SEPARABLE if rank == 1 else Label.ENTANGLED
    return Verdict(label, Basis.SCHMIDT_ORACLE, f"Schmidt rank {rank}")


def ppt_verdict(rho: DensityMatrix) -> Verdict:
    min_eig = _min_pt_eigenvalue(rho)
    label = Label.SEPARABLE if min_eig >= -TOL.psd else Label.ENTANGLED
    return Verdict(label, Basis.PPT_ORACLE, f"min eigenvalue of partial transpose {min_eig:.6g}")


# ---------------------------------------------------------------------------
# Correlation-based decisions
# ---------------------------------------------------------------------------


def find_zero_correlation_pair(rho: DensityMatrix, y: npt.ArrayLike) -> ObservablePair:
    """A unit x whose observable is uncorrelated with the one given by y.

    x is taken perpendicular to C y. If C y vanishes every x works and
    the first standard basis vector is returned.

    Raises:
        ZeroVector: If y is the zero vector.
        BlochOutOfBall: If |y| > 1.
    """
    yv = as_vec3(y, "y")
    if not np.any(yv):
        raise ZeroVector("y must be non-zero")
    cm = correlation_matrix(rho)
    y_prime = cm.c @ yv
    if np.linalg.norm(y_prime) < TOL.zero_correlation:
        x = np.array([1.0, 0.0, 0.0])
    else:
        x, _ = zero_correlation_plane(cm, yv)
    pair = ObservablePair(x, yv)

    residual = covariance_direct(rho, pair)
    if abs(residual) >= TOL.zero_correlation:
        logger.warning("zero-correlation pair check failed: c = %.3e", residual)
    return pair


def minimality_witness(rho: DensityMatrix, y: npt.ArrayLike) -> tuple[Vec3, Vec3]:
    """Two independent unit probes that both read zero against y.

    Shows that two measurements cannot settle separability on their own.
    """
    return zero_correlation_plane(correlation_matrix(rho), y)


def classify_pure_by_rank(psi: PureState) -> Verdict:
    """Separable iff rank(C) = 0, entangled iff rank(C) = 3.

    Raises:
        RankContradiction: If rank(C) is 1 or 2.
    """
    cm = correlation_matrix(density_from_pure(psi))
    if cm.rank == 0:
        return Verdict(Label.SEPARABLE, Basis.RANK_DICHOTOMY, "rank(C) = 0")
    if cm.rank == 3:
        return Verdict(Label.ENTANGLED, Basis.RANK_DICHOTOMY, "rank(C) = 3")
    raise RankContradiction(
        f"rank(C) = {cm.rank} for a pure state; singular values {cm.singular_values.tolist()}"
    )


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _check_probes(y: npt.ArrayLike, xs: Sequence[npt.ArrayLike]) -> tuple[Vec3, list[Vec3]]:
    yv = as_vec3(y, "y")
    if not np.any(yv):
        raise ZeroVector("y must be non-zero")
    if len(xs) != 3:
        raise DependentProbes(f"expected 3 probe vectors, got {len(xs)}")
    probes = [as_vec3(x, f"xs[{i}]") for i, x in enumerate(xs)]
    if any(not np.any(x) for x in probes):
        raise DependentProbes("probe vectors must be non-zero")
    units = [_unit(x) for x in probes]
    gram = gram_determinant(units)
    if gram <= TOL.gram_min:
        raise DependentProbes(f"Gram determinant {gram:.3e} <= {TOL.gram_min:.1e}")
    return _unit(yv), units


def binary_protocol(
    rho: PureState | DensityMatrix,
    y: npt.ArrayLike | None = None,
    xs: Sequence[npt.ArrayLike] | None = None,
    corr_oracle: CorrOracle | None = None,
    *,
    assume_pure: bool = False,
) -> tuple[Verdict, ProtocolTrace]:
    """Probe xs in order against the fixed y and stop at the first non-zero.

    Probe vectors are rescaled to unit length; the zero/non-zero outcome is
    unaffected by scale.

    Args:
        rho: State under test.
        y: Bloch vector of the observable on B. Defaults to the configured probe.
        xs: Three linearly independent Bloch vectors for A.
        corr_oracle: Zero/non-zero oracle. Defaults to exact_oracle(rho).
        assume_pure: Read the outcome as for a pure state even if rho is mixed.

    Returns:
        (verdict, trace).

    Raises:
        ZeroVector: If y is zero.
        DependentProbes: If xs is not three independent vectors.
    """
    y = SETTINGS.protocol.y if y is None else y
    xs = SETTINGS.protocol.xs if xs is None else xs
    y_unit, units = _check_probes(y, xs)

    rho = to_density(rho)
    oracle = corr_oracle or exact_oracle(rho)

    probes: list[Probe] = []
    for i, x in enumerate(units, start=1):
        reading = oracle(ObservablePair(x, y_unit))
        probes.append(Probe(x, reading.covariance, reading.is_zero, reading.record))
        logger.debug("probe %d x=%s c=%.6g zero=%s", i, x.tolist(), reading.covariance, reading.is_zero)
        if not reading.is_zero:
            break

    hit = not probes[-1].is_zero
    trace = ProtocolTrace(y_unit, tuple(probes), len(probes))

    pure = is_pure(rho)
    if not pure and not assume_pure:
        detail = MIXED_NONZERO_DETAIL if hit else MIXED_ZERO_DETAIL
        return Verdict(Label.INDETERMINATE, Basis.BINARY_PROTOCOL, detail), trace

    if hit:
        detail = f"probe {len(probes)} gave non-zero correlation {probes[-1].covariance:.6g}"
        label = Label.ENTANGLED
    else:
        detail = "all 3 probes gave zero correlation"
        label = Label.SEPARABLE
    if not pure:
        detail += f"; purity {purity(rho):.6g}, assumed pure"
    return Verdict(label, Basis.BINARY_PROTOCOL, detail), trace


# ---------------------------------------------------------------------------
# Werner family
# ---------------------------------------------------------------------------


def werner_report(xi: float, pair: ObservablePair) -> WernerReport:
    """Covariance, its closed form -xi/4 x.y, and the PPT verdict at xi.

    Raises:
        XiOutOfRange: If xi is outside [0, 1].
    """
    rho = werner(xi)
    return WernerReport(
        xi=xi,
        pair=pair,
        covariance=covariance_direct(rho, pair),
        reference=-xi / 4.0 * float(pair.x @ pair.y),
        ppt_separable=ppt_is_separable(rho),
        c_matrix=correlation_matrix(rho),
    )


def werner_sweep(xis: Sequence[float], pair: ObservablePair) -> list[WernerReport]:
    return [werner_report(float(xi), pair) for xi in xis]
