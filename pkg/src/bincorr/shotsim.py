"""
Finite-shot simulation of a binary correlation measurement.

X = Q (x) 1 and Y = 1 (x) R commute, so one joint projective measurement in
the product eigenbasis yields both outcomes s, t in {0, 1}. The covariance
estimate is the sample covariance of (s, t), n/(n-1) times
mean(st) - mean(s) mean(t), and it is called non-zero when it exceeds
z_threshold delta-method standard errors.

Sampling is inverse-CDF over the four joint outcomes in the fixed order
(0,0), (0,1), (1,0), (1,1), drawn from a Philox stream seeded per run.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Literal

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from bincorr.config import SETTINGS, TOL
from bincorr.correlation import ObservablePair
from bincorr.detect import (
    CorrelationReading,
    CorrOracle,
    ProtocolTrace,
    Verdict,
    binary_protocol,
)
from bincorr.errors import NonUnitBloch
from bincorr.qstate import (
    IDENTITY2,
    DensityMatrix,
    PureState,
    QubitOperator,
    joint_operator,
    observable_from_bloch,
    to_density,
)
from bincorr.rng import make_rng

logger = logging.getLogger(__name__)

SampleMode = Literal["joint", "independent"]


class ShotConfig(BaseModel):
    """Per-correlation shot budget, seed and decision threshold."""

    model_config = ConfigDict(frozen=True)

    shots: int = Field(default=SETTINGS.shots.shots, ge=100)
    seed: int = Field(default=SETTINGS.shots.seed, ge=0, lt=2**64)
    z_threshold: float = Field(default=SETTINGS.shots.z_threshold, gt=0)
    mode: SampleMode = SETTINGS.shots.mode

    def with_seed(self, seed: int) -> ShotConfig:
        return self.model_copy(update={"seed": seed})


class Decision(Enum):
    ZERO = "Zero"
    NON_ZERO = "NonZero"


@dataclass(frozen=True)
class ShotRecord:
    estimate_xy: float
    estimate_x: float
    estimate_y: float
    covariance_estimate: float
    standard_error: float
    decision: Decision
    shots_used: int
    seed: int
    mode: str

    def to_dict(self) -> dict:
        out = asdict(self)
        out["decision"] = self.decision.value
        return out


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _check_unit(vec: np.ndarray, name: str) -> None:
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > TOL.unit_bloch:
        raise NonUnitBloch(f"|{name}| = {norm:.15g}; projector observables need unit vectors")


def joint_probabilities(rho: DensityMatrix, pair: ObservablePair) -> np.ndarray:
    """Tr(rho P_s (x) P_t) for (s, t) = (0,0), (0,1), (1,0), (1,1).

    P_1 is the observable itself (a projector for unit vectors), P_0 = 1 - P_1.
    """
    q1 = observable_from_bloch(pair.x).matrix
    r1 = observable_from_bloch(pair.y).matrix
    q = (QubitOperator(IDENTITY2 - q1), QubitOperator(q1))
    r = (QubitOperator(IDENTITY2 - r1), QubitOperator(r1))

    probs = np.array(
        [np.trace(rho.rho @ joint_operator(q[s], r[t])).real for s in (0, 1) for t in (0, 1)]
    )
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def _draw(rng: np.random.Generator, probs: np.ndarray, n: int) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    return np.minimum(idx, len(probs) - 1)


def _bernoulli_var(mean: float) -> float:
    return mean * (1.0 - mean)


def _joint_standard_error(s: np.ndarray, t: np.ndarray, cov: float) -> float:
    """Delta-method standard error of the covariance from one joint stream.

    First order is the sample variance of st - mean(t) s - mean(s) t over n.
    The second-order term (Var s Var t + cov^2) / n^2 keeps the estimate
    positive where the first-order gradient vanishes (the singlet along a
    shared axis).
    """
    n = s.size
    mean_x, mean_y = float(np.mean(s)), float(np.mean(t))
    first = float(np.var(s * t - mean_y * s - mean_x * t))
    second = (_bernoulli_var(mean_x) * _bernoulli_var(mean_y) + cov**2) / n
    return math.sqrt((first + second) / n)


def sample_joint(
    rho: PureState | DensityMatrix,
    pair: ObservablePair,
    cfg: ShotConfig | None = None,
) -> ShotRecord:
    """Estimate the covariance of (X, Y) from cfg.shots simulated measurements.

    In "joint" mode all three means come from one stream of joint outcomes;
    the covariance carries the n/(n-1) sample correction and its standard
    error is the delta-method estimate. In "independent" mode <XY>, <X> and
    <Y> each get their own stream of cfg.shots outcomes, the product of
    means is already unbiased, and the three variances add.

    Raises:
        NonUnitBloch: If x or y is not a unit vector.
    """
    cfg = cfg or ShotConfig()
    _check_unit(pair.x, "x")
    _check_unit(pair.y, "y")

    probs = joint_probabilities(to_density(rho), pair)
    rng = make_rng(cfg.seed)
    n = cfg.shots

    outcomes = _draw(rng, probs, n)
    s, t = outcomes // 2, outcomes % 2
    mean_xy = float(np.mean(s * t))
    if cfg.mode == "joint":
        mean_x, mean_y = float(np.mean(s)), float(np.mean(t))
        cov = (mean_xy - mean_x * mean_y) * n / (n - 1)
        se = _joint_standard_error(s, t, cov)
        used = n
    else:
        p_s1 = probs[2] + probs[3]
        p_t1 = probs[1] + probs[3]
        mean_x = float(np.mean(_draw(rng, np.array([1.0 - p_s1, p_s1]), n)))
        mean_y = float(np.mean(_draw(rng, np.array([1.0 - p_t1, p_t1]), n)))
        cov = mean_xy - mean_x * mean_y
        se = math.sqrt(
            (
                _bernoulli_var(mean_xy)
                + mean_y**2 * _bernoulli_var(mean_x)
                + mean_x**2 * _bernoulli_var(mean_y)
            )
            / n
        )
        used = 3 * n

    decision = Decision.NON_ZERO if abs(cov) > cfg.z_threshold * se else Decision.ZERO
    logger.debug(
        "shots=%d seed=%d mode=%s cov=%.6g se=%.3g -> %s",
        n, cfg.seed, cfg.mode, cov, se, decision.value,
    )
    return ShotRecord(mean_xy, mean_x, mean_y, cov, se, decision, used, cfg.seed, cfg.mode)


# ---------------------------------------------------------------------------
# Protocol
# ---------------------------------------------------------------------------


def statistical_oracle(rho: PureState | DensityMatrix, cfg: ShotConfig | None = None) -> CorrOracle:
    """Correlation oracle backed by sample_joint.

    The i-th reading (counting from 0) of a returned oracle uses seed + i.
    """
    cfg = cfg or ShotConfig()
    rho = to_density(rho)
    counter = itertools.count()

    def read(pair: ObservablePair) -> CorrelationReading:
        record = sample_joint(rho, pair, cfg.with_seed(cfg.seed + next(counter)))
        return CorrelationReading(
            record.covariance_estimate, record.decision is Decision.ZERO, record
        )

    return read


def statistical_binary_protocol(
    rho: PureState | DensityMatrix,
    y: npt.ArrayLike | None = None,
    xs: Sequence[npt.ArrayLike] | None = None,
    cfg: ShotConfig | None = None,
    *,
    assume_pure: bool = False,
) -> tuple[Verdict, ProtocolTrace]:
    """binary_protocol with finite-shot decisions in place of exact zeros.

    A statistical Separable or Entangled carries confidence at the chosen
    z_threshold, not certainty.
    """
    cfg = cfg or ShotConfig()
    verdict, trace = binary_protocol(
        rho, y, xs, statistical_oracle(rho, cfg), assume_pure=assume_pure
    )
    detail = (
        f"{verdict.detail}; {cfg.shots} shots per probe, z = {cfg.z_threshold:g}, "
        f"mode {cfg.mode}, seed {cfg.seed}; confidence, not certainty"
    )
    return Verdict(verdict.label, verdict.basis, detail), trace
