"""
Self-verification: property suites for every module, run at a chosen trial count.

Each suite draws its inputs from seeded generators, so a (trials, seed) pair
reproduces a run exactly. `run_all` returns one SuiteResult per suite;
`save_report` writes them as JSON.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Callable
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from bincorr.config import SETTINGS, TOL
from bincorr.correlation import (
    ObservablePair,
    correlation_matrix,
    covariance_direct,
    covariance_via_C,
)
from bincorr.detect import (
    Label,
    binary_protocol,
    classify_pure_by_rank,
    find_zero_correlation_pair,
    minimality_witness,
    ppt_is_separable,
    schmidt_rank,
)
from bincorr.errors import BinCorrError
from bincorr.linalg import (
    det3,
    gram_determinant,
    hermitian_eigh,
    numeric_rank,
    orthogonal_complement_basis,
    symmetric3_singular_values,
)
from bincorr.qstate import (
    IDENTITY2,
    DensityMatrix,
    QubitOperator,
    bloch_assemble,
    bloch_decompose,
    density_from_pure,
    expectation,
    joint_operator,
    observable_from_bloch,
    partial_trace_B,
)
from bincorr.rng import make_rng
from bincorr.shotsim import Decision, ShotConfig, sample_joint
from bincorr.states import (
    haar_random_pure,
    random_product_pure,
    random_pure_mixture,
    random_separable_mixed,
    singlet,
    werner,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    module: str
    trials: int
    failures: int
    worst_residual: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


class _Tally:
    """Accumulates residuals or pass/fail flags for one suite."""

    def __init__(self, tolerance: float = 0.0) -> None:
        self.tolerance = tolerance
        self.trials = 0
        self.failures = 0
        self.worst = 0.0

    def residual(self, value: float) -> None:
        self.trials += 1
        if not math.isfinite(value) or value > self.tolerance:
            self.failures += 1
        if math.isfinite(value):
            self.worst = max(self.worst, value)
        else:
            self.worst = math.inf

    def flag(self, ok: bool) -> None:
        self.trials += 1
        if not ok:
            self.failures += 1

    def result(self, name: str, module: str, passed: bool | None = None) -> SuiteResult:
        return SuiteResult(
            name=name,
            module=module,
            trials=self.trials,
            failures=self.failures,
            worst_residual=self.worst,
            tolerance=self.tolerance,
            passed=self.failures == 0 if passed is None else passed,
        )


Suite = Callable[[int, int], SuiteResult]
SUITES: list[tuple[str, str, Suite]] = []


def suite(module: str, name: str) -> Callable[[Suite], Suite]:
    def register(fn: Suite) -> Suite:
        SUITES.append((module, name, fn))
        return fn

    return register


# ---------------------------------------------------------------------------
# Random inputs
# ---------------------------------------------------------------------------


def _ball_vector(rng: np.random.Generator) -> np.ndarray:
    d = rng.standard_normal(3)
    return d / np.linalg.norm(d) * rng.random() ** (1.0 / 3.0)


def _unit_vector(rng: np.random.Generator) -> np.ndarray:
    d = rng.standard_normal(3)
    return d / np.linalg.norm(d)


def _random_density(seed: int, i: int) -> DensityMatrix:
    kind = i % 4
    if kind == 0:
        return density_from_pure(haar_random_pure(seed))
    if kind == 1:
        return density_from_pure(random_product_pure(seed))
    if kind == 2:
        return random_separable_mixed(seed, 1 + i % 5)
    return random_pure_mixture(seed, 2 + i % 4)


def _random_mixed(seed: int, i: int) -> DensityMatrix:
    if i % 2:
        return random_pure_mixture(seed, 2 + i % 4)
    return random_separable_mixed(seed, 2 + i % 4)


def _random_pure(seed: int, i: int):
    return random_product_pure(seed) if i % 2 else haar_random_pure(seed)


def _independent_triple(rng: np.random.Generator) -> np.ndarray:
    while True:
        xs = np.array([_unit_vector(rng) for _ in range(3)])
        if gram_determinant(xs) > 1e-3:
            return xs


# ---------------------------------------------------------------------------
# linalg
# ---------------------------------------------------------------------------


@suite("linalg", "eigen_completeness")
def _eigen_completeness(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally(1e-8)
    for _ in range(trials):
        z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = 0.5 * (z + z.conj().T)
        w, v = hermitian_eigh(h)
        tally.residual(float(np.max(np.abs((v * w) @ v.conj().T - h))))
    return tally.result("eigen_completeness", "linalg")


@suite("linalg", "singular_values_transpose")
def _singular_values_transpose(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally(1e-10)
    for _ in range(trials):
        m = rng.standard_normal((3, 3))
        diff = symmetric3_singular_values(m) - symmetric3_singular_values(m.T)
        tally.residual(float(np.max(np.abs(diff))))
    return tally.result("singular_values_transpose", "linalg")


@suite("linalg", "determinant_vs_singular_values")
def _det_vs_sv(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally(1e-9)
    for _ in range(trials):
        m = rng.standard_normal((3, 3))
        prod = float(np.prod(symmetric3_singular_values(m)))
        tally.residual(abs(abs(det3(m)) - prod) / max(1.0, prod))
    return tally.result("determinant_vs_singular_values", "linalg")


@suite("linalg", "rank_monotone_in_tolerance")
def _rank_monotone(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tolerances = (1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2)
    tally = _Tally()
    for _ in range(trials):
        u = rng.standard_normal((3, 3))
        v = rng.standard_normal((3, 3))
        s = 10.0 ** rng.uniform(-14, 0, size=3)
        m = u @ np.diag(s) @ v
        ranks = [numeric_rank(m, t) for t in tolerances]
        tally.flag(all(a >= b for a, b in zip(ranks, ranks[1:])))
    return tally.result("rank_monotone_in_tolerance", "linalg")


# ---------------------------------------------------------------------------
# qstate
# ---------------------------------------------------------------------------


@suite("qstate", "bloch_round_trip")
def _bloch_round_trip(trials: int, seed: int) -> SuiteResult:
    tally = _Tally(1e-10)
    for i in range(trials):
        rho = _random_density(seed + i, i)
        back = bloch_assemble(bloch_decompose(rho))
        tally.residual(float(np.max(np.abs(back.rho - rho.rho))))
    return tally.result("bloch_round_trip", "qstate")


@suite("qstate", "pure_state_properties")
def _pure_state_properties(trials: int, seed: int) -> SuiteResult:
    tally = _Tally(1e-9)
    for i in range(trials):
        bf = bloch_decompose(density_from_pure(haar_random_pure(seed + i)))
        na, nb = np.linalg.norm(bf.a), np.linalg.norm(bf.b)
        tally.residual(
            max(
                float(np.linalg.norm(bf.f @ bf.b - bf.a)),
                float(np.linalg.norm(bf.f.T @ bf.a - bf.b)),
                abs(na - nb),
                abs(det3(bf.f) - (na**2 - 1.0)),
            )
        )
    return tally.result("pure_state_properties", "qstate")


@suite("qstate", "product_state_unit_bloch")
def _product_unit_bloch(trials: int, seed: int) -> SuiteResult:
    tally = _Tally(1e-9)
    for i in range(trials):
        bf = bloch_decompose(density_from_pure(random_product_pure(seed + i)))
        tally.residual(
            max(abs(np.linalg.norm(bf.a) - 1.0), abs(np.linalg.norm(bf.b) - 1.0))
        )
    return tally.result("product_state_unit_bloch", "qstate")


@suite("qstate", "partial_trace_consistency")
def _partial_trace_consistency(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally(1e-10)
    for i in range(trials):
        rho = _random_density(seed + i, i)
        q = observable_from_bloch(_ball_vector(rng))
        local = complex(np.trace(partial_trace_B(rho) @ q.matrix)).real
        joint = expectation(rho, joint_operator(q, QubitOperator(IDENTITY2)))
        tally.residual(abs(local - joint))
    return tally.result("partial_trace_consistency", "qstate")


# ---------------------------------------------------------------------------
# correlation
# ---------------------------------------------------------------------------


@suite("correlation", "covariance_paths_agree")
def _covariance_paths(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally(1e-10)
    for i in range(trials):
        rho = _random_density(seed + i, i)
        pair = ObservablePair(_ball_vector(rng), _ball_vector(rng))
        direct = covariance_direct(rho, pair)
        tally.residual(abs(direct - covariance_via_C(correlation_matrix(rho), pair)))
    return tally.result("covariance_paths_agree", "correlation")


@suite("correlation", "bilinearity")
def _bilinearity(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally(1e-12)
    for i in range(trials):
        cm = correlation_matrix(_random_density(seed + i, i))
        x1, x2, y1, y2 = (_ball_vector(rng) for _ in range(4))
        alpha, beta = rng.uniform(-0.5, 0.5, size=2)

        def c(x, y):
            return covariance_via_C(cm, ObservablePair(x, y))

        in_x = c(alpha * x1 + beta * x2, y1) - (alpha * c(x1, y1) + beta * c(x2, y1))
        in_y = c(x1, alpha * y1 + beta * y2) - (alpha * c(x1, y1) + beta * c(x1, y2))
        tally.residual(max(abs(in_x), abs(in_y)))
    return tally.result("bilinearity", "correlation")


@suite("correlation", "pure_rank_dichotomy")
def _pure_rank_dichotomy(trials: int, seed: int) -> SuiteResult:
    tally = _Tally()
    for i in range(trials):
        psi = _random_pure(seed + i, i)
        rank = correlation_matrix(density_from_pure(psi)).rank
        tally.flag(rank in (0, 3) and (rank == 0) == (schmidt_rank(psi) == 1))
    return tally.result("pure_rank_dichotomy", "correlation")


@suite("correlation", "determinant_identity")
def _determinant_identity(trials: int, seed: int) -> SuiteResult:
    tally = _Tally(1e-9)
    for i in range(trials):
        rho = density_from_pure(haar_random_pure(seed + i))
        nb2 = float(np.sum(bloch_decompose(rho).b ** 2))
        tally.residual(abs(det3(correlation_matrix(rho).c) + (nb2 - 1.0) ** 2))
    return tally.result("determinant_identity", "correlation")


# ---------------------------------------------------------------------------
# detect
# ---------------------------------------------------------------------------


@suite("detect", "rank_vs_schmidt_oracle")
def _oracle_agreement(trials: int, seed: int) -> SuiteResult:
    tally = _Tally()
    for i in range(trials):
        psi = _random_pure(seed + i, i)
        try:
            label = classify_pure_by_rank(psi).label
        except BinCorrError:
            tally.flag(False)
            continue
        expected = Label.SEPARABLE if schmidt_rank(psi) == 1 else Label.ENTANGLED
        tally.flag(label is expected)
    return tally.result("rank_vs_schmidt_oracle", "detect")


@suite("detect", "protocol_soundness")
def _protocol_soundness(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally()
    for i in range(trials):
        psi = _random_pure(seed + i, i)
        verdict, trace = binary_protocol(psi, _unit_vector(rng), _independent_triple(rng))
        expected = classify_pure_by_rank(psi).label
        tally.flag(verdict.label is expected and 1 <= trace.measurements_used <= 3)
    return tally.result("protocol_soundness", "detect")


@suite("detect", "two_probes_insufficient")
def _minimality(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally(TOL.zero_correlation)
    for i in range(trials):
        rho = density_from_pure(haar_random_pure(seed + i))
        y = _unit_vector(rng)
        u1, u2 = minimality_witness(rho, y)
        worst = max(abs(covariance_direct(rho, ObservablePair(u, y))) for u in (u1, u2))
        independent = np.linalg.norm(np.cross(u1, u2)) > 0.5
        tally.residual(worst if independent else math.inf)
    return tally.result("two_probes_insufficient", "detect")


@suite("detect", "zero_pair_universality")
def _zero_pair_universality(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally(TOL.zero_correlation)
    states = [_random_mixed(seed + i, i) for i in range(trials)]
    states += [werner(xi) for xi in (0.0, 0.2, 1.0 / 3.0, 0.5, 1.0)]
    for rho in states:
        pair = find_zero_correlation_pair(rho, _unit_vector(rng))
        tally.residual(abs(covariance_direct(rho, pair)))
    return tally.result("zero_pair_universality", "detect")


def werner_pair_grid(seed: int, size: int = 100) -> list[ObservablePair]:
    """Half orthogonal pairs, half pairs with |x.y| well away from zero."""
    rng = make_rng(seed)
    pairs = []
    while len(pairs) < size // 2:
        y = _unit_vector(rng)
        u1, u2 = orthogonal_complement_basis(y)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        pairs.append(ObservablePair(math.cos(theta) * u1 + math.sin(theta) * u2, y))
    while len(pairs) < size:
        x, y = _unit_vector(rng), _unit_vector(rng)
        if abs(x @ y) > 1e-3:
            pairs.append(ObservablePair(x, y))
    return pairs


@suite("detect", "werner_zero_pairs_match")
def _werner_zero_pairs(trials: int, seed: int) -> SuiteResult:
    tally = _Tally()
    grid = werner_pair_grid(seed)
    for xi, separable in ((0.1, True), (0.3, True), (0.4, False), (0.9, False)):
        rho = werner(xi)
        tally.flag(ppt_is_separable(rho) == separable)
        for pair in grid:
            zero = abs(covariance_direct(rho, pair)) < TOL.zero_correlation
            tally.flag(zero == (abs(float(pair.x @ pair.y)) < TOL.zero_correlation))
    return tally.result("werner_zero_pairs_match", "detect")


# ---------------------------------------------------------------------------
# shotsim
# ---------------------------------------------------------------------------

_Z = np.array([0.0, 0.0, 1.0])


@suite("shotsim", "determinism")
def _shot_determinism(trials: int, seed: int) -> SuiteResult:
    rng = make_rng(seed)
    tally = _Tally()
    for i in range(min(trials, 50)):
        rho = _random_density(seed + i, i)
        pair = ObservablePair(_unit_vector(rng), _unit_vector(rng))
        cfg = ShotConfig(shots=1000, seed=seed + i)
        tally.flag(sample_joint(rho, pair, cfg) == sample_joint(rho, pair, cfg))
    return tally.result("determinism", "shotsim")


@suite("shotsim", "unbiasedness")
def _unbiasedness(trials: int, seed: int) -> SuiteResult:
    rho = density_from_pure(singlet())
    pair = ObservablePair(_Z, _Z)
    records = [sample_joint(rho, pair, ShotConfig(shots=10_000, seed=seed + i)) for i in range(200)]
    mean = float(np.mean([r.covariance_estimate for r in records]))
    se = float(np.mean([r.standard_error for r in records]))
    tally = _Tally(3.0 * se / math.sqrt(len(records)))
    tally.residual(abs(mean + 0.25))
    return tally.result("unbiasedness", "shotsim")


@suite("shotsim", "standard_error_scaling")
def _se_scaling(trials: int, seed: int) -> SuiteResult:
    rho = werner(0.5)
    pair = ObservablePair(_Z, _Z)
    scaled = [
        sample_joint(rho, pair, ShotConfig(shots=n, seed=seed)).standard_error * math.sqrt(n)
        for n in (1_000, 10_000, 100_000)
    ]
    tally = _Tally(0.2)
    for value in scaled[1:]:
        tally.residual(abs(value / scaled[0] - 1.0))
    return tally.result("standard_error_scaling", "shotsim")


@suite("shotsim", "false_positive_rate")
def _false_positive(trials: int, seed: int) -> SuiteResult:
    rho = werner(0.0)
    pair = ObservablePair(_Z, np.array([1.0, 0.0, 0.0]))
    runs = 1000
    tally = _Tally()
    for i in range(runs):
        record = sample_joint(rho, pair, ShotConfig(shots=1000, seed=seed + i, z_threshold=3.0))
        tally.flag(record.decision is Decision.ZERO)
    tally.worst = tally.failures / runs
    tally.tolerance = 0.01
    return tally.result("false_positive_rate", "shotsim", passed=tally.worst < 0.01)


@suite("shotsim", "standard_error_calibration")
def _se_calibration(trials: int, seed: int) -> SuiteResult:
    rho = werner(0.0)
    pair = ObservablePair(_Z, np.array([1.0, 0.0, 0.0]))
    records = [sample_joint(rho, pair, ShotConfig(shots=10_000, seed=seed + i)) for i in range(200)]
    spread = float(np.std([r.covariance_estimate for r in records], ddof=1))
    reported = float(np.mean([r.standard_error for r in records]))
    tally = _Tally(0.2)
    tally.residual(abs(reported / spread - 1.0))
    return tally.result("standard_error_calibration", "shotsim")


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@suite("states", "generators_valid")
def _generators_valid(trials: int, seed: int) -> SuiteResult:
    tally = _Tally()
    for i in range(trials):
        s = seed + i
        try:
            haar_random_pure(s)
            random_product_pure(s)
            random_separable_mixed(s, 1 + i % 5)
            random_pure_mixture(s, 1 + i % 5)
            werner(i / max(trials - 1, 1))
        except BinCorrError as e:
            logger.debug("generator failed for seed %d: %s", s, e)
            tally.flag(False)
        else:
            tally.flag(True)
    return tally.result("generators_valid", "states")


@suite("states", "werner_round_trip")
def _werner_round_trip(trials: int, seed: int) -> SuiteResult:
    tally = _Tally(1e-12)
    for xi in np.linspace(0.0, 1.0, trials):
        bf = bloch_decompose(werner(float(xi)))
        tally.residual(
            max(
                float(np.max(np.abs(bf.a))),
                float(np.max(np.abs(bf.b))),
                float(np.max(np.abs(bf.f + xi * np.eye(3)))),
            )
        )
    return tally.result("werner_round_trip", "states")


@suite("states", "generators_deterministic")
def _generators_deterministic(trials: int, seed: int) -> SuiteResult:
    tally = _Tally()
    for i in range(min(trials, 200)):
        s = seed + i
        tally.flag(np.array_equal(haar_random_pure(s).amplitudes, haar_random_pure(s).amplitudes))
        tally.flag(np.array_equal(random_separable_mixed(s).rho, random_separable_mixed(s).rho))
    return tally.result("generators_deterministic", "states")


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


def run_all(trials: int | None = None, seed: int | None = None) -> list[SuiteResult]:
    """Run every registered suite in order.

    Raises:
        ValueError: If trials is below the configured minimum.
    """
    trials = SETTINGS.verify.trials if trials is None else trials
    seed = SETTINGS.verify.seed if seed is None else seed
    if trials < SETTINGS.verify.min_trials:
        raise ValueError(f"trials must be >= {SETTINGS.verify.min_trials}, got {trials}")

    results = []
    for module, name, fn in SUITES:
        logger.debug("running %s.%s (trials=%d, seed=%d)", module, name, trials, seed)
        result = fn(trials, seed)
        if not result.passed:
            logger.warning(
                "%s.%s failed: %d/%d, worst residual %.3e",
                module, name, result.failures, result.trials, result.worst_residual,
            )
        results.append(result)
    return results


def save_report(results: list[SuiteResult], path: Path | str, trials: int, seed: int) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "trials": trials,
        "seed": seed,
        "passed": all(r.passed for r in results),
        "suites": [r.to_dict() for r in results],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2)
    return path


def format_summary(results: list[SuiteResult], trials: int, seed: int) -> str:
    passed = sum(r.passed for r in results)
    lines = [
        "=" * 64,
        "bincorr verification summary",
        "=" * 64,
        f"Trials per suite:   {trials}",
        f"Seed:               {seed}",
        f"Suites passed:      {passed}/{len(results)}",
        "-" * 64,
    ]
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(
            f"  {mark}  {r.module + '.' + r.name:<42} "
            f"{r.failures:>5}/{r.trials:<6} worst={r.worst_residual:.2e}"
        )
    lines.append("=" * 64)
    return "\n".join(lines)
