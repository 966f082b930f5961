"""
Fixture states, seeded random generators and the JSON state-file format.

Every generator is a pure function of its seed (Philox stream, see rng.py)
and every output passes qstate validation.
"""

from __future__ import annotations

import json
import math
from enum import Enum
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ValidationError, model_validator

from bincorr.errors import ParseError, XiOutOfRange
from bincorr.qstate import (
    IDENTITY2,
    PAULIS,
    DensityMatrix,
    PureState,
    density_from_pure,
)
from bincorr.rng import make_rng

State = Union[PureState, DensityMatrix]

_SQRT1_2 = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


class BellState(Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


_BELL_AMPLITUDES = {
    BellState.PHI_PLUS: (_SQRT1_2, 0.0, 0.0, _SQRT1_2),
    BellState.PHI_MINUS: (_SQRT1_2, 0.0, 0.0, -_SQRT1_2),
    BellState.PSI_PLUS: (0.0, _SQRT1_2, _SQRT1_2, 0.0),
    BellState.PSI_MINUS: (0.0, _SQRT1_2, -_SQRT1_2, 0.0),
}


def bell_state(which: BellState | str) -> PureState:
    """One of the four Bell vectors; psi- is the singlet (|a1 b2> - |a2 b1>)/sqrt2."""
    return PureState(np.array(_BELL_AMPLITUDES[BellState(which)], dtype=np.complex128))


def singlet() -> PureState:
    return bell_state(BellState.PSI_MINUS)


def chen_state() -> PureState:
    """(|a1 b1> + |a1 b2> + |a2 b2>)/sqrt3."""
    return PureState(np.array([1.0, 1.0, 0.0, 1.0], dtype=np.complex128) / math.sqrt(3.0))


def product_state(psi_a: np.ndarray, psi_b: np.ndarray) -> PureState:
    return PureState.from_unnormalized(np.kron(psi_a, psi_b))


def werner(xi: float) -> DensityMatrix:
    """(1 - xi)/4 . 1 + xi |psi-><psi-|, separable iff xi <= 1/3.

    Raises:
        XiOutOfRange: If xi is outside [0, 1].
    """
    if not 0.0 <= xi <= 1.0:
        raise XiOutOfRange(f"xi must lie in [0, 1], got {xi}")
    projector = density_from_pure(singlet()).rho
    return DensityMatrix((1.0 - xi) / 4.0 * np.eye(4) + xi * projector)


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------


def _haar_qubit(rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return z / np.linalg.norm(z)


def _haar_amplitudes(rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return z / np.linalg.norm(z)


def _simplex_weights(rng: np.random.Generator, k: int) -> np.ndarray:
    w = rng.standard_exponential(k)
    return w / w.sum()


def _ball_qubit_density(rng: np.random.Generator) -> np.ndarray:
    """Single-qubit density matrix with Bloch vector uniform in the unit ball."""
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    r = rng.random() ** (1.0 / 3.0)
    vec = r * direction
    return 0.5 * (IDENTITY2 + sum(c * s for c, s in zip(vec, PAULIS)))


def haar_random_pure(seed: int) -> PureState:
    """Four i.i.d. standard complex Gaussians, normalized."""
    return PureState(_haar_amplitudes(make_rng(seed)))


def random_product_pure(seed: int) -> PureState:
    """Product of two Haar-random qubit states."""
    rng = make_rng(seed)
    return product_state(_haar_qubit(rng), _haar_qubit(rng))


def random_separable_mixed(seed: int, k: int = 3) -> DensityMatrix:
    """sum_i p_i rho_A^i (x) rho_B^i with k product terms; separable by construction."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    rng = make_rng(seed)
    weights = _simplex_weights(rng, k)
    rho = np.zeros((4, 4), dtype=np.complex128)
    for p in weights:
        rho += p * np.kron(_ball_qubit_density(rng), _ball_qubit_density(rng))
    return DensityMatrix(rho)


def random_pure_mixture(seed: int, k: int = 4) -> DensityMatrix:
    """Convex mixture of k Haar-random pure states with simplex weights."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    rng = make_rng(seed)
    weights = _simplex_weights(rng, k)
    rho = np.zeros((4, 4), dtype=np.complex128)
    for p in weights:
        psi = _haar_amplitudes(rng)
        rho += p * np.outer(psi, psi.conj())
    return DensityMatrix(rho)


def near_product_pure(epsilon: float) -> PureState:
    """sqrt(1 - eps^2)|a1 b1> + eps|a2 b2>: entangled, Schmidt coefficients (sqrt(1-eps^2), eps)."""
    return PureState(
        np.array([math.sqrt(1.0 - epsilon**2), 0.0, 0.0, epsilon], dtype=np.complex128)
    )


# ---------------------------------------------------------------------------
# State-file format
# ---------------------------------------------------------------------------

ComplexPair = tuple[float, float]


class StateSpec(BaseModel):
    """JSON state file: kind, optional label, and amplitudes or matrix.

    Unknown top-level keys are ignored so a machine-readable report can be
    read back as a state file.
    """

    kind: Literal["pure", "mixed"]
    label: Optional[str] = None
    amplitudes: Optional[list[ComplexPair]] = None
    matrix: Optional[list[list[ComplexPair]]] = None

    @model_validator(mode="after")
    def _check_payload(self) -> StateSpec:
        if self.kind == "pure":
            if self.amplitudes is None or len(self.amplitudes) != 4:
                raise ValueError("pure state needs 'amplitudes' with 4 [re, im] pairs")
        else:
            if self.matrix is None or len(self.matrix) != 4 or any(len(r) != 4 for r in self.matrix):
                raise ValueError("mixed state needs a 4x4 'matrix' of [re, im] pairs")
        return self


def _pairs(values: np.ndarray) -> list:
    if values.ndim == 1:
        return [[float(v.real), float(v.imag)] for v in values]
    return [_pairs(row) for row in values]


def spec_from_state(state: State, label: str | None = None) -> StateSpec:
    if isinstance(state, PureState):
        return StateSpec(kind="pure", label=label, amplitudes=_pairs(state.amplitudes))
    return StateSpec(kind="mixed", label=label, matrix=_pairs(state.rho))


def state_from_spec(spec: StateSpec) -> State:
    """Build and validate the state described by a spec.

    Raises:
        NotNormalized, InvalidState: From qstate validation.
    """
    if spec.kind == "pure":
        amp = np.array([complex(re, im) for re, im in spec.amplitudes])
        return PureState(amp)
    rho = np.array([[complex(re, im) for re, im in row] for row in spec.matrix])
    return DensityMatrix(rho)


def parse_state_text(text: str, source: str = "<text>") -> tuple[str | None, State]:
    try:
        spec = StateSpec.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: not valid JSON ({e})") from e
    except ValidationError as e:
        raise ParseError(f"{source}: not a state file:\n{e}") from e
    return spec.label, state_from_spec(spec)


def load_state_file(path: Path | str) -> tuple[str | None, State]:
    """Read a state file. Returns (label, state); the label defaults to the file stem."""
    path = Path(path)
    label, state = parse_state_text(path.read_text(encoding="utf-8"), str(path))
    return label or path.stem, state


def dump_state_file(state: State, path: Path | str, label: str | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = spec_from_state(state, label).model_dump(exclude_none=True)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path
