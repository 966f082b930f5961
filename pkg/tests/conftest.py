"""Shared fixtures for the bincorr test suite."""

import json
import math

import numpy as np
import pytest

from bincorr.qstate import DensityMatrix, PureState, density_from_pure
from bincorr.states import chen_state, singlet

S = 1.0 / math.sqrt(2.0)

CHEN_C = (2.0 / 9.0) * np.array([[1.0, 0.0, -2.0], [0.0, -3.0, 0.0], [2.0, 0.0, 2.0]])
CHEN_F = (1.0 / 3.0) * np.array([[2.0, 0.0, -2.0], [0.0, -2.0, 0.0], [2.0, 0.0, 1.0]])
CHEN_A = np.array([2.0, 0.0, 1.0]) / 3.0
CHEN_B = np.array([2.0, 0.0, -1.0]) / 3.0

SINGLET_RHO = 0.5 * np.array(
    [[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]], dtype=complex
)


@pytest.fixture
def singlet_psi() -> PureState:
    return singlet()


@pytest.fixture
def singlet_rho() -> DensityMatrix:
    return density_from_pure(singlet())


@pytest.fixture
def chen_psi() -> PureState:
    return chen_state()


@pytest.fixture
def chen_rho() -> DensityMatrix:
    return density_from_pure(chen_state())


@pytest.fixture
def product_psi() -> PureState:
    """|a1 b1>."""
    return PureState(np.array([1, 0, 0, 0], dtype=complex))


@pytest.fixture
def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(np.eye(4) / 4)


@pytest.fixture
def write_state(tmp_path):
    """Write a state-file dict to tmp_path and return the path."""

    def _write(doc: dict, name: str = "state.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return path

    return _write
