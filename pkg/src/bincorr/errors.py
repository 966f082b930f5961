"""
Exception hierarchy for bincorr.

Every error raised on purpose by the package derives from BinCorrError,
which is a ValueError so callers that already guard numeric input with
`except ValueError` keep working.
"""

from __future__ import annotations


class BinCorrError(ValueError):
    """Base class for all bincorr errors."""


class ConfigError(BinCorrError):
    """Settings file missing, malformed, or failing validation."""


class NonFinite(BinCorrError):
    """A NaN or Inf reached a public operation."""


class NotHermitian(BinCorrError):
    """Matrix differs from its conjugate transpose beyond tolerance."""


class ZeroVector(BinCorrError):
    """A direction was required but the vector has zero length."""


class NotNormalized(BinCorrError):
    """Pure-state amplitudes do not have unit norm."""


class InvalidState(BinCorrError):
    """A density matrix or Bloch form violates one of its invariants.

    Attributes:
        invariant: Short name of the violated invariant, e.g. "trace".
    """

    def __init__(self, invariant: str, message: str) -> None:
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class NotPositive(InvalidState):
    """Assembled or supplied matrix has a negative eigenvalue."""

    def __init__(self, message: str) -> None:
        super().__init__("positive_semidefinite", message)


class BlochOutOfBall(BinCorrError):
    """Observable Bloch vector lies outside the closed unit ball."""


class NonUnitBloch(BinCorrError):
    """Projector observable requested with a non-unit Bloch vector."""


class RankContradiction(BinCorrError):
    """rank(C) of a pure state is 1 or 2, which exact arithmetic excludes."""


class DependentProbes(BinCorrError):
    """Protocol probe vectors are not linearly independent."""


class XiOutOfRange(BinCorrError):
    """Werner mixing parameter outside [0, 1]."""


class ParseError(BinCorrError):
    """State file or CLI vector argument could not be parsed."""
