"""
Sound speed of purely kinetic k-essence.

For a Lagrangian ``F(X)`` depending only on the kinetic invariant ``X``, the
perturbation sound speed is::

    c_s^2 = F_X / (F_X + 2 X F_XX)

Values outside ``[0, 1]`` are returned with ``stable=False`` rather than
rejected.
"""

import math
from dataclasses import dataclass

from .errors import DomainError, SingularityError

__all__ = ["KineticState", "QuadraticKinetic", "SoundSpeed", "cs_squared"]


@dataclass(frozen=True)
class KineticState:
    F_X: float
    F_XX: float
    X: float

    def __post_init__(self):
        if not (math.isfinite(self.F_X) and math.isfinite(self.F_XX) and math.isfinite(self.X)):
            raise DomainError("kinetic state must be finite")
        if self.X < 0:
            raise DomainError(f"X must be >= 0, got {self.X!r}")


@dataclass(frozen=True)
class SoundSpeed:
    cs2: float
    stable: bool


@dataclass(frozen=True)
class QuadraticKinetic:
    """The family ``F(X) = F0 + F2 (X - X0)^2``."""

    F0: float = 0.0
    F2: float = 1.0
    X0: float = 1e-4

    def __post_init__(self):
        for name in ("F0", "F2", "X0"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.X0 < 0:
            raise DomainError(f"X0 must be >= 0, got {self.X0!r}")

    def F(self, X):
        return self.F0 + self.F2 * (X - self.X0) ** 2

    def state(self, X):
        return KineticState(F_X=2.0 * self.F2 * (X - self.X0), F_XX=2.0 * self.F2, X=X)


def cs_squared(state):
    """
    Sound speed squared of a kinetic state.

    Raises
    ------
    SingularityError
        If ``F_X + 2 X F_XX`` vanishes.
    """
    den = state.F_X + 2.0 * state.X * state.F_XX
    if den == 0.0:
        raise SingularityError(f"F_X + 2 X F_XX = 0 at X={state.X!r}")
    c = state.F_X / den
    return SoundSpeed(cs2=c, stable=0.0 <= c <= 1.0)
