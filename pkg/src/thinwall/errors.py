"""Exception and warning types shared across the package."""


class ThinWallError(Exception):
    """Base class for all errors raised by thinwall."""


class DomainError(ThinWallError, ValueError):
    """An argument lies outside the domain of an operation."""


class SingularityError(ThinWallError, ArithmeticError):
    """A denominator vanished (or changed sign) during evaluation."""


class CalibrationError(ThinWallError, ValueError):
    """The entropy calibration equality does not hold."""


class QuadratureError(ThinWallError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The best estimate obtained is kept on ``estimate`` together with the
    reported absolute error bound ``abserr``.
    """

    def __init__(self, message, estimate, abserr):
        super().__init__(message)
        self.estimate = estimate
        self.abserr = abserr


class FloorKinkError(ThinWallError, ArithmeticError):
    """Derivative requested exactly at the floor crossing of the late potential.

    ``left`` and ``right`` hold the one-sided derivatives.
    """

    def __init__(self, message, left, right):
        super().__init__(message)
        self.left = left
        self.right = right


class ConfigError(ThinWallError, ValueError):
    """Configuration could not be parsed or failed validation.

    ``key`` is the dotted key path of the offending entry when known.
    """

    def __init__(self, message, key=None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


class StepError(ThinWallError, RuntimeError):
    """A simulation step failed; ``t`` is the time of the failing step."""

    def __init__(self, t, cause):
        super().__init__(f"step at t={t!r} failed: {cause}")
        self.t = t
        self.cause = cause


class ThinWallWarning(UserWarning):
    """Physically questionable but admissible configuration or state."""
