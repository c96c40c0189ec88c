"""
Entropy fluctuations from scalar-field fluctuations.

The chain tying the two together:

* holographic minimum length, ``l_p^2 = (S/A)^-1 / (sqrt(3) beta T)``;
* ``l_p = hbar G`` with a Brans-Dicke coupling ``G = kappa / <phi>``;
* the field split ``<phi> = <phi0> + <phi_tilde>`` with ``phi0 >> phi_tilde``;
* equating the two expressions for ``l_p^2`` to first order in the
  fluctuations gives ``dS/S0 = 2 phi_tilde / phi0``.

The equation can only be solved for ``dS/S0`` once the zeroth orders agree,
``(S0/A)^-1 / (sqrt(3) beta T) = hbar^2 / phi0^2``; that is what
:meth:`EntropyCalibration.calibrated` checks.

All quantities are in the model's own units; ``l_p = hbar G`` is kept
literally even though it is not dimensionally the textbook Planck length.
"""

import math
import warnings
from dataclasses import dataclass

from .errors import CalibrationError, DomainError, ThinWallWarning

__all__ = [
    "FIRST_ORDER",
    "EXACT",
    "CALIBRATION_RTOL",
    "EntropyCalibration",
    "FieldSplit",
    "planck_length_sq_holo",
    "planck_length_sq_linear",
    "planck_length_grav",
    "g_brans_dicke",
    "lhs_first_order",
    "lhs_exact",
    "delta_s_over_s",
    "delta_s",
    "phi_tilde_from_rate",
    "min_length_ok",
]

FIRST_ORDER = "first-order"
EXACT = "exact"
CALIBRATION_RTOL = 1e-12
DOMINANCE_WARN = 0.1

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class EntropyCalibration:
    S0: float = 1.0
    A: float = 1.0
    beta: float = 1.0
    T: float = 1.0
    hbar: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        for name in ("S0", "A", "beta", "T", "hbar", "kappa"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")

    @classmethod
    def auto(cls, phi0, S0=1.0, A=1.0, beta=1.0, hbar=1.0, kappa=1.0):
        """Calibration with ``T`` solved from the zeroth-order equality at ``phi0``."""
        if not (math.isfinite(phi0) and phi0 > 0):
            raise DomainError(f"phi0 must be finite and > 0, got {phi0!r}")
        T = (A / S0) * phi0**2 / (SQRT3 * beta * hbar**2)
        return cls(S0=S0, A=A, beta=beta, T=T, hbar=hbar, kappa=kappa)

    @property
    def holo_scale(self):
        """Zeroth-order holographic length squared, ``(S0/A)^-1 / (sqrt(3) beta T)``."""
        return (self.A / self.S0) / (SQRT3 * self.beta * self.T)

    def calibration_residual(self, phi0):
        target = self.hbar**2 / phi0**2
        return abs(self.holo_scale - target) / target

    def calibrated(self, phi0):
        return self.calibration_residual(phi0) <= CALIBRATION_RTOL

    def require_calibrated(self, phi0):
        r = self.calibration_residual(phi0)
        if r > CALIBRATION_RTOL:
            raise CalibrationError(
                "calibration equality (S0/A)^-1/(sqrt(3)*beta*T) = hbar^2/phi0^2 "
                f"violated (relative residual {r:.3e} > {CALIBRATION_RTOL:g})"
            )


@dataclass(frozen=True)
class FieldSplit:
    """
    Background ``phi0``, fluctuation ``phi_tilde``, rate ``phi_dot`` and
    interval ``delta_t``.

    ``|phi_tilde| >= phi0`` is an error; ``|phi_tilde| / phi0 > 0.1`` only
    warns that the small-fluctuation expansion is being stretched.
    """

    phi0: float
    phi_tilde: float = 0.0
    phi_dot: float = 0.0
    delta_t: float = 0.0

    def __post_init__(self):
        for name in ("phi0", "phi_tilde", "phi_dot", "delta_t"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.phi0 <= 0:
            raise DomainError(f"phi0 must be > 0, got {self.phi0!r}")
        if self.delta_t < 0:
            raise DomainError(f"delta_t must be >= 0, got {self.delta_t!r}")
        ratio = abs(self.phi_tilde) / self.phi0
        if ratio >= 1:
            raise DomainError(f"|phi_tilde|/phi0 = {ratio!r} >= 1: fluctuation exceeds background")
        if ratio > DOMINANCE_WARN:
            warnings.warn(
                "|phi_tilde|/phi0 exceeds 0.1; background no longer dominates the fluctuation",
                ThinWallWarning, stacklevel=3,
            )

    @property
    def ratio(self):
        return self.phi_tilde / self.phi0


def planck_length_sq_holo(S, cal):
    """Holographic length squared ``(A/S) / (sqrt(3) beta T)``."""
    if not (math.isfinite(S) and S > 0):
        raise DomainError(f"entropy must be > 0, got {S!r}")
    return (cal.A / S) / (SQRT3 * cal.beta * cal.T)


def planck_length_sq_linear(ds_ratio, cal):
    """Linearised holographic side ``(S0/A)^-1 (1 - dS/S0) / (sqrt(3) beta T)``."""
    return cal.holo_scale * (1.0 - ds_ratio)


def planck_length_grav(cal, G):
    if not (math.isfinite(G) and G >= 0):
        raise DomainError(f"G must be >= 0, got {G!r}")
    return cal.hbar * G


def g_brans_dicke(cal, split):
    total = split.phi0 + split.phi_tilde
    if total <= 0:
        raise DomainError(f"phi0 + phi_tilde = {total!r} <= 0")
    return cal.kappa / total


def lhs_first_order(cal, split):
    """``(hbar/phi0)^2 (1 - 2 phi_tilde/phi0)``."""
    g_brans_dicke(cal, split)
    return (cal.hbar / split.phi0) ** 2 * (1.0 - 2.0 * split.ratio)


def lhs_exact(cal, split):
    """``(hbar G)^2`` with the unexpanded Brans-Dicke coupling."""
    return (cal.hbar * g_brans_dicke(cal, split)) ** 2


def delta_s_over_s(cal, split, mode=FIRST_ORDER):
    """
    Fractional entropy fluctuation implied by a field fluctuation.

    Equates the gravitational and the linearised holographic expressions for
    ``l_p^2``. With ``mode="first-order"`` the gravitational side is expanded
    too, giving ``2 phi_tilde / phi0``; ``mode="exact"`` keeps it whole,
    giving ``1 - (phi0 / (phi0 + phi_tilde))^2``.

    Raises
    ------
    CalibrationError
        If the zeroth orders of the two sides do not agree.
    """
    cal.require_calibrated(split.phi0)
    if mode == FIRST_ORDER:
        return 2.0 * split.phi_tilde / split.phi0
    if mode == EXACT:
        g_brans_dicke(cal, split)
        # 1 - 1/(1+r)^2 without the cancellation at small r
        r = split.ratio
        return r * (2.0 + r) / (1.0 + r) ** 2
    raise DomainError(f"mode must be {FIRST_ORDER!r} or {EXACT!r}, got {mode!r}")


def delta_s(cal, ds_ratio):
    """Absolute entropy fluctuation ``S0 * dS/S0``."""
    return cal.S0 * ds_ratio


def phi_tilde_from_rate(split):
    """Field fluctuation accumulated at rate ``phi_dot`` over ``delta_t``."""
    return split.delta_t * split.phi_dot


def min_length_ok(delta_l, l_p):
    """True when ``delta_l >= l_p`` (the minimum-fluctuation-length bound)."""
    if not (delta_l >= 0 and l_p >= 0):
        raise DomainError(f"lengths must be >= 0, got {delta_l!r}, {l_p!r}")
    return delta_l >= l_p
