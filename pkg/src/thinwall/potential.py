"""
Two-regime effective potential with a constant late-time floor.

Early times use a periodic potential with a quadratic offset,

    V_early(phi) = V1 (1 - cos phi) + V2 (phi - phi_star)^2,

late times the saturating chaotic-inflation form floored at ``V0``,

    V_late(phi) = V3 m^2 phi^2 / (1 + V4 m^3 phi^3),   V_eff = max(V_late, V0),

with either a hard switch or a linear ramp in time between the two.
"""

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, FloorKinkError, SingularityError, ThinWallWarning

__all__ = [
    "HARD_SWITCH",
    "LINEAR_BLEND",
    "BlendSpec",
    "PotentialSpec",
    "blend_weight",
    "v_early",
    "v_late",
    "dv_early",
    "dv_late",
    "v_effective",
    "dv_effective",
]

HARD_SWITCH = "hard-switch"
LINEAR_BLEND = "linear-blend"


@dataclass(frozen=True)
class BlendSpec:
    mode: str = LINEAR_BLEND
    t_switch: float = 10.0
    blend_width: float = 2.0

    def __post_init__(self):
        if self.mode not in (HARD_SWITCH, LINEAR_BLEND):
            raise DomainError(f"blend mode must be {HARD_SWITCH!r} or {LINEAR_BLEND!r}, got {self.mode!r}")
        if not math.isfinite(self.t_switch):
            raise DomainError("t_switch must be finite")
        if not (math.isfinite(self.blend_width) and self.blend_width >= 0):
            raise DomainError(f"blend_width must be >= 0, got {self.blend_width!r}")


@dataclass(frozen=True)
class PotentialSpec:
    """
    Constants of the effective potential.

    Parameters
    ----------
    V1, V2 : float
        Early-regime scales, ``V1 > 0`` and ``V2 >= 0``. A
        :class:`ThinWallWarning` is emitted when ``V1 <= V2``, since the early
        form is meant to be dominated by the periodic term.
    phi_star : float
        Offset of the quadratic term.
    V3, V4, m : float
        Late-regime constants, ``V3 > 0``, ``V4 >= 0``, ``m > 0``.
    V0 : float
        Floor of the late potential (the residual cosmological constant).
    blend : BlendSpec
    """

    V1: float = 10.0
    V2: float = 0.1
    phi_star: float = 0.0
    V3: float = 1.0
    V4: float = 0.01
    m: float = 1.0
    V0: float = 0.05
    blend: BlendSpec = BlendSpec()

    def __post_init__(self):
        for name in ("V1", "V2", "phi_star", "V3", "V4", "m", "V0"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        checks = (
            ("V1", self.V1 > 0), ("V2", self.V2 >= 0), ("V3", self.V3 > 0),
            ("V4", self.V4 >= 0), ("m", self.m > 0), ("V0", self.V0 >= 0),
        )
        for name, ok in checks:
            if not ok:
                raise DomainError(f"{name} out of range: {getattr(self, name)!r}")
        if self.V1 <= self.V2:
            warnings.warn(
                f"V1={self.V1} <= V2={self.V2}: early potential is not dominated by the periodic term",
                ThinWallWarning, stacklevel=3,
            )


def _finite(*vals):
    for v in vals:
        if not math.isfinite(v):
            raise DomainError(f"non-finite argument {v!r}")


def v_early(phi, spec):
    _finite(phi)
    return spec.V1 * (1.0 - math.cos(phi)) + spec.V2 * (phi - spec.phi_star) ** 2


def dv_early(phi, spec):
    _finite(phi)
    return spec.V1 * math.sin(phi) + 2.0 * spec.V2 * (phi - spec.phi_star)


def _late_denominator(phi, spec, validate):
    _finite(phi)
    if validate and phi < 0:
        raise DomainError(f"late potential is only evaluated at phi >= 0, got {phi!r}")
    den = 1.0 + spec.V4 * spec.m**3 * phi**3
    if den <= 0:
        raise SingularityError(f"1 + V4 m^3 phi^3 = {den!r} <= 0 at phi={phi!r}")
    return den


def v_late(phi, spec, validate=True):
    """
    Late-time potential ``V3 m^2 phi^2 / (1 + V4 m^3 phi^3)``.

    With ``validate=False`` negative ``phi`` is allowed as long as the
    denominator stays positive.
    """
    den = _late_denominator(phi, spec, validate)
    return spec.V3 * spec.m**2 * phi**2 / den


def dv_late(phi, spec, validate=True):
    den = _late_denominator(phi, spec, validate)
    c = spec.V4 * spec.m**3
    return spec.V3 * spec.m**2 * (2.0 * phi * den - 3.0 * c * phi**4) / den**2


def blend_weight(t, blend):
    """Weight of the late branch at time ``t``; 0 before, 1 after the switch."""
    _finite(t)
    if blend.mode == HARD_SWITCH or blend.blend_width == 0:
        return 0.0 if t < blend.t_switch else 1.0
    w = (t - (blend.t_switch - 0.5 * blend.blend_width)) / blend.blend_width
    return min(1.0, max(0.0, w))


def v_effective(phi, t, spec):
    """Effective potential at field value ``phi`` and time ``t``."""
    w = blend_weight(t, spec.blend)
    if w == 0.0:
        return v_early(phi, spec)
    late = max(v_late(phi, spec), spec.V0)
    if w == 1.0:
        return late
    return (1.0 - w) * v_early(phi, spec) + w * late


def dv_effective(phi, t, spec):
    """
    Derivative of :func:`v_effective` with respect to ``phi``.

    On the floor the late branch is flat. Exactly at the floor crossing the
    derivative is undefined and :class:`FloorKinkError` carries both
    one-sided values.
    """
    w = blend_weight(t, spec.blend)
    early = dv_early(phi, spec) if w < 1.0 else 0.0
    if w == 0.0:
        return early
    vl = v_late(phi, spec)
    if vl > spec.V0:
        late = dv_late(phi, spec)
    elif vl < spec.V0:
        late = 0.0
    elif dv_late(phi, spec) == 0.0:
        late = 0.0
    else:
        dl = dv_late(phi, spec)
        # the floor wins on the side where v_late drops below V0
        left, right = (0.0, dl) if dl > 0 else (dl, 0.0)
        raise FloorKinkError(
            f"phi={phi!r} sits on the floor crossing",
            left=(1.0 - w) * early + w * left,
            right=(1.0 - w) * early + w * right,
        )
    return (1.0 - w) * early + w * late
