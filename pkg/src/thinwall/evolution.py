"""
Time loop of the thin-wall breakdown model.

Monotone schedules drive the wall profile: the amplitude ``N`` decays while
the steepness ``b`` and separation ``L`` grow. At each step the plateau
value stands in for the homogeneous field; its rate feeds the field
fluctuation, the entropy fluctuation, the Brans-Dicke coupling and the
k-essence sound speed, and the regime detector latches through

    ThinWall -> Breakdown -> CosmologicalConstant
"""

import enum
import math
from dataclasses import dataclass, field, fields

from . import entropy_link as el
from .errors import DomainError, StepError, ThinWallError
from .field_profile import FieldProfileParams, QuadratureSettings, diagnostics, gradient_energy
from .potential import PotentialSpec, v_effective
from .soundspeed import QuadraticKinetic, cs_squared

__all__ = [
    "Regime",
    "ParamRule",
    "ParamSchedule",
    "RegimeThresholds",
    "SimulationConfig",
    "SimulationRecord",
    "RECORD_FIELDS",
    "schedule_eval",
    "detect_regime",
    "step_observables",
    "run_simulation",
    "transition_times",
]

CONSTANT, EXPONENTIAL, LINEAR = "constant", "exponential", "linear"
ELAPSED, STEP = "elapsed", "step"


class Regime(enum.IntEnum):
    THIN_WALL = 0
    BREAKDOWN = 1
    COSMOLOGICAL_CONSTANT = 2

    @property
    def label(self):
        return ("ThinWall", "Breakdown", "CosmologicalConstant")[self]


@dataclass(frozen=True)
class ParamRule:
    """
    Time dependence of one profile parameter.

    ``kind`` is ``"constant"``, ``"exponential"`` or ``"linear"`` and
    ``rate >= 0``. Whether the parameter grows or decays is fixed by which
    parameter the rule is attached to (see :class:`ParamSchedule`).
    """

    kind: str = CONSTANT
    initial: float = 1.0
    rate: float = 0.0

    def __post_init__(self):
        if self.kind not in (CONSTANT, EXPONENTIAL, LINEAR):
            raise DomainError(f"schedule kind must be constant, exponential or linear, got {self.kind!r}")
        if not (math.isfinite(self.initial) and math.isfinite(self.rate)):
            raise DomainError("schedule initial value and rate must be finite")
        if self.rate < 0:
            raise DomainError(f"schedule rate must be >= 0, got {self.rate!r}")

    def grow(self, t):
        if self.kind == EXPONENTIAL:
            return self.initial * math.exp(self.rate * t)
        if self.kind == LINEAR:
            return self.initial * (1.0 + self.rate * t)
        return self.initial

    def decay(self, t):
        if self.kind == EXPONENTIAL:
            return self.initial * math.exp(-self.rate * t)
        if self.kind == LINEAR:
            return self.initial * max(0.0, 1.0 - self.rate * t)
        return self.initial


@dataclass(frozen=True)
class ParamSchedule:
    """N decays, b and L grow; each with its own :class:`ParamRule`."""

    N: ParamRule = ParamRule(EXPONENTIAL, 1.0, 0.3)
    b: ParamRule = ParamRule(EXPONENTIAL, 2.0, 0.2)
    L: ParamRule = ParamRule(LINEAR, 10.0, 0.1)

    def __post_init__(self):
        # validates the initial values
        FieldProfileParams(self.N.initial, self.b.initial, self.L.initial)


def schedule_eval(sched, t):
    """Profile parameters at time ``t >= 0``."""
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    return FieldProfileParams(N=sched.N.decay(t), b=sched.b.grow(t), L=sched.L.grow(t))


@dataclass(frozen=True)
class RegimeThresholds:
    """
    Regime trigger levels.

    ``phi_cc`` is the plateau level below which the cosmological-constant
    regime may start; when left as ``None`` it is ``phi_cc_fraction`` times
    the initial plateau.
    """

    theta_thin: float = 0.2
    theta_entropy: float = 0.05
    phi_cc: float = None
    phi_cc_fraction: float = 0.1
    eps_v: float = 0.05

    def __post_init__(self):
        for name in ("theta_thin", "theta_entropy", "phi_cc_fraction", "eps_v"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")
        if self.theta_thin >= 1:
            raise DomainError(f"theta_thin must be < 1, got {self.theta_thin!r}")
        if self.phi_cc is not None and not (math.isfinite(self.phi_cc) and self.phi_cc > 0):
            raise DomainError(f"phi_cc must be finite and > 0, got {self.phi_cc!r}")


@dataclass(frozen=True)
class SimulationConfig:
    """Everything a run needs; see ``data/default.toml`` for the shipped values.

    ``fluctuation_interval`` picks the interval over which the plateau rate
    accumulates into the field fluctuation: ``"elapsed"`` uses the time since
    the start of the run, ``"step"`` uses ``dt``.
    """

    schedule: ParamSchedule = ParamSchedule()
    potential: PotentialSpec = field(default_factory=PotentialSpec)
    calibration: el.EntropyCalibration = None
    phi0: float = 10.0
    entropy_mode: str = el.FIRST_ORDER
    fluctuation_interval: str = ELAPSED
    kinetic: QuadraticKinetic = QuadraticKinetic()
    thresholds: RegimeThresholds = RegimeThresholds()
    dt: float = 0.01
    t_end: float = 20.0
    quad: QuadratureSettings = QuadratureSettings()

    def __post_init__(self):
        if self.calibration is None:
            object.__setattr__(self, "calibration", el.EntropyCalibration.auto(self.phi0))
        if not (math.isfinite(self.phi0) and self.phi0 > 0):
            raise DomainError(f"phi0 must be finite and > 0, got {self.phi0!r}")
        self.calibration.require_calibrated(self.phi0)
        if self.entropy_mode not in (el.FIRST_ORDER, el.EXACT):
            raise DomainError(f"entropy mode must be first-order or exact, got {self.entropy_mode!r}")
        if self.fluctuation_interval not in (ELAPSED, STEP):
            raise DomainError(f"fluctuation_interval must be elapsed or step, got {self.fluctuation_interval!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise DomainError(f"dt must be finite and > 0, got {self.dt!r}")
        if not (math.isfinite(self.t_end) and self.t_end >= 0):
            raise DomainError(f"t_end must be finite and >= 0, got {self.t_end!r}")
        n = round(self.t_end / self.dt)
        if abs(n * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            raise DomainError(f"t_end={self.t_end!r} is not a whole number of steps dt={self.dt!r}")

    @property
    def n_steps(self):
        return round(self.t_end / self.dt)

    @property
    def phi_cc(self):
        th = self.thresholds
        if th.phi_cc is not None:
            return th.phi_cc
        return th.phi_cc_fraction * diagnostics(schedule_eval(self.schedule, 0.0)).plateau


@dataclass(frozen=True)
class SimulationRecord:
    t: float
    N: float
    b: float
    L: float
    plateau_phi: float
    thinness: float
    wall_charge: float
    grad_energy: float
    phi_dot: float
    phi_tilde: float
    delta_s_over_s: float
    G: float
    l_p: float
    V_eff: float
    cs2: float
    cs2_stable: bool
    min_length_ok: bool
    regime: Regime


RECORD_FIELDS = tuple(f.name for f in fields(SimulationRecord))


def detect_regime(plateau, thinness, ds_ratio, v_eff, V0, phi_cc, thresholds, prior=Regime.THIN_WALL):
    """
    Regime label for one step, latched so it never falls below ``prior``.

    The cosmological-constant regime needs the plateau at or below ``phi_cc``
    with ``V_eff`` within ``eps_v`` (relative) of ``V0``. Breakdown is
    triggered by either the thinness or the size of the entropy fluctuation
    reaching its threshold.
    """
    th = thresholds
    if plateau <= phi_cc and abs(v_eff - V0) <= th.eps_v * V0:
        regime = Regime.COSMOLOGICAL_CONSTANT
    elif thinness >= th.theta_thin or abs(ds_ratio) >= th.theta_entropy:
        regime = Regime.BREAKDOWN
    else:
        regime = Regime.THIN_WALL
    return max(regime, Regime(prior))


def _plateau(sched, t):
    return diagnostics(schedule_eval(sched, t)).plateau


def step_observables(t, config, prior=Regime.THIN_WALL, phi_cc=None):
    """
    All observables at time ``t``.

    The plateau rate is a backward difference over ``dt`` (forward when
    ``t < dt``). Any failure is re-raised as :class:`StepError` carrying ``t``.
    """
    cfg = config
    try:
        p = schedule_eval(cfg.schedule, t)
        diag = diagnostics(p)
        energy = gradient_energy(p, cfg.quad)

        if t - cfg.dt >= 0:
            phi_dot = (diag.plateau - _plateau(cfg.schedule, t - cfg.dt)) / cfg.dt
        else:
            phi_dot = (_plateau(cfg.schedule, t + cfg.dt) - diag.plateau) / cfg.dt

        interval = t if cfg.fluctuation_interval == ELAPSED else cfg.dt
        # + 0.0 folds a signed zero at t = 0
        phi_tilde = el.phi_tilde_from_rate(el.FieldSplit(cfg.phi0, phi_dot=phi_dot, delta_t=interval)) + 0.0
        split = el.FieldSplit(cfg.phi0, phi_tilde=phi_tilde, phi_dot=phi_dot, delta_t=interval)
        cal = cfg.calibration
        ds_ratio = el.delta_s_over_s(cal, split, cfg.entropy_mode)
        G = el.g_brans_dicke(cal, split)
        l_p = el.planck_length_grav(cal, G)

        v_eff = v_effective(diag.plateau, t, cfg.potential)
        sound = cs_squared(cfg.kinetic.state(0.5 * phi_dot * phi_dot))
        length_ok = el.min_length_ok(1.0 / p.b, l_p)

        regime = detect_regime(
            diag.plateau, diag.thinness, ds_ratio, v_eff, cfg.potential.V0,
            cfg.phi_cc if phi_cc is None else phi_cc, cfg.thresholds, prior,
        )
    except ThinWallError as exc:
        raise StepError(t, exc) from exc

    return SimulationRecord(
        t=t, N=p.N, b=p.b, L=p.L,
        plateau_phi=diag.plateau, thinness=diag.thinness, wall_charge=diag.wall_charge,
        grad_energy=energy, phi_dot=phi_dot, phi_tilde=phi_tilde,
        delta_s_over_s=ds_ratio, G=G, l_p=l_p, V_eff=v_eff,
        cs2=sound.cs2, cs2_stable=sound.stable, min_length_ok=length_ok,
        regime=regime,
    )


def iter_simulation(config):
    """Yield records at ``t = k * dt`` for ``k = 0 .. n_steps``."""
    phi_cc = config.phi_cc
    regime = Regime.THIN_WALL
    for k in range(config.n_steps + 1):
        rec = step_observables(k * config.dt, config, regime, phi_cc)
        regime = rec.regime
        yield rec


def run_simulation(config):
    return list(iter_simulation(config))


def transition_times(records):
    """First time each regime is entered, or ``None`` if never reached."""
    out = {r: None for r in Regime}
    for rec in records:
        if out[rec.regime] is None:
            out[rec.regime] = rec.t
    return out
