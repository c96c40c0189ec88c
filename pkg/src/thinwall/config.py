"""
Loading and validating run configurations.

Configurations are TOML documents with one table per block::

    [schedule.N]    kind, initial, rate
    [schedule.b]    ...
    [schedule.L]    ...
    [potential]     V1, V2, phi_star, V3, V4, m, V0
    [potential.blend] mode, t_switch, blend_width
    [entropy]       phi0, hbar, kappa, S0, A, beta, T, mode, fluctuation_interval
    [kinetic]       F0, F2, X0
    [thresholds]    theta_thin, theta_entropy, phi_cc, phi_cc_fraction, eps_v
    [numerics]      dt, t_end, quad_tol, quad_limit
    [output]        format, path, precision

Missing keys take their defaults; unknown keys are rejected. ``entropy.T``
is solved from the calibration equality when omitted, and
``potential.blend.blend_width`` defaults to a tenth of ``numerics.t_end``.
"""

import copy
import math
import sys
from dataclasses import dataclass
from importlib import resources

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import entropy_link as el
from .errors import ConfigError, ThinWallError
from .evolution import ParamRule, ParamSchedule, RegimeThresholds, SimulationConfig
from .field_profile import MIN_REL_TOL, QuadratureSettings
from .potential import HARD_SWITCH, LINEAR_BLEND, BlendSpec, PotentialSpec
from .soundspeed import QuadraticKinetic

__all__ = [
    "OutputSettings",
    "RunConfig",
    "DEFAULT_CONFIG_NAME",
    "default_config_text",
    "load_config",
    "parse_config",
    "config_from_dict",
    "set_key",
    "known_keys",
]

DEFAULT_CONFIG_NAME = "default.toml"
FORMATS = ("csv", "records")


def _finite(v):
    return math.isfinite(v)


# predicate, description
POS = (lambda v: _finite(v) and v > 0, "must be finite and > 0")
NONNEG = (lambda v: _finite(v) and v >= 0, "must be finite and >= 0")
FINITE = (_finite, "must be finite")
UNIT_OPEN = (lambda v: _finite(v) and 0 < v < 1, "must lie in (0, 1)")


def _choice(*opts):
    return (lambda v: v in opts, "must be one of " + ", ".join(repr(o) for o in opts))


# Leaf spec: (type, default, (predicate, description)); default None means optional.
_RULE = {
    "kind": (str, "constant", _choice("constant", "exponential", "linear")),
    "initial": (float, 1.0, FINITE),
    "rate": (float, 0.0, NONNEG),
}

SCHEMA = {
    "schedule": {
        "N": {**_RULE, "kind": (str, "exponential", _RULE["kind"][2]), "initial": (float, 1.0, NONNEG),
              "rate": (float, 0.3, NONNEG)},
        "b": {**_RULE, "kind": (str, "exponential", _RULE["kind"][2]), "initial": (float, 2.0, POS),
              "rate": (float, 0.2, NONNEG)},
        "L": {**_RULE, "kind": (str, "linear", _RULE["kind"][2]), "initial": (float, 10.0, POS),
              "rate": (float, 0.1, NONNEG)},
    },
    "potential": {
        "V1": (float, 10.0, POS),
        "V2": (float, 0.1, NONNEG),
        "phi_star": (float, 0.0, FINITE),
        "V3": (float, 1.0, POS),
        "V4": (float, 0.01, NONNEG),
        "m": (float, 1.0, POS),
        "V0": (float, 0.05, NONNEG),
        "blend": {
            "mode": (str, "linear-blend", _choice("linear-blend", "hard-switch", "linear", "hard")),
            "t_switch": (float, 10.0, FINITE),
            "blend_width": (float, None, NONNEG),
        },
    },
    "entropy": {
        "phi0": (float, 10.0, POS),
        "hbar": (float, 1.0, POS),
        "kappa": (float, 1.0, POS),
        "S0": (float, 1.0, POS),
        "A": (float, 1.0, POS),
        "beta": (float, 1.0, POS),
        "T": (float, None, POS),
        "mode": (str, el.FIRST_ORDER, _choice(el.FIRST_ORDER, el.EXACT)),
        "fluctuation_interval": (str, "elapsed", _choice("elapsed", "step")),
    },
    "kinetic": {
        "F0": (float, 0.0, FINITE),
        "F2": (float, 1.0, FINITE),
        "X0": (float, 1e-4, NONNEG),
    },
    "thresholds": {
        "theta_thin": (float, 0.2, UNIT_OPEN),
        "theta_entropy": (float, 0.05, POS),
        "phi_cc": (float, None, POS),
        "phi_cc_fraction": (float, 0.1, POS),
        "eps_v": (float, 0.05, POS),
    },
    "numerics": {
        "dt": (float, 0.01, POS),
        "t_end": (float, 20.0, NONNEG),
        "quad_tol": (float, 1e-10, (lambda v: _finite(v) and v >= MIN_REL_TOL, f"must be >= {MIN_REL_TOL:.3g}")),
        "quad_limit": (int, 200, (lambda v: v >= 2, "must be >= 2")),
    },
    "output": {
        "format": (str, "csv", _choice(*FORMATS)),
        "path": (str, None, (lambda v: len(v) > 0, "must be non-empty")),
        "precision": (int, 12, (lambda v: 1 <= v <= 17, "must be between 1 and 17")),
    },
}

_BLEND_ALIASES = {"linear": LINEAR_BLEND, "hard": HARD_SWITCH}


@dataclass(frozen=True)
class OutputSettings:
    format: str = "csv"
    path: str = None
    precision: int = 12


@dataclass(frozen=True)
class RunConfig:
    simulation: SimulationConfig
    output: OutputSettings
    raw: dict

    @property
    def calibration_residual(self):
        sim = self.simulation
        return sim.calibration.calibration_residual(sim.phi0)


def _is_leaf(spec):
    return isinstance(spec, tuple)


def known_keys(schema=SCHEMA, prefix=""):
    """All dotted leaf key paths accepted in a configuration."""
    out = []
    for k, spec in schema.items():
        path = f"{prefix}{k}"
        if _is_leaf(spec):
            out.append(path)
        else:
            out.extend(known_keys(spec, path + "."))
    return out


def _coerce(value, typ, path):
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"expected a number, got {value!r}", key=path)
        return float(value)
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"expected an integer, got {value!r}", key=path)
        return value
    if not isinstance(value, str):
        raise ConfigError(f"expected a string, got {value!r}", key=path)
    return value


def _resolve(data, schema, prefix=""):
    if not isinstance(data, dict):
        raise ConfigError(f"expected a table, got {data!r}", key=prefix.rstrip(".") or None)
    for k in data:
        if k not in schema:
            raise ConfigError("unknown key", key=f"{prefix}{k}")
    out = {}
    for k, spec in schema.items():
        path = f"{prefix}{k}"
        if _is_leaf(spec):
            typ, default, (pred, desc) = spec
            if k not in data:
                out[k] = default
                continue
            v = _coerce(data[k], typ, path)
            if not pred(v):
                raise ConfigError(f"{desc}, got {v!r}", key=path)
            out[k] = v
        else:
            out[k] = _resolve(data.get(k, {}), spec, path + ".")
    return out


def _build(block, fn):
    try:
        return fn()
    except ThinWallError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), key=block) from exc


def config_from_dict(data):
    """Validate a parsed configuration table and build a :class:`RunConfig`."""
    v = _resolve(data, SCHEMA)
    s, p, e, k, th, nu, out = (
        v["schedule"], v["potential"], v["entropy"], v["kinetic"],
        v["thresholds"], v["numerics"], v["output"],
    )
    schedule = _build("schedule", lambda: ParamSchedule(
        N=ParamRule(**s["N"]), b=ParamRule(**s["b"]), L=ParamRule(**s["L"])))

    bl = p["blend"]
    width = bl["blend_width"] if bl["blend_width"] is not None else 0.1 * nu["t_end"]
    blend = _build("potential.blend", lambda: BlendSpec(
        mode=_BLEND_ALIASES.get(bl["mode"], bl["mode"]), t_switch=bl["t_switch"], blend_width=width))
    potential = _build("potential", lambda: PotentialSpec(
        **{name: p[name] for name in ("V1", "V2", "phi_star", "V3", "V4", "m", "V0")}, blend=blend))

    cal_args = {name: e[name] for name in ("S0", "A", "beta", "hbar", "kappa")}
    if e["T"] is None:
        cal = _build("entropy", lambda: el.EntropyCalibration.auto(e["phi0"], **cal_args))
    else:
        cal = _build("entropy", lambda: el.EntropyCalibration(T=e["T"], **cal_args))
        r = cal.calibration_residual(e["phi0"])
        if r > el.CALIBRATION_RTOL:
            raise ConfigError(
                "calibration equality (S0/A)^-1/(sqrt(3)*beta*T) = hbar^2/phi0^2 violated "
                f"(relative residual {r:.3e}); omit entropy.T to have it solved",
                key="entropy.T",
            )

    kinetic = _build("kinetic", lambda: QuadraticKinetic(**k))
    thresholds = _build("thresholds", lambda: RegimeThresholds(**th))
    quad = _build("numerics", lambda: QuadratureSettings(rel_tol=nu["quad_tol"], limit=nu["quad_limit"]))

    if nu["dt"] > 0:
        n = round(nu["t_end"] / nu["dt"])
        if abs(n * nu["dt"] - nu["t_end"]) > 1e-9 * max(1.0, nu["t_end"]):
            raise ConfigError(f"must be a whole number of steps dt={nu['dt']!r}, got {nu['t_end']!r}",
                              key="numerics.t_end")

    sim = _build("numerics", lambda: SimulationConfig(
        schedule=schedule, potential=potential, calibration=cal, phi0=e["phi0"],
        entropy_mode=e["mode"], fluctuation_interval=e["fluctuation_interval"],
        kinetic=kinetic, thresholds=thresholds, dt=nu["dt"], t_end=nu["t_end"], quad=quad,
    ))
    return RunConfig(simulation=sim, output=OutputSettings(**out), raw=copy.deepcopy(data))


def parse_config(text):
    """Parse and validate configuration text."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"parse error: {exc}") from exc
    return config_from_dict(data)


def load_config(path):
    """Read, parse and validate the configuration file at ``path``."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(f"config is not valid UTF-8: {exc}") from exc
    return parse_config(text)


def default_config_text():
    return resources.files("thinwall").joinpath("data", DEFAULT_CONFIG_NAME).read_text(encoding="utf-8")


def set_key(data, dotted, value):
    """Return a copy of ``data`` with the dotted key set; the key must be known."""
    if dotted not in known_keys():
        raise ConfigError("not a configuration key", key=dotted)
    out = copy.deepcopy(data)
    node = out
    parts = dotted.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError("expected a table", key=dotted)
    node[parts[-1]] = value
    return out
