"""Deterministic simulator of thin-wall scalar-field breakdown."""

__version__ = "0.1.0"

from .errors import (
    CalibrationError,
    ConfigError,
    DomainError,
    FloorKinkError,
    QuadratureError,
    SingularityError,
    StepError,
    ThinWallError,
    ThinWallWarning,
)
from .evolution import Regime, SimulationConfig, SimulationRecord, run_simulation

__all__ = [
    "CalibrationError",
    "ConfigError",
    "DomainError",
    "FloorKinkError",
    "QuadratureError",
    "Regime",
    "SimulationConfig",
    "SimulationRecord",
    "SingularityError",
    "StepError",
    "ThinWallError",
    "ThinWallWarning",
    "run_simulation",
]
