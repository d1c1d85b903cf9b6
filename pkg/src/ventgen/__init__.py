"""Procedural apartment layouts and reduced-order cooling-strategy simulation."""

__version__ = "0.1.0"

from .catalog import BuildingLayout, CatalogFilter, build_catalog, compute_features
from .comfort import ComfortConfig, PmvInputs, adaptive_comfort_temp, pmv_ppd
from .control import ControlMode, ControlThresholds, decide
from .metrics import SimulationSummary, SweepSpec, compute_eui, compute_pnt, run_sweep
from .occupancy import GainParameters, load_profiles
from .thermal import ThermalConfig, build_model, simulate_year
from .weather import WeatherYear, read_epw
from .wfc import AdjacencyRules, TileSet, WFCSolver, learn_rules

__all__ = [
    "AdjacencyRules",
    "BuildingLayout",
    "CatalogFilter",
    "ComfortConfig",
    "ControlMode",
    "ControlThresholds",
    "GainParameters",
    "PmvInputs",
    "SimulationSummary",
    "SweepSpec",
    "ThermalConfig",
    "TileSet",
    "WFCSolver",
    "WeatherYear",
    "adaptive_comfort_temp",
    "build_catalog",
    "build_model",
    "compute_eui",
    "compute_features",
    "compute_pnt",
    "decide",
    "learn_rules",
    "load_profiles",
    "pmv_ppd",
    "read_epw",
    "run_sweep",
    "simulate_year",
]
