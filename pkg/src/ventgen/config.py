"""Run configuration: one JSON document drives generation, simulation and sweeps."""
from __future__ import annotations

import json
import pathlib
from dataclasses import dataclass, field
from importlib import resources

from .catalog import CatalogFilter
from .comfort import ComfortConfig
from .control import ControlThresholds
from .metrics import CaseSettings
from .occupancy import GainParameters, ProfileSet, load_profiles
from .thermal import ThermalConfig
from .wfc import DEFAULT_RESTART_CAP, DEFAULT_WEIGHT_RANGE

BUNDLED_CLIMATES = ("houston", "phoenix", "atlanta", "los_angeles", "las_vegas", "san_francisco")
SECTIONS = {
    "seed",
    "wfc",
    "catalog",
    "envelope",
    "hvac",
    "geometry",
    "gains",
    "control",
    "comfort",
    "climates",
    "occupancy",
}


class ConfigError(ValueError):
    pass


def data_path(*parts: str) -> pathlib.Path:
    return pathlib.Path(str(resources.files("ventgen").joinpath("data", *parts)))


def _strip_comments(obj):
    """Drop keys starting with '_' or '//' so example configs can carry notes."""
    if isinstance(obj, dict):
        return {k: _strip_comments(v) for k, v in obj.items() if not (k.startswith("_") or k.startswith("//"))}
    if isinstance(obj, list):
        return [_strip_comments(v) for v in obj]
    return obj


@dataclass(frozen=True)
class WfcSettings:
    grid_width: int = 40
    grid_height: int = 40
    solution_count: int = 300
    weight_range: tuple[float, float] = DEFAULT_WEIGHT_RANGE
    restart_cap: int = DEFAULT_RESTART_CAP
    border_tile: str | None = None
    tiles_path: str | None = None

    def __post_init__(self):
        if self.grid_width < 1 or self.grid_height < 1:
            raise ConfigError("wfc grid dimensions must be >= 1")
        if self.solution_count < 0:
            raise ConfigError("wfc.solution_count must be >= 0")
        lo, hi = self.weight_range
        if not 0 < lo <= hi:
            raise ConfigError("wfc.weight_range must satisfy 0 < low <= high")
        if self.restart_cap < 1:
            raise ConfigError("wfc.restart_cap must be >= 1")


@dataclass(frozen=True)
class OccupancySettings:
    csv_path: str | None = None
    period: str = "post_covid"
    income: str = "middle"


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    wfc: WfcSettings = field(default_factory=WfcSettings)
    catalog: CatalogFilter = field(default_factory=CatalogFilter)
    thermal: ThermalConfig = field(default_factory=ThermalConfig)
    gains: GainParameters = field(default_factory=GainParameters)
    control: ControlThresholds = field(default_factory=ControlThresholds)
    comfort: ComfortConfig = field(default_factory=ComfortConfig)
    climates: tuple[tuple[str, str], ...] = ()
    occupancy: OccupancySettings = field(default_factory=OccupancySettings)

    @property
    def tiles_path(self) -> pathlib.Path:
        return pathlib.Path(self.wfc.tiles_path) if self.wfc.tiles_path else data_path("tiles.json")

    @property
    def occupancy_path(self) -> pathlib.Path:
        return pathlib.Path(self.occupancy.csv_path) if self.occupancy.csv_path else data_path("occupancy.csv")

    def climate_paths(self) -> dict[str, str]:
        return dict(self.climates)

    def load_profiles(self) -> ProfileSet:
        with open(self.occupancy_path, newline="") as fh:
            profiles = load_profiles(fh)
        profiles.require(self.occupancy.period, self.occupancy.income)
        return profiles

    def case_settings(self, occupancy_weighting: bool = True) -> CaseSettings:
        return CaseSettings(self.thermal, self.gains, self.comfort, self.control, occupancy_weighting)


def bundled_climates() -> tuple[tuple[str, str], ...]:
    return tuple((label, str(data_path("weather", f"{label}.epw"))) for label in BUNDLED_CLIMATES)


def _section(cls, raw, name):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ConfigError(f"section {name!r} must be an object")
    try:
        if hasattr(cls, "from_dict"):
            return cls.from_dict(raw)
        return cls(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {name!r} section: {exc}") from None


def parse_config(doc: dict, base_dir: pathlib.Path | None = None) -> RunConfig:
    """Validate a config document; relative paths resolve against ``base_dir``."""
    doc = _strip_comments(doc)
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - SECTIONS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    base = base_dir or pathlib.Path.cwd()

    def resolve(p: str | None, what: str) -> str | None:
        if p is None:
            return None
        path = pathlib.Path(p)
        if not path.is_absolute():
            path = base / path
        if not path.exists():
            raise ConfigError(f"{what} not found: {path}")
        return str(path)

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed must be a non-negative integer")

    wfc_raw = dict(doc.get("wfc") or {})
    if "weight_range" in wfc_raw:
        wfc_raw["weight_range"] = tuple(float(x) for x in wfc_raw["weight_range"])
    wfc_raw["tiles_path"] = resolve(wfc_raw.get("tiles_path"), "tile document")
    try:
        wfc = WfcSettings(**wfc_raw)
    except TypeError as exc:
        raise ConfigError(f"invalid 'wfc' section: {exc}") from None

    try:
        thermal = ThermalConfig.from_sections(doc.get("envelope"), doc.get("geometry"), doc.get("hvac"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid envelope/geometry/hvac section: {exc}") from None

    climates_raw = doc.get("climates", "bundled")
    if climates_raw == "bundled":
        climates = bundled_climates()
    else:
        if not isinstance(climates_raw, list) or not climates_raw:
            raise ConfigError("climates must be 'bundled' or a non-empty list of {label, epw_path}")
        climates = []
        for item in climates_raw:
            try:
                label, path = item["label"], item["epw_path"]
            except (TypeError, KeyError):
                raise ConfigError("each climate needs 'label' and 'epw_path'") from None
            climates.append((str(label), resolve(path, f"EPW for {label}")))
        climates = tuple(climates)
    labels = [c[0] for c in climates]
    if len(set(labels)) != len(labels):
        raise ConfigError("climate labels must be unique")

    occ_raw = dict(doc.get("occupancy") or {})
    occ_raw["csv_path"] = resolve(occ_raw.get("csv_path"), "occupancy CSV")
    try:
        occupancy = OccupancySettings(**occ_raw)
    except TypeError as exc:
        raise ConfigError(f"invalid 'occupancy' section: {exc}") from None

    return RunConfig(
        seed=seed,
        wfc=wfc,
        catalog=_section(CatalogFilter, doc.get("catalog"), "catalog"),
        thermal=thermal,
        gains=_section(GainParameters, doc.get("gains"), "gains"),
        control=_section(ControlThresholds, doc.get("control"), "control"),
        comfort=_section(ComfortConfig, doc.get("comfort"), "comfort"),
        climates=climates,
        occupancy=occupancy,
    )


def load_config(path: str | pathlib.Path | None = None) -> RunConfig:
    if path is None:
        return parse_config({})
    path = pathlib.Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(doc, path.parent)
