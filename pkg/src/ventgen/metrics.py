"""Energy and comfort metrics, batch sweeps and the hourly heat-map SVG."""
from __future__ import annotations

import csv
import io
import itertools
import xml.etree.ElementTree as ET
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .catalog import BuildingLayout
from .comfort import ComfortConfig
from .control import ControlMode, ControlThresholds
from .occupancy import GainParameters
from .thermal import HourlyResults, ThermalConfig, build_model, simulate_year
from .weather import WeatherYear, read_epw

J_PER_KWH = 3.6e6

RESULT_COLUMNS = (
    "layout_id",
    "orientation_deg",
    "climate",
    "strategy",
    "eui_kwh_m2yr",
    "pnt_adaptive_pct",
    "pnt_pmv_pct",
    "cooling_kwh",
    "heating_kwh",
    "lights_equip_kwh",
)
EUI_SCOPE = "EUI covers HVAC (ideal loads / COP), lighting and equipment electricity; no fans or pumps"


class UndefinedMetricError(ValueError):
    pass


def compute_eui(results: HourlyResults, gross_floor_area: float | None = None) -> float:
    """Annual electricity per unit gross floor area, kWh/m2/yr."""
    area = results.gross_floor_area if gross_floor_area is None else gross_floor_area
    if area <= 0:
        raise ValueError("gross floor area must be positive")
    return float(results.building_electric().sum()) / J_PER_KWH / area


def compute_pnt(results: HourlyResults, model: str = "adaptive", occupancy_weighting: bool = True) -> float:
    """Percentage of (occupied) zone-hours judged neutral by ``model``."""
    if model == "adaptive":
        flags = results.adaptive_neutral
    elif model == "pmv":
        flags = results.pmv_neutral
    else:
        raise ValueError(f"unknown comfort model {model!r}")
    if occupancy_weighting:
        flags = flags[np.asarray(results.occupancy) > 0]
    if flags.size == 0:
        raise UndefinedMetricError("no occupied zone-hours; PNT is undefined")
    return 100.0 * float(np.count_nonzero(flags)) / flags.size


def eui_spread(values: Sequence[float]) -> float:
    """(max - min) / mean."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("no values")
    return float((arr.max() - arr.min()) / arr.mean())


@dataclass(frozen=True)
class SimulationSummary:
    layout_id: str
    orientation: float
    climate: str
    strategy: ControlMode
    eui: float
    pnt_adaptive: float
    pnt_pmv: float
    hvac_cooling_kwh: float
    hvac_heating_kwh: float
    lighting_equipment_kwh: float

    def sort_key(self) -> tuple:
        return (self.layout_id, self.orientation, self.climate, int(self.strategy))

    def row(self) -> list[str]:
        return [
            self.layout_id,
            f"{self.orientation:g}",
            self.climate,
            self.strategy.label,
            f"{self.eui:.6f}",
            f"{self.pnt_adaptive:.4f}",
            f"{self.pnt_pmv:.4f}",
            f"{self.hvac_cooling_kwh:.3f}",
            f"{self.hvac_heating_kwh:.3f}",
            f"{self.lighting_equipment_kwh:.3f}",
        ]

    @classmethod
    def from_row(cls, row: Mapping[str, str]) -> "SimulationSummary":
        return cls(
            row["layout_id"],
            float(row["orientation_deg"]),
            row["climate"],
            ControlMode.parse(row["strategy"]),
            float(row["eui_kwh_m2yr"]),
            float(row["pnt_adaptive_pct"]),
            float(row["pnt_pmv_pct"]),
            float(row["cooling_kwh"]),
            float(row["heating_kwh"]),
            float(row["lights_equip_kwh"]),
        )


@dataclass(frozen=True)
class CaseError:
    layout_id: str
    orientation: float
    climate: str
    strategy: ControlMode
    message: str

    def sort_key(self) -> tuple:
        return (self.layout_id, self.orientation, self.climate, int(self.strategy))


@dataclass(frozen=True)
class CaseSettings:
    thermal: ThermalConfig = field(default_factory=ThermalConfig)
    gains: GainParameters = field(default_factory=GainParameters)
    comfort: ComfortConfig = field(default_factory=ComfortConfig)
    control: ControlThresholds = field(default_factory=ControlThresholds)
    occupancy_weighting: bool = True


def summarize(
    results: HourlyResults, layout_id: str, orientation: float, climate: str, occupancy_weighting: bool = True
) -> SimulationSummary:
    floors = results.floors
    return SimulationSummary(
        layout_id=layout_id,
        orientation=float(orientation),
        climate=climate,
        strategy=results.strategy,
        eui=compute_eui(results),
        pnt_adaptive=compute_pnt(results, "adaptive", occupancy_weighting),
        pnt_pmv=compute_pnt(results, "pmv", occupancy_weighting),
        hvac_cooling_kwh=float(results.cooling.sum()) * floors / J_PER_KWH,
        hvac_heating_kwh=float(results.heating.sum()) * floors / J_PER_KWH,
        lighting_equipment_kwh=float(results.lights_equip.sum()) * floors / J_PER_KWH,
    )


def simulate_case(
    layout: BuildingLayout,
    orientation: float,
    weather: WeatherYear,
    fractions: np.ndarray,
    strategy: ControlMode,
    settings: CaseSettings = CaseSettings(),
) -> HourlyResults:
    model = build_model(layout, orientation, settings.thermal)
    return simulate_year(
        model,
        weather,
        fractions,
        settings.gains,
        strategy,
        settings.comfort,
        settings.control,
        settings.thermal.hvac,
    )


@dataclass(frozen=True)
class SweepSpec:
    layouts: tuple[str, ...]
    orientations: tuple[float, ...] = tuple(float(a) for a in range(0, 360, 30))
    climates: tuple[tuple[str, str], ...] = ()  # (label, epw path)
    strategies: tuple[ControlMode, ...] = (ControlMode.AC, ControlMode.NV, ControlMode.MM)
    period: str = "post_covid"
    income: str = "middle"
    settings: CaseSettings = field(default_factory=CaseSettings)

    def __post_init__(self):
        if not (self.layouts and self.orientations and self.climates and self.strategies):
            raise ValueError("sweep dimensions must all be non-empty")
        if any(not 0 <= a < 360 for a in self.orientations):
            raise ValueError("orientations must lie in [0, 360)")

    @property
    def size(self) -> int:
        return len(self.layouts) * len(self.orientations) * len(self.climates) * len(self.strategies)


@dataclass
class SweepResult:
    summaries: list[SimulationSummary]
    errors: list[CaseError]

    def csv(self) -> str:
        return results_csv(self.summaries)


@lru_cache(maxsize=16)
def _load_weather(path: str) -> WeatherYear:
    return read_epw(path)


def _run_group(task) -> list:
    """Simulate every orientation/strategy for one (layout, climate) pair."""
    layout_id, layout, label, path, orientations, strategies, fractions, settings = task
    out: list = []
    try:
        weather = _load_weather(path)
    except Exception as exc:  # any failure is recorded against each case
        msg = f"weather {path}: {exc}"
        return [CaseError(layout_id, o, label, s, msg) for o in orientations for s in strategies]
    for o, s in itertools.product(orientations, strategies):
        if layout is None:
            out.append(CaseError(layout_id, o, label, s, f"unknown layout {layout_id}"))
            continue
        try:
            res = simulate_case(layout, o, weather, fractions, s, settings)
            out.append(summarize(res, layout_id, o, label, settings.occupancy_weighting))
        except Exception as exc:
            out.append(CaseError(layout_id, o, label, s, f"{type(exc).__name__}: {exc}"))
    return out


def run_sweep(
    spec: SweepSpec,
    catalog: Mapping[str, BuildingLayout],
    fractions: np.ndarray,
    jobs: int = 1,
) -> SweepResult:
    """Run the cartesian product of ``spec``; output order never depends on ``jobs``."""
    tasks = [
        (lid, catalog.get(lid), label, str(path), spec.orientations, spec.strategies, fractions, spec.settings)
        for lid in spec.layouts
        for label, path in spec.climates
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_group, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        chunks = [_run_group(t) for t in tasks]
    summaries = [x for chunk in chunks for x in chunk if isinstance(x, SimulationSummary)]
    errors = [x for chunk in chunks for x in chunk if isinstance(x, CaseError)]
    summaries.sort(key=SimulationSummary.sort_key)
    errors.sort(key=CaseError.sort_key)
    return SweepResult(summaries, errors)


def results_csv(summaries: Sequence[SimulationSummary]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for s in sorted(summaries, key=SimulationSummary.sort_key):
        writer.writerow(s.row())
    return buf.getvalue()


def read_results_csv(text: str) -> list[SimulationSummary]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != RESULT_COLUMNS:
        raise ValueError("results CSV header does not match the expected columns")
    return [SimulationSummary.from_row(row) for row in reader]


def aggregate(summaries: Sequence[SimulationSummary]) -> list[tuple[str, ControlMode, float, float, float, int]]:
    """Mean EUI, adaptive PNT and PMV PNT per (climate, strategy)."""
    groups: dict[tuple[str, ControlMode], list[SimulationSummary]] = {}
    for s in summaries:
        groups.setdefault((s.climate, s.strategy), []).append(s)
    rows = []
    for (climate, strategy), items in sorted(groups.items(), key=lambda kv: (kv[0][0], int(kv[0][1]))):
        rows.append(
            (
                climate,
                strategy,
                float(np.mean([s.eui for s in items])),
                float(np.mean([s.pnt_adaptive for s in items])),
                float(np.mean([s.pnt_pmv for s in items])),
                len(items),
            )
        )
    return rows


def format_aggregate(summaries: Sequence[SimulationSummary]) -> str:
    lines = [f"{'climate':<16}{'strategy':<10}{'mean EUI':>10}{'PNT adapt':>11}{'PNT pmv':>9}{'n':>6}"]
    for climate, strategy, eui, pa, pp, n in aggregate(summaries):
        lines.append(f"{climate:<16}{strategy.label:<10}{eui:>10.2f}{pa:>11.2f}{pp:>9.2f}{n:>6d}")
    return "\n".join(lines)


# --- hourly heat map ---------------------------------------------------------

ENERGY_SCALE_WH_M2 = (0.0, 50.0)
_CELL = 14
_LEFT = 40
_TOP = 40
_GAP = 50


def _lerp_color(a: tuple[int, int, int], b: tuple[int, int, int], x: float) -> str:
    x = min(max(x, 0.0), 1.0)
    r, g, bl = (round(a[i] + (b[i] - a[i]) * x) for i in range(3))
    return f"#{r:02x}{g:02x}{bl:02x}"


ENERGY_COLORS = ((255, 255, 229), (204, 76, 2))
COMFORT_COLORS = ((215, 48, 39), (26, 152, 80))


def render_hourly_svg(results: HourlyResults, month: int, comfort_model: str = "adaptive") -> str:
    """Day x hour heat maps of building electricity intensity and neutral zone share."""
    if not 1 <= month <= 12:
        raise ValueError("month must be in 1..12")
    rows = np.flatnonzero(np.asarray(results.month) == month)
    days = len(rows) // 24
    energy = (results.building_electric()[rows] / 3600.0 / results.gross_floor_area).reshape(days, 24)
    neutral = results.neutral_fraction(comfort_model)[rows].reshape(days, 24)
    lo, hi = ENERGY_SCALE_WH_M2

    width = _LEFT + 2 * 24 * _CELL + _GAP + 20
    height = _TOP + days * _CELL + 40
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(width),
        height=str(height),
        viewBox=f"0 0 {width} {height}",
    )
    meta = ET.SubElement(svg, "metadata")
    meta.text = (
        f"month={month}; days={days}; hours=24; "
        f"energy panel: building electricity Wh/m2 per hour, linear scale {lo:g}..{hi:g} "
        f"from {_lerp_color(*ENERGY_COLORS, 0)} to {_lerp_color(*ENERGY_COLORS, 1)}, values clipped; "
        f"comfort panel: share of zones neutral ({comfort_model}), linear scale 0..1 "
        f"from {_lerp_color(*COMFORT_COLORS, 0)} to {_lerp_color(*COMFORT_COLORS, 1)}; "
        f"{EUI_SCOPE}"
    )
    for p, (title, data, colors, scale) in enumerate(
        (
            ("Electricity (Wh/m2)", energy, ENERGY_COLORS, (lo, hi)),
            ("Neutral share", neutral, COMFORT_COLORS, (0.0, 1.0)),
        )
    ):
        x0 = _LEFT + p * (24 * _CELL + _GAP)
        label = ET.SubElement(svg, "text", x=str(x0), y=str(_TOP - 20), attrib={"font-size": "12"})
        label.text = title
        group = ET.SubElement(svg, "g", id=("energy" if p == 0 else "comfort"))
        for d in range(days):
            for h in range(24):
                frac = (data[d, h] - scale[0]) / (scale[1] - scale[0])
                ET.SubElement(
                    group,
                    "rect",
                    x=str(x0 + h * _CELL),
                    y=str(_TOP + d * _CELL),
                    width=str(_CELL),
                    height=str(_CELL),
                    fill=_lerp_color(*colors, frac),
                )
        for h in range(0, 24, 6):
            tick = ET.SubElement(
                svg, "text", x=str(x0 + h * _CELL), y=str(_TOP + days * _CELL + 14), attrib={"font-size": "10"}
            )
            tick.text = str(h)
    for d in range(0, days, 5):
        tick = ET.SubElement(svg, "text", x="8", y=str(_TOP + d * _CELL + 11), attrib={"font-size": "10"})
        tick.text = str(d + 1)
    return ET.tostring(svg, encoding="unicode", xml_declaration=True)
