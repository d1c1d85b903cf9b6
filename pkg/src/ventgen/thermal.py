"""Reduced-order multi-zone thermal model.

Each apartment tile is one well-mixed air node with a lumped capacitance.
Partitions between apartments are adiabatic, corridors and cores count as
outdoor air, and one representative floor is simulated then scaled by the
floor count.  Within a sub-step all drivers are constant, so the node
temperature follows an exact exponential toward its equilibrium.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from numba import njit

from .catalog import NON_APARTMENT, BuildingLayout
from .comfort import BANDS, ComfortConfig, adaptive_comfort_temp, pmv_core
from .control import ControlMode, ControlThresholds, decide_core
from .occupancy import GainParameters, ProfileSet, annual_fractions, annual_gains
from .weather import HOURS_PER_YEAR, WeatherYear, hourly_sun, incident_on_facades, prevailing_mean_series

AIR_DENSITY = 1.2  # kg/m3
AIR_CP = 1005.0  # J/kgK
GRAVITY = 9.81
CD_WIND = 0.55
CD_STACK = 0.6
MIN_WIND_FACTOR = 0.25
# RK4 stage length as a fraction of the node time constant (window-open float)
RK_STEP_LIMIT = 0.05

# (row offset, col offset, outward normal azimuth); rows grow southward
EDGE_NORMALS = ((-1, 0, 0.0), (0, 1, 90.0), (1, 0, 180.0), (0, -1, 270.0))


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Envelope:
    wall_u: float = 0.7  # W/m2K
    window_u: float = 2.8  # W/m2K
    window_to_wall: float = 0.25
    shgc: float = 0.4
    infiltration_ach: float = 0.35
    capacitance_per_area: float = 180e3  # J/K per m2 floor

    def __post_init__(self):
        if not 0 < self.window_to_wall <= 1:
            raise ValueError("window_to_wall must lie in (0, 1]")
        if not 0 < self.shgc <= 1:
            raise ValueError("shgc must lie in (0, 1]")
        for name in ("wall_u", "window_u", "infiltration_ach", "capacitance_per_area"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Geometry:
    tile_size: float = 8.0  # m
    floor_height: float = 3.0  # m
    floors: int = 5
    window_height: float = 1.5  # m
    openable_fraction: float = 0.5

    def __post_init__(self):
        if self.tile_size <= 0 or self.floor_height <= 0 or self.window_height <= 0:
            raise ValueError("geometry lengths must be positive")
        if self.floors < 1:
            raise ValueError("floors must be >= 1")
        if not 0 < self.openable_fraction <= 1:
            raise ValueError("openable_fraction must lie in (0, 1]")


@dataclass(frozen=True)
class HvacConfig:
    cooling_cop: float = 3.0
    heating_cop: float = 1.0
    substeps: int = 6
    warmup_days: int = 7
    initial_temp: float = 22.0

    def __post_init__(self):
        if self.cooling_cop <= 0 or self.heating_cop <= 0:
            raise ValueError("COP values must be positive")
        if self.substeps < 1:
            raise ValueError("substeps must be >= 1")
        if not 0 <= self.warmup_days <= 365:
            raise ValueError("warmup_days must be within 0..365")


@dataclass(frozen=True)
class ThermalConfig:
    envelope: Envelope = field(default_factory=Envelope)
    geometry: Geometry = field(default_factory=Geometry)
    hvac: HvacConfig = field(default_factory=HvacConfig)

    @classmethod
    def from_sections(cls, envelope=None, geometry=None, hvac=None) -> "ThermalConfig":
        return cls(Envelope(**(envelope or {})), Geometry(**(geometry or {})), HvacConfig(**(hvac or {})))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ZoneParams:
    floor_area: float
    volume: float
    ua_envelope: float
    thermal_capacitance: float
    window_areas: tuple[float, ...]
    facade_azimuths: tuple[float, ...]
    solar_heat_gain_coeff: float
    infiltration_ach: float
    wall_area: float = 0.0  # gross exposed wall, windows included
    window_height: float = 1.5
    openable_fraction: float = 0.5
    tile: tuple[int, int] = (0, 0)

    def __post_init__(self):
        for name in ("floor_area", "volume", "thermal_capacitance"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.ua_envelope < 0 or self.infiltration_ach < 0:
            raise ValueError("conductances must be non-negative")
        if len(self.window_areas) != len(self.facade_azimuths):
            raise ValueError("one window area per facade azimuth")
        if self.wall_area and self.window_area > self.wall_area + 1e-9:
            raise ValueError("window area exceeds exposed wall area")

    @property
    def window_area(self) -> float:
        return float(sum(self.window_areas))

    @property
    def open_area(self) -> float:
        return self.openable_fraction * self.window_area

    @property
    def infiltration_flow(self) -> float:
        """Infiltration as a mass flow in kg/s."""
        return self.infiltration_ach * self.volume / 3600.0 * AIR_DENSITY

    def physics_key(self) -> tuple:
        """Everything that influences the simulated trajectory (position excluded)."""
        return (
            self.floor_area,
            self.volume,
            self.ua_envelope,
            self.thermal_capacitance,
            tuple(sorted(zip(self.facade_azimuths, self.window_areas))),
            self.solar_heat_gain_coeff,
            self.infiltration_ach,
            self.window_height,
            self.openable_fraction,
        )


@dataclass(frozen=True)
class BuildingModel:
    zones: tuple[ZoneParams, ...]
    orientation: float
    floors: int
    floor_height: float

    def __post_init__(self):
        if not 0 <= self.orientation < 360:
            raise ValueError("orientation must lie in [0, 360)")
        if not self.zones:
            raise ModelError("building has no zones")

    @property
    def gross_floor_area(self) -> float:
        return sum(z.floor_area for z in self.zones) * self.floors


@dataclass(frozen=True)
class ZoneState:
    indoor_temp: float
    window_open: bool = False
    hvac_heating: float = 0.0  # W, mean over the last step
    hvac_cooling: float = 0.0


class Drivers(NamedTuple):
    outdoor_temp: float
    solar: float  # W incident on the zone's glazing
    internal: float  # W sensible
    vent_flow: float = 0.0  # kg/s on top of infiltration


def _facades(layout: BuildingLayout, r: int, c: int) -> list[float]:
    cells = layout.cell_map()
    normals = []
    for dr, dc, az in EDGE_NORMALS:
        nb = cells.get((r + dr, c + dc))
        if nb is None or layout.category(nb) in NON_APARTMENT:
            normals.append(az)
    return normals


def build_model(layout: BuildingLayout, orientation: float = 0.0, config: ThermalConfig | None = None) -> BuildingModel:
    """One zone per apartment tile; exposed tile edges become glazed facades."""
    config = config or ThermalConfig()
    env, geo = config.envelope, config.geometry
    orientation = float(orientation) % 360.0
    area = geo.tile_size**2
    edge_wall = geo.tile_size * geo.floor_height
    zones = []
    for r, c, _ in sorted(layout.apartment_cells()):
        normals = _facades(layout, r, c)
        wall = edge_wall * len(normals)
        windows = env.window_to_wall * wall
        zones.append(
            ZoneParams(
                floor_area=area,
                volume=area * geo.floor_height,
                ua_envelope=env.wall_u * (wall - windows) + env.window_u * windows,
                thermal_capacitance=env.capacitance_per_area * area,
                window_areas=tuple(env.window_to_wall * edge_wall for _ in normals),
                facade_azimuths=tuple((az + orientation) % 360.0 for az in normals),
                solar_heat_gain_coeff=env.shgc,
                infiltration_ach=env.infiltration_ach,
                wall_area=wall,
                window_height=geo.window_height,
                openable_fraction=geo.openable_fraction,
                tile=(r, c),
            )
        )
    if not zones:
        raise ModelError("layout has no apartment tiles")
    return BuildingModel(tuple(zones), orientation, geo.floors, geo.floor_height)


# --- single-zone physics ---------------------------------------------------


@njit(cache=True)
def _float(t0, teq, tau, dt):
    """End temperature and time integral of temperature for a free float."""
    decay = math.exp(-dt / tau)
    return teq + (t0 - teq) * decay, teq * dt + (t0 - teq) * tau * (1.0 - decay)


@njit(cache=True)
def zone_step(t0, cap, h, q, tout, dt, hvac_on, lo, hi):
    """Advance one node by ``dt`` seconds.

    ``h`` is the total conductance to outdoors (W/K) and ``q`` the gains (W).
    With HVAC on, a start temperature outside [lo, hi] is snapped to the band
    at once; otherwise the node floats until it meets a setpoint and is held
    there for the rest of the step.  Returns
    ``(t_end, heat_J, cool_J, envelope_J)`` where ``envelope_J`` is the heat
    exchanged with outdoors.
    """
    teq = tout + q / h
    tau = cap / h
    heat = 0.0
    cool = 0.0
    t = t0
    if hvac_on:
        if t > hi:
            cool += cap * (t - hi)
            t = hi
        elif t < lo:
            heat += cap * (lo - t)
            t = lo
        target = hi if teq > hi else (lo if teq < lo else teq)
        if target != teq:
            # time for the exponential to reach the setpoint
            ratio = (target - teq) / (t - teq)
            t_hit = -tau * math.log(ratio) if ratio < 1.0 else 0.0
            if t_hit < dt:
                t_end, int_t = _float(t, teq, tau, t_hit)
                hold = dt - t_hit
                load = h * (teq - target) * hold
                if load > 0.0:
                    cool += load
                else:
                    heat -= load
                int_t += target * hold
                env = h * tout * dt - h * int_t
                # the snap and the hold can point opposite ways; keep the net
                net = heat - cool
                return target, max(net, 0.0), max(-net, 0.0), env
    t_end, int_t = _float(t, teq, tau, dt)
    env = h * tout * dt - h * int_t
    net = heat - cool
    return t_end, max(net, 0.0), max(-net, 0.0), env


@njit(cache=True)
def vent_flow_core(open_area, wind_speed, wind_dir, azimuths, tin, tout, stack_height):
    best = 0.0
    best_gap = 1e9
    for az in azimuths:
        gap = abs((wind_dir - az + 180.0) % 360.0 - 180.0)
        if gap < best_gap:
            best_gap = gap
            best = az
    factor = abs(math.cos(math.radians(wind_dir - best)))
    if factor < MIN_WIND_FACTOR:
        factor = MIN_WIND_FACTOR
    q_wind = CD_WIND * open_area * wind_speed * factor
    t_mean = 0.5 * (tin + tout) + 273.15
    q_stack = CD_STACK * open_area * math.sqrt(2.0 * GRAVITY * stack_height * abs(tin - tout) / t_mean)
    return AIR_DENSITY * math.sqrt(q_wind * q_wind + q_stack * q_stack)


@njit(cache=True)
def _vent_rhs(t, ua, m_inf, q, tout, open_area, wind_speed, wind_dir, azimuths, stack_height):
    flow = m_inf + vent_flow_core(open_area, wind_speed, wind_dir, azimuths, t, tout, stack_height)
    env = (ua + flow * AIR_CP) * (tout - t)
    return env + q, env


@njit(cache=True)
def vented_step(t0, cap, ua, m_inf, q, tout, dt, open_area, wind_speed, wind_dir, azimuths, stack_height):
    """Free float with the window open; the stack flow follows the indoor temperature.

    Classical RK4 on the node temperature with the envelope exchange as a second
    state, so ``cap * (t_end - t0) == envelope_J + q * dt`` holds to round-off.
    Returns ``(t_end, envelope_J)``.
    """
    # the largest conductance occurs at the start (stack flow shrinks as the gap closes)
    h0 = ua + (m_inf + vent_flow_core(open_area, wind_speed, wind_dir, azimuths, t0, tout, stack_height)) * AIR_CP
    n = max(1, int(math.ceil(h0 * dt / (RK_STEP_LIMIT * cap))))
    step = dt / n
    t = t0
    env = 0.0
    for _ in range(n):
        a1, e1 = _vent_rhs(t, ua, m_inf, q, tout, open_area, wind_speed, wind_dir, azimuths, stack_height)
        a2, e2 = _vent_rhs(t + 0.5 * step * a1 / cap, ua, m_inf, q, tout, open_area, wind_speed, wind_dir, azimuths, stack_height)
        a3, e3 = _vent_rhs(t + 0.5 * step * a2 / cap, ua, m_inf, q, tout, open_area, wind_speed, wind_dir, azimuths, stack_height)
        a4, e4 = _vent_rhs(t + step * a3 / cap, ua, m_inf, q, tout, open_area, wind_speed, wind_dir, azimuths, stack_height)
        de = step / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4)
        t += (de + q * step) / cap
        env += de
    return t, env


def ventilation_flow(
    params: ZoneParams,
    window_open: bool,
    wind_speed: float,
    wind_direction: float,
    facade_azimuths=None,
    tin: float = 20.0,
    tout: float = 20.0,
) -> float:
    """Window airflow in kg/s from combined wind and stack pressure."""
    if not window_open:
        return 0.0
    az = np.asarray(params.facade_azimuths if facade_azimuths is None else facade_azimuths, dtype=float)
    if az.size == 0:
        return 0.0
    return float(
        vent_flow_core(params.open_area, wind_speed, wind_direction, az, tin, tout, 0.5 * params.window_height)
    )


def _conductance(params: ZoneParams, vent_flow: float) -> float:
    return params.ua_envelope + (params.infiltration_flow + vent_flow) * AIR_CP


def free_float_step(state: ZoneState, params: ZoneParams, drivers: Drivers, dt: float) -> ZoneState:
    if dt <= 0:
        raise ValueError("dt must be positive")
    h = _conductance(params, drivers.vent_flow)
    q = drivers.solar * params.solar_heat_gain_coeff + drivers.internal
    t_end, _, _, _ = zone_step(
        state.indoor_temp, params.thermal_capacitance, h, q, drivers.outdoor_temp, dt, False, 0.0, 0.0
    )
    return ZoneState(float(t_end), state.window_open, 0.0, 0.0)


def ideal_load_to_setpoint(
    state: ZoneState,
    params: ZoneParams,
    drivers: Drivers,
    dt: float,
    heat_setpoint: float,
    cool_setpoint: float,
) -> tuple[ZoneState, float, float]:
    """Uncapped ideal loads: returns ``(state, heating J, cooling J)``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not heat_setpoint < cool_setpoint:
        raise ValueError("heat_setpoint must be below cool_setpoint")
    h = _conductance(params, drivers.vent_flow)
    q = drivers.solar * params.solar_heat_gain_coeff + drivers.internal
    t_end, heat, cool, _ = zone_step(
        state.indoor_temp,
        params.thermal_capacitance,
        h,
        q,
        drivers.outdoor_temp,
        dt,
        True,
        heat_setpoint,
        cool_setpoint,
    )
    return ZoneState(float(t_end), state.window_open, heat / dt, cool / dt), float(heat), float(cool)


# --- annual loop -------------------------------------------------------------


@njit(cache=True)
def _simulate_zone(
    mode,
    th,
    tout,
    wind_speed,
    wind_dir,
    solar_gain,
    internal,
    cap,
    ua,
    m_inf,
    open_area,
    azimuths,
    stack_height,
    substeps,
    warmup_hours,
    t_init,
    out_t_start,
    out_t_end,
    out_heat,
    out_cool,
    out_window,
    out_env,
    out_gain,
):
    n = tout.shape[0]
    dt = 3600.0 / substeps
    t = t_init
    window = False
    for k in range(-warmup_hours, n):
        i = k % n
        window, hvac, lo, hi = decide_core(mode, th, t, tout[i], window)
        q = solar_gain[i] + internal[i]
        t0 = t
        heat = 0.0
        cool = 0.0
        env = 0.0
        for _ in range(substeps):
            if window and not hvac:
                t, de = vented_step(
                    t, cap, ua, m_inf, q, tout[i], dt, open_area, wind_speed[i], wind_dir[i], azimuths, stack_height
                )
                env += de
                continue
            flow = m_inf
            if window:
                # HVAC with open windows (override only): flow frozen over the sub-step
                flow += vent_flow_core(open_area, wind_speed[i], wind_dir[i], azimuths, t, tout[i], stack_height)
            h = ua + flow * AIR_CP
            t, dh, dc, de = zone_step(t, cap, h, q, tout[i], dt, hvac, lo, hi)
            heat += dh
            cool += dc
            env += de
        if k >= 0:
            out_t_start[i] = t0
            out_t_end[i] = t
            # one step may heat in one sub-step and cool in another; report the net
            net = heat - cool
            out_heat[i] = net if net > 0.0 else 0.0
            out_cool[i] = -net if net < 0.0 else 0.0
            out_window[i] = window
            out_env[i] = env
            out_gain[i] = q * 3600.0


@njit(cache=True)
def _pmv_series(temp, vel_closed, vel_open, window, rh, met, clo, out):
    for i in range(temp.shape[0]):
        vel = vel_open if window[i] else vel_closed
        out[i] = pmv_core(temp[i], temp[i], vel, rh[i], met, clo[i])


@dataclass
class HourlyResults:
    """Per-hour, per-zone arrays of shape ``(8760, zones)`` for one representative floor.

    Energies are joules per zone on that floor; the ``building_*`` helpers
    scale by the floor count.
    """

    indoor_temp: np.ndarray
    start_temp: np.ndarray
    heating: np.ndarray
    cooling: np.ndarray
    lights_equip: np.ndarray
    window_open: np.ndarray
    envelope_heat: np.ndarray
    gains_heat: np.ndarray
    adaptive_neutral: np.ndarray
    pmv: np.ndarray
    pmv_neutral: np.ndarray
    occupancy: np.ndarray  # (8760,) fraction
    month: np.ndarray
    day: np.ndarray
    hour: np.ndarray  # EPW hour 1..24
    floors: int = 1
    floor_area: float = 0.0  # one floor, m2
    cooling_cop: float = 3.0
    heating_cop: float = 1.0
    strategy: ControlMode = ControlMode.AC
    capacitance: np.ndarray | None = None  # (zones,) J/K

    def __post_init__(self):
        if self.indoor_temp.shape[0] != HOURS_PER_YEAR:
            raise ValueError("hourly results need 8760 rows")

    @property
    def n_zones(self) -> int:
        return self.indoor_temp.shape[1]

    @property
    def gross_floor_area(self) -> float:
        return self.floor_area * self.floors

    def hvac_electric(self) -> np.ndarray:
        """Building HVAC electricity per hour, J."""
        per_floor = self.cooling.sum(axis=1) / self.cooling_cop + self.heating.sum(axis=1) / self.heating_cop
        return per_floor * self.floors

    def building_electric(self) -> np.ndarray:
        return self.hvac_electric() + self.lights_equip.sum(axis=1) * self.floors

    def building_total(self, name: str) -> float:
        return float(getattr(self, name).sum() * self.floors)

    def neutral_fraction(self, model: str = "adaptive") -> np.ndarray:
        flags = self.adaptive_neutral if model == "adaptive" else self.pmv_neutral
        return flags.mean(axis=1)

    def to_csv(self) -> str:
        header = (
            "hour_index,month,day,hour,zone,indoor_temp_c,heating_j,cooling_j,lights_equip_j,"
            "window_open,adaptive_neutral,pmv,pmv_neutral,occupancy\n"
        )
        lines = [header]
        for i in range(HOURS_PER_YEAR):
            prefix = f"{i},{self.month[i]},{self.day[i]},{self.hour[i]},"
            occ = f"{self.occupancy[i]:.4f}"
            for z in range(self.n_zones):
                lines.append(
                    f"{prefix}{z},{self.indoor_temp[i, z]:.4f},{self.heating[i, z]:.1f},{self.cooling[i, z]:.1f},"
                    f"{self.lights_equip[i, z]:.1f},{int(self.window_open[i, z])},{int(self.adaptive_neutral[i, z])},"
                    f"{self.pmv[i, z]:.4f},{int(self.pmv_neutral[i, z])},{occ}\n"
                )
        return "".join(lines)


_solar_cache: "weakref.WeakKeyDictionary[WeatherYear, dict]" = weakref.WeakKeyDictionary()


def _facade_irradiance(weather: WeatherYear, azimuth: float) -> np.ndarray:
    cache = _solar_cache.setdefault(weather, {})
    if "sun" not in cache:
        cache["sun"] = hourly_sun(weather)
    key = round(azimuth, 9)
    if key not in cache:
        alt, az = cache["sun"]
        cache[key] = incident_on_facades(
            weather.direct_normal, weather.diffuse_horizontal, weather.global_horizontal, alt, az, azimuth
        )
    return cache[key]


def _prevailing(weather: WeatherYear, window: int) -> np.ndarray:
    cache = _solar_cache.setdefault(weather, {})
    key = ("tpma", window)
    if key not in cache:
        cache[key] = prevailing_mean_series(weather, window)
    return cache[key]


def simulate_year(
    model: BuildingModel,
    weather: WeatherYear,
    occupancy,
    gains: GainParameters | None = None,
    strategy: ControlMode = ControlMode.AC,
    comfort: ComfortConfig | None = None,
    thresholds: ControlThresholds | None = None,
    hvac: HvacConfig | None = None,
    period: str = "post_covid",
    income: str = "middle",
) -> HourlyResults:
    """Simulate 8760 hours for every zone of ``model``.

    ``occupancy`` is either a ProfileSet (with ``period``/``income`` picking the
    profile) or an array of 8760 hourly fractions.  The year starts from the
    state reached by first running its final ``warmup_days``.
    """
    gains = gains or GainParameters()
    comfort = comfort or ComfortConfig()
    thresholds = thresholds or ControlThresholds()
    hvac = hvac or HvacConfig()
    strategy = ControlMode(strategy)
    if isinstance(occupancy, ProfileSet):
        fractions = annual_fractions(occupancy, period, income)
    else:
        fractions = np.asarray(occupancy, dtype=float)
    if fractions.shape != (HOURS_PER_YEAR,):
        raise ValueError("occupancy needs 8760 hourly fractions")

    n = HOURS_PER_YEAR
    th = thresholds.as_array()
    tout = np.ascontiguousarray(weather.dry_bulb, dtype=float)
    wind_speed = np.ascontiguousarray(weather.wind_speed, dtype=float)
    wind_dir = np.ascontiguousarray(weather.wind_direction, dtype=float)
    rh = np.ascontiguousarray(weather.rel_humidity, dtype=float)
    clo = np.where(np.isin(weather.month, comfort.cooling_months), comfort.clo_cooling, comfort.clo_heating)
    tpma = _prevailing(weather, comfort.prevailing_window)[weather.day_of_year - 1]
    t_comfort = np.array([adaptive_comfort_temp(t).temperature for t in np.unique(tpma)])
    t_comfort = t_comfort[np.searchsorted(np.unique(tpma), tpma)]
    band = BANDS[comfort.band]

    # identical zones share one trajectory
    groups: dict[tuple, list[int]] = {}
    for z, params in enumerate(model.zones):
        groups.setdefault(params.physics_key(), []).append(z)

    nz = len(model.zones)
    shape = (n, nz)
    res = {name: np.empty(shape) for name in ("t_start", "t_end", "heat", "cool", "env", "gain", "pmv", "elec")}
    window_all = np.empty(shape, dtype=np.bool_)
    buf = {name: np.empty(n) for name in ("t_start", "t_end", "heat", "cool", "env", "gain", "pmv")}
    window_buf = np.empty(n, dtype=np.bool_)
    for members in groups.values():
        p = model.zones[members[0]]
        solar = np.zeros(n)
        for az, area in zip(p.facade_azimuths, p.window_areas):
            solar += area * _facade_irradiance(weather, az)
        sensible, electric = annual_gains(p.floor_area, fractions, gains)
        _simulate_zone(
            int(strategy),
            th,
            tout,
            wind_speed,
            wind_dir,
            solar * p.solar_heat_gain_coeff,
            np.ascontiguousarray(sensible),
            p.thermal_capacitance,
            p.ua_envelope,
            p.infiltration_flow,
            p.open_area,
            np.asarray(p.facade_azimuths, dtype=float),
            0.5 * p.window_height,
            hvac.substeps,
            24 * hvac.warmup_days,
            hvac.initial_temp,
            buf["t_start"],
            buf["t_end"],
            buf["heat"],
            buf["cool"],
            window_buf,
            buf["env"],
            buf["gain"],
        )
        _pmv_series(
            buf["t_end"],
            comfort.velocity_closed,
            comfort.velocity_open,
            window_buf,
            rh,
            comfort.metabolic_rate,
            clo,
            buf["pmv"],
        )
        for z in members:
            for name in buf:
                res[name][:, z] = buf[name]
            res["elec"][:, z] = electric * 3600.0
            window_all[:, z] = window_buf

    adaptive = np.abs(res["t_end"] - t_comfort[:, None]) <= band
    return HourlyResults(
        indoor_temp=res["t_end"],
        start_temp=res["t_start"],
        heating=res["heat"],
        cooling=res["cool"],
        lights_equip=res["elec"],
        window_open=window_all,
        envelope_heat=res["env"],
        gains_heat=res["gain"],
        adaptive_neutral=adaptive,
        pmv=res["pmv"],
        pmv_neutral=np.abs(res["pmv"]) <= comfort.pmv_threshold,
        occupancy=fractions,
        month=weather.month,
        day=weather.day,
        hour=weather.hour,
        floors=model.floors,
        floor_area=sum(z.floor_area for z in model.zones),
        cooling_cop=hvac.cooling_cop,
        heating_cop=hvac.heating_cop,
        strategy=strategy,
        capacitance=np.array([z.thermal_capacitance for z in model.zones]),
    )
