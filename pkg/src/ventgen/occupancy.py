"""Hourly occupancy profiles and the internal gains they drive."""
from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass, field

import numpy as np

PERIODS = ("pre_covid", "during_covid", "post_covid")
DAY_TYPES = ("weekday", "weekend")
INCOMES = ("low", "middle", "high")
HEADER = ["period", "day_type", "income"] + [f"h{i}" for i in range(24)]

# Calendar used to route weekday/weekend; 2001 starts on a Monday.
CALENDAR_YEAR = 2001


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class OccupancyProfile:
    period: str
    day_type: str
    income: str
    fractions: tuple[float, ...]

    def __post_init__(self):
        if len(self.fractions) != 24:
            raise ProfileError(f"profile needs 24 hourly values, got {len(self.fractions)}")
        if any(not 0.0 <= f <= 1.0 for f in self.fractions):
            raise ProfileError("occupancy fractions must lie in [0, 1]")


class ProfileSet(dict):
    """Profiles keyed by ``(period, day_type, income)``."""

    def get_profile(self, period: str, day_type: str, income: str) -> OccupancyProfile:
        try:
            return self[(period, day_type, income)]
        except KeyError:
            raise LookupError(f"no occupancy profile for {period}/{day_type}/{income}") from None

    def require(self, period: str, income: str) -> None:
        for day_type in DAY_TYPES:
            self.get_profile(period, day_type, income)


def load_profiles(stream, require_default: bool = True) -> ProfileSet:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = [h.strip() for h in next(reader, [])]
    if header != HEADER:
        raise ProfileError(f"unexpected occupancy CSV header: {header[:5]}...")
    profiles = ProfileSet()
    for rowno, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != len(HEADER):
            raise ProfileError(f"row {rowno}: expected {len(HEADER)} columns, got {len(row)}")
        period, day_type, income = (x.strip() for x in row[:3])
        if period not in PERIODS or day_type not in DAY_TYPES or income not in INCOMES:
            raise ProfileError(f"row {rowno}: unknown key {period}/{day_type}/{income}")
        try:
            values = tuple(float(x) for x in row[3:])
        except ValueError:
            raise ProfileError(f"row {rowno}: non-numeric fraction") from None
        bad = [v for v in values if not 0.0 <= v <= 1.0]
        if bad:
            raise ProfileError(f"row {rowno}: fraction {bad[0]} outside [0, 1]")
        key = (period, day_type, income)
        if key in profiles:
            raise ProfileError(f"row {rowno}: duplicate profile {key}")
        profiles[key] = OccupancyProfile(period, day_type, income, values)
    if require_default:
        try:
            profiles.get_profile("post_covid", "weekday", "middle")
        except LookupError:
            raise ProfileError("profile set lacks the default post_covid/weekday/middle profile") from None
    return profiles


def day_type_of(month: int, day: int) -> str:
    return "weekend" if dt.date(CALENDAR_YEAR, month, day).weekday() >= 5 else "weekday"


def fraction_at(profiles: ProfileSet, period: str, income: str, month: int, day: int, hour: int) -> float:
    """Occupancy fraction for clock hour ``hour`` (0-23), held constant through the hour."""
    return profiles.get_profile(period, day_type_of(month, day), income).fractions[hour]


def annual_fractions(profiles: ProfileSet, period: str, income: str) -> np.ndarray:
    """8760 hourly fractions for a non-leap year starting 1 January."""
    weekday = np.asarray(profiles.get_profile(period, "weekday", income).fractions)
    weekend = np.asarray(profiles.get_profile(period, "weekend", income).fractions)
    start = dt.date(CALENDAR_YEAR, 1, 1)
    days = [weekend if (start + dt.timedelta(d)).weekday() >= 5 else weekday for d in range(365)]
    return np.concatenate(days)


@dataclass(frozen=True)
class GainParameters:
    people_density: float = 0.028  # persons/m2
    sensible_per_person: float = 70.0  # W
    latent_per_person: float = 45.0  # W
    lighting_power: float = 3.9  # W/m2
    equipment_power: float = 5.4  # W/m2
    lighting_schedule: tuple[float, ...] = field(default=(1.0,) * 24)
    equipment_schedule: tuple[float, ...] = field(default=(1.0,) * 24)
    lighting_follows_occupancy: bool = True

    def __post_init__(self):
        scalars = (
            self.people_density,
            self.sensible_per_person,
            self.latent_per_person,
            self.lighting_power,
            self.equipment_power,
        )
        if any(v < 0 for v in scalars):
            raise ValueError("gain parameters must be non-negative")
        for sched in (self.lighting_schedule, self.equipment_schedule):
            if len(sched) != 24 or any(v < 0 for v in sched):
                raise ValueError("schedules need 24 non-negative values")

    @classmethod
    def from_dict(cls, d: dict) -> "GainParameters":
        d = dict(d)
        for k in ("lighting_schedule", "equipment_schedule"):
            if k in d:
                d[k] = tuple(float(x) for x in d[k])
        return cls(**d)


def internal_gains(zone_area: float, frac: float, params: GainParameters, hour: int) -> tuple[float, float, float]:
    """Return ``(sensible W, latent W, electric W)`` for one zone and clock hour."""
    if zone_area <= 0:
        raise ValueError("zone area must be positive")
    people = params.people_density * zone_area * frac
    lighting = params.lighting_power * zone_area * params.lighting_schedule[hour]
    if params.lighting_follows_occupancy:
        lighting *= frac
    equipment = params.equipment_power * zone_area * params.equipment_schedule[hour]
    electric = lighting + equipment
    return people * params.sensible_per_person + electric, people * params.latent_per_person, electric


def annual_gains(zone_area: float, fractions: np.ndarray, params: GainParameters) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``internal_gains`` over a year: ``(sensible W, electric W)`` per hour."""
    hours = np.arange(len(fractions)) % 24
    people = params.people_density * zone_area * fractions
    lighting = params.lighting_power * zone_area * np.asarray(params.lighting_schedule)[hours]
    if params.lighting_follows_occupancy:
        lighting = lighting * fractions
    equipment = params.equipment_power * zone_area * np.asarray(params.equipment_schedule)[hours]
    electric = lighting + equipment
    return people * params.sensible_per_person + electric, electric
