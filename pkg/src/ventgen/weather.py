"""EPW ingestion, solar geometry and prevailing outdoor temperature."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

HOURS_PER_YEAR = 8760
DAYS_PER_YEAR = 365
_CUM_DAYS = np.cumsum([0, 31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31])

# 1-based EPW column -> (field name, missing-value sentinel)
EPW_FIELDS = {
    7: ("dry_bulb", 99.9),
    8: ("dew_point", 99.9),
    9: ("rel_humidity", 999.0),
    10: ("pressure", 999999.0),
    14: ("global_horizontal", 9999.0),
    15: ("direct_normal", 9999.0),
    16: ("diffuse_horizontal", 9999.0),
    21: ("wind_direction", 999.0),
    22: ("wind_speed", 999.0),
}
FIELD_NAMES = tuple(name for name, _ in EPW_FIELDS.values())


class EPWFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class EPWLengthError(EPWFormatError):
    pass


@dataclass(frozen=True)
class SiteLocation:
    latitude: float
    longitude: float
    timezone_offset: float
    elevation: float = 0.0
    city: str = ""

    def __post_init__(self):
        if not -90 <= self.latitude <= 90:
            raise ValueError(f"latitude out of range: {self.latitude}")
        if not -180 <= self.longitude <= 180:
            raise ValueError(f"longitude out of range: {self.longitude}")


@dataclass(frozen=True)
class WeatherRecord:
    month: int
    day: int
    hour: int
    dry_bulb: float
    dew_point: float
    rel_humidity: float
    pressure: float
    global_horizontal: float
    direct_normal: float
    diffuse_horizontal: float
    wind_direction: float
    wind_speed: float


@dataclass(frozen=True)
class SunPosition:
    altitude: float
    azimuth: float


class WeatherYear:
    """8760 hourly records held column-wise; treat as immutable."""

    def __init__(self, location: SiteLocation, month, day, hour, **columns):
        self.location = location
        self.month = np.asarray(month, dtype=np.int64)
        self.day = np.asarray(day, dtype=np.int64)
        self.hour = np.asarray(hour, dtype=np.int64)
        for name in FIELD_NAMES:
            arr = np.asarray(columns[name], dtype=float)
            arr.flags.writeable = False
            setattr(self, name, arr)
        if len(self.month) != HOURS_PER_YEAR:
            raise EPWLengthError(f"expected {HOURS_PER_YEAR} hourly records, got {len(self.month)}")

    def __len__(self) -> int:
        return len(self.month)

    @property
    def records(self) -> list[WeatherRecord]:
        cols = [getattr(self, n) for n in FIELD_NAMES]
        return [
            WeatherRecord(int(m), int(d), int(h), *(float(c[i]) for c in cols))
            for i, (m, d, h) in enumerate(zip(self.month, self.day, self.hour))
        ]

    def record(self, i: int) -> WeatherRecord:
        return WeatherRecord(
            int(self.month[i]), int(self.day[i]), int(self.hour[i]), *(float(getattr(self, n)[i]) for n in FIELD_NAMES)
        )

    @cached_property
    def day_of_year(self) -> np.ndarray:
        return _CUM_DAYS[self.month - 1] + self.day

    @cached_property
    def daily_mean_dry_bulb(self) -> np.ndarray:
        return self.dry_bulb.reshape(DAYS_PER_YEAR, 24).mean(axis=1)

    @classmethod
    def constant(cls, location: SiteLocation, **values) -> "WeatherYear":
        """A year where every hour repeats the same conditions (handy for tests)."""
        month, day, hour = calendar_hours()
        base = dict(
            dry_bulb=20.0,
            dew_point=10.0,
            rel_humidity=50.0,
            pressure=101325.0,
            global_horizontal=0.0,
            direct_normal=0.0,
            diffuse_horizontal=0.0,
            wind_direction=0.0,
            wind_speed=0.0,
        )
        base.update(values)
        cols = {k: np.broadcast_to(np.asarray(v, dtype=float), (HOURS_PER_YEAR,)).copy() for k, v in base.items()}
        return cls(location, month, day, hour, **cols)


def calendar_hours() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Month, day and hour (1-24) for every hour of a non-leap year."""
    months, days = [], []
    for m in range(1, 13):
        n = _CUM_DAYS[m] - _CUM_DAYS[m - 1]
        months += [m] * n
        days += list(range(1, n + 1))
    month = np.repeat(months, 24)
    day = np.repeat(days, 24)
    hour = np.tile(np.arange(1, 25), DAYS_PER_YEAR)
    return month, day, hour


def day_of_year(month: int, day: int) -> int:
    return int(_CUM_DAYS[month - 1] + day)


def _to_float(field: str, name: str, line: int) -> float:
    try:
        return float(field)
    except ValueError:
        raise EPWFormatError(f"non-numeric {name} value {field!r}", line) from None


def parse_epw(stream, strict_leap: bool = False) -> WeatherYear:
    """Parse EPW text (a string, a path, or an open text stream).

    Missing-value sentinels are replaced by the previous hour's value.  Leap-day
    rows are dropped unless ``strict_leap`` is set, in which case they are an error.
    """
    if isinstance(stream, Path):
        stream = stream.read_text()
    if isinstance(stream, str):
        stream = io.StringIO(stream)

    location = None
    months, days, hours = [], [], []
    cols: dict[str, list[float]] = {name: [] for name in FIELD_NAMES}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if location is None:
            if fields[0].strip().upper() != "LOCATION":
                raise EPWFormatError("missing LOCATION header", lineno)
            if len(fields) < 10:
                raise EPWFormatError("LOCATION header has fewer than 10 fields", lineno)
            location = SiteLocation(
                latitude=_to_float(fields[6], "latitude", lineno),
                longitude=_to_float(fields[7], "longitude", lineno),
                timezone_offset=_to_float(fields[8], "timezone", lineno),
                elevation=_to_float(fields[9], "elevation", lineno),
                city=fields[1].strip(),
            )
            continue
        if not fields[0].strip().lstrip("-").isdigit():
            continue  # remaining header records
        if len(fields) < 22:
            raise EPWFormatError(f"data row has {len(fields)} fields, need at least 22", lineno)
        month = int(_to_float(fields[1], "month", lineno))
        day = int(_to_float(fields[2], "day", lineno))
        hour = int(_to_float(fields[3], "hour", lineno))
        if month == 2 and day == 29:
            if strict_leap:
                raise EPWFormatError("leap-day record in strict mode", lineno)
            continue
        if not 1 <= hour <= 24:
            raise EPWFormatError(f"hour {hour} outside 1..24", lineno)
        months.append(month)
        days.append(day)
        hours.append(hour)
        for col, (name, sentinel) in EPW_FIELDS.items():
            value = _to_float(fields[col - 1], name, lineno)
            if value >= sentinel:
                if not cols[name]:
                    raise EPWFormatError(f"first record has missing {name}", lineno)
                value = cols[name][-1]
            cols[name].append(value)
    if location is None:
        raise EPWFormatError("missing LOCATION header", 1)
    if len(months) != HOURS_PER_YEAR:
        raise EPWLengthError(f"expected {HOURS_PER_YEAR} hourly records after leap handling, got {len(months)}")
    stamp = (_CUM_DAYS[np.asarray(months) - 1] + np.asarray(days)) * 24 + np.asarray(hours)
    if np.any(np.diff(stamp) <= 0):
        bad = int(np.argmax(np.diff(stamp) <= 0)) + 1
        raise EPWFormatError(f"timestamps not strictly increasing at data record {bad + 1}")
    return WeatherYear(location, months, days, hours, **cols)


def read_epw(path) -> WeatherYear:
    with open(path, newline="") as fh:
        return parse_epw(fh)


def format_epw(weather: WeatherYear, year: int = 2001) -> str:
    """Write an EPW with the retained fields; other columns get EPW missing codes."""
    loc = weather.location
    out = [
        f"LOCATION,{loc.city or 'Site'},-,-,synthetic,000000,{loc.latitude:.2f},{loc.longitude:.2f},"
        f"{loc.timezone_offset:.1f},{loc.elevation:.1f}",
        "DESIGN CONDITIONS,0",
        "TYPICAL/EXTREME PERIODS,0",
        "GROUND TEMPERATURES,0",
        "HOLIDAYS/DAYLIGHT SAVINGS,No,0,0,0",
        "COMMENTS 1,Retained fields only",
        "COMMENTS 2,",
        "DATA PERIODS,1,1,Data,Sunday, 1/ 1,12/31",
    ]
    filler = ["9999"] * 35
    cols = {c: getattr(weather, name) for c, (name, _) in EPW_FIELDS.items()}
    for i in range(len(weather)):
        row = filler.copy()
        row[0:6] = [str(year), str(weather.month[i]), str(weather.day[i]), str(weather.hour[i]), "60", "-"]
        for c, arr in cols.items():
            row[c - 1] = f"{arr[i]:.6g}"
        out.append(",".join(row))
    return "\n".join(out) + "\n"


# --- solar geometry -------------------------------------------------------


REFERENCE_YEAR = 2001  # typical-year files carry no meaningful year


def _days_since_j2000(doy, utc_hour, year: int = REFERENCE_YEAR) -> np.ndarray:
    # Julian day of 1 January 00:00 UTC of ``year``, minus J2000.0
    y = year - 1
    jd_jan0 = 365 * y + y // 4 - y // 100 + y // 400 + 1721424.5
    jd = jd_jan0 + np.asarray(doy, dtype=float) + np.asarray(utc_hour, dtype=float) / 24.0
    return jd - 2451545.0


def _sun_ecliptic(doy, utc_hour):
    """Mean longitude, right ascension and declination (degrees), low-precision almanac."""
    n = _days_since_j2000(doy, utc_hour)
    mean_long = (280.460 + 0.9856474 * n) % 360.0
    anomaly = np.radians((357.528 + 0.9856003 * n) % 360.0)
    ecl_long = np.radians(mean_long + 1.915 * np.sin(anomaly) + 0.020 * np.sin(2 * anomaly))
    obliquity = np.radians(23.439 - 0.0000004 * n)
    ra = np.degrees(np.arctan2(np.cos(obliquity) * np.sin(ecl_long), np.cos(ecl_long))) % 360.0
    dec = np.degrees(np.arcsin(np.sin(obliquity) * np.sin(ecl_long)))
    return mean_long, ra, dec


def declination(doy, utc_hour=12.0) -> np.ndarray:
    """Solar declination in degrees."""
    return _sun_ecliptic(doy, utc_hour)[2]


def equation_of_time(doy, utc_hour=12.0) -> np.ndarray:
    """Minutes; positive when apparent solar time runs ahead of mean solar time."""
    mean_long, ra, _ = _sun_ecliptic(doy, utc_hour)
    return 4.0 * ((mean_long - ra + 180.0) % 360.0 - 180.0)


def solar_noon(loc: SiteLocation, doy: int) -> float:
    """Clock time (hours) of solar noon."""
    offset = 4.0 * (loc.longitude - 15.0 * loc.timezone_offset)
    return 12.0 - (offset + float(equation_of_time(doy, 12.0 - loc.timezone_offset))) / 60.0


def sun_angles(loc: SiteLocation, doy, clock_hour) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized altitude/azimuth (degrees, azimuth clockwise from north)."""
    doy = np.asarray(doy, dtype=float)
    clock_hour = np.asarray(clock_hour, dtype=float)
    utc = clock_hour - loc.timezone_offset
    solar_time = clock_hour + (4.0 * (loc.longitude - 15.0 * loc.timezone_offset) + equation_of_time(doy, utc)) / 60.0
    omega = np.radians(15.0 * (solar_time - 12.0))
    delta = np.radians(declination(doy, utc))
    phi = math.radians(loc.latitude)
    sin_alt = np.sin(phi) * np.sin(delta) + np.cos(phi) * np.cos(delta) * np.cos(omega)
    alt = np.arcsin(np.clip(sin_alt, -1.0, 1.0))
    # azimuth from north, clockwise
    y = -np.cos(delta) * np.sin(omega)
    x = np.sin(delta) * np.cos(phi) - np.cos(delta) * np.sin(phi) * np.cos(omega)
    az = np.degrees(np.arctan2(y, x)) % 360.0
    return np.degrees(alt), az


def solar_position(loc: SiteLocation, month: int, day: int, hour: float) -> SunPosition:
    """Sun position at clock time ``hour`` (local standard time, fractional hours)."""
    alt, az = sun_angles(loc, day_of_year(month, day), hour)
    return SunPosition(float(alt), float(az) % 360.0)


def incident_on_facade(
    rec: WeatherRecord, sun: SunPosition, facade_azimuth: float, albedo: float = 0.2
) -> float:
    return float(
        incident_on_facades(
            rec.direct_normal,
            rec.diffuse_horizontal,
            rec.global_horizontal,
            sun.altitude,
            sun.azimuth,
            facade_azimuth,
            albedo,
        )
    )


def incident_on_facades(dni, dhi, ghi, altitude, azimuth, facade_azimuth, albedo: float = 0.2):
    """Vertical-surface irradiance, isotropic sky; works elementwise on arrays."""
    alt = np.radians(altitude)
    cos_inc = np.cos(alt) * np.cos(np.radians(np.asarray(azimuth) - facade_azimuth))
    direct = np.where(np.asarray(altitude) > 0, np.asarray(dni) * np.maximum(0.0, cos_inc), 0.0)
    return direct + 0.5 * np.asarray(dhi) + 0.5 * albedo * np.asarray(ghi)


def hourly_sun(weather: WeatherYear) -> tuple[np.ndarray, np.ndarray]:
    """Sun angles at the midpoint of each EPW hour (EPW hour h covers h-1..h)."""
    return sun_angles(weather.location, weather.day_of_year, weather.hour - 0.5)


# --- adaptive comfort driver ---------------------------------------------


def prevailing_mean_outdoor(weather: WeatherYear, day_of_year: int, window: int = 7) -> float:
    """Mean dry bulb over the ``window`` calendar days before ``day_of_year`` (cyclic)."""
    if not 1 <= day_of_year <= DAYS_PER_YEAR:
        raise ValueError(f"day_of_year must be in 1..365, got {day_of_year}")
    return float(prevailing_mean_series(weather, window)[day_of_year - 1])


def prevailing_mean_series(weather: WeatherYear, window: int = 7) -> np.ndarray:
    """Prevailing mean for every day of the year (index 0 is 1 January)."""
    if not 7 <= window <= 30:
        raise ValueError("prevailing-mean window must be 7..30 days")
    daily = weather.daily_mean_dry_bulb
    padded = np.concatenate([daily[-window:], daily])
    csum = np.concatenate([[0.0], np.cumsum(padded)])
    return (csum[window : window + DAYS_PER_YEAR] - csum[:DAYS_PER_YEAR]) / window
