"""Generate the six bundled synthetic EPW files.

The files are statistical stand-ins built from approximate monthly climate
normals (mean temperature, diurnal range, humidity, clearness, wind).  They are
not TMY data; they exist so the toolkit runs end to end without downloads.
Regenerate with ``python scripts/make_sample_weather.py``.
"""
from __future__ import annotations

import pathlib

import numpy as np

from ventgen.weather import (
    DAYS_PER_YEAR,
    SiteLocation,
    WeatherYear,
    calendar_hours,
    format_epw,
    sun_angles,
)

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "ventgen" / "data" / "weather"

# label: (city, state, lat, lon, tz, elev, monthly mean T, diurnal range, RH %, clearness, wind m/s, wind dir)
CLIMATES = {
    "houston": (
        "Houston", "TX", 29.98, -95.36, -6, 30,
        [11.8, 13.8, 17.4, 21.0, 25.1, 28.0, 29.0, 29.0, 26.6, 21.9, 16.7, 12.7],
        [9.5, 9.5, 9.5, 9.5, 9.0, 9.0, 9.5, 9.5, 9.5, 10.5, 10.0, 9.5],
        [76, 74, 73, 74, 75, 74, 73, 74, 75, 73, 75, 76],
        [0.45, 0.48, 0.50, 0.52, 0.53, 0.56, 0.56, 0.55, 0.53, 0.53, 0.48, 0.45],
        3.6, 160,
    ),
    "phoenix": (
        "Phoenix", "AZ", 33.43, -112.02, -7, 337,
        [13.6, 15.6, 19.0, 23.0, 28.1, 33.4, 35.4, 35.0, 32.0, 25.4, 18.0, 12.8],
        [14.0, 14.0, 15.0, 16.0, 16.0, 16.0, 13.0, 13.0, 14.0, 15.0, 15.0, 14.0],
        [50, 44, 38, 27, 21, 17, 31, 35, 33, 35, 42, 51],
        [0.60, 0.64, 0.68, 0.72, 0.74, 0.74, 0.68, 0.68, 0.69, 0.67, 0.62, 0.60],
        2.8, 250,
    ),
    "atlanta": (
        "Atlanta", "GA", 33.64, -84.43, -5, 308,
        [6.8, 9.0, 12.8, 17.2, 21.6, 25.3, 26.9, 26.5, 23.4, 17.7, 12.3, 7.9],
        [10.0, 10.5, 11.0, 11.5, 11.0, 10.0, 9.5, 9.5, 10.0, 11.5, 11.0, 10.0],
        [68, 65, 63, 62, 68, 71, 74, 75, 73, 69, 69, 70],
        [0.45, 0.48, 0.52, 0.55, 0.55, 0.55, 0.53, 0.53, 0.53, 0.55, 0.48, 0.45],
        3.8, 300,
    ),
    "los_angeles": (
        "Los Angeles", "CA", 33.94, -118.41, -8, 30,
        [14.2, 14.5, 15.2, 16.4, 17.9, 19.5, 21.3, 21.9, 21.5, 19.5, 16.6, 14.1],
        [9.0, 8.5, 8.0, 7.5, 7.0, 7.0, 7.5, 7.5, 8.0, 8.5, 9.5, 9.5],
        [63, 67, 70, 71, 74, 76, 76, 76, 74, 71, 67, 64],
        [0.55, 0.57, 0.60, 0.62, 0.58, 0.57, 0.63, 0.63, 0.60, 0.58, 0.56, 0.55],
        3.5, 250,
    ),
    "las_vegas": (
        "Las Vegas", "NV", 36.08, -115.15, -8, 665,
        [8.6, 11.3, 15.2, 19.1, 24.6, 30.2, 33.5, 32.6, 28.1, 20.8, 13.2, 8.0],
        [12.0, 12.5, 13.0, 14.0, 14.5, 15.0, 14.0, 13.5, 14.0, 14.0, 12.5, 12.0],
        [42, 37, 30, 22, 18, 13, 17, 21, 22, 27, 35, 41],
        [0.60, 0.63, 0.68, 0.72, 0.75, 0.76, 0.72, 0.72, 0.72, 0.69, 0.63, 0.60],
        4.2, 210,
    ),
    "san_francisco": (
        "San Francisco", "CA", 37.62, -122.37, -8, 3,
        [10.4, 11.8, 13.0, 14.2, 15.6, 17.1, 17.8, 18.3, 18.6, 16.9, 13.4, 10.6],
        [7.5, 8.0, 8.5, 9.0, 9.0, 9.0, 8.5, 8.5, 9.0, 9.0, 8.0, 7.5],
        [78, 76, 74, 72, 72, 73, 76, 77, 74, 72, 75, 78],
        [0.50, 0.53, 0.58, 0.62, 0.63, 0.65, 0.60, 0.57, 0.60, 0.57, 0.52, 0.50],
        5.5, 280,
    ),
}

_MID_MONTH = np.array([15.5, 45, 74.5, 105, 135.5, 166, 196.5, 227.5, 258, 288.5, 319, 349.5])


def _daily(monthly) -> np.ndarray:
    """Periodic linear interpolation of mid-month values to each day."""
    x = np.concatenate([_MID_MONTH - 365, _MID_MONTH, _MID_MONTH + 365])
    y = np.tile(np.asarray(monthly, dtype=float), 3)
    return np.interp(np.arange(1, DAYS_PER_YEAR + 1), x, y)


def _erbs_diffuse_fraction(kt: np.ndarray) -> np.ndarray:
    poly = 0.9511 - 0.1604 * kt + 4.388 * kt**2 - 16.638 * kt**3 + 12.336 * kt**4
    return np.where(kt <= 0.22, 1.0 - 0.09 * kt, np.where(kt <= 0.8, poly, 0.165))


def _dew_point(t, rh):
    a, b = 17.625, 243.04
    g = np.log(np.clip(rh, 1, 100) / 100.0) + a * t / (b + t)
    return b * g / (a - g)


def _rel_humidity(t, td):
    a, b = 17.625, 243.04
    return 100.0 * np.exp(a * td / (b + td) - a * t / (b + t))


def synthesize(label: str, seed: int) -> WeatherYear:
    city, state, lat, lon, tz, elev, t_mon, dr_mon, rh_mon, kt_mon, wind, wind_dir = CLIMATES[label]
    rng = np.random.default_rng(seed)
    loc = SiteLocation(lat, lon, tz, elev, city=f"{city} {state} USA (synthetic)")
    month, day, hour = calendar_hours()
    doy = np.repeat(np.arange(1, DAYS_PER_YEAR + 1), 24)

    # daily weather: AR(1) temperature anomaly, random clearness
    anomaly = np.zeros(DAYS_PER_YEAR)
    for i in range(1, DAYS_PER_YEAR):
        anomaly[i] = 0.7 * anomaly[i - 1] + rng.normal(0.0, 1.6)
    kt_day = np.clip(_daily(kt_mon) + rng.normal(0.0, 0.12, DAYS_PER_YEAR), 0.08, 0.78)
    cloud_scale = 0.55 + 0.45 * kt_day / _daily(kt_mon)
    t_day = _daily(t_mon) + anomaly
    range_day = _daily(dr_mon) * np.clip(cloud_scale, 0.5, 1.2)
    td_day = _dew_point(_daily(t_mon), _daily(rh_mon)) + 0.6 * anomaly + rng.normal(0.0, 1.0, DAYS_PER_YEAR)

    h = hour - 0.5
    shape = np.cos(2 * np.pi * (h - 15.0) / 24.0)
    dry_bulb = np.repeat(t_day, 24) + 0.5 * np.repeat(range_day, 24) * shape
    dew = np.minimum(np.repeat(td_day, 24), dry_bulb)
    rh = np.clip(_rel_humidity(dry_bulb, dew), 5.0, 100.0)

    alt, _ = sun_angles(loc, doy, h)
    sin_alt = np.clip(np.sin(np.radians(alt)), 0.0, None)
    extra = 1367.0 * (1 + 0.033 * np.cos(2 * np.pi * doy / 365.0)) * sin_alt
    kt = np.clip(np.repeat(kt_day, 24) + rng.normal(0.0, 0.04, len(doy)), 0.05, 0.8)
    ghi = np.where(alt > 2.0, kt * extra, 0.0)
    dhi = _erbs_diffuse_fraction(kt) * ghi
    dni = np.where(alt > 2.0, np.minimum((ghi - dhi) / np.maximum(sin_alt, 1e-3), 1000.0), 0.0)

    speed = np.clip(
        wind * (1 + 0.35 * np.cos(2 * np.pi * (h - 15.0) / 24.0)) * rng.weibull(2.0, len(doy)) * 1.13, 0.0, 20.0
    )
    direction = (wind_dir + rng.normal(0.0, 50.0, len(doy))) % 360.0
    pressure = np.full(len(doy), 101325.0 * (1 - 2.25577e-5 * elev) ** 5.25588)

    r = lambda a, n=1: np.round(a, n)  # noqa: E731
    return WeatherYear(
        loc,
        month,
        day,
        hour,
        dry_bulb=r(dry_bulb),
        dew_point=r(dew),
        rel_humidity=r(rh, 0),
        pressure=r(pressure, 0),
        global_horizontal=r(ghi, 0),
        direct_normal=r(dni, 0),
        diffuse_horizontal=r(dhi, 0),
        wind_direction=r(direction, 0),
        wind_speed=r(speed),
    )


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for i, label in enumerate(CLIMATES):
        path = OUT / f"{label}.epw"
        path.write_text(format_epw(synthesize(label, seed=1000 + i)))
        print(f"wrote {path}")
