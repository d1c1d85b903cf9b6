import csv
import math

import numpy as np
import pytest

from noaa import noaa_sun
from ventgen.config import data_path
from ventgen.weather import (
    EPWFormatError,
    EPWLengthError,
    SiteLocation,
    SunPosition,
    WeatherRecord,
    WeatherYear,
    format_epw,
    incident_on_facade,
    parse_epw,
    prevailing_mean_outdoor,
    prevailing_mean_series,
    solar_noon,
    solar_position,
)

SITE = SiteLocation(33.45, -112.07, -7.0, 337.0, "Test")


def base_text(**values):
    return format_epw(WeatherYear.constant(SITE, **values))


def replace_data_line(text, index, new_line):
    lines = text.splitlines()
    first = next(i for i, ln in enumerate(lines) if ln[:1].isdigit())
    lines[first + index] = new_line
    return "\n".join(lines) + "\n"


def field_line(text, index):
    lines = text.splitlines()
    first = next(i for i, ln in enumerate(lines) if ln[:1].isdigit())
    return lines[first + index].split(",")


def test_field_seven_is_dry_bulb():
    text = base_text()
    row = field_line(text, 0)
    row[6] = "7.2"
    w = parse_epw(replace_data_line(text, 0, ",".join(row)))
    assert w.records[0].dry_bulb == 7.2
    assert w.dry_bulb[1] == 20.0


def test_location_fields():
    w = parse_epw(base_text())
    assert (w.location.latitude, w.location.longitude, w.location.timezone_offset) == (33.45, -112.07, -7.0)
    assert w.location.elevation == 337.0


def test_short_row_names_the_line():
    text = base_text()
    short = ",".join(field_line(text, 5)[:10])
    with pytest.raises(EPWFormatError) as err:
        parse_epw(replace_data_line(text, 5, short))
    # 8 header lines, then the sixth data row
    assert err.value.line == 14
    assert "line 14" in str(err.value)


def test_missing_location():
    text = base_text().split("\n", 1)[1]
    with pytest.raises(EPWFormatError, match="LOCATION"):
        parse_epw(text)


def test_non_numeric_field():
    text = base_text()
    row = field_line(text, 3)
    row[8] = "humid"
    with pytest.raises(EPWFormatError, match="rel_humidity"):
        parse_epw(replace_data_line(text, 3, ",".join(row)))


def test_wrong_row_count():
    lines = base_text().splitlines()
    with pytest.raises(EPWLengthError):
        parse_epw("\n".join(lines[:-1]))


def test_missing_sentinel_takes_previous_hour():
    text = base_text()
    row = field_line(text, 0)
    row[6] = "5.0"
    text = replace_data_line(text, 0, ",".join(row))
    row = field_line(text, 1)
    row[6] = "99.9"
    w = parse_epw(replace_data_line(text, 1, ",".join(row)))
    assert w.dry_bulb[1] == 5.0


def test_missing_first_hour_is_an_error():
    text = base_text()
    row = field_line(text, 0)
    row[21] = "999"
    with pytest.raises(EPWFormatError, match="first record"):
        parse_epw(replace_data_line(text, 0, ",".join(row)))


def test_leap_day_rows_dropped():
    lines = base_text().splitlines()
    first = next(i for i, ln in enumerate(lines) if ln[:1].isdigit())
    feb28 = first + (31 + 27) * 24
    leap = []
    for h in range(24):
        row = lines[feb28 + h].split(",")
        row[2] = "29"
        leap.append(",".join(row))
    text = "\n".join(lines[: feb28 + 24] + leap + lines[feb28 + 24 :])
    w = parse_epw(text)
    assert len(w) == 8760
    assert not ((w.month == 2) & (w.day == 29)).any()
    with pytest.raises(EPWFormatError, match="leap"):
        parse_epw(text, strict_leap=True)


def test_out_of_order_timestamps_rejected():
    text = base_text()
    a, b = field_line(text, 10), field_line(text, 11)
    text = replace_data_line(replace_data_line(text, 10, ",".join(b)), 11, ",".join(a))
    with pytest.raises(EPWFormatError, match="increasing"):
        parse_epw(text)


def test_roundtrip_retained_fields(weather):
    w = weather["houston"]
    again = parse_epw(format_epw(w))
    for name in ("dry_bulb", "dew_point", "rel_humidity", "pressure", "global_horizontal",
                 "direct_normal", "diffuse_horizontal", "wind_direction", "wind_speed"):
        assert np.allclose(getattr(again, name), getattr(w, name), rtol=1e-5, atol=1e-9), name
    assert np.array_equal(again.month, w.month) and np.array_equal(again.hour, w.hour)


def test_phoenix_seasons_match_independent_extraction(weather):
    w = weather["phoenix"]
    assert len(w) == 8760
    by_month = {m: [] for m in range(1, 13)}
    with open(data_path("weather", "phoenix.epw"), newline="") as fh:
        for row in csv.reader(fh):
            if row and row[0].isdigit() and len(row) >= 22:
                by_month[int(row[1])].append(float(row[6]))
    jan, jul = np.mean(by_month[1]), np.mean(by_month[7])
    assert jan < jul
    assert w.dry_bulb[w.month == 1].mean() == pytest.approx(jan)
    assert w.dry_bulb[w.month == 7].mean() == pytest.approx(jul)


def test_equator_equinox_noon_is_overhead():
    loc = SiteLocation(0.0, 0.0, 0.0)
    noon = solar_noon(loc, 80)
    sun = solar_position(loc, 3, 21, noon)
    assert abs(sun.altitude - 90.0) <= 1.0


def test_winter_solstice_noon_at_forty_north():
    loc = SiteLocation(40.0, -75.0, -5.0)
    sun = solar_position(loc, 12, 21, solar_noon(loc, 355))
    assert abs(sun.altitude - 26.55) <= 1.0
    assert abs(sun.azimuth - 180.0) < 1.0


def test_matches_noaa_oracle_on_random_cases():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 20:
        lat = float(rng.uniform(-60, 60))
        tz = float(rng.integers(-11, 12))
        lon = float(np.clip(15 * tz + rng.uniform(-10, 10), -180, 180))
        month = int(rng.integers(1, 13))
        day = int(rng.integers(1, 29))
        hour = float(rng.uniform(0, 24))
        mine = solar_position(SiteLocation(lat, lon, tz), month, day, hour)
        alt, az = noaa_sun(lat, lon, tz, 2001, month, day, hour)
        assert abs(mine.altitude - alt) <= 0.5
        if alt > 1.0 and abs(90 - alt) > 2:  # azimuth is ill-conditioned near zenith
            diff = (mine.azimuth - az + 180) % 360 - 180
            assert abs(diff) <= 0.5
        checked += 1


def test_azimuth_and_altitude_ranges():
    for hour in np.linspace(0, 24, 49):
        sun = solar_position(SITE, 6, 21, float(hour))
        assert -90 <= sun.altitude <= 90
        assert 0 <= sun.azimuth < 360


def _rec(dni=0.0, dhi=0.0, ghi=0.0):
    return WeatherRecord(1, 1, 1, 20, 10, 50, 101325, ghi, dni, dhi, 0, 0)


def test_night_gives_diffuse_and_ground_only():
    total = incident_on_facade(_rec(dni=500, dhi=100, ghi=150), SunPosition(-10.0, 180.0), 180.0)
    assert total == pytest.approx(50 + 0.5 * 0.2 * 150)


def test_sun_behind_facade_has_no_direct_term():
    total = incident_on_facade(_rec(dni=800), SunPosition(30.0, 0.0), 180.0)
    assert total == 0.0


def test_grazing_sun_on_facade_normal_approaches_dni():
    # normal-incidence limit as the sun rises through the horizon in front of the facade
    sun = SunPosition(1e-9, 135.0)
    assert incident_on_facade(_rec(dni=800), sun, 135.0) == pytest.approx(800.0)
    # exactly on the horizon counts as below it
    assert incident_on_facade(_rec(dni=800), SunPosition(0.0, 135.0), 135.0) == 0.0


def test_incident_never_negative(rng):
    for _ in range(500):
        sun = SunPosition(float(rng.uniform(-90, 90)), float(rng.uniform(0, 360)))
        rec = _rec(*rng.uniform(0, 1000, 3))
        assert incident_on_facade(rec, sun, float(rng.uniform(0, 360))) >= 0


def test_incidence_cosine():
    sun = SunPosition(30.0, 200.0)
    expected = 600 * math.cos(math.radians(30)) * math.cos(math.radians(20))
    assert incident_on_facade(_rec(dni=600), sun, 180.0) == pytest.approx(expected)


def test_prevailing_mean_constant_year():
    w = WeatherYear.constant(SITE, dry_bulb=20.0)
    assert all(prevailing_mean_outdoor(w, d) == pytest.approx(20.0) for d in range(1, 366))


def _ramp_year():
    daily = np.arange(365, dtype=float) * 0.1 - 5.0
    hourly = np.repeat(daily, 24) + np.tile(np.sin(np.arange(24) / 24 * 2 * np.pi), 365)
    return WeatherYear.constant(SITE, dry_bulb=hourly), hourly


def test_prevailing_mean_matches_window_average():
    w, hourly = _ramp_year()
    for doy in (1, 2, 7, 8, 100, 365):
        hours = [((doy - 1 - k) % 365) * 24 + h for k in range(1, 8) for h in range(24)]
        assert prevailing_mean_outdoor(w, doy) == pytest.approx(np.mean(hourly[hours]))


def test_first_day_wraps_to_year_end():
    w, hourly = _ramp_year()
    assert prevailing_mean_outdoor(w, 1) == pytest.approx(hourly[358 * 24 :].mean())


def test_prevailing_mean_cyclic_shift():
    w, hourly = _ramp_year()
    shift = 40
    moved = WeatherYear.constant(SITE, dry_bulb=np.roll(hourly, shift * 24))
    a, b = prevailing_mean_series(w), prevailing_mean_series(moved)
    assert np.allclose(np.roll(a, shift), b)
    full = WeatherYear.constant(SITE, dry_bulb=np.roll(hourly, 365 * 24))
    assert np.array_equal(prevailing_mean_series(full), a)


def test_prevailing_mean_rejects_bad_day():
    w = WeatherYear.constant(SITE)
    for bad in (0, 366):
        with pytest.raises(ValueError):
            prevailing_mean_outdoor(w, bad)
