import xml.etree.ElementTree as ET

import numpy as np
import pytest

from ventgen.catalog import BuildingLayout
from ventgen.control import ControlMode
from ventgen.metrics import (
    J_PER_KWH,
    RESULT_COLUMNS,
    CaseError,
    SweepSpec,
    UndefinedMetricError,
    aggregate,
    compute_eui,
    compute_pnt,
    eui_spread,
    read_results_csv,
    render_hourly_svg,
    results_csv,
    run_sweep,
)
from ventgen.config import data_path
from ventgen.thermal import HourlyResults
from ventgen.weather import calendar_hours

N = 8760


def synthetic(zones=2, floors=1, floor_area=100.0, occupancy=None, **arrays):
    month, day, hour = calendar_hours()
    zero = np.zeros((N, zones))
    fields = dict(
        indoor_temp=np.full((N, zones), 22.0),
        start_temp=np.full((N, zones), 22.0),
        heating=zero.copy(),
        cooling=zero.copy(),
        lights_equip=zero.copy(),
        window_open=np.zeros((N, zones), bool),
        envelope_heat=zero.copy(),
        gains_heat=zero.copy(),
        adaptive_neutral=np.ones((N, zones), bool),
        pmv=zero.copy(),
        pmv_neutral=np.ones((N, zones), bool),
    )
    fields.update(arrays)
    return HourlyResults(
        **fields,
        occupancy=np.ones(N) if occupancy is None else occupancy,
        month=month,
        day=day,
        hour=hour,
        floors=floors,
        floor_area=floor_area,
    )


def test_eui_zero():
    assert compute_eui(synthetic()) == 0.0


def test_eui_arithmetic():
    # 100,000 kWh of lighting/equipment spread over the year on 2,000 m2
    le = np.full((N, 1), 100_000 * J_PER_KWH / N)
    r = synthetic(zones=1, floor_area=2000.0, lights_equip=le)
    assert compute_eui(r) == pytest.approx(50.0)
    assert compute_eui(r, gross_floor_area=1000.0) == pytest.approx(100.0)


def test_eui_three_hour_hand_sum():
    cool = np.zeros((N, 1))
    heat = np.zeros((N, 1))
    le = np.zeros((N, 1))
    cool[:3, 0] = [3.0, 6.0, 0.0]  # kWh thermal
    heat[:3, 0] = [0.0, 0.0, 2.0]
    le[:3, 0] = [1.0, 1.0, 1.0]
    r = synthetic(zones=1, floors=2, floor_area=10.0, cooling=cool * J_PER_KWH, heating=heat * J_PER_KWH,
                  lights_equip=le * J_PER_KWH)
    # per floor: cooling (3+6)/3 = 3, heating 2/1 = 2, lights 3 -> 8 kWh; two floors over 20 m2
    assert compute_eui(r) == pytest.approx(16.0 / 20.0)


def test_eui_additive_over_partitions(rng):
    le = rng.uniform(0, 1e6, (N, 3))
    cool = rng.uniform(0, 1e6, (N, 3))
    whole = compute_eui(synthetic(zones=3, lights_equip=le, cooling=cool))
    cut = rng.integers(1, N - 1)
    first = compute_eui(synthetic(zones=3, lights_equip=np.where(np.arange(N)[:, None] < cut, le, 0),
                                  cooling=np.where(np.arange(N)[:, None] < cut, cool, 0)))
    second = compute_eui(synthetic(zones=3, lights_equip=np.where(np.arange(N)[:, None] >= cut, le, 0),
                                   cooling=np.where(np.arange(N)[:, None] >= cut, cool, 0)))
    assert whole == pytest.approx(first + second, rel=1e-12)


def test_eui_needs_positive_area():
    with pytest.raises(ValueError):
        compute_eui(synthetic(), gross_floor_area=0)


def test_pnt_all_neutral():
    assert compute_pnt(synthetic()) == 100.0


def test_pnt_half():
    flags = np.zeros((N, 2), bool)
    flags[:, 0] = True
    assert compute_pnt(synthetic(adaptive_neutral=flags)) == 50.0


def test_pnt_enumeration_oracle(rng):
    occ = np.zeros(N)
    occ[:24] = [0, 0, 0.5, 1, 1, 0.2, 0, 0, 0.3, 0.3, 0.3, 0, 1, 1, 1, 1, 0, 0, 0.1, 0.1, 0.9, 0.9, 0, 0]
    flags = rng.random((N, 3)) < 0.6
    hits = total = 0
    for h in range(24):
        if occ[h] > 0:
            for z in range(3):
                total += 1
                hits += bool(flags[h, z])
    # keep only the first day occupied
    r = synthetic(zones=3, occupancy=occ, adaptive_neutral=flags)
    assert compute_pnt(r) == pytest.approx(100.0 * hits / total)
    assert compute_pnt(r, occupancy_weighting=False) == pytest.approx(100.0 * flags.mean())


def test_pnt_undefined_without_occupancy():
    with pytest.raises(UndefinedMetricError):
        compute_pnt(synthetic(occupancy=np.zeros(N)))


def test_pnt_bounds_and_area_invariance(rng):
    flags = rng.random((N, 4)) < 0.3
    occ = (rng.random(N) < 0.5).astype(float)
    a = compute_pnt(synthetic(zones=4, occupancy=occ, pmv_neutral=flags), "pmv")
    b = compute_pnt(synthetic(zones=4, floor_area=9000.0, occupancy=occ, pmv_neutral=flags), "pmv")
    assert 0 <= a <= 100 and a == b


def test_pnt_rejects_unknown_model():
    with pytest.raises(ValueError):
        compute_pnt(synthetic(), "set")


def test_spread():
    assert eui_spread([90, 100, 110]) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        eui_spread([])


# --- sweeps -----------------------------------------------------------------


@pytest.fixture(scope="module")
def small_catalog(tileset):
    return {
        "A": BuildingLayout.from_glyphs("nnn\nwKe\nsss", tileset),
        "B": BuildingLayout.from_glyphs("nnnnn\nssKss", tileset),
    }


def climate(label):
    return (label, str(data_path("weather", f"{label}.epw")))


def test_twelve_orientations(small_catalog, fractions):
    spec = SweepSpec(("A",), climates=(climate("phoenix"),), strategies=(ControlMode.AC,))
    out = run_sweep(spec, small_catalog, fractions)
    assert len(out.summaries) == 12 and not out.errors
    assert [s.orientation for s in out.summaries] == [float(a) for a in range(0, 360, 30)]


def test_product_cardinality_and_order(small_catalog, fractions):
    spec = SweepSpec(("B", "A"), orientations=(0.0,), climates=(climate("houston"),))
    out = run_sweep(spec, small_catalog, fractions)
    assert len(out.summaries) == 6
    assert [(s.layout_id, s.strategy) for s in out.summaries] == [
        (lid, m) for lid in ("A", "B") for m in (ControlMode.AC, ControlMode.NV, ControlMode.MM)
    ]
    for s in out.summaries:
        assert 0 <= s.pnt_adaptive <= 100 and 0 <= s.pnt_pmv <= 100


def test_repeat_runs_are_byte_identical(small_catalog, fractions):
    spec = SweepSpec(("A", "B"), orientations=(0.0, 90.0), climates=(climate("atlanta"),),
                     strategies=(ControlMode.MM,))
    assert run_sweep(spec, small_catalog, fractions).csv() == run_sweep(spec, small_catalog, fractions).csv()


def test_failures_recorded_per_case(small_catalog, fractions, tmp_path):
    spec = SweepSpec(
        ("A", "missing"),
        orientations=(0.0, 30.0),
        climates=(climate("houston"), ("nowhere", str(tmp_path / "absent.epw"))),
        strategies=(ControlMode.AC, ControlMode.NV),
    )
    out = run_sweep(spec, small_catalog, fractions)
    assert len(out.summaries) + len(out.errors) == spec.size == 16
    assert len(out.summaries) == 4
    assert all(isinstance(e, CaseError) for e in out.errors)
    assert {e.layout_id for e in out.errors} == {"A", "missing"}


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec((), climates=(climate("houston"),))
    with pytest.raises(ValueError):
        SweepSpec(("A",), orientations=(360.0,), climates=(climate("houston"),))


def test_csv_roundtrip(small_catalog, fractions):
    spec = SweepSpec(("A",), orientations=(0.0, 30.0), climates=(climate("houston"),))
    out = run_sweep(spec, small_catalog, fractions)
    text = out.csv()
    assert text.splitlines()[0] == ",".join(RESULT_COLUMNS)
    again = read_results_csv(text)
    assert results_csv(again) == text
    rows = aggregate(again)
    assert [(c, m) for c, m, *_ in rows] == [("houston", m) for m in ControlMode]
    assert all(n == 2 for *_, n in rows)


# --- SVG --------------------------------------------------------------------


def test_june_grid_well_formed():
    doc = render_hourly_svg(synthetic(), 6)
    root = ET.fromstring(doc)
    ns = {"s": "http://www.w3.org/2000/svg"}
    for panel in ("energy", "comfort"):
        cells = root.findall(f"s:g[@id='{panel}']/s:rect", ns)
        assert len(cells) == 30 * 24
    meta = root.find("s:metadata", ns).text
    assert "0..50" in meta and "0..1" in meta


def test_all_neutral_month_is_uniform():
    root = ET.fromstring(render_hourly_svg(synthetic(), 2))
    ns = {"s": "http://www.w3.org/2000/svg"}
    fills = {r.get("fill") for r in root.findall("s:g[@id='comfort']/s:rect", ns)}
    assert len(fills) == 1
    assert len(root.findall("s:g[@id='comfort']/s:rect", ns)) == 28 * 24


def test_svg_month_checked():
    with pytest.raises(ValueError):
        render_hourly_svg(synthetic(), 13)
