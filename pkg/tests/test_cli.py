import csv
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from ventgen.cli import UsageError, main, parse_orientations


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    out = tmp_path_factory.mktemp("gen")
    assert main(["generate", "--out", str(out), "--solution-count", "6"]) == 0
    return out


def first_layout(out):
    return json.loads((out / "catalog.json").read_text())["layouts"][0]["layout_id"]


def test_generate_writes_outputs(generated, capsys):
    for name in ("solutions.json", "solutions.txt", "catalog.json", "features.csv"):
        assert (generated / name).exists()
    doc = json.loads((generated / "solutions.json").read_text())
    assert len(doc["solutions"]) == 6
    rows = list(csv.reader(open(generated / "features.csv")))
    assert len(rows) == 1 + len(json.loads((generated / "catalog.json").read_text())["layouts"])


def test_generate_is_deterministic(generated, tmp_path):
    assert main(["generate", "--out", str(tmp_path), "--solution-count", "6"]) == 0
    for name in ("solutions.json", "catalog.json", "features.csv"):
        assert (tmp_path / name).read_bytes() == (generated / name).read_bytes()


def test_generate_zero_solutions(tmp_path, caplog):
    assert main(["generate", "--out", str(tmp_path), "--solution-count", "0"]) == 0
    assert json.loads((tmp_path / "catalog.json").read_text())["layouts"] == []
    assert "empty catalog" in caplog.text


def test_seed_changes_output(generated, tmp_path):
    assert main(["generate", "--out", str(tmp_path), "--solution-count", "6", "--seed", "7"]) == 0
    assert (tmp_path / "solutions.json").read_bytes() != (generated / "solutions.json").read_bytes()


def test_simulate_nv_has_no_cooling(generated, tmp_path, capsys):
    lid = first_layout(generated)
    code = main(["simulate", "--catalog", str(generated / "catalog.json"), "--layout", lid, "--climate", "phoenix",
                 "--strategy", "nv", "--out", str(tmp_path), "--svg-month", "6"])
    assert code == 0
    (summary,) = tmp_path.glob("*_summary.csv")
    (row,) = list(csv.DictReader(open(summary)))
    assert float(row["cooling_kwh"]) == 0.0 and float(row["heating_kwh"]) == 0.0
    (svg,) = tmp_path.glob("*_month06.svg")
    ET.parse(svg)
    assert len(list(tmp_path.glob("*_hourly.csv"))) == 1
    assert "cooling_kwh=0" in capsys.readouterr().out


def test_simulate_invalid_strategy_is_usage_error(generated):
    lid = first_layout(generated)
    assert main(["simulate", "--catalog", str(generated / "catalog.json"), "--layout", lid, "--climate", "phoenix",
                 "--strategy", "fan"]) == 1


def test_simulate_unknown_layout_lists_ids(generated, capsys):
    code = main(["simulate", "--catalog", str(generated / "catalog.json"), "--layout", "nope", "--climate", "phoenix",
                 "--strategy", "ac"])
    assert code == 2
    assert first_layout(generated) in capsys.readouterr().err


def test_simulate_one_climate_only(generated):
    lid = first_layout(generated)
    assert main(["simulate", "--catalog", str(generated / "catalog.json"), "--layout", lid, "--climate", "all",
                 "--strategy", "ac"]) == 1


def test_missing_catalog(tmp_path):
    assert main(["sweep", "--catalog", str(tmp_path / "none.json")]) == 2


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as err:
        main(["explode"])
    assert err.value.code == 1


def test_orientation_parsing():
    assert parse_orientations("0:330:30") == tuple(float(a) for a in range(0, 360, 30))
    assert parse_orientations("0,45,90") == (0.0, 45.0, 90.0)
    for bad in ("0:360:30", "x", "0:90:0", ""):
        with pytest.raises(UsageError):
            parse_orientations(bad)


def test_sweep_jobs_identical_and_report(generated, tmp_path, capsys):
    cat = str(generated / "catalog.json")
    args = ["sweep", "--catalog", cat, "--layouts", "first:2", "--orientations", "0,90", "--climates",
            "houston,phoenix", "--strategies", "ac,nv,mm"]
    assert main(args + ["--jobs", "1", "--out", str(tmp_path / "a.csv")]) == 0
    assert main(args + ["--jobs", "3", "--out", str(tmp_path / "b.csv")]) == 0
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    assert len(a.decode().splitlines()) == 1 + 2 * 2 * 2 * 3
    table = capsys.readouterr().out
    assert "houston" in table and "phoenix" in table

    assert main(["report", "--results", str(tmp_path / "a.csv"), "--out", str(tmp_path / "rep")]) == 0
    for name in ("aggregate.csv", "strategy_comparison.png", "orientation_sweep.png", "eui_distribution.png"):
        assert (tmp_path / "rep" / name).stat().st_size > 0
    assert (tmp_path / "rep" / "strategy_comparison.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_report_missing_results(tmp_path):
    assert main(["report", "--results", str(tmp_path / "none.csv"), "--out", str(tmp_path)]) == 2


def test_bad_config_is_validation_error(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"wfc": {"grid_width": 10, "bogus": 1}}))
    assert main(["generate", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_bundled_example_config_loads(tmp_path):
    from ventgen.config import data_path

    assert main(["generate", "--config", str(data_path("example_config.json")), "--out", str(tmp_path),
                 "--solution-count", "1"]) == 0


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ventgen.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "ventgen" in proc.stdout
