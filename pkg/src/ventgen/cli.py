"""``ventgen`` command line: generate, simulate, sweep, report.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import pathlib
import sys
import tempfile

from . import __version__

log = logging.getLogger("ventgen")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2, 3


_UMASK = os.umask(0)
os.umask(_UMASK)


class UsageError(Exception):
    pass


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def atomic_write(path: pathlib.Path, text: str) -> pathlib.Path:
    """Write via a temp file in the target directory, then rename into place."""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_UMASK)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def parse_orientations(text: str) -> tuple[float, ...]:
    """``start:stop:step`` (stop inclusive) or a comma list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise UsageError("orientation step must be positive")
            values = []
            a = start
            while a <= stop + 1e-9:
                values.append(round(a, 9))
                a += step
        else:
            values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad orientation list {text!r}") from None
    if not values or any(not 0 <= v < 360 for v in values):
        raise UsageError("orientations must be non-empty and lie in [0, 360)")
    return tuple(values)


def parse_strategies(text: str):
    from .control import ControlMode

    try:
        modes = [ControlMode.parse(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not modes:
        raise UsageError("no strategies given")
    return tuple(dict.fromkeys(modes))


def select_climates(config, text: str | None) -> tuple[tuple[str, str], ...]:
    available = config.climate_paths()
    if not text or text == "all":
        return tuple(config.climates)
    chosen = []
    for label in text.split(","):
        label = label.strip()
        if label not in available:
            raise ValidationError(f"unknown climate {label!r}; available: {', '.join(available)}")
        chosen.append((label, available[label]))
    return tuple(chosen)


def load_catalog(path: pathlib.Path):
    from .catalog import catalog_from_json

    try:
        return catalog_from_json(pathlib.Path(path).read_text())
    except FileNotFoundError:
        raise ValidationError(f"catalog not found: {path} (run 'ventgen generate' first)") from None
    except (ValueError, KeyError) as exc:
        raise ValidationError(f"catalog {path} is malformed: {exc}") from None


def select_layouts(entries, text: str | None) -> tuple[str, ...]:
    ids = [e.layout_id for e in entries]
    if not text or text == "all":
        return tuple(ids)
    if text.startswith("first:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad layout selection {text!r}") from None
        return tuple(ids[:n])
    wanted = tuple(x.strip() for x in text.split(",") if x.strip())
    missing = [w for w in wanted if w not in ids]
    if missing:
        raise ValidationError(f"unknown layout ids: {', '.join(missing)}")
    return wanted


# --- commands ----------------------------------------------------------------


def cmd_generate(args, config) -> int:
    from .catalog import CatalogStats, build_catalog, catalog_to_json, features_csv
    from .wfc import WFCSolver, derive_seed, learn_rules, load_tile_document, sample_weights, to_glyphs

    wfc = config.wfc
    count = wfc.solution_count if args.solution_count is None else args.solution_count
    if count < 0:
        raise UsageError("--solution-count must be >= 0")
    tileset, example = load_tile_document(str(config.tiles_path))
    rules = learn_rules(example, len(tileset))
    solutions = []
    for i in range(count):
        weighted = sample_weights(tileset, derive_seed(config.seed, 0, i), wfc.weight_range)
        solver = WFCSolver(weighted, rules, wfc.restart_cap, wfc.border_tile)
        solutions.append(solver.solve(wfc.grid_width, wfc.grid_height, derive_seed(config.seed, 1, i)))
    stats = CatalogStats()
    entries = build_catalog(solutions, tileset, config.catalog, stats)

    out = pathlib.Path(args.out)
    atomic_write(
        out / "solutions.json",
        json.dumps({"tile_names": tileset.names, "solutions": [s.to_dict() for s in solutions]}),
    )
    atomic_write(out / "solutions.txt", "\n\n".join(to_glyphs(s, tileset) for s in solutions) + "\n")
    atomic_write(out / "catalog.json", catalog_to_json(entries, tileset))
    atomic_write(out / "features.csv", features_csv(entries))
    print(f"solutions: {len(solutions)}")
    print(f"raw layouts: {stats.raw}")
    print(f"unique layouts: {stats.unique}")
    print(f"with core: {stats.with_core}")
    print(f"without enclosed voids: {stats.without_void}")
    print(f"filtered ({config.catalog.min_apartments}-{config.catalog.max_apartments} apartments): {stats.in_range}")
    if count == 0:
        log.warning("solution_count is 0; wrote an empty catalog")
    return EXIT_OK


def cmd_simulate(args, config) -> int:
    from .control import ControlMode
    from .metrics import EUI_SCOPE, render_hourly_svg, results_csv, simulate_case, summarize
    from .occupancy import annual_fractions
    from .weather import EPWFormatError, read_epw

    try:
        strategy = ControlMode.parse(args.strategy)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.svg_month is not None and not 1 <= args.svg_month <= 12:
        raise UsageError("--svg-month must be in 1..12")
    orientation = parse_orientations(str(args.orientation))[0]
    entries = {e.layout_id: e for e in load_catalog(args.catalog)}
    if args.layout not in entries:
        raise ValidationError(f"unknown layout {args.layout!r}; available: {', '.join(sorted(entries)) or 'none'}")
    chosen = select_climates(config, args.climate)
    if len(chosen) != 1:
        raise UsageError("simulate takes exactly one climate; use sweep for several")
    (label, epw), = chosen
    try:
        weather = read_epw(epw)
    except (OSError, EPWFormatError) as exc:
        raise ValidationError(f"cannot read weather for {label}: {exc}") from None
    profiles = config.load_profiles()
    fractions = annual_fractions(profiles, config.occupancy.period, config.occupancy.income)
    settings = config.case_settings(not args.pnt_all_hours)
    results = simulate_case(entries[args.layout].layout, orientation, weather, fractions, strategy, settings)
    summary = summarize(results, args.layout, orientation, label, settings.occupancy_weighting)

    out = pathlib.Path(args.out)
    stem = f"{args.layout}_{orientation:g}_{label}_{strategy.label}"
    atomic_write(out / f"{stem}_summary.csv", results_csv([summary]))
    atomic_write(out / f"{stem}_hourly.csv", results.to_csv())
    if args.svg_month is not None:
        atomic_write(out / f"{stem}_month{args.svg_month:02d}.svg", render_hourly_svg(results, args.svg_month))
    print(f"# {EUI_SCOPE}")
    print(
        f"{summary.layout_id} orientation={summary.orientation:g} climate={label} strategy={strategy.label} "
        f"eui={summary.eui:.2f} kWh/m2/yr pnt_adaptive={summary.pnt_adaptive:.1f}% pnt_pmv={summary.pnt_pmv:.1f}% "
        f"cooling_kwh={summary.hvac_cooling_kwh:.0f} heating_kwh={summary.hvac_heating_kwh:.0f} "
        f"lights_equip_kwh={summary.lighting_equipment_kwh:.0f}"
    )
    return EXIT_OK


def cmd_sweep(args, config) -> int:
    from .metrics import EUI_SCOPE, SweepSpec, format_aggregate, run_sweep
    from .occupancy import annual_fractions

    entries = load_catalog(args.catalog)
    layouts = select_layouts(entries, args.layouts)
    if not layouts:
        raise ValidationError("no layouts selected (empty catalog?)")
    spec = SweepSpec(
        layouts=layouts,
        orientations=parse_orientations(args.orientations),
        climates=select_climates(config, args.climates),
        strategies=parse_strategies(args.strategies),
        period=config.occupancy.period,
        income=config.occupancy.income,
        settings=config.case_settings(not args.pnt_all_hours),
    )
    profiles = config.load_profiles()
    fractions = annual_fractions(profiles, spec.period, spec.income)
    jobs = args.jobs if args.jobs is not None else _env_jobs()
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    result = run_sweep(spec, {e.layout_id: e.layout for e in entries}, fractions, jobs)
    atomic_write(pathlib.Path(args.out), result.csv())
    print(f"# {EUI_SCOPE}")
    print(format_aggregate(result.summaries))
    print(f"cases: {spec.size}, ok: {len(result.summaries)}, errors: {len(result.errors)}")
    for err in result.errors[:20]:
        print(f"error: {err.layout_id} {err.orientation:g} {err.climate} {err.strategy.label}: {err.message}", file=sys.stderr)
    if result.errors and not result.summaries:
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_report(args, config) -> int:
    from . import plotting
    from .metrics import aggregate, eui_spread, read_results_csv

    try:
        summaries = read_results_csv(pathlib.Path(args.results).read_text())
    except FileNotFoundError:
        raise ValidationError(f"results file not found: {args.results}") from None
    except (ValueError, KeyError) as exc:
        raise ValidationError(f"results file {args.results} is malformed: {exc}") from None
    if not summaries:
        raise ValidationError("results file has no rows")
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    lines = ["climate,strategy,cases,mean_eui_kwh_m2yr,mean_pnt_adaptive_pct,mean_pnt_pmv_pct,eui_spread"]
    for climate, strategy, eui, pa, pp, n in aggregate(summaries):
        values = [s.eui for s in summaries if s.climate == climate and s.strategy == strategy]
        lines.append(f"{climate},{strategy.label},{n},{eui:.4f},{pa:.4f},{pp:.4f},{eui_spread(values):.6f}")
    atomic_write(out / "aggregate.csv", "\n".join(lines) + "\n")
    figures = [
        plotting.strategy_comparison(summaries, out / "strategy_comparison.png"),
        plotting.orientation_sweep(summaries, out / "orientation_sweep.png"),
        plotting.eui_distribution(summaries, out / "eui_distribution.png"),
    ]
    print("\n".join(lines))
    for fig in figures:
        print(f"wrote {fig}")
    return EXIT_OK


def _env_jobs() -> int:
    raw = os.environ.get("VENTGEN_JOBS", "1")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"VENTGEN_JOBS must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ventgen", description="Generate apartment layouts and compare cooling strategies.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="run configuration JSON (defaults to built-in values)")

    p = sub.add_parser("generate", help="run WFC and build the layout catalog")
    common(p)
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--solution-count", type=int, help="override wfc.solution_count")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="simulate one layout/orientation/climate/strategy")
    common(p)
    p.add_argument("--catalog", default="out/catalog.json")
    p.add_argument("--layout", required=True)
    p.add_argument("--orientation", default="0")
    p.add_argument("--climate", required=True)
    p.add_argument("--strategy", required=True, help="ac, nv or mm")
    p.add_argument("--out", default="out")
    p.add_argument("--svg-month", type=int)
    p.add_argument("--pnt-all-hours", action="store_true", help="count every hour, not only occupied ones")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a layout x orientation x climate x strategy sweep")
    common(p)
    p.add_argument("--catalog", default="out/catalog.json")
    p.add_argument("--layouts", default="all", help="'all', 'first:N' or comma-separated ids")
    p.add_argument("--orientations", default="0:330:30")
    p.add_argument("--climates", default="all")
    p.add_argument("--strategies", default="ac,nv,mm")
    p.add_argument("--jobs", type=int, help="worker processes (default $VENTGEN_JOBS or 1)")
    p.add_argument("--out", default="out/results.csv", help="results CSV path")
    p.add_argument("--pnt-all-hours", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="aggregate a results CSV and render figures")
    common(p)
    p.add_argument("--results", default="out/results.csv")
    p.add_argument("--out", default="out/report")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    from .config import ConfigError, load_config

    try:
        config = load_config(args.config)
        if getattr(args, "seed", None) is not None:
            from dataclasses import replace

            config = replace(config, seed=args.seed)
        return args.func(args, config)
    except UsageError as exc:
        print(f"ventgen: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, ConfigError) as exc:
        print(f"ventgen: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, LookupError) as exc:
        print(f"ventgen: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # pragma: no cover - last-resort guard
        log.debug("runtime failure", exc_info=True)
        print(f"ventgen: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
