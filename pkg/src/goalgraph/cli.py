"""Command-line front end.

Machine output goes to stdout, diagnostics to stderr. Exit codes: 0 on
success, 1 on validation/evaluation errors, 2 on usage errors. Every
reporting command accepts --json for canonical JSON output.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import dsl, export, tracking, whatif
from .engine import (
    OrPolicy,
    Scenario,
    ScenarioOptions,
    evaluate,
    evaluate_interval,
)
from .errors import GoalGraphError
from .model import GoalModel, validate
from .whatif import ScenarioSet

PARSE_EXIT = 1
USAGE_EXIT = 2


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except GoalGraphError as exc:
        where = f" at {exc.location}" if exc.location else ""
        print(f"error {exc.code}{where}: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalgraph",
        description="Quantified goal graphs: validate, evaluate, explore.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a .goal file for well-formedness")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("eval", help="evaluate a scenario")
    p.add_argument("file")
    p.add_argument("--scenario")
    p.add_argument("--no-confidence", action="store_true",
                   help="disable confidence adjustment")
    p.add_argument("--or", dest="or_policy", choices=["strict", "best"],
                   help="unselected OR groups: indeterminate (strict) or best pick")
    p.add_argument("--intervals", action="store_true",
                   help="propagate interval estimates as [lo, hi] bounds")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("compare", help="tabulate scenarios against a baseline")
    p.add_argument("file")
    p.add_argument("--scenarios", required=True,
                   help="comma-separated scenario names; first is the baseline")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("sweep", help="vary one node across a range")
    p.add_argument("file")
    p.add_argument("--node", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--scenario")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("render", help="emit a DOT diagram")
    p.add_argument("file")
    p.add_argument("--result", action="store_true",
                   help="color nodes by the evaluated scenario's statuses")
    p.add_argument("--scenario")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_render)

    p = sub.add_parser("report", help="link-contribution and status tables")
    p.add_argument("file")
    p.add_argument("--scenario")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("track", help="record measurements / variance report")
    track_sub = p.add_subparsers(dest="track_command", required=True)
    pr = track_sub.add_parser("record", help="append one measurement")
    pr.add_argument("file")
    pr.add_argument("--objective", required=True)
    pr.add_argument("--value", required=True)
    pr.add_argument("--timestamp", help="ISO-8601 UTC; defaults to now")
    pr.add_argument("--store", help="measurement file (default: <file>.measurements.ndjson)")
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(handler=cmd_track_record)
    pv = track_sub.add_parser("report", help="predicted vs. actual variance")
    pv.add_argument("file")
    pv.add_argument("--scenario")
    pv.add_argument("--store")
    pv.add_argument("--json", action="store_true")
    pv.set_defaults(handler=cmd_track_report)

    p = sub.add_parser("library", help="search past-project goal files")
    lib_sub = p.add_subparsers(dest="library_command", required=True)
    ps = lib_sub.add_parser("search", help="full-text search over library/*.goal")
    ps.add_argument("term")
    ps.add_argument("--dir", default="library")
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(handler=cmd_library_search)

    p = sub.add_parser("serve", help="serve the JSON API and what-if UI")
    p.add_argument("file")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("GOALGRAPH_PORT", "8080")))
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--scenarios", help="scenario sidecar path "
                   "(default: <file>.scenarios.json)")
    p.add_argument("--store", help="measurement file")
    p.add_argument("--ui", help="directory of built UI assets to serve at /")
    p.add_argument("--json", action="store_true",
                   help="announce the bound address as JSON")
    p.set_defaults(handler=cmd_serve)
    return parser


def load_model(path_text: str) -> tuple[GoalModel, dict[str, Scenario]]:
    """Parse and validate, printing diagnostics; raises SystemExit(1) on
    parse or validation errors."""
    path = Path(path_text)
    if not path.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        raise SystemExit(PARSE_EXIT)
    result = dsl.parse_path(path)
    if result.errors:
        for e in result.errors:
            print(f"{path}:{e.span.line}:{e.span.column}: error {e.code}: "
                  f"{e.message} (expected {e.expected or '?'}, found {e.found!r})",
                  file=sys.stderr)
        raise SystemExit(PARSE_EXIT)
    report = validate(result.model)
    for issue in report.warnings:
        print(f"warning {issue.code} at {issue.location}: {issue.message}",
              file=sys.stderr)
    if not report.ok:
        for issue in report.errors:
            print(f"error {issue.code} at {issue.location}: {issue.message}",
                  file=sys.stderr)
        raise SystemExit(PARSE_EXIT)
    return result.model, result.scenarios


def pick_scenario(scenarios: dict[str, Scenario], name: str | None,
                  args=None) -> Scenario:
    if name is not None:
        if name not in scenarios:
            print(f"error: no scenario {name!r} in file "
                  f"(have: {', '.join(scenarios) or 'none'})", file=sys.stderr)
            raise SystemExit(PARSE_EXIT)
        scenario = scenarios[name]
    elif "base" in scenarios:
        scenario = scenarios["base"]
    elif scenarios:
        scenario = next(iter(scenarios.values()))
    else:
        scenario = Scenario(id="default")
    if args is not None:
        options = scenario.options
        if getattr(args, "no_confidence", False):
            options = ScenarioOptions(False, options.single_point_proration,
                                      options.or_policy)
        if getattr(args, "or_policy", None):
            options = ScenarioOptions(options.confidence_adjust,
                                      options.single_point_proration,
                                      OrPolicy(args.or_policy))
        if options is not scenario.options:
            scenario = Scenario(scenario.id, scenario.requirement_levels,
                                scenario.or_selections, scenario.confidence_override,
                                options)
    return scenario


def cmd_validate(args) -> int:
    path = Path(args.file)
    if not path.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        return PARSE_EXIT
    result = dsl.parse_bytes(path.read_bytes())
    if result.errors:
        for e in result.errors:
            print(f"{path}:{e.span.line}:{e.span.column}: error {e.code}: "
                  f"{e.message}")
        print(f"{len(result.errors)} parse error(s)")
        return PARSE_EXIT
    report = validate(result.model)
    if args.json:
        sys.stdout.write(export.to_json(report))
        return 0 if report.ok else PARSE_EXIT
    for issue in report.issues:
        print(f"{issue.severity.value} {issue.code} at {issue.location}: {issue.message}")
    print(f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)")
    return 0 if report.ok else PARSE_EXIT


def cmd_eval(args) -> int:
    model, scenarios = load_model(args.file)
    scenario = pick_scenario(scenarios, args.scenario, args)
    result = (evaluate_interval if args.intervals else evaluate)(model, scenario)
    if args.json:
        sys.stdout.write(export.to_json(result))
        return 0
    adjust = "on" if result.confidence_adjusted else "off"
    print(f"scenario: {result.scenario_id} (confidence adjustment {adjust})")
    print()
    rows = [("objective", "achieved", "target", "threshold", "status")]
    for obj_id in sorted(model.objectives):
        outcome = result.outcomes[obj_id]
        mag = model.objectives[obj_id].magnitude
        achieved = "-" if outcome.achieved is None else _fmt(outcome.achieved)
        if result.intervals is not None and obj_id in result.intervals:
            iv = result.intervals[obj_id]
            achieved += f" [{_fmt(iv.lo)}, {_fmt(iv.hi)}]"
        rows.append((obj_id, achieved, _fmt(float(mag.target)),
                     _fmt(float(mag.threshold)), outcome.status.value))
    _print_table(rows)
    print()
    for root_id in sorted(result.root_utilities):
        print(f"utility {root_id}: {result.root_utilities[root_id]:.4f}")
    total = "-" if result.total_utility is None else f"{result.total_utility:.4f}"
    print(f"total utility: {total}")
    if result.audit_flags:
        print()
        for flag in result.audit_flags:
            print(f"flag {flag.code} at {flag.location}: {flag.message}")
    if result.confidence_adjusted:
        print()
        print(f"note: {result.note}")
    return 0


def cmd_compare(args) -> int:
    model, scenarios = load_model(args.file)
    names = [n.strip() for n in args.scenarios.split(",") if n.strip()]
    missing = [n for n in names if n not in scenarios]
    if not names or missing:
        print(f"error: unknown scenario(s): {', '.join(missing) or '(none given)'}",
              file=sys.stderr)
        return PARSE_EXIT
    table = whatif.compare(model, ScenarioSet(
        {n: scenarios[n] for n in names}, baseline=names[0]))
    if args.json:
        sys.stdout.write(export.to_json(table))
    else:
        sys.stdout.write(export.comparison_to_csv(table) if args.csv
                         else _comparison_text(table))
    return 0


def _comparison_text(table) -> str:
    rows = [("row",) + table.columns]
    for row in table.rows:
        cells = [row]
        for col in table.columns:
            cell = table.cells[row, col]
            if cell.achieved is None:
                cells.append(table.column_errors.get(col, "-"))
                continue
            text = _fmt(cell.achieved)
            if cell.status is not None:
                text += f" ({cell.status.value})"
            if cell.delta is not None and col != table.baseline:
                text += f" [{cell.delta:+g}]"
            cells.append(text)
        rows.append(tuple(cells))
    out = []
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(out) + "\n"


def cmd_sweep(args) -> int:
    model, scenarios = load_model(args.file)
    scenario = pick_scenario(scenarios, args.scenario, args)
    try:
        result = whatif.sweep(model, scenario, args.node, args.start, args.stop,
                              args.steps)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    if args.json:
        sys.stdout.write(export.to_json(result))
        return 0
    roots_order = sorted(result.samples[0].root_achieved) if result.samples else []
    rows = [("level",) + tuple(roots_order) + ("total_utility",)]
    for s in result.samples:
        cells = [_fmt(s.level)]
        for r in roots_order:
            achieved = s.root_achieved[r]
            text = "-" if achieved is None else _fmt(achieved)
            cells.append(f"{text} ({s.root_status[r].value})")
        cells.append("-" if s.total_utility is None else f"{s.total_utility:.4f}")
        rows.append(tuple(cells))
    _print_table(rows)
    return 0


def cmd_render(args) -> int:
    model, scenarios = load_model(args.file)
    result = None
    if args.result or args.scenario:
        scenario = pick_scenario(scenarios, args.scenario, args)
        result = evaluate(model, scenario)
    dot = export.to_dot(model, result)
    if args.json:
        payload = export.dumps({"schema": export.SCHEMA_VERSION, "kind": "dot",
                                "dot": dot})
        _write_output(args.output, payload)
        return 0
    _write_output(args.output, dot)
    return 0


def _write_output(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_report(args) -> int:
    model, scenarios = load_model(args.file)
    scenario = pick_scenario(scenarios, args.scenario, args)
    result = evaluate(model, scenario)
    fmt = "csv" if args.csv else "markdown"
    text = export.report(model, result, fmt)
    if args.json:
        sys.stdout.write(export.dumps({"schema": export.SCHEMA_VERSION,
                                       "kind": "report", "format": fmt,
                                       "scenario": result.scenario_id,
                                       "text": text}))
        return 0
    sys.stdout.write(text)
    return 0


def _store_path(args) -> Path:
    if args.store:
        return Path(args.store)
    return Path(args.file).with_suffix(".measurements.ndjson")


def cmd_track_record(args) -> int:
    model, _ = load_model(args.file)
    store = tracking.MeasurementStore(_store_path(args))
    from datetime import datetime, timezone

    ts = args.timestamp or datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    m = tracking.measurement(args.objective, ts, args.value)
    store.record(model, m)
    if args.json:
        sys.stdout.write(export.dumps({
            "schema": export.SCHEMA_VERSION, "kind": "tracking_record",
            "objective": m.objective_id,
            "timestamp": m.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "value": m.value, "series_length": len(store.series(m.objective_id))}))
        return 0
    print(f"recorded {m.objective_id} = {m.value} at "
          f"{m.timestamp.strftime('%Y-%m-%dT%H:%M:%SZ')} "
          f"(series length {len(store.series(m.objective_id))})")
    return 0


def cmd_track_report(args) -> int:
    model, scenarios = load_model(args.file)
    scenario = pick_scenario(scenarios, args.scenario, args)
    store = tracking.MeasurementStore(_store_path(args))
    result = evaluate(model, scenario)
    rows = tracking.variance_report(model, store, result)
    if args.json:
        sys.stdout.write(export.to_json(rows))
        return 0
    table = [("objective", "predicted", "actual", "gap", "verdict", "timeframe")]
    for r in rows:
        table.append((r.objective_id,
                      "-" if r.predicted is None else _fmt(r.predicted),
                      "-" if r.actual is None else _fmt(r.actual),
                      "-" if r.gap is None else _fmt(r.gap),
                      r.verdict, r.timeframe or "-"))
    _print_table(table)
    return 0


def cmd_library_search(args) -> int:
    base = Path(args.dir)
    term = args.term.lower()
    matches = []
    if base.is_dir():
        for path in sorted(base.glob("*.goal")):
            for line_no, line in enumerate(path.read_text(encoding="utf-8",
                                                          errors="replace").splitlines(), 1):
                if term in line.lower():
                    matches.append((str(path), line_no, line.strip()))
    if args.json:
        sys.stdout.write(export.dumps({
            "schema": export.SCHEMA_VERSION, "kind": "library_matches",
            "term": args.term,
            "matches": [{"file": f, "line": n, "text": t} for f, n, t in matches]}))
        return 0
    for f, n, t in matches:
        print(f"{f}:{n}: {t}")
    print(f"{len(matches)} match(es)")
    return 0


def cmd_serve(args) -> int:
    from .server import run_server

    load_model(args.file)  # fail fast with diagnostics before binding
    sidecar = Path(args.scenarios) if args.scenarios else \
        Path(args.file).with_suffix(".scenarios.json")
    store = Path(args.store) if args.store else \
        Path(args.file).with_suffix(".measurements.ndjson")
    ui_dir = Path(args.ui) if args.ui else None
    run_server(Path(args.file), bind=args.bind, port=args.port,
               scenarios_path=sidecar, store_path=store, ui_dir=ui_dir,
               announce_json=args.json)
    return 0


def _fmt(x: float) -> str:
    s = f"{float(x):.10g}"
    return "0" if s == "-0" else s


def _print_table(rows: list[tuple[str, ...]]) -> None:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())


if __name__ == "__main__":
    sys.exit(main())
