"""JSON-over-HTTP facade for the what-if UI.

Local analyst tool: binds loopback by default, no authentication. Requests
evaluate against an immutable model snapshot taken at entry, so a reload
never exposes a half-swapped model. Scenario-set writes go through a single
lock and an atomic file replace. Static UI assets (when configured) are
served from /.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass, field
from decimal import Decimal
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import dsl, export
from .engine import Scenario, evaluate, evaluate_interval
from .errors import DomainViolation, GoalGraphError, ScenarioError, SchemaVersionError
from .functions import Extrapolation, Interpolation, TableFunction
from .model import GoalModel, validate
from .tracking import MeasurementStore, variance_report
from .whatif import ScenarioSet, compare, sweep

CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".map": "application/json; charset=utf-8",
    ".png": "image/png",
    ".ico": "image/x-icon",
}

FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>goalgraph</title></head>
<body><h1>goalgraph API</h1>
<p>No UI bundle configured (start with --ui DIR). Endpoints:</p>
<ul>
<li>GET /api/health, GET /api/model, POST /api/reload</li>
<li>POST /api/evaluate, /api/sweep, /api/compare</li>
<li>GET/PUT /api/scenarios, GET /api/tracking, GET /api/export/dot</li>
</ul></body></html>
"""


@dataclass
class AppState:
    model_path: Path
    scenarios_path: Path
    store_path: Path
    ui_dir: Path | None = None
    model: GoalModel | None = None
    file_scenarios: dict[str, Scenario] = field(default_factory=dict)
    write_lock: threading.Lock = field(default_factory=threading.Lock)

    def load(self) -> list[str]:
        """(Re)parse the model file (plus any scenario sibling); on success
        swap the snapshot atomically. Returns problem strings."""
        result = dsl.parse_path(self.model_path)
        if result.errors:
            return [f"{self.model_path}:{e.span.line}:{e.span.column} "
                    f"{e.code}: {e.message}" for e in result.errors]
        report = validate(result.model)
        if not report.ok:
            return [f"{i.code} at {i.location}: {i.message}" for i in report.errors]
        self.model = result.model
        self.file_scenarios = result.scenarios
        return []

    def scenario_lookup(self) -> dict[str, Scenario]:
        """File scenarios overlaid with the persisted sidecar set."""
        merged = dict(self.file_scenarios)
        tree = self.read_sidecar()
        if tree is not None:
            for entry in tree.get("scenarios", []):
                scenario = export.scenario_from_tree(entry, default_id="unnamed")
                merged[scenario.id] = scenario
        return merged

    def read_sidecar(self) -> dict | None:
        if not self.scenarios_path.exists():
            return None
        try:
            return json.loads(self.scenarios_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None

    def write_sidecar(self, tree: dict) -> None:
        """Last-writer-wins atomic replace, serialized by the write lock."""
        with self.write_lock:
            fd, tmp = tempfile.mkstemp(dir=str(self.scenarios_path.parent),
                                       prefix=self.scenarios_path.name, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(export.dumps(tree))
                os.replace(tmp, self.scenarios_path)
            finally:
                if os.path.exists(tmp):
                    os.unlink(tmp)
            proposals = tree.get("function_proposals") or {}
            if proposals:
                chunks = []
                for link_id in sorted(proposals):
                    spec = proposals[link_id]
                    fn = TableFunction(
                        points=tuple((Decimal(str(x)), Decimal(str(y)))
                                     for x, y in spec["points"]),
                        interpolation=Interpolation(spec.get("interpolation", "linear")),
                        extrapolation=Extrapolation(spec.get("extrapolation", "clamp")),
                        tension=Decimal(str(spec.get("tension", "0.5"))))
                    chunks.append(dsl.serialize_function(f"{link_id}_proposal", fn))
                proposal_path = self.scenarios_path.with_suffix(
                    self.scenarios_path.suffix + ".proposals.goal")
                proposal_path.write_text("\n".join(chunks), encoding="utf-8")


class Handler(BaseHTTPRequestHandler):
    server_version = "goalgraph"
    protocol_version = "HTTP/1.1"

    @property
    def state(self) -> AppState:
        return self.server.app_state  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- plumbing ----------------------------------------------------------

    def send_payload(self, status: int, body: str,
                     content_type: str = "application/json; charset=utf-8") -> None:
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def send_json(self, status: int, tree) -> None:
        self.send_payload(status, export.dumps(tree))

    def send_error_json(self, status: int, code: str, message: str,
                        extra: dict | None = None) -> None:
        tree = {"schema": export.SCHEMA_VERSION, "error": code, "message": message}
        if extra:
            tree.update(extra)
        self.send_json(status, tree)

    def read_body(self) -> dict | None:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            tree = json.loads(raw.decode("utf-8") or "{}")
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self.send_error_json(400, "BAD_JSON", f"request body is not JSON: {exc}")
            return None
        if not isinstance(tree, dict):
            self.send_error_json(400, "BAD_JSON", "request body must be a JSON object")
            return None
        return tree

    def snapshot(self) -> GoalModel | None:
        model = self.state.model
        if model is None:
            self.send_error_json(503, "NO_MODEL", "model not loaded")
        return model

    # -- routes ------------------------------------------------------------

    def do_GET(self):
        path, _, query = self.path.partition("?")
        params = _parse_query(query)
        if path == "/api/health":
            self.send_json(200, {"schema": export.SCHEMA_VERSION, "status": "ok"})
        elif path == "/api/model":
            model = self.snapshot()
            if model is not None:
                self.send_payload(200, export.to_json(model))
        elif path == "/api/scenarios":
            self.get_scenarios()
        elif path == "/api/tracking":
            self.get_tracking(params)
        elif path == "/api/export/dot":
            self.get_dot(params)
        else:
            self.serve_static(path)

    def do_POST(self):
        if self.path == "/api/evaluate":
            self.post_evaluate()
        elif self.path == "/api/sweep":
            self.post_sweep()
        elif self.path == "/api/compare":
            self.post_compare()
        elif self.path == "/api/reload":
            problems = []
            try:
                problems = self.state.load()
            except OSError as exc:
                problems = [str(exc)]
            if problems:
                self.send_error_json(400, "RELOAD_FAILED", "model file rejected",
                                     {"problems": problems})
            else:
                self.send_json(200, {"schema": export.SCHEMA_VERSION, "reloaded": True})
        else:
            self.send_error_json(404, "NOT_FOUND", f"no endpoint {self.path}")

    def do_PUT(self):
        if self.path == "/api/scenarios":
            self.put_scenarios()
        else:
            self.send_error_json(404, "NOT_FOUND", f"no endpoint {self.path}")

    # -- endpoint bodies ----------------------------------------------------

    def post_evaluate(self):
        model = self.snapshot()
        if model is None:
            return
        body = self.read_body()
        if body is None:
            return
        try:
            scenario = export.scenario_from_tree(body)
        except (SchemaVersionError, ValueError, TypeError, KeyError) as exc:
            self.send_error_json(400, "BAD_SCENARIO", f"malformed scenario: {exc}")
            return
        intervals = bool(body.get("intervals", False))
        try:
            result = (evaluate_interval if intervals else evaluate)(model, scenario)
        except ScenarioError as exc:
            self.send_error_json(400, exc.code, str(exc))
            return
        except DomainViolation as exc:
            self.send_error_json(422, exc.code, str(exc), {"detail": exc.detail()})
            return
        self.send_payload(200, export.to_json(result))

    def post_sweep(self):
        model = self.snapshot()
        if model is None:
            return
        body = self.read_body()
        if body is None:
            return
        try:
            scenario = export.scenario_from_tree(body.get("scenario") or {})
            result = sweep(model, scenario, str(body["node"]),
                           float(body["from"]), float(body["to"]),
                           int(body["steps"]))
        except (KeyError, TypeError, ValueError) as exc:
            self.send_error_json(400, "BAD_SWEEP", f"malformed sweep request: {exc}")
            return
        except ScenarioError as exc:
            self.send_error_json(400, exc.code, str(exc))
            return
        except DomainViolation as exc:
            self.send_error_json(422, exc.code, str(exc), {"detail": exc.detail()})
            return
        self.send_payload(200, export.to_json(result))

    def post_compare(self):
        model = self.snapshot()
        if model is None:
            return
        body = self.read_body()
        if body is None:
            return
        try:
            entries = body["scenarios"]
            scenarios = {}
            for entry in entries:
                scenario = export.scenario_from_tree(entry, default_id="unnamed")
                if scenario.id in scenarios:
                    self.send_error_json(409, "NAME_CONFLICT",
                                         f"duplicate scenario name {scenario.id!r}")
                    return
                scenarios[scenario.id] = scenario
            baseline = str(body.get("baseline") or next(iter(scenarios), ""))
            table = compare(model, ScenarioSet(scenarios, baseline))
        except (KeyError, TypeError, ValueError) as exc:
            self.send_error_json(400, "BAD_COMPARE", f"malformed compare request: {exc}")
            return
        except ScenarioError as exc:
            self.send_error_json(400, exc.code, str(exc))
            return
        self.send_payload(200, export.to_json(table))

    def get_scenarios(self):
        tree = self.state.read_sidecar()
        if tree is None:
            scenarios = [export.to_tree(s) for _, s in
                         sorted(self.state.file_scenarios.items())]
            baseline = "base" if "base" in self.state.file_scenarios else \
                (next(iter(self.state.file_scenarios), ""))
            tree = {"schema": export.SCHEMA_VERSION, "kind": "scenario_set",
                    "baseline": baseline, "scenarios": scenarios,
                    "persisted": False}
        self.send_json(200, tree)

    def put_scenarios(self):
        body = self.read_body()
        if body is None:
            return
        if body.get("schema") != export.SCHEMA_VERSION:
            self.send_error_json(400, "SCHEMA_VERSION",
                                 f"unsupported schema {body.get('schema')!r}")
            return
        entries = body.get("scenarios")
        if not isinstance(entries, list):
            self.send_error_json(400, "BAD_SCENARIO_SET",
                                 "scenario set needs a 'scenarios' list")
            return
        names = []
        for entry in entries:
            try:
                scenario = export.scenario_from_tree(entry, default_id="unnamed")
            except (SchemaVersionError, ValueError, TypeError, KeyError) as exc:
                self.send_error_json(400, "BAD_SCENARIO", f"malformed scenario: {exc}")
                return
            if scenario.id in names:
                self.send_error_json(409, "NAME_CONFLICT",
                                     f"duplicate scenario name {scenario.id!r}")
                return
            names.append(scenario.id)
        baseline = body.get("baseline")
        if baseline is not None and baseline not in names:
            self.send_error_json(400, "BAD_SCENARIO_SET",
                                 f"baseline {baseline!r} is not in the set")
            return
        tree = {"schema": export.SCHEMA_VERSION, "kind": "scenario_set",
                "baseline": baseline, "scenarios": entries, "persisted": True}
        if "function_proposals" in body:
            tree["function_proposals"] = body["function_proposals"]
        self.state.write_sidecar(tree)
        self.send_json(200, tree)

    def get_tracking(self, params: dict[str, str]):
        model = self.snapshot()
        if model is None:
            return
        lookup = self.state.scenario_lookup()
        name = params.get("scenario")
        scenario = lookup.get(name or "base") or \
            (next(iter(lookup.values())) if lookup else Scenario(id="default"))
        if name and name not in lookup:
            self.send_error_json(400, "UNKNOWN_SCENARIO", f"no scenario {name!r}")
            return
        store = MeasurementStore(self.state.store_path
                                 if self.state.store_path.exists() else None)
        rows = variance_report(model, store, evaluate(model, scenario))
        self.send_payload(200, export.to_json(rows))

    def get_dot(self, params: dict[str, str]):
        model = self.snapshot()
        if model is None:
            return
        result = None
        name = params.get("scenario")
        if name:
            lookup = self.state.scenario_lookup()
            if name not in lookup:
                self.send_error_json(400, "UNKNOWN_SCENARIO", f"no scenario {name!r}")
                return
            try:
                result = evaluate(model, lookup[name])
            except GoalGraphError as exc:
                self.send_error_json(422, exc.code, str(exc))
                return
        self.send_payload(200, export.to_dot(model, result),
                          content_type="text/vnd.graphviz; charset=utf-8")

    def serve_static(self, path: str):
        if self.state.ui_dir is None:
            if path in ("/", "/index.html"):
                self.send_payload(200, FALLBACK_PAGE,
                                  content_type="text/html; charset=utf-8")
            else:
                self.send_error_json(404, "NOT_FOUND", f"no endpoint {path}")
            return
        rel = path.lstrip("/") or "index.html"
        base = self.state.ui_dir.resolve()
        target = (base / rel).resolve()
        if not str(target).startswith(str(base)) or not target.is_file():
            self.send_error_json(404, "NOT_FOUND", f"no file {path}")
            return
        ctype = CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def _parse_query(query: str) -> dict[str, str]:
    params = {}
    for part in query.split("&"):
        if "=" in part:
            key, _, value = part.partition("=")
            from urllib.parse import unquote_plus

            params[unquote_plus(key)] = unquote_plus(value)
    return params


def make_server(model_path: Path, bind: str = "127.0.0.1", port: int = 0,
                scenarios_path: Path | None = None, store_path: Path | None = None,
                ui_dir: Path | None = None,
                preloaded: tuple[GoalModel, dict[str, Scenario]] | None = None
                ) -> ThreadingHTTPServer:
    state = AppState(
        model_path=model_path,
        scenarios_path=scenarios_path or model_path.with_suffix(".scenarios.json"),
        store_path=store_path or model_path.with_suffix(".measurements.ndjson"),
        ui_dir=ui_dir,
    )
    if preloaded is not None:
        state.model, state.file_scenarios = preloaded
    else:
        problems = state.load()
        if problems:
            raise ScenarioError("model failed to load: " + "; ".join(problems))
    httpd = ThreadingHTTPServer((bind, port), Handler)
    httpd.app_state = state  # type: ignore[attr-defined]
    return httpd


def run_server(model_path: Path, bind: str, port: int, scenarios_path: Path,
               store_path: Path, ui_dir: Path | None,
               announce_json: bool = False) -> None:
    httpd = make_server(model_path, bind, port, scenarios_path, store_path, ui_dir)
    host, actual_port = httpd.server_address[:2]
    if announce_json:
        print(export.dumps({"schema": export.SCHEMA_VERSION, "kind": "serving",
                            "file": str(model_path), "bind": str(host),
                            "port": int(actual_port)}), end="", flush=True)
    else:
        print(f"goalgraph serving {model_path} on http://{host}:{actual_port}/ "
              f"(Ctrl-C to stop)", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
