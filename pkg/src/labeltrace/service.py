"""JSON-over-HTTP service around an immutable trace database.

The database is loaded once and shared read-only across request threads;
the assessment log is the only mutable state and all writes to it are
serialized behind a lock. Endpoints:

* ``GET /api/query?q=<text>&k=<int>`` ranked traceability links
* ``GET /api/items`` evaluation dataset items
* ``POST /api/assessments`` append one rating
* ``GET /api/metrics?k=5,20&relevance=...&form=...&depth=20`` metrics
* ``GET /`` static assets of the web client, when configured
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .engine import TraceDB, load_db, query_links
from .evaluation import (
    Assessment,
    QueryForm,
    Rating,
    Relevance,
    compute_metrics,
    load_assessments,
    load_dataset,
    record_assessment,
)
from .retrieval import EmptyQuery

_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>labeltrace</title></head>
<body><h1>labeltrace service</h1>
<p>No web client assets are configured. The JSON API is live:</p>
<ul>
<li><code>GET /api/query?q=&lt;text&gt;&amp;k=&lt;int&gt;</code></li>
<li><code>GET /api/items</code></li>
<li><code>POST /api/assessments</code></li>
<li><code>GET /api/metrics?k=5,20&amp;relevance=correct</code></li>
</ul></body></html>
"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


@dataclass
class ServiceConfig:
    db_path: str | Path
    host: str = "127.0.0.1"
    port: int = 8765
    dataset_path: str | Path | None = None
    assessment_log: str | Path = "assessments.jsonl"
    static_root: str | Path | None = None
    cors_allowed: bool = False


class TraceService(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.db: TraceDB = load_db(config.db_path)
        self.items = (
            load_dataset(config.dataset_path) if config.dataset_path else None
        )
        self.assessment_lock = threading.Lock()
        super().__init__((config.host, config.port), _Handler)

    @property
    def address(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


class _Handler(BaseHTTPRequestHandler):
    server: TraceService
    protocol_version = "HTTP/1.1"

    def log_message(self, format: str, *args) -> None:  # quiet by default
        pass

    # -- plumbing ----------------------------------------------------------

    def _headers(self, status: int, content_type: str, length: int) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(length))
        if self.server.config.cors_allowed:
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True, ensure_ascii=False).encode("utf-8")
        self._headers(status, "application/json", len(body))
        self.wfile.write(body)

    def _send_error_json(self, status: int, code: str, message: str) -> None:
        self._send_json(status, {"error": {"code": code, "message": message}})

    def _read_body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length else b""

    # -- routing -----------------------------------------------------------

    def do_OPTIONS(self) -> None:
        self._headers(204, "text/plain", 0)

    def do_GET(self) -> None:
        url = urlparse(self.path)
        query = parse_qs(url.query)
        try:
            if url.path == "/api/query":
                self._handle_query(query)
            elif url.path == "/api/items":
                self._handle_items()
            elif url.path == "/api/metrics":
                self._handle_metrics(query)
            elif url.path.startswith("/api/"):
                self._send_error_json(404, "not_found", f"no such endpoint: {url.path}")
            else:
                self._handle_static(url.path)
        except Exception as exc:  # keep the thread alive, report the failure
            self._send_error_json(500, "internal_error", str(exc))

    def do_POST(self) -> None:
        url = urlparse(self.path)
        try:
            if url.path == "/api/assessments":
                self._handle_post_assessment()
            else:
                self._send_error_json(404, "not_found", f"no such endpoint: {url.path}")
        except Exception as exc:
            self._send_error_json(500, "internal_error", str(exc))

    # -- endpoints ----------------------------------------------------------

    def _handle_query(self, query: dict) -> None:
        text = (query.get("q") or [""])[0]
        try:
            k = int((query.get("k") or ["20"])[0])
            if k < 1:
                raise ValueError
        except ValueError:
            self._send_error_json(400, "bad_request", "k must be a positive integer")
            return
        try:
            links = query_links(self.server.db, text, k)
        except EmptyQuery:
            self._send_error_json(
                400, "empty_query", "query has no searchable terms"
            )
            return
        self._send_json(
            200, {"query": text, "k": k, "links": [l.to_dict() for l in links]}
        )

    def _handle_items(self) -> None:
        if self.server.items is None:
            self._send_error_json(404, "no_dataset", "no dataset configured")
            return
        self._send_json(
            200,
            {
                "items": [
                    {"id": i.id, "short": i.short_form, "long": i.long_form}
                    for i in self.server.items
                ]
            },
        )

    def _handle_metrics(self, query: dict) -> None:
        if self.server.items is None:
            self._send_error_json(404, "no_dataset", "no dataset configured")
            return
        try:
            ks = sorted(
                {
                    int(part)
                    for part in (query.get("k") or ["5,20"])[0].split(",")
                    if part.strip()
                }
            )
            depth = int((query.get("depth") or ["20"])[0])
            relevance = Relevance((query.get("relevance") or ["correct"])[0])
            form_arg = (query.get("form") or ["both"])[0]
            if not ks or any(k < 1 for k in ks) or depth < 1:
                raise ValueError("k and depth must be positive")
            forms = (
                [QueryForm.SHORT, QueryForm.LONG]
                if form_arg == "both"
                else [QueryForm(form_arg)]
            )
        except ValueError as exc:
            self._send_error_json(400, "bad_request", f"bad parameter ({exc})")
            return

        run_depth = max([depth, *ks])
        results: dict[str, dict[QueryForm, list[str]]] = {}
        for item in self.server.items:
            per_form = {}
            for form in forms:
                try:
                    links = query_links(self.server.db, item.form(form), run_depth)
                except EmptyQuery:
                    links = []
                per_form[form] = [link.label.key for link in links]
            results[item.id] = per_form
        assessments = [
            a
            for a in load_assessments(self.server.config.assessment_log)
            if a.query_form in forms
        ]
        report = compute_metrics(
            self.server.items,
            results,
            assessments,
            ks=ks,
            relevance=relevance,
            answer_depth=depth,
        )
        report.forms = {f: report.forms[f] for f in forms}
        self._send_json(200, report.to_dict())

    def _handle_post_assessment(self) -> None:
        if self.server.items is None:
            self._send_error_json(404, "no_dataset", "no dataset configured")
            return
        try:
            data = json.loads(self._read_body().decode("utf-8"))
            if not isinstance(data, dict):
                raise ValueError("body must be a JSON object")
            assessment = Assessment(
                item_id=str(data["item_id"]),
                query_form=QueryForm(data["form"]),
                label_key=str(data["label_key"]),
                rank=int(data["rank"]),
                rating=Rating(data["rating"]),
                assessed_at=datetime.now(timezone.utc).isoformat(),
            )
            if assessment.rank < 1:
                raise ValueError("rank must be >= 1")
        except (ValueError, KeyError, UnicodeDecodeError) as exc:
            self._send_error_json(400, "malformed_body", f"bad assessment ({exc})")
            return
        if assessment.item_id not in {i.id for i in self.server.items}:
            self._send_error_json(
                404, "unknown_item", f"unknown item {assessment.item_id!r}"
            )
            return
        with self.server.assessment_lock:
            record_assessment(self.server.config.assessment_log, assessment)
        self._send_json(201, {"assessment": assessment.to_dict()})

    def _handle_static(self, path: str) -> None:
        root = self.server.config.static_root
        if path == "/":
            path = "/index.html"
        if root is not None:
            root = Path(root)
            candidate = (root / path.lstrip("/")).resolve()
            if candidate.is_file() and str(candidate).startswith(str(root.resolve())):
                body = candidate.read_bytes()
                content_type = _CONTENT_TYPES.get(
                    candidate.suffix, "application/octet-stream"
                )
                self._headers(200, content_type, len(body))
                self.wfile.write(body)
                return
        if path == "/index.html":
            body = _PLACEHOLDER_PAGE.encode("utf-8")
            self._headers(200, "text/html; charset=utf-8", len(body))
            self.wfile.write(body)
            return
        self._send_error_json(404, "not_found", f"no such path: {path}")


def run_service(config: ServiceConfig) -> None:
    server = TraceService(config)
    print(f"labeltrace service listening on {server.address}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
