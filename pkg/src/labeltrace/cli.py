"""Command line interface.

Exit codes: 0 success, 2 input or configuration error, 3 empty query.
Machine-readable output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import SynonymTableError
from .config import BuildSettings, ConfigFileError, load_flat_config
from .engine import (
    TraceDBError,
    build_trace_db,
    load_db,
    query_links,
    save_db,
)
from .evaluation import (
    DatasetError,
    MetricsError,
    QueryForm,
    Relevance,
    compute_metrics,
    dataset_stats,
    load_assessments,
    load_dataset,
    render_metrics_table,
)
from .retrieval import EmptyQuery

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY_QUERY = 3


def _fail(message: str, code: int = EXIT_INPUT) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_index(args: argparse.Namespace) -> int:
    values: dict[str, str] = {}
    if args.config:
        try:
            values = load_flat_config(args.config)
        except (OSError, ConfigFileError) as exc:
            return _fail(str(exc))
    for flag in ("locale", "synonyms", "traces", "stop_words", "stemmer"):
        value = getattr(args, flag)
        if value is not None:
            values[flag] = str(value)
    try:
        settings = BuildSettings.from_mapping(values)
    except ConfigFileError as exc:
        return _fail(str(exc))

    traces = settings.traces_path
    try:
        db, report = build_trace_db(
            args.resources_root, args.source_root, traces, settings
        )
    except (OSError, TraceDBError, SynonymTableError) as exc:
        return _fail(str(exc))
    save_db(db, args.out)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(json.dumps(report.to_dict(), sort_keys=True, ensure_ascii=False, indent=2))
    return EXIT_OK


def _format_link_table(links) -> str:
    if not links:
        return "no matching labels"
    lines = []
    for rank, link in enumerate(links, start=1):
        view = link.to_dict()
        flag = "  [dangling: label found, no code element]" if view["dangling"] else ""
        lines.append(
            f"{rank:2}. ({view['score']:.4f}) {view['label_text']}{flag}"
        )
        lines.append(
            f"      key: {view['label_key']}  bundle: {view['resource_file']}"
        )
        for element in view["elements"]:
            where = f":{element['line']}" if element["line"] else ""
            lines.append(
                f"      -> {element['unit_name']} ({element['source_file']}{where}, "
                f"{element['provenance']})"
            )
    return "\n".join(lines)


def cmd_query(args: argparse.Namespace) -> int:
    try:
        db = load_db(args.db)
    except (OSError, TraceDBError) as exc:
        return _fail(str(exc))
    query = " ".join(args.query)
    try:
        links = query_links(db, query, args.k)
    except EmptyQuery as exc:
        return _fail(str(exc), EXIT_EMPTY_QUERY)
    except ValueError as exc:
        return _fail(str(exc))
    if args.format == "json":
        payload = {"query": query, "k": args.k, "links": [l.to_dict() for l in links]}
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2))
    else:
        print(_format_link_table(links))
    return EXIT_OK


def _parse_ks(raw: str) -> list[int]:
    ks = sorted({int(part) for part in raw.split(",") if part.strip()})
    if not ks or any(k < 1 for k in ks):
        raise ValueError(f"invalid k list: {raw!r}")
    return ks


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        db = load_db(args.db)
        items = load_dataset(args.dataset)
        assessments = load_assessments(args.assessments)
        ks = _parse_ks(args.k)
    except (OSError, TraceDBError, DatasetError, ValueError) as exc:
        return _fail(str(exc))

    forms = (
        [QueryForm.SHORT, QueryForm.LONG]
        if args.form == "both"
        else [QueryForm(args.form)]
    )
    depth = max([args.depth, *ks])
    results: dict[str, dict[QueryForm, list[str]]] = {}
    for item in items:
        per_form: dict[QueryForm, list[str]] = {}
        for form in forms:
            try:
                links = query_links(db, item.form(form), depth)
            except EmptyQuery:
                links = []
            per_form[form] = [link.label.key for link in links]
        results[item.id] = per_form

    try:
        report = compute_metrics(
            items,
            results,
            [a for a in assessments if a.query_form in forms],
            ks=ks,
            relevance=Relevance(args.relevance),
            answer_depth=args.depth,
            strict=args.strict,
        )
    except MetricsError as exc:
        return _fail(str(exc))
    report.forms = {f: report.forms[f] for f in forms}

    stats = dataset_stats(items)
    print(
        f"dataset: {stats['items']} items, mean words short={stats['mean_short_words']}"
        f" long={stats['mean_long_words']}",
        file=sys.stderr,
    )
    if args.format == "json":
        print(json.dumps(report.to_dict(), sort_keys=True, ensure_ascii=False, indent=2))
    else:
        print(render_metrics_table(report))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import ServiceConfig, run_service

    host, _, port = args.listen.rpartition(":")
    try:
        config = ServiceConfig(
            db_path=args.db,
            host=host or "127.0.0.1",
            port=int(port),
            dataset_path=args.dataset,
            assessment_log=args.assessments,
            static_root=args.static_root,
            cors_allowed=args.cors,
        )
    except ValueError as exc:
        return _fail(str(exc))
    try:
        run_service(config)
    except (OSError, TraceDBError, DatasetError) as exc:
        return _fail(str(exc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labeltrace",
        description="Trace regulatory text to code through user-interface labels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build and save a traceability database")
    p_index.add_argument("resources_root", type=Path)
    p_index.add_argument("source_root", type=Path)
    p_index.add_argument("--locale", default=None)
    p_index.add_argument("--synonyms", type=Path, default=None)
    p_index.add_argument("--traces", type=Path, default=None)
    p_index.add_argument("--stop-words", dest="stop_words", type=Path, default=None)
    p_index.add_argument("--stemmer", choices=("suffix", "none"), default=None)
    p_index.add_argument("--config", type=Path, default=None)
    p_index.add_argument("--out", type=Path, required=True)
    p_index.set_defaults(func=cmd_index)

    p_query = sub.add_parser("query", help="retrieve traceability links")
    p_query.add_argument("--db", type=Path, required=True)
    p_query.add_argument("--k", type=int, default=20)
    p_query.add_argument("--format", choices=("json", "table"), default="table")
    p_query.add_argument("query", nargs="+")
    p_query.set_defaults(func=cmd_query)

    p_eval = sub.add_parser("eval", help="run the evaluation dataset and print metrics")
    p_eval.add_argument("--db", type=Path, required=True)
    p_eval.add_argument("--dataset", type=Path, required=True)
    p_eval.add_argument("--assessments", type=Path, required=True)
    p_eval.add_argument("--k", default="5,20")
    p_eval.add_argument(
        "--relevance",
        choices=tuple(r.value for r in Relevance),
        default=Relevance.CORRECT_ONLY.value,
    )
    p_eval.add_argument("--form", choices=("short", "long", "both"), default="both")
    p_eval.add_argument("--depth", type=int, default=20)
    p_eval.add_argument("--strict", action="store_true")
    p_eval.add_argument("--format", choices=("json", "table"), default="table")
    p_eval.set_defaults(func=cmd_eval)

    p_serve = sub.add_parser("serve", help="expose the database over HTTP")
    p_serve.add_argument("--db", type=Path, required=True)
    p_serve.add_argument("--listen", default="127.0.0.1:8765")
    p_serve.add_argument("--dataset", type=Path, default=None)
    p_serve.add_argument(
        "--assessments", type=Path, default=Path("assessments.jsonl")
    )
    p_serve.add_argument("--static-root", dest="static_root", type=Path, default=None)
    p_serve.add_argument("--cors", action="store_true")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
