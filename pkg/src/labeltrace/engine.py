"""End-to-end pipeline: offline database build, online link retrieval.

Offline, the resource tree and the source tree are scanned into a
:class:`TraceDB` (labels, usage map, search index). Online, a natural
language query is matched against label texts and each hit is expanded
with the code elements that use the label's key. Hits whose key has no
known usage stay in the ranking, flagged as dangling: deciding whether
such a label is dead is the caller's judgment call.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .analysis import (
    AnalyzerConfig,
    StemmerKind,
    default_stop_words,
    load_stop_words,
    load_synonym_table,
)
from .bundles import LabelEntry, LabelStore, scan_resources
from .codescan import (
    CodeElement,
    UsageMap,
    find_dead_labels,
    ingest_trace_log,
    merge_usages,
    resolve_static_usages,
)
from .config import BuildSettings, ScanConfig
from .retrieval import Index, analyzer_fingerprint, build_index, search

DB_FORMAT_VERSION = 1


class TraceDBError(Exception):
    pass


class VersionMismatch(TraceDBError):
    pass


class CorruptFile(TraceDBError):
    pass


@dataclass
class BuildReport:
    labels: int = 0
    labels_by_locale: dict[str, int] = field(default_factory=dict)
    indexed_documents: int = 0
    locale: str = ""
    static_links: int = 0
    dynamic_links: int = 0
    dead_label_candidates: list[str] = field(default_factory=list)
    duplicates: int = 0
    unknown_trace_keys: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "labels": self.labels,
            "labels_by_locale": dict(sorted(self.labels_by_locale.items())),
            "indexed_documents": self.indexed_documents,
            "locale": self.locale,
            "static_links": self.static_links,
            "dynamic_links": self.dynamic_links,
            "dead_label_candidates": self.dead_label_candidates,
            "duplicates": self.duplicates,
            "unknown_trace_keys": self.unknown_trace_keys,
            "warnings": self.warnings,
        }


@dataclass
class TraceDB:
    store: LabelStore
    usage: UsageMap
    index: Index
    built_at: str
    config_fingerprint: str

    def label_for_key(self, key: str) -> LabelEntry | None:
        for entry in self.store.entries:
            if entry.key == key and entry.locale == self.index.locale:
                return entry
        return None


@dataclass(frozen=True)
class TraceabilityLink:
    query: str
    label: LabelEntry
    score: float
    elements: tuple[CodeElement, ...]
    dangling: bool
    provenances: tuple[str, ...]
    matched_terms: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "label_key": self.label.key,
            "label_text": self.label.text,
            "locale": self.label.locale,
            "resource_file": self.label.source_file,
            "line": self.label.line,
            "score": self.score,
            "dangling": self.dangling,
            "matched_terms": list(self.matched_terms),
            "elements": [
                {
                    "source_file": e.source_file,
                    "unit_name": e.unit_name,
                    "line": e.line,
                    "provenance": p,
                }
                for e, p in zip(self.elements, self.provenances)
            ],
        }


def analyzer_from_settings(settings: BuildSettings) -> AnalyzerConfig:
    language = settings.locale.split("-")[0]
    if settings.stop_words_path:
        stop_words = load_stop_words(settings.stop_words_path)
    else:
        stop_words = default_stop_words(language)
    synonyms = (
        load_synonym_table(settings.synonyms_path) if settings.synonyms_path else None
    )
    stemmer = (
        StemmerKind.SUFFIX_STRIPPING
        if settings.stemmer == "suffix"
        else StemmerKind.NONE
    )
    return AnalyzerConfig.create(
        language=language,
        stop_words=stop_words,
        stemmer=stemmer,
        synonyms=synonyms,
    )


def build_trace_db(
    resources_root: str | Path,
    source_root: str | Path,
    trace_log: str | Path | None = None,
    settings: BuildSettings | None = None,
    analyzer: AnalyzerConfig | None = None,
) -> tuple[TraceDB, BuildReport]:
    """Run the offline phase and return the database plus its report.

    Fails when the chosen locale has no labels at all: an empty index has
    nothing to trace.
    """
    settings = settings or BuildSettings()
    scan: ScanConfig = settings.scan
    analyzer = analyzer or analyzer_from_settings(settings)

    store = scan_resources(resources_root, scan)
    locale_entries = store.entries_for_locale(settings.locale)
    if not locale_entries:
        raise TraceDBError(
            f"zero labels found for locale {settings.locale!r} under {resources_root}"
        )

    static = resolve_static_usages(store, source_root, scan)
    records = []
    trace_errors = []
    if trace_log is not None:
        records, trace_errors = ingest_trace_log(Path(trace_log).read_text("utf-8"))
    usage = merge_usages(static, records)

    index = build_index(store, settings.locale, analyzer)
    db = TraceDB(
        store=store,
        usage=usage,
        index=index,
        built_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        config_fingerprint=analyzer_fingerprint(analyzer),
    )

    store_keys = {e.key for e in store.entries}
    report = BuildReport(
        labels=len(store.entries),
        labels_by_locale=_count_by_locale(store),
        indexed_documents=index.doc_count,
        locale=settings.locale,
        static_links=sum(
            1 for link in usage.all_links() if link.provenance == "static"
        ),
        dynamic_links=sum(
            1 for link in usage.all_links() if link.provenance == "dynamic"
        ),
        dead_label_candidates=find_dead_labels(store, usage),
        duplicates=len(store.duplicates),
        unknown_trace_keys=sorted(
            {key for key in usage.links if key not in store_keys}
        ),
        warnings=(
            [f"{f}: line {e.line}: {e.reason}" for f, e in store.parse_errors]
            + list(usage.warnings)
            + [f"trace log line {e.line}: malformed record" for e in trace_errors]
        ),
    )
    return db, report


def _count_by_locale(store: LabelStore) -> dict[str, int]:
    counts: dict[str, int] = {}
    for entry in store.entries:
        counts[entry.locale] = counts.get(entry.locale, 0) + 1
    return counts


def query_links(db: TraceDB, query: str, k: int = 20) -> list[TraceabilityLink]:
    """Search, then attach each matched label's code elements.

    The ranking is exactly the search ranking; link assembly never
    reorders or filters.
    """
    matches = search(db.index, query, k)
    labels = {
        e.key: e for e in db.store.entries if e.locale == db.index.locale
    }
    links = []
    for match in matches:
        label = labels[match.key]
        usage_links = db.usage.for_key(match.key)
        links.append(
            TraceabilityLink(
                query=query,
                label=label,
                score=match.score,
                elements=tuple(l.element for l in usage_links),
                dangling=not usage_links,
                provenances=tuple(l.provenance for l in usage_links),
                matched_terms=match.matched_terms,
            )
        )
    return links


def db_to_dict(db: TraceDB) -> dict:
    return {
        "format": "labeltrace-db",
        "version": DB_FORMAT_VERSION,
        "built_at": db.built_at,
        "config_fingerprint": db.config_fingerprint,
        "store": db.store.to_dict(),
        "usage": db.usage.to_dict(),
        "index": db.index.to_dict(),
    }


def save_db(db: TraceDB, path: str | Path) -> None:
    payload = json.dumps(db_to_dict(db), sort_keys=True, ensure_ascii=False, indent=1)
    Path(path).write_text(payload + "\n", encoding="utf-8")


def load_db(path: str | Path) -> TraceDB:
    try:
        data = json.loads(Path(path).read_text("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptFile(f"{path}: not a valid database file ({exc})") from exc
    if not isinstance(data, dict) or data.get("format") != "labeltrace-db":
        raise CorruptFile(f"{path}: not a labeltrace database")
    version = data.get("version")
    if version != DB_FORMAT_VERSION:
        raise VersionMismatch(
            f"{path}: database version {version!r}, expected {DB_FORMAT_VERSION}"
        )
    try:
        store = LabelStore.from_dict(data["store"])
        usage = UsageMap.from_dict(data["usage"])
        index = Index.from_dict(data["index"])
        fingerprint = data["config_fingerprint"]
        built_at = data["built_at"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFile(f"{path}: incomplete database ({exc})") from exc
    if fingerprint != analyzer_fingerprint(index.analyzer):
        raise CorruptFile(f"{path}: analyzer fingerprint mismatch")
    return TraceDB(
        store=store,
        usage=usage,
        index=index,
        built_at=built_at,
        config_fingerprint=fingerprint,
    )
