"""Trace regulatory text to source code through user-interface labels.

The library scans localized resource bundles into a label store, resolves
which code elements use each label key (literal search plus runtime
traces), indexes label texts with tf-idf, and answers natural-language
queries with ranked traceability links. An evaluation harness measures
ranking quality against human ratings.
"""

from .analysis import (
    AnalyzerConfig,
    StemmerKind,
    SynonymRule,
    SynonymTable,
    analyze,
    load_stop_words,
    load_synonym_table,
    normalize_synonyms,
    tokenize,
)
from .bundles import (
    DuplicateReport,
    LabelEntry,
    LabelStore,
    MalformedLine,
    parse_bundle,
    scan_resources,
)
from .codescan import (
    CodeElement,
    TraceRecord,
    UsageLink,
    UsageMap,
    extract_literals,
    find_dead_labels,
    ingest_trace_log,
    merge_usages,
    resolve_static_usages,
)
from .config import BuildSettings, ScanConfig
from .engine import (
    BuildReport,
    CorruptFile,
    TraceDB,
    TraceDBError,
    TraceabilityLink,
    VersionMismatch,
    build_trace_db,
    load_db,
    query_links,
    save_db,
)
from .evaluation import (
    Assessment,
    MetricsReport,
    QueryForm,
    Rating,
    RegulatoryItem,
    Relevance,
    compute_metrics,
    load_assessments,
    load_dataset,
    record_assessment,
)
from .porter import stem, stem_once
from .retrieval import (
    EmptyQuery,
    Index,
    LabelMatch,
    build_index,
    search,
    term_stats,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyzerConfig",
    "Assessment",
    "BuildReport",
    "BuildSettings",
    "CodeElement",
    "CorruptFile",
    "DuplicateReport",
    "EmptyQuery",
    "Index",
    "LabelEntry",
    "LabelMatch",
    "LabelStore",
    "MalformedLine",
    "MetricsReport",
    "QueryForm",
    "Rating",
    "RegulatoryItem",
    "Relevance",
    "ScanConfig",
    "StemmerKind",
    "SynonymRule",
    "SynonymTable",
    "TraceDB",
    "TraceDBError",
    "TraceRecord",
    "TraceabilityLink",
    "UsageLink",
    "UsageMap",
    "VersionMismatch",
    "analyze",
    "build_index",
    "build_trace_db",
    "compute_metrics",
    "extract_literals",
    "find_dead_labels",
    "ingest_trace_log",
    "load_assessments",
    "load_dataset",
    "load_db",
    "load_stop_words",
    "load_synonym_table",
    "merge_usages",
    "normalize_synonyms",
    "parse_bundle",
    "query_links",
    "record_assessment",
    "resolve_static_usages",
    "save_db",
    "scan_resources",
    "search",
    "stem",
    "stem_once",
    "term_stats",
    "tokenize",
]
