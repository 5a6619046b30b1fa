"""Inverted index over label texts with tf-idf cosine ranking.

Weights are raw term frequency times ``idf(t) = ln(1 + N/(1+df))``; a
query and a document are compared by cosine similarity, so scores live in
[0, 1] and an exact token-for-token match scores 1.0. Query terms the
index has never seen contribute nothing to any document but do enter the
query norm. Scores are rounded to 12 decimals: that pins down tie-breaks
(score descending, then key ascending) and makes the cosine of two
identical vectors come out as exactly 1.0.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from .analysis import AnalyzerConfig, analyze
from .bundles import LabelStore

SCORE_DECIMALS = 12


class EmptyQuery(ValueError):
    """The analyzed query has no tokens left."""


@dataclass(frozen=True)
class LabelMatch:
    key: str
    score: float
    matched_terms: tuple[str, ...]


@dataclass
class Index:
    documents: list[dict] = field(default_factory=list)  # {doc_id, key, locale}
    postings: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    doc_norms: dict[int, float] = field(default_factory=dict)
    doc_count: int = 0
    locale: str = ""
    analyzer: AnalyzerConfig = field(default_factory=AnalyzerConfig)

    def document_frequency(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def idf(self, term: str) -> float:
        if self.doc_count == 0:
            return 0.0
        return math.log(1 + self.doc_count / (1 + self.document_frequency(term)))

    def to_dict(self) -> dict:
        analyzer = self.analyzer.to_dict()
        return {
            "documents": self.documents,
            "postings": {
                term: [[doc_id, tf] for doc_id, tf in rows]
                for term, rows in sorted(self.postings.items())
            },
            "doc_norms": {str(d): norm for d, norm in sorted(self.doc_norms.items())},
            "doc_count": self.doc_count,
            "locale": self.locale,
            "analyzer": analyzer,
            "analyzer_fingerprint": analyzer_fingerprint(self.analyzer),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Index":
        analyzer = AnalyzerConfig.from_dict(data["analyzer"])
        recorded = data.get("analyzer_fingerprint")
        if recorded != analyzer_fingerprint(analyzer):
            raise ValueError("analyzer fingerprint does not match analyzer config")
        return cls(
            documents=[dict(d) for d in data["documents"]],
            postings={
                term: [(int(doc_id), int(tf)) for doc_id, tf in rows]
                for term, rows in data["postings"].items()
            },
            doc_norms={int(d): float(v) for d, v in data["doc_norms"].items()},
            doc_count=int(data["doc_count"]),
            locale=data["locale"],
            analyzer=analyzer,
        )


def analyzer_fingerprint(config: AnalyzerConfig) -> str:
    payload = json.dumps(config.to_dict(), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def build_index(store: LabelStore, locale: str, analyzer: AnalyzerConfig) -> Index:
    """Index every label of one locale; document text is the label VALUE.

    Labels whose analyzed text is empty still count as documents but get
    no postings, so no query can reach them.
    """
    index = Index(locale=locale, analyzer=analyzer)
    entries = sorted(
        store.entries_for_locale(locale), key=lambda e: (e.key, e.source_file, e.line)
    )
    for doc_id, entry in enumerate(entries):
        index.documents.append(
            {"doc_id": doc_id, "key": entry.key, "locale": entry.locale}
        )
        terms = analyze(entry.text, analyzer)
        if not terms:
            continue
        counts: dict[str, int] = {}
        for term in terms:
            counts[term] = counts.get(term, 0) + 1
        for term in sorted(counts):
            index.postings.setdefault(term, []).append((doc_id, counts[term]))
    index.doc_count = len(index.documents)
    # norms need the final df values, so fill them in a second pass
    squared: dict[int, float] = {}
    for term, rows in sorted(index.postings.items()):
        idf = index.idf(term)
        for doc_id, tf in rows:
            weight = tf * idf
            squared[doc_id] = squared.get(doc_id, 0.0) + weight * weight
    index.doc_norms = {d: math.sqrt(s) for d, s in sorted(squared.items())}
    return index


def term_stats(index: Index, term: str) -> tuple[int, float]:
    """(document frequency, idf) for an analyzed token."""
    return index.document_frequency(term), index.idf(term)


def search(index: Index, query: str, k: int) -> list[LabelMatch]:
    """Top-k labels by tf-idf cosine against the analyzed query.

    Only documents sharing at least one term with the query are scored.
    Raises :class:`EmptyQuery` when the analyzed query is empty (distinct
    from a valid query that simply hits nothing).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    terms = analyze(query, index.analyzer)
    if not terms:
        raise EmptyQuery(f"query {query!r} has no searchable terms")
    query_counts: dict[str, int] = {}
    for term in terms:
        query_counts[term] = query_counts.get(term, 0) + 1

    query_norm_sq = 0.0
    dots: dict[int, float] = {}
    matched: dict[int, set[str]] = {}
    for term in sorted(query_counts):
        idf = index.idf(term)
        q_weight = query_counts[term] * idf
        query_norm_sq += q_weight * q_weight
        for doc_id, tf in index.postings.get(term, ()):
            dots[doc_id] = dots.get(doc_id, 0.0) + q_weight * (tf * idf)
            matched.setdefault(doc_id, set()).add(term)
    if not dots or query_norm_sq == 0.0:
        return []

    query_norm = math.sqrt(query_norm_sq)
    key_of = {d["doc_id"]: d["key"] for d in index.documents}
    results = []
    for doc_id, dot in dots.items():
        score = dot / (query_norm * index.doc_norms[doc_id])
        score = min(round(score, SCORE_DECIMALS), 1.0)
        if score <= 0.0:
            continue
        results.append(
            LabelMatch(
                key=key_of[doc_id],
                score=score,
                matched_terms=tuple(sorted(matched[doc_id])),
            )
        )
    results.sort(key=lambda m: (-m.score, m.key))
    return results[:k]
