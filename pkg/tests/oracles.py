"""Independent re-implementations used as test oracles.

Both deliberately avoid the library's data structures: the search oracle
materializes dense tf-idf vectors with numpy instead of walking an
inverted index, and the metrics oracle computes one spreadsheet-like row
per query before averaging.
"""

from __future__ import annotations

import math

import numpy as np

from labeltrace.analysis import AnalyzerConfig, analyze

SCORE_DECIMALS = 12


def brute_force_search(
    corpus: list[tuple[str, str]],
    analyzer: AnalyzerConfig,
    query: str,
    k: int,
) -> list[tuple[str, float]]:
    """Rank (key, text) documents against the query with dense vectors.

    Follows the same scoring contract as the engine (raw tf, idf =
    ln(1 + N/(1+df)), cosine, scores rounded to 12 decimals, ties broken
    by key ascending, only documents sharing a term are candidates).
    """
    doc_tokens = {key: analyze(text, analyzer) for key, text in corpus}
    query_tokens = analyze(query, analyzer)
    if not query_tokens:
        raise ValueError("query analyzes to nothing")

    vocabulary = sorted(
        {t for tokens in doc_tokens.values() for t in tokens} | set(query_tokens)
    )
    term_index = {term: i for i, term in enumerate(vocabulary)}
    n_docs = len(corpus)

    def tf_vector(tokens: list[str]) -> np.ndarray:
        vec = np.zeros(len(vocabulary))
        for token in tokens:
            vec[term_index[token]] += 1.0
        return vec

    doc_matrix = np.vstack(
        [tf_vector(doc_tokens[key]) for key, _ in corpus]
    ) if corpus else np.zeros((0, len(vocabulary)))
    df = (doc_matrix > 0).sum(axis=0)
    idf = np.array(
        [math.log(1 + n_docs / (1 + df[i])) for i in range(len(vocabulary))]
    )
    doc_weights = doc_matrix * idf
    query_weights = tf_vector(query_tokens) * idf

    q_norm = float(np.sqrt((query_weights**2).sum()))
    results = []
    q_tf = tf_vector(query_tokens)
    for row, (key, _) in enumerate(corpus):
        shares_term = bool(((doc_matrix[row] > 0) & (q_tf > 0)).any())
        if not shares_term:
            continue
        d_norm = float(np.sqrt((doc_weights[row] ** 2).sum()))
        if d_norm == 0.0 or q_norm == 0.0:
            continue
        score = float(np.dot(doc_weights[row], query_weights)) / (q_norm * d_norm)
        score = min(round(score, SCORE_DECIMALS), 1.0)
        if score <= 0.0:
            continue
        results.append((key, score))
    results.sort(key=lambda pair: (-pair[1], pair[0]))
    return results[:k]


def spreadsheet_metrics(
    items: list[str],
    results: dict[str, list[str]],
    relevant: dict[str, set[str]],
    ks: list[int],
    answer_depth: int,
) -> dict:
    """Metrics for one query form from pre-resolved relevance sets."""
    rows = []
    for item_id in items:
        ranked = results.get(item_id, [])
        golden = relevant.get(item_id, set())
        flags = [key in golden for key in ranked]
        first = None
        for position, flag in enumerate(flags, start=1):
            if flag:
                first = position
                break
        rows.append(
            {
                "item": item_id,
                "first": first,
                "answered": first is not None and first <= answer_depth,
                "golden_size": sum(flags),
                "hits_at": {k: sum(flags[:k]) for k in ks},
            }
        )

    n = len(rows)
    answered = [r for r in rows if r["answered"]]
    with_relevant = [r for r in rows if r["golden_size"] > 0]
    report = {
        "query_count": n,
        "answered_count": len(answered),
        "answered_queries": len(answered) / n if n else 0.0,
        "rank1_count": sum(1 for r in answered if r["first"] == 1),
        "recall_query_count": len(with_relevant),
        "precision_at": {},
        "recall_at": {},
    }
    report["rank1_correct"] = (
        report["rank1_count"] / len(answered) if answered else 0.0
    )
    firsts = sorted(r["first"] for r in answered)
    if firsts:
        mid = len(firsts) // 2
        if len(firsts) % 2:
            median = float(firsts[mid])
        else:
            median = (firsts[mid - 1] + firsts[mid]) / 2
    else:
        median = None
    report["median_first_correct_rank"] = median
    for k in ks:
        report["precision_at"][k] = (
            sum(r["hits_at"][k] / k for r in rows) / n if n else 0.0
        )
        report["recall_at"][k] = (
            sum(r["hits_at"][k] / r["golden_size"] for r in with_relevant)
            / len(with_relevant)
            if with_relevant
            else 0.0
        )
    return report
