"""Evaluation harness: dataset items, human ratings, ranking metrics.

Each regulatory item is kept in a short (sentence) and a long
(paragraph) form; both are run as queries and every returned link can be
rated correct / related / wrong. Metrics follow the recommender-system
view: precision@k divides by k even when fewer links came back, recall@k
divides by the number of links rated relevant for that query, queries
with no relevant link at all are excluded from recall averages, and a
query counts as answered when a relevant link appears within the
assessment depth.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class QueryForm(str, Enum):
    SHORT = "short"
    LONG = "long"


class Rating(str, Enum):
    CORRECT = "correct"
    RELATED = "related"
    WRONG = "wrong"


class Relevance(str, Enum):
    CORRECT_ONLY = "correct"
    CORRECT_OR_RELATED = "correct-or-related"

    def accepts(self, rating: Rating | None) -> bool:
        if rating is Rating.CORRECT:
            return True
        return self is Relevance.CORRECT_OR_RELATED and rating is Rating.RELATED


class DatasetError(ValueError):
    pass


class DuplicateId(DatasetError):
    pass


class MalformedRecord(DatasetError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MetricsError(ValueError):
    pass


class UnknownItem(MetricsError):
    pass


class UnknownLink(MetricsError):
    pass


class UnassessedLink(MetricsError):
    pass


@dataclass(frozen=True)
class RegulatoryItem:
    id: str
    short_form: str
    long_form: str

    def form(self, form: QueryForm) -> str:
        return self.short_form if form is QueryForm.SHORT else self.long_form


@dataclass(frozen=True)
class Assessment:
    item_id: str
    query_form: QueryForm
    label_key: str
    rank: int
    rating: Rating
    assessed_at: str

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "form": self.query_form.value,
            "label_key": self.label_key,
            "rank": self.rank,
            "rating": self.rating.value,
            "assessed_at": self.assessed_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Assessment":
        rank = int(data["rank"])
        if rank < 1:
            raise ValueError(f"rank must be >= 1, got {rank}")
        return cls(
            item_id=str(data["item_id"]),
            query_form=QueryForm(data["form"]),
            label_key=str(data["label_key"]),
            rank=rank,
            rating=Rating(data["rating"]),
            assessed_at=str(data["assessed_at"]),
        )


def load_dataset(path: str | Path) -> list[RegulatoryItem]:
    """Read a JSON-lines dataset: {"id", "short", "long"} per line."""
    items: list[RegulatoryItem] = []
    seen: set[str] = set()
    for line_no, raw in enumerate(
        Path(path).read_text("utf-8").splitlines(), start=1
    ):
        if not raw.strip():
            continue
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(line_no, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(data, dict):
            raise MalformedRecord(line_no, "record is not an object")
        try:
            item = RegulatoryItem(
                id=str(data["id"]), short_form=str(data["short"]), long_form=str(data["long"])
            )
        except KeyError as exc:
            raise MalformedRecord(line_no, f"missing field {exc}") from exc
        if not item.id or not item.short_form or not item.long_form:
            raise MalformedRecord(line_no, "id/short/long must be non-empty")
        if item.id in seen:
            raise DuplicateId(f"line {line_no}: duplicate item id {item.id!r}")
        seen.add(item.id)
        items.append(item)
    return items


def dataset_stats(items: Sequence[RegulatoryItem]) -> dict:
    def mean_words(texts: Iterable[str]) -> float:
        counts = [len(t.split()) for t in texts]
        return round(sum(counts) / len(counts), 1) if counts else 0.0

    return {
        "items": len(items),
        "mean_short_words": mean_words(i.short_form for i in items),
        "mean_long_words": mean_words(i.long_form for i in items),
    }


def record_assessment(store_path: str | Path, assessment: Assessment) -> None:
    """Append one rating to the JSON-lines assessment log."""
    path = Path(store_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as handle:
        handle.write(json.dumps(assessment.to_dict(), sort_keys=True) + "\n")


def load_assessments(path: str | Path) -> list[Assessment]:
    path = Path(path)
    if not path.exists():
        return []
    assessments = []
    for line_no, raw in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            assessments.append(Assessment.from_dict(json.loads(raw)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise MalformedRecord(line_no, f"bad assessment record ({exc})") from exc
    return assessments


def resolve_latest(
    assessments: Iterable[Assessment],
) -> dict[tuple[str, QueryForm, str], Assessment]:
    """Latest rating wins per (item, form, key); ties go to the later record."""
    resolved: dict[tuple[str, QueryForm, str], Assessment] = {}
    for a in assessments:
        slot = (a.item_id, a.query_form, a.label_key)
        current = resolved.get(slot)
        if current is None or a.assessed_at >= current.assessed_at:
            resolved[slot] = a
    return resolved


@dataclass
class FormMetrics:
    query_count: int = 0
    answered_count: int = 0
    answered_queries: float = 0.0  # fraction of all queries
    rank1_count: int = 0
    rank1_correct: float = 0.0  # fraction of answered queries
    median_first_correct_rank: float | None = None
    precision_at: dict[int, float] = field(default_factory=dict)
    recall_at: dict[int, float] = field(default_factory=dict)
    recall_query_count: int = 0

    def to_dict(self) -> dict:
        return {
            "query_count": self.query_count,
            "answered_count": self.answered_count,
            "answered_queries": self.answered_queries,
            "rank1_count": self.rank1_count,
            "rank1_correct": self.rank1_correct,
            "median_first_correct_rank": self.median_first_correct_rank,
            "precision_at": {str(k): v for k, v in sorted(self.precision_at.items())},
            "recall_at": {str(k): v for k, v in sorted(self.recall_at.items())},
            "recall_query_count": self.recall_query_count,
        }


@dataclass
class MetricsReport:
    relevance: Relevance
    answer_depth: int
    forms: dict[QueryForm, FormMetrics] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "relevance": self.relevance.value,
            "answer_depth": self.answer_depth,
            "forms": {f.value: m.to_dict() for f, m in self.forms.items()},
        }


ResultsByItem = Mapping[str, Mapping[QueryForm, Sequence[str]]]


def compute_metrics(
    items: Sequence[RegulatoryItem],
    results: ResultsByItem,
    assessments: Iterable[Assessment],
    ks: Sequence[int] = (5, 20),
    relevance: Relevance = Relevance.CORRECT_ONLY,
    answer_depth: int = 20,
    strict: bool = False,
) -> MetricsReport:
    """Aggregate ratings over ranked results into per-form metrics.

    Links without a rating count as wrong unless ``strict`` is set, in
    which case they raise :class:`UnassessedLink`; ratings for unknown
    items or for links that are not in the results raise.
    """
    item_ids = {i.id for i in items}
    resolved = resolve_latest(assessments)
    for (item_id, form, key), _ in resolved.items():
        if item_id not in item_ids:
            raise UnknownItem(f"assessment references unknown item {item_id!r}")
        returned = results.get(item_id, {}).get(form, ())
        if key not in returned:
            raise UnknownLink(
                f"assessment for item {item_id!r} ({form.value}) references "
                f"label {key!r} which is not among the returned links"
            )

    report = MetricsReport(relevance=relevance, answer_depth=answer_depth)
    for form in (QueryForm.SHORT, QueryForm.LONG):
        metrics = FormMetrics(query_count=len(items))
        precision_sums = {k: 0.0 for k in ks}
        recall_sums = {k: 0.0 for k in ks}
        first_ranks: list[int] = []
        for item in items:
            ranked = list(results.get(item.id, {}).get(form, ()))
            flags = []
            for rank, key in enumerate(ranked, start=1):
                assessment = resolved.get((item.id, form, key))
                if assessment is None and strict and rank <= answer_depth:
                    raise UnassessedLink(
                        f"item {item.id!r} ({form.value}) rank {rank} "
                        f"label {key!r} has no rating"
                    )
                flags.append(
                    relevance.accepts(assessment.rating if assessment else None)
                )
            relevant_total = sum(flags)
            first_rank = next(
                (i + 1 for i, flag in enumerate(flags) if flag), None
            )
            answered = first_rank is not None and first_rank <= answer_depth
            if answered:
                metrics.answered_count += 1
                first_ranks.append(first_rank)
                if flags and flags[0]:
                    metrics.rank1_count += 1
            for k in ks:
                hits = sum(flags[:k])
                precision_sums[k] += hits / k
                if relevant_total:
                    recall_sums[k] += hits / relevant_total
            if relevant_total:
                metrics.recall_query_count += 1
        if metrics.query_count:
            metrics.answered_queries = metrics.answered_count / metrics.query_count
            metrics.precision_at = {
                k: precision_sums[k] / metrics.query_count for k in ks
            }
        else:
            metrics.precision_at = {k: 0.0 for k in ks}
        metrics.recall_at = {
            k: (recall_sums[k] / metrics.recall_query_count)
            if metrics.recall_query_count
            else 0.0
            for k in ks
        }
        if metrics.answered_count:
            metrics.rank1_correct = metrics.rank1_count / metrics.answered_count
            metrics.median_first_correct_rank = float(statistics.median(first_ranks))
        report.forms[form] = metrics
    return report


_ROW_LABELS = (
    "Number of regulatory items",
    "Number of queries",
    "Answered queries",
    "Median rank of first correct traceability link",
    "# queries where result #1 is correct",
)


def render_metrics_table(report: MetricsReport) -> str:
    """Aligned plain-text table, one column per query form."""
    forms = [f for f in (QueryForm.SHORT, QueryForm.LONG) if f in report.forms]
    headers = ["Metric"] + [f"{f.value.capitalize()} query" for f in forms]

    def fraction(n: int, d: int) -> str:
        pct = f" ({round(100 * n / d)}%)" if d else ""
        return f"{n}/{d}{pct}"

    rows: list[list[str]] = [
        [_ROW_LABELS[0]] + [str(report.forms[f].query_count) for f in forms],
        [_ROW_LABELS[1]] + [str(report.forms[f].query_count) for f in forms],
        [_ROW_LABELS[2]]
        + [
            fraction(report.forms[f].answered_count, report.forms[f].query_count)
            for f in forms
        ],
        [_ROW_LABELS[3]]
        + [
            "-"
            if report.forms[f].median_first_correct_rank is None
            else f"{report.forms[f].median_first_correct_rank:g}"
            for f in forms
        ],
        [_ROW_LABELS[4]]
        + [
            fraction(report.forms[f].rank1_count, report.forms[f].answered_count)
            for f in forms
        ],
    ]
    ks = sorted(next(iter(report.forms.values())).precision_at) if report.forms else []
    for k in ks:
        rows.append(
            [f"Average precision (top {k})"]
            + [f"{report.forms[f].precision_at[k]:.2f}" for f in forms]
        )
        rows.append(
            [f"Average recall (top {k})"]
            + [f"{report.forms[f].recall_at[k]:.2f}" for f in forms]
        )

    widths = [
        max(len(row[col]) for row in [headers] + rows)
        for col in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append(
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        )
    return "\n".join(lines)
