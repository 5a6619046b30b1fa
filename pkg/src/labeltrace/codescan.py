"""Resolve which code elements use each label key.

Two mechanisms feed the usage map: a language-agnostic scan for string
literals that exactly equal a bundle key, and runtime trace logs for
keys that are assembled dynamically and therefore invisible to a literal
search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .bundles import LabelStore
from .config import ScanConfig


@dataclass(frozen=True)
class CodeElement:
    source_file: str
    unit_name: str
    line: int  # 0 when unknown (dynamic-only evidence)


@dataclass(frozen=True)
class UsageLink:
    key: str
    element: CodeElement
    provenance: str  # "static" | "dynamic"


STATIC = "static"
DYNAMIC = "dynamic"


@dataclass
class UsageMap:
    links: dict[str, list[UsageLink]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def add(self, link: UsageLink) -> None:
        bucket = self.links.setdefault(link.key, [])
        for existing in bucket:
            if (
                existing.element.source_file == link.element.source_file
                and existing.provenance == link.provenance
            ):
                return
        bucket.append(link)

    def keys(self) -> list[str]:
        return sorted(self.links)

    def for_key(self, key: str) -> list[UsageLink]:
        return list(self.links.get(key, ()))

    def all_links(self) -> list[UsageLink]:
        out: list[UsageLink] = []
        for key in self.keys():
            out.extend(self.links[key])
        return out

    def to_dict(self) -> dict:
        return {
            key: [
                {
                    "source_file": l.element.source_file,
                    "unit_name": l.element.unit_name,
                    "line": l.element.line,
                    "provenance": l.provenance,
                }
                for l in self.links[key]
            ]
            for key in self.keys()
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UsageMap":
        usage = cls()
        for key, rows in data.items():
            for row in rows:
                usage.links.setdefault(key, []).append(
                    UsageLink(
                        key=key,
                        element=CodeElement(
                            source_file=row["source_file"],
                            unit_name=row["unit_name"],
                            line=row["line"],
                        ),
                        provenance=row["provenance"],
                    )
                )
        return usage


@dataclass(frozen=True)
class LiteralOccurrence:
    text: str
    line: int


def extract_literals(
    source_file: str, content: str
) -> tuple[list[LiteralOccurrence], list[str]]:
    """Lexically scan for single- and double-quoted string literals.

    A backslash escapes the next character (the backslash is dropped, the
    character kept verbatim). Comments are not stripped, so a quote in a
    comment opens a literal like any other; this is the documented
    approximation of the language-agnostic scan. A literal still open at
    end of input is dropped with a warning.
    """
    occurrences: list[LiteralOccurrence] = []
    warnings: list[str] = []
    i = 0
    line = 1
    n = len(content)
    while i < n:
        c = content[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c in "\"'":
            quote = c
            start_line = line
            buf: list[str] = []
            i += 1
            closed = False
            while i < n:
                ch = content[i]
                if ch == "\\" and i + 1 < n:
                    buf.append(content[i + 1])
                    if content[i + 1] == "\n":
                        line += 1
                    i += 2
                    continue
                if ch == quote:
                    closed = True
                    i += 1
                    break
                if ch == "\n":
                    line += 1
                buf.append(ch)
                i += 1
            if closed:
                occurrences.append(LiteralOccurrence("".join(buf), start_line))
            else:
                warnings.append(
                    f"{source_file}:{start_line}: unterminated {quote} literal"
                )
        else:
            i += 1
    return occurrences, warnings


def _unit_name(path: str) -> str:
    stem = Path(path).stem
    return stem[:1].upper() + stem[1:] if stem else path


def _source_files(root: Path, config: ScanConfig) -> list[Path]:
    exts = set(config.source_extensions)
    files = [p for p in root.rglob("*") if p.is_file() and p.suffix in exts]
    return sorted(files, key=lambda p: p.relative_to(root).as_posix())


def resolve_static_usages(
    store: LabelStore, source_root: str | Path, config: ScanConfig | None = None
) -> UsageMap:
    """Match extracted literals against store keys, full text only.

    One link per (key, file) is kept, at the first matching line; files
    are visited in lexicographic path order, so the result is
    deterministic. Unreadable files are skipped with a warning.
    """
    config = config or ScanConfig()
    root = Path(source_root)
    if not root.is_dir():
        raise FileNotFoundError(f"source root is not a directory: {root}")
    keys = {e.key for e in store.entries}
    usage = UsageMap()
    for path in _source_files(root, config):
        rel = path.relative_to(root).as_posix()
        try:
            content = path.read_text("utf-8", errors="replace")
        except OSError as exc:
            usage.warnings.append(f"{rel}: skipped ({exc})")
            continue
        occurrences, warnings = extract_literals(rel, content)
        usage.warnings.extend(warnings)
        for occ in sorted(occurrences, key=lambda o: o.line):
            if occ.text in keys:
                usage.add(
                    UsageLink(
                        key=occ.text,
                        element=CodeElement(rel, _unit_name(rel), occ.line),
                        provenance=STATIC,
                    )
                )
    return usage


@dataclass(frozen=True)
class TraceRecord:
    timestamp: str
    key: str
    element_path: str


@dataclass(frozen=True)
class MalformedTraceLine:
    line: int
    content: str


def ingest_trace_log(
    content: str,
) -> tuple[list[TraceRecord], list[MalformedTraceLine]]:
    """Parse a TSV trace log: timestamp<TAB>key<TAB>element_path."""
    records: list[TraceRecord] = []
    errors: list[MalformedTraceLine] = []
    for line_no, raw in enumerate(content.splitlines(), start=1):
        if not raw.strip():
            continue
        fields = raw.split("\t")
        if len(fields) != 3 or not fields[1].strip() or not fields[2].strip():
            errors.append(MalformedTraceLine(line_no, raw))
            continue
        records.append(
            TraceRecord(
                timestamp=fields[0], key=fields[1].strip(), element_path=fields[2].strip()
            )
        )
    return records, errors


def merge_usages(static_map: UsageMap, traces: list[TraceRecord]) -> UsageMap:
    """Union static links with dynamic links derived from trace records.

    Dynamic elements carry line 0. Duplicate (key, file, provenance)
    combinations collapse, so merging with an empty trace list returns an
    equal map.
    """
    merged = UsageMap(warnings=list(static_map.warnings))
    for link in static_map.all_links():
        merged.add(link)
    for record in traces:
        merged.add(
            UsageLink(
                key=record.key,
                element=CodeElement(
                    record.element_path, _unit_name(record.element_path), 0
                ),
                provenance=DYNAMIC,
            )
        )
    return merged


def find_dead_labels(store: LabelStore, usage: UsageMap) -> list[str]:
    """Store keys with no usage at all, sorted.

    These are candidates only: a dynamic key that the traced scenario
    never exercised shows up here despite being alive.
    """
    used = set(usage.links)
    return sorted(key for key in {e.key for e in store.entries} if key not in used)
