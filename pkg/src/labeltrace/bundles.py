"""Resource-bundle parsing and the label store.

The supported bundle format is a deliberately small properties dialect:
UTF-8 ``key=value`` lines, ``#`` or ``!`` comments, no continuations and
no escape processing. One file holds the labels of one locale, taken
from the ``_<locale>`` filename suffix.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path

from .config import ScanConfig


@dataclass(frozen=True)
class LabelEntry:
    key: str
    text: str
    locale: str
    source_file: str
    line: int


@dataclass(frozen=True)
class MalformedLine:
    line: int
    reason: str
    content: str


@dataclass(frozen=True)
class DuplicateReport:
    key: str
    locale: str
    occurrences: tuple[tuple[str, int, str], ...]  # (source_file, line, text)


@dataclass
class LabelStore:
    entries: list[LabelEntry] = field(default_factory=list)
    duplicates: list[DuplicateReport] = field(default_factory=list)
    parse_errors: list[tuple[str, MalformedLine]] = field(default_factory=list)

    def keys(self) -> list[str]:
        return sorted({e.key for e in self.entries})

    def by_key_locale(self) -> dict[tuple[str, str], LabelEntry]:
        return {(e.key, e.locale): e for e in self.entries}

    def entries_for_locale(self, locale: str) -> list[LabelEntry]:
        return [e for e in self.entries if e.locale == locale]

    def to_dict(self) -> dict:
        return {
            "entries": [asdict(e) for e in self.entries],
            "duplicates": [
                {
                    "key": d.key,
                    "locale": d.locale,
                    "occurrences": [list(o) for o in d.occurrences],
                }
                for d in self.duplicates
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LabelStore":
        store = cls()
        store.entries = [LabelEntry(**e) for e in data["entries"]]
        store.duplicates = [
            DuplicateReport(
                key=d["key"],
                locale=d["locale"],
                occurrences=tuple(tuple(o) for o in d["occurrences"]),
            )
            for d in data["duplicates"]
        ]
        return store


def parse_bundle(
    content: str, locale: str, source_file: str
) -> tuple[list[LabelEntry], list[MalformedLine]]:
    """Parse bundle text into entries plus collected bad lines.

    Total on arbitrary text: every non-comment, non-blank line either
    yields an entry or a :class:`MalformedLine`; nothing raises.
    """
    entries: list[LabelEntry] = []
    errors: list[MalformedLine] = []
    for line_no, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#!":
            continue
        if "=" not in line:
            errors.append(MalformedLine(line_no, "missing '='", raw))
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            errors.append(MalformedLine(line_no, "empty key", raw))
            continue
        if any(c.isspace() for c in key):
            errors.append(MalformedLine(line_no, "whitespace in key", raw))
            continue
        entries.append(
            LabelEntry(
                key=key,
                text=value.strip(),
                locale=locale,
                source_file=source_file,
                line=line_no,
            )
        )
    return entries, errors


def _bundle_files(root: Path, config: ScanConfig) -> list[Path]:
    found: set[Path] = set()
    for pattern in config.bundle_globs:
        found.update(p for p in root.rglob(pattern) if p.is_file())
    return sorted(found, key=lambda p: p.relative_to(root).as_posix())


def scan_resources(root: str | Path, config: ScanConfig | None = None) -> LabelStore:
    """Build the label store for a resource tree.

    Files are visited in lexicographic path order; on a duplicated
    (key, locale) the first occurrence is retained and every occurrence
    is recorded in a :class:`DuplicateReport`. I/O failures abort the
    scan (partial results are discarded).
    """
    config = config or ScanConfig()
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"resource root is not a directory: {root}")
    store = LabelStore()
    retained: dict[tuple[str, str], LabelEntry] = {}
    occurrences: dict[tuple[str, str], list[tuple[str, int, str]]] = {}
    for path in _bundle_files(root, config):
        rel = path.relative_to(root).as_posix()
        locale = config.locale_for(path.name)
        entries, errors = parse_bundle(path.read_text("utf-8"), locale, rel)
        store.parse_errors.extend((rel, err) for err in errors)
        for entry in entries:
            slot = (entry.key, entry.locale)
            occurrences.setdefault(slot, []).append(
                (entry.source_file, entry.line, entry.text)
            )
            if slot not in retained:
                retained[slot] = entry
                store.entries.append(entry)
    for (key, locale), occ in occurrences.items():
        if len(occ) > 1:
            store.duplicates.append(
                DuplicateReport(key=key, locale=locale, occurrences=tuple(occ))
            )
    store.duplicates.sort(key=lambda d: (d.key, d.locale))
    return store


def total_parsed_pairs(store: LabelStore) -> int:
    """Retained entries plus the extra duplicate occurrences."""
    return len(store.entries) + sum(
        len(d.occurrences) - 1 for d in store.duplicates
    )
