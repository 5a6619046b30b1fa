"""Text pipeline shared by indexing and querying.

Order is fixed: synonym normalization, lowercasing, tokenization,
stop-word removal, stemming. Both sides of the search (label texts and
queries) must run through the same :class:`AnalyzerConfig`, otherwise
their token spaces drift apart.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable

from . import porter

# Word characters minus underscore: keeps letter-digit runs such as "n50"
# as one token, splits on apostrophes ("d'air" -> "d", "air").
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class SynonymTableError(ValueError):
    """Invalid synonym table content."""


class ConflictingVariant(SynonymTableError):
    def __init__(self, variant: str, canonicals: tuple[str, str]):
        super().__init__(
            f"variant {variant!r} maps to both {canonicals[0]!r} and {canonicals[1]!r}"
        )
        self.variant = variant


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


@dataclass(frozen=True)
class SynonymRule:
    canonical: str
    variants: tuple[str, ...]


class SynonymTable:
    """Phrase-to-token rewrite table, validated for idempotent rewriting.

    Besides the basic constraints (canonicals are single tokens, no
    variant under two canonicals, matching is case-insensitive), a
    variant must not contain any rule's canonical as a token. Without
    that restriction a first rewrite could manufacture text that a second
    rewrite would match, and normalization would stop being idempotent.
    """

    def __init__(self, rules: Iterable[SynonymRule] = ()):
        self.rules: list[SynonymRule] = list(rules)
        self._validate()
        # variant (lowercase) -> canonical, longest variants first
        self._by_variant: dict[str, str] = {}
        for rule in self.rules:
            for variant in rule.variants:
                self._by_variant[variant.lower()] = rule.canonical
        self._ordered = sorted(self._by_variant, key=len, reverse=True)

    def _validate(self) -> None:
        canonicals = set()
        for rule in self.rules:
            if len(tokenize(rule.canonical)) != 1:
                raise SynonymTableError(
                    f"canonical {rule.canonical!r} is not a single token"
                )
            canonicals.add(rule.canonical.lower())
        seen: dict[str, str] = {}
        for rule in self.rules:
            for variant in rule.variants:
                low = variant.lower()
                if not tokenize(low):
                    raise SynonymTableError(f"variant {variant!r} has no tokens")
                if low in seen and seen[low] != rule.canonical:
                    raise ConflictingVariant(variant, (seen[low], rule.canonical))
                seen[low] = rule.canonical
                if low == rule.canonical.lower():
                    continue  # canonical listed as its own variant: harmless
                overlap = set(tokenize(low)) & canonicals
                if overlap:
                    raise SynonymTableError(
                        f"variant {variant!r} contains canonical token(s) "
                        f"{sorted(overlap)}; rewriting would not be idempotent"
                    )

    def is_empty(self) -> bool:
        return not self._by_variant

    def lookup(self) -> list[tuple[str, str]]:
        """(lowercase variant, canonical) pairs, longest variant first."""
        return [(v, self._by_variant[v]) for v in self._ordered]

    def to_rows(self) -> list[dict]:
        return [
            {"canonical": r.canonical, "variants": list(r.variants)}
            for r in self.rules
        ]

    @classmethod
    def from_rows(cls, rows: Iterable[dict]) -> "SynonymTable":
        return cls(
            SynonymRule(row["canonical"], tuple(row["variants"])) for row in rows
        )


def _is_word_char(c: str) -> bool:
    return bool(_TOKEN_RE.fullmatch(c))


def normalize_synonyms(text: str, table: SynonymTable) -> str:
    """Replace variant phrases by their canonical token.

    Longest match wins at each position, scanning left to right without
    overlaps; matches must start and end on word boundaries. Matching is
    case-insensitive, replacement text is the canonical as spelled in the
    table.
    """
    if table.is_empty() or not text:
        return text
    # per-char lowering keeps indices aligned (str.lower can change length)
    low = "".join(c.lower() if len(c.lower()) == 1 else c for c in text)
    variants = table.lookup()
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        replaced = False
        if i == 0 or not (_is_word_char(text[i - 1]) and _is_word_char(text[i])):
            for variant, canonical in variants:
                end = i + len(variant)
                if low.startswith(variant, i):
                    if end < n and _is_word_char(text[end]) and _is_word_char(text[end - 1]):
                        continue  # would split a token at the far edge
                    out.append(canonical)
                    i = end
                    replaced = True
                    break
        if not replaced:
            out.append(text[i])
            i += 1
    return "".join(out)


class StemmerKind(str, Enum):
    NONE = "none"
    SUFFIX_STRIPPING = "suffix"


def _data_file(name: str) -> str:
    return resources.files("labeltrace").joinpath("data", name).read_text("utf-8")


def load_stop_words(source: str | Path) -> set[str]:
    """Read a stop-word list file: one word per line, '#' comments."""
    text = Path(source).read_text("utf-8")
    return parse_stop_words(text)


def parse_stop_words(text: str) -> set[str]:
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return words


def default_stop_words(language: str) -> set[str]:
    try:
        return parse_stop_words(_data_file(f"stopwords_{language}.txt"))
    except FileNotFoundError:
        return set()


@dataclass(frozen=True)
class AnalyzerConfig:
    language: str = "en"
    stop_words: frozenset[str] = field(default_factory=frozenset)
    stemmer: StemmerKind = StemmerKind.NONE
    synonyms: SynonymTable = field(default_factory=SynonymTable)

    @classmethod
    def create(
        cls,
        language: str = "en",
        stop_words: Iterable[str] | None = None,
        stemmer: StemmerKind | str = StemmerKind.NONE,
        synonyms: SynonymTable | None = None,
    ) -> "AnalyzerConfig":
        if stop_words is None:
            stop_words = default_stop_words(language)
        return cls(
            language=language,
            stop_words=frozenset(w.lower() for w in stop_words),
            stemmer=StemmerKind(stemmer),
            synonyms=synonyms if synonyms is not None else SynonymTable(),
        )

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "stop_words": sorted(self.stop_words),
            "stemmer": self.stemmer.value,
            "synonyms": self.synonyms.to_rows(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalyzerConfig":
        return cls(
            language=data["language"],
            stop_words=frozenset(data["stop_words"]),
            stemmer=StemmerKind(data["stemmer"]),
            synonyms=SynonymTable.from_rows(data["synonyms"]),
        )


def analyze(text: str, config: AnalyzerConfig) -> list[str]:
    """Run the full pipeline; output tokens are never stop words."""
    text = normalize_synonyms(text, config.synonyms)
    tokens = tokenize(text.lower())
    tokens = [t for t in tokens if t not in config.stop_words]
    if config.stemmer is StemmerKind.SUFFIX_STRIPPING:
        tokens = [porter.stem(t) for t in tokens]
        # a stem may collide with a stop word ("wills" -> "will")
        tokens = [t for t in tokens if t not in config.stop_words]
    return tokens


def load_synonym_table(source: str | Path) -> SynonymTable:
    """Load a synonym TSV: canonical<TAB>variant[<TAB>variant...] per line."""
    return parse_synonym_table(Path(source).read_text("utf-8"))


def parse_synonym_table(text: str) -> SynonymTable:
    rules = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in line.split("\t")]
        fields = [f for f in fields if f]
        if len(fields) < 2:
            raise SynonymTableError(
                f"line {line_no}: expected canonical<TAB>variant..., got {line!r}"
            )
        rules.append(SynonymRule(fields[0], tuple(fields[1:])))
    return SynonymTable(rules)
