"""Scan and build configuration, plus the flat key=value config file."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_BUNDLE_GLOBS = ("*.properties",)
DEFAULT_SOURCE_EXTENSIONS = (".java", ".kt", ".ts", ".py", ".rs")

# trailing _<locale> before the extension: 2-3 letters, optional region
_LOCALE_SUFFIX_RE = re.compile(
    r"^(?P<base>.+?)_(?P<locale>[A-Za-z]{2,3}(?:[-_](?:[A-Za-z]{2}|[0-9]{3}))?)$"
)


@dataclass(frozen=True)
class ScanConfig:
    bundle_globs: tuple[str, ...] = DEFAULT_BUNDLE_GLOBS
    default_locale: str = "en"
    source_extensions: tuple[str, ...] = DEFAULT_SOURCE_EXTENSIONS

    def locale_for(self, filename: str) -> str:
        """Locale from a resource filename suffix, else the default.

        ``app_fr.properties`` -> ``fr``; ``messages_en_US.properties`` ->
        ``en-US``; a stem without a locale-shaped suffix gets the default.
        """
        stem = Path(filename).stem
        match = _LOCALE_SUFFIX_RE.match(stem)
        if not match:
            return self.default_locale
        return match.group("locale").replace("_", "-")


class ConfigFileError(ValueError):
    """Bad line or unknown key in a config file."""


def parse_flat_config(text: str) -> dict[str, str]:
    """Parse the flat ``key = value`` config format ('#' comments)."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigFileError(f"line {line_no}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def load_flat_config(path: str | Path) -> dict[str, str]:
    return parse_flat_config(Path(path).read_text("utf-8"))


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in value.split(",") if item.strip())


@dataclass(frozen=True)
class BuildSettings:
    """Everything cli_index needs besides the two roots.

    File-sourced settings (``--config``) are overridden by flags.
    Recognized keys: locale, default_locale, bundle_globs,
    source_extensions, synonyms, stop_words, stemmer, traces.
    """

    locale: str = "en"
    scan: ScanConfig = field(default_factory=ScanConfig)
    synonyms_path: str | None = None
    stop_words_path: str | None = None
    stemmer: str = "suffix"
    traces_path: str | None = None

    _KEYS = {
        "locale",
        "default_locale",
        "bundle_globs",
        "source_extensions",
        "synonyms",
        "stop_words",
        "stemmer",
        "traces",
    }

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> "BuildSettings":
        unknown = set(values) - cls._KEYS
        if unknown:
            raise ConfigFileError(f"unknown config keys: {sorted(unknown)}")
        locale = values.get("locale", "en")
        scan = ScanConfig(
            bundle_globs=_split_list(values["bundle_globs"])
            if "bundle_globs" in values
            else DEFAULT_BUNDLE_GLOBS,
            default_locale=values.get("default_locale", locale),
            source_extensions=_split_list(values["source_extensions"])
            if "source_extensions" in values
            else DEFAULT_SOURCE_EXTENSIONS,
        )
        stemmer = values.get("stemmer", "suffix")
        if stemmer not in ("suffix", "none"):
            raise ConfigFileError(f"stemmer must be 'suffix' or 'none', got {stemmer!r}")
        return cls(
            locale=locale,
            scan=scan,
            synonyms_path=values.get("synonyms"),
            stop_words_path=values.get("stop_words"),
            stemmer=stemmer,
            traces_path=values.get("traces"),
        )
