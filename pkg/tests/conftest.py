from __future__ import annotations

from pathlib import Path

import pytest

from labeltrace import BuildSettings
from labeltrace.engine import build_trace_db

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
PROJECT = FIXTURES / "project"
GOLDEN = FIXTURES / "golden"
EVAL = FIXTURES / "eval"
TEST_DATA = Path(__file__).resolve().parent / "data"

GOLDEN_QUERIES = {
    "incorrect_password": "incorrect password",
    "reference_pressure": "reference pressure",
    "n50_phrase": "air change rate at 50 Pa",
    "n50_symbol": "n50",
    "legacy_volume": "legacy building volume",
}


def fixture_settings() -> BuildSettings:
    return BuildSettings(
        locale="en", synonyms_path=str(PROJECT / "synonyms.tsv")
    )


def build_fixture_db():
    return build_trace_db(
        PROJECT / "resources",
        PROJECT / "src",
        PROJECT / "traces.tsv",
        fixture_settings(),
    )


@pytest.fixture(scope="session")
def fixture_db():
    db, report = build_fixture_db()
    return db


@pytest.fixture(scope="session")
def fixture_report():
    db, report = build_fixture_db()
    return report
