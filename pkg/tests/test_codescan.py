from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labeltrace.bundles import scan_resources
from labeltrace.codescan import (
    DYNAMIC,
    STATIC,
    extract_literals,
    find_dead_labels,
    ingest_trace_log,
    merge_usages,
    resolve_static_usages,
    UsageMap,
)
from test_bundles import write_tree


class TestExtractLiterals:
    def test_double_quoted(self):
        occurrences, warnings = extract_literals("f", 't = i18n("app.title")')
        assert warnings == []
        assert [(o.text, o.line) for o in occurrences] == [("app.title", 1)]

    def test_escaped_quote_inside(self):
        occurrences, _ = extract_literals("f", r's = "a\"b"')
        assert occurrences[0].text == 'a"b'

    def test_unterminated_dropped_with_warning(self):
        occurrences, warnings = extract_literals("f", 'x = "unterminated')
        assert occurrences == []
        assert len(warnings) == 1

    def test_single_quotes(self):
        occurrences, _ = extract_literals("f", "k = 'a.b' + 'c'")
        assert [o.text for o in occurrences] == ["a.b", "c"]

    def test_line_numbers_of_opening_quote(self):
        occurrences, _ = extract_literals("f", 'a = "one"\nb = "two"\nc = "three"')
        assert [(o.text, o.line) for o in occurrences] == [
            ("one", 1), ("two", 2), ("three", 3),
        ]

    def test_escaped_backslash(self):
        occurrences, _ = extract_literals("f", r'p = "a\\b"')
        assert occurrences[0].text == "a\\b"

    @given(st.text(max_size=200))
    @settings(max_examples=200)
    def test_total_on_arbitrary_text(self, content):
        occurrences, warnings = extract_literals("f", content)
        assert all(o.line >= 1 for o in occurrences)


@pytest.fixture
def store(tmp_path):
    write_tree(
        tmp_path / "res",
        {"app_en.properties": "k.a=Alpha\nk.b=Beta\nk.dead=Dead\nk.dyn=Dynamic\n"},
    )
    return scan_resources(tmp_path / "res")


class TestResolveStaticUsages:
    def test_exact_match_produces_link(self, store, tmp_path):
        write_tree(tmp_path / "src", {"A.java": 'get("k.a");'})
        usage = resolve_static_usages(store, tmp_path / "src")
        links = usage.for_key("k.a")
        assert len(links) == 1
        assert links[0].provenance == STATIC
        assert links[0].element.source_file == "A.java"
        assert links[0].element.unit_name == "A"
        assert links[0].element.line == 1

    def test_substring_is_not_a_match(self, store, tmp_path):
        write_tree(tmp_path / "src", {"A.java": 'get("prefix.k.a");'})
        usage = resolve_static_usages(store, tmp_path / "src")
        assert usage.links == {}

    def test_two_keys_one_file(self, store, tmp_path):
        write_tree(tmp_path / "src", {"A.java": 'get("k.a");\nget("k.b");'})
        usage = resolve_static_usages(store, tmp_path / "src")
        a, b = usage.for_key("k.a")[0], usage.for_key("k.b")[0]
        assert a.element.source_file == b.element.source_file == "A.java"
        assert (a.element.line, b.element.line) == (1, 2)

    def test_one_link_per_key_and_file(self, store, tmp_path):
        write_tree(tmp_path / "src", {"A.java": 'get("k.a");\nget("k.a");'})
        usage = resolve_static_usages(store, tmp_path / "src")
        links = usage.for_key("k.a")
        assert len(links) == 1
        assert links[0].element.line == 1  # first occurrence wins

    def test_extension_filter(self, store, tmp_path):
        write_tree(tmp_path / "src", {"notes.md": '"k.a"', "A.java": '"k.a"'})
        usage = resolve_static_usages(store, tmp_path / "src")
        assert [l.element.source_file for l in usage.for_key("k.a")] == ["A.java"]

    def test_every_link_key_exists_in_store(self, store, tmp_path):
        write_tree(
            tmp_path / "src",
            {"A.java": '"k.a"; "not.a.key"; "k.b"', "B.kt": '"k.dyn"'},
        )
        usage = resolve_static_usages(store, tmp_path / "src")
        store_keys = {e.key for e in store.entries}
        assert set(usage.links) <= store_keys


class TestTraceLog:
    def test_well_formed_line(self):
        records, errors = ingest_trace_log(
            "2024-01-01T10:00:00\tk.dyn\tsrc/ui/Panel.java"
        )
        assert errors == []
        assert records[0].key == "k.dyn"
        assert records[0].element_path == "src/ui/Panel.java"

    def test_empty_stream(self):
        assert ingest_trace_log("") == ([], [])

    def test_two_field_line_malformed(self):
        records, errors = ingest_trace_log("t\tk.dyn")
        assert records == []
        assert [e.line for e in errors] == [1]


class TestMergeUsages:
    def test_union_of_static_and_dynamic(self, store, tmp_path):
        write_tree(tmp_path / "src", {"F1.java": '"k.a"'})
        static = resolve_static_usages(store, tmp_path / "src")
        records, _ = ingest_trace_log("t1\tk.dyn\tF2.java")
        merged = merge_usages(static, records)
        assert merged.for_key("k.a")[0].provenance == STATIC
        dyn = merged.for_key("k.dyn")[0]
        assert dyn.provenance == DYNAMIC
        assert dyn.element.line == 0
        assert dyn.element.unit_name == "F2"

    def test_repeated_trace_records_collapse(self):
        records, _ = ingest_trace_log("t1\tk\tF.java\nt2\tk\tF.java\nt3\tk\tF.java")
        merged = merge_usages(UsageMap(), records)
        assert len(merged.for_key("k")) == 1

    def test_same_key_both_provenances(self, store, tmp_path):
        write_tree(tmp_path / "src", {"F.java": '"k.a"'})
        static = resolve_static_usages(store, tmp_path / "src")
        records, _ = ingest_trace_log("t\tk.a\tF.java")
        merged = merge_usages(static, records)
        assert {l.provenance for l in merged.for_key("k.a")} == {STATIC, DYNAMIC}

    def test_empty_plus_empty(self):
        assert merge_usages(UsageMap(), []).links == {}

    def test_idempotent_with_empty_traces(self, store, tmp_path):
        write_tree(tmp_path / "src", {"F.java": '"k.a"\n"k.b"'})
        static = resolve_static_usages(store, tmp_path / "src")
        records, _ = ingest_trace_log("t\tk.dyn\tG.java")
        merged = merge_usages(static, records)
        again = merge_usages(merged, [])
        assert again.links == merged.links


class TestFindDeadLabels:
    def test_unused_keys_reported_sorted(self, store, tmp_path):
        write_tree(tmp_path / "src", {"A.java": '"k.a"'})
        usage = resolve_static_usages(store, tmp_path / "src")
        assert find_dead_labels(store, usage) == ["k.b", "k.dead", "k.dyn"]

    def test_full_coverage_means_no_dead(self, store, tmp_path):
        write_tree(
            tmp_path / "src",
            {"A.java": '"k.a"; "k.b"; "k.dead"; "k.dyn"'},
        )
        usage = resolve_static_usages(store, tmp_path / "src")
        assert find_dead_labels(store, usage) == []

    def test_empty_usage_reports_everything(self, store):
        assert find_dead_labels(store, UsageMap()) == sorted(
            {e.key for e in store.entries}
        )

    def test_partition_invariant(self, store, tmp_path):
        write_tree(tmp_path / "src", {"A.java": '"k.a"'})
        usage = resolve_static_usages(store, tmp_path / "src")
        records, _ = ingest_trace_log("t\tk.dyn\tF.java")
        usage = merge_usages(usage, records)
        dead = set(find_dead_labels(store, usage))
        used = set(usage.links)
        store_keys = {e.key for e in store.entries}
        assert dead & used == set()
        assert dead | (used & store_keys) == store_keys
