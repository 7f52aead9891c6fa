import json
from dataclasses import replace

import pytest
from pydantic import ValidationError

from backend.config import settings
from backend.golden.golden_store import GOLDEN_FILES, GoldenStore, load_module
from backend.golden.models import SECTION_REFERENCE, GoldenRecord


@pytest.fixture
def store():
    return GoldenStore()


@pytest.mark.parametrize("kind", GOLDEN_FILES)
def test_records_load_with_citations(store, kind):
    records = store.records(kind, include_deep=True)
    assert records
    assert all(record.citation for record in records)
    assert all(SECTION_REFERENCE.search(record.citation) for record in records)


def test_deep_records_filtered(store):
    every = store.records("localization", include_deep=True)
    shallow = store.records("localization", include_deep=False)
    assert len(shallow) < len(every)
    assert not any(record.deep for record in shallow)


def test_unknown_kind(store):
    with pytest.raises(ValueError):
        store.records("nonsense")


def test_citation_is_required():
    with pytest.raises(ValidationError):
        GoldenRecord(type_label="G", rank=2, m=2, expected={"n_c": 2})
    record = GoldenRecord(type_label="G", rank=2, m=2, k=1, citation="§4.9 G2 at 1/2", expected={"n_c": 2})
    assert record.label == "G2 c=1/2"


def test_citation_needs_section_reference():
    with pytest.raises(ValidationError):
        GoldenRecord(type_label="G", rank=2, m=2, k=1, citation="G2 at 1/2", expected={"n_c": 2})
    assert GoldenRecord(type_label="G", rank=2, m=2, citation="§ 4.9.2(c)", expected={"a_m": [2, 2]})
    assert GoldenRecord(type_label="G", rank=2, m=2, citation="", expected={}).citation == ""


def test_summary_table(store):
    table = store.summary()
    assert set(table["file"]) == set(GOLDEN_FILES)
    assert list(table.columns) == ["file", "case", "deep", "fields", "citation"]
    assert (table["citation"].str.len() > 0).all()


def test_golden_dir_from_settings(tmp_path):
    (tmp_path / "torsion.json").write_text(json.dumps({"records": [
        {"type_label": "A", "rank": 1, "m": 2, "citation": "§4.1 A1: A_2 = Z/2",
         "expected": {"a_m": [2], "a_m_circ": []}},
    ]}))
    store = GoldenStore(replace(settings, golden_dir=str(tmp_path)))
    records = store.records("torsion")
    assert len(records) == 1
    assert records[0].expected.a_m == [2]
    assert store.module_paths() == []


def test_module_file_with_bad_keys(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "type": "A", "rank": 1, "c": "1/2", "dim": 1,
        "S": {"zero": [[-1]], "1": [[-1]]},
        "Xi": {"o1": [["1/2"]], "delta": [[1]]},
    }))
    with pytest.raises(ValueError):
        load_module(str(path))


def test_module_file_needs_positive_dimension(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"type": "A", "rank": 1, "c": "1/2", "dim": 0, "S": {}, "Xi": {}}))
    with pytest.raises(ValidationError):
        load_module(str(path))
