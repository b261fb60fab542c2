import json

import pytest

from src.core.base import LocalBase
from src.core.errors import SchemaError
from src.core.schema_loader import dumps_canonical, load_artifact, load_artifact_file, read_json, write_json
from src.services.generator import gen_example
from src.services.presentations import RingPresentation, build_presentation
from src.services.rows import RowBundle


def make_bundle(seed=0):
    bundle, _ = gen_example(2, LocalBase.localized(3), seed=seed, steps=3)
    return bundle


def test_canonical_json_is_sorted_with_trailing_newline():
    text = dumps_canonical({"b": 1, "a": [1, 2]})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1, 2], "b": 1}


def test_write_creates_parent_directories(tmp_path):
    path = write_json(tmp_path / "nested" / "out.json", {"x": 1})
    assert read_json(path) == {"x": 1}


def test_bundle_file_loads_as_bundle(tmp_path):
    bundle = make_bundle()
    path = write_json(tmp_path / "row.json", bundle.to_dict())
    loaded = load_artifact_file(path, "RowBundle")
    assert isinstance(loaded, RowBundle)
    assert loaded.to_dict() == bundle.to_dict()


def test_same_seed_writes_identical_bytes(tmp_path):
    first = write_json(tmp_path / "a.json", make_bundle(5).to_dict())
    second = write_json(tmp_path / "b.json", make_bundle(5).to_dict())
    assert first.read_bytes() == second.read_bytes()


def test_presentation_dispatch():
    presentation = build_presentation(2, 0, 1, LocalBase.rational())
    assert isinstance(load_artifact(presentation.to_dict()), RingPresentation)


def test_wrong_schema_tag_is_rejected():
    data = make_bundle().to_dict()
    with pytest.raises(SchemaError):
        load_artifact(data, "ReductionResult")
    data["schema"] = "v2/RowBundle"
    with pytest.raises(SchemaError):
        load_artifact(data)


def test_unreadable_files(tmp_path):
    with pytest.raises(SchemaError):
        read_json(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        read_json(broken)
