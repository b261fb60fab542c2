import pytest

from src.core.base import LocalBase
from src.core.database import Database
from src.core.errors import UsageError
from src.core.schema_loader import write_json
from src.services.check_service import CheckService
from src.services.generator import gen_example


def make_db():
    db = Database("sqlite:///:memory:")
    db.create_tables()
    return db


def make_instance(**kwargs):
    instance = {"r": 2, "k": None, "n": None, "l": None, "i": None, "base": "Q", "method": None}
    instance.update(kwargs)
    return instance


# ── verdicts ───────────────────────────────────────────────────────────────

def test_grading_passes():
    report = CheckService().run("grading", make_instance(k=1, n=2))
    assert report["verdict"] == "pass"
    assert report["method"] == "exact"
    assert report["schema"] == "v1/Report"
    assert "l" not in report["instance"]


def test_irreducible_and_loc_iso_pass():
    service = CheckService()
    assert service.run("irreducible", make_instance(k=1, n=2, l=0, i=-1))["verdict"] == "pass"
    report = service.run("loc-iso", make_instance(k=3, n=2, l=2, i=2))
    assert report["verdict"] == "pass"
    assert report["witness"]["data"]["a"] == "x0_2"


def test_characteristic_two_irreducibility_fails():
    report = CheckService().run("irreducible", make_instance(k=1, n=2, l=0, i=-1, base="F2"))
    assert report["verdict"] == "fail"


def test_algebra_errors_become_failures():
    report = CheckService().run("grading", make_instance(r=1, k=0, n=1))
    assert report["verdict"] == "fail"
    assert report["witness"]["type"] == "RowTooShort"


def test_pair_budget_turns_into_timeout():
    service = CheckService(config={"oracle": {"pair_budget": 0}})
    report = service.run("regseq", make_instance(k=0, n=2, method="quotient"))
    assert report["verdict"] == "timeout"
    assert report["witness"]["pairs"] == 1


def test_universal_map_from_bundle_file(tmp_path):
    bundle, _ = gen_example(2, LocalBase.rational(), seed=1, steps=2)
    path = write_json(tmp_path / "row.json", bundle.to_dict())
    report = CheckService().run("universal-map", {"in": str(path), "precision": 32})
    assert report["verdict"] == "pass"
    assert report["witness"]["stabilization_index"] >= 0


# ── usage errors ───────────────────────────────────────────────────────────

def test_unknown_claim_and_missing_keys():
    service = CheckService()
    with pytest.raises(UsageError):
        service.run("frobenius", make_instance(k=0, n=1))
    with pytest.raises(UsageError):
        service.run("grading", make_instance(k=0))


def test_regseq_over_non_field_is_usage_error():
    with pytest.raises(UsageError):
        CheckService().run("regseq", make_instance(k=0, n=1, base="Z(2)"))


# ── ledger ─────────────────────────────────────────────────────────────────

def test_reports_are_recorded():
    db = make_db()
    service = CheckService(db)
    service.run("grading", make_instance(k=1, n=2))
    service.run("grading", make_instance(r=1, k=0, n=1))
    stats = db.get_stats()
    assert stats["checks"] == 2
    assert stats["checks_pass"] == 1
    assert stats["checks_fail"] == 1


def test_without_ledger_nothing_is_recorded():
    service = CheckService()
    report = service.run("grading", make_instance(k=1, n=2))
    assert service.record(report) is None
