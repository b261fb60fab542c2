import json

import pytest

from src.cli.main import main
from src.core.base import LocalBase
from src.core.laurent import LaurentPoly
from src.core.schema_loader import read_json, write_json
from src.services.rows import RowBundle


@pytest.fixture
def run(tmp_path):
    config = tmp_path / "absent.yaml"

    def invoke(*argv):
        return main(["--config", str(config), *argv])

    return invoke


def write_config(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text, encoding="utf-8")
    return str(path)


# ── artifacts ──────────────────────────────────────────────────────────────

def test_gen_row_writes_bundle_and_manifest(run, tmp_path):
    out = tmp_path / "row.json"
    assert run("gen-row", "--r", "2", "--seed", "3", "--out", str(out)) == 0
    data = read_json(out)
    assert data["schema"] == "v1/RowBundle"
    assert data["seed"] == 3
    manifest = read_json(tmp_path / "row.manifest.json")
    assert manifest["command"] == "gen-row"
    assert manifest["outputs"] == [str(out)]


def test_gen_row_is_reproducible(run, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run("gen-row", "--r", "3", "--base", "Z(2)", "--seed", "9", "--out", str(first))
    run("gen-row", "--r", "3", "--base", "Z(2)", "--seed", "9", "--out", str(second))
    assert first.read_bytes() == second.read_bytes()


def test_reduce_and_reverify(run, tmp_path):
    row, result = tmp_path / "row.json", tmp_path / "red.json"
    run("gen-row", "--r", "2", "--seed", "1", "--out", str(row))
    assert run("reduce", "--in", str(row), "--out", str(result), "--precision", "48") == 0
    assert read_json(result)["precision"] == 48
    assert run("reduce", "--verify-only", "--result", str(result), "--in", str(row)) == 0
    assert run("reduce", "--verify-only", "--result", str(result)) == 0
    manifest = read_json(tmp_path / "red.manifest.json")
    assert str(row) in manifest["inputs"]


def test_tampered_result_exits_not_unimodular(run, tmp_path):
    row, result = tmp_path / "row.json", tmp_path / "red.json"
    run("gen-row", "--r", "2", "--seed", "4", "--out", str(row))
    run("reduce", "--in", str(row), "--out", str(result))
    data = read_json(result)
    data["certificate"]["target_exponent"] += 1
    write_json(result, data)
    assert run("reduce", "--verify-only", "--result", str(result)) == 3


def test_low_precision_exits_precision_loss(run, tmp_path):
    base = LocalBase.rational()
    zero, one = LaurentPoly.zero(base), LaurentPoly.constant(1, base)
    witness = LaurentPoly.monomial(1, 5, base)
    bundle = RowBundle((zero, one, zero), (zero, witness, zero), witness, base)
    row = write_json(tmp_path / "row.json", bundle.to_dict())
    assert run("reduce", "--in", str(row), "--out", str(tmp_path / "red.json"), "--precision", "4") == 4


def test_complete2(run, tmp_path):
    row, out = tmp_path / "pair.json", tmp_path / "matrix.json"
    run("gen-row", "--r", "1", "--seed", "2", "--out", str(row))
    assert run("complete2", "--in", str(row), "--out", str(out)) == 0
    data = read_json(out)
    assert data["determinant"] == {"0": "1"}
    assert data["matrix"][0][0] == read_json(row)["row"][0]


def test_presentation(run, tmp_path):
    out = tmp_path / "b.json"
    assert run("presentation", "--r", "2", "--k", "1", "--n", "2", "--out", str(out)) == 0
    data = read_json(out)
    assert len(data["vars"]) == 18
    assert len(data["relations"]) == 2


# ── check ──────────────────────────────────────────────────────────────────

def test_check_prints_verdict(run, capsys):
    assert run("check", "--claim", "grading", "--r", "2", "--k", "1", "--n", "2") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "pass"


def test_check_expands_instance_lists(run, capsys):
    code = run("check", "--claim", "irreducible", "--r", "2", "--k", "1", "--n", "2", "--l", "0", "--i=-1,0")
    assert code == 0
    reports = json.loads(capsys.readouterr().out)
    assert [r["instance"]["i"] for r in reports] == [-1, 0]


def test_check_failure_exit_code(run, capsys):
    code = run("check", "--claim", "irreducible", "--r", "2", "--k", "1", "--n", "2", "--l", "0", "--i=-1", "--base", "F2")
    assert code == 1


def test_check_timeout_exit_code(tmp_path, capsys):
    config = write_config(tmp_path, "oracle:\n  pair_budget: 0\n")
    code = main([
        "--config", config, "check", "--claim", "regseq",
        "--r", "2", "--k", "0", "--n", "2", "--method", "quotient",
    ])
    assert code == 5


def test_failure_outranks_timeout(tmp_path, capsys):
    config = write_config(tmp_path, "oracle:\n  pair_budget: 0\n")
    code = main([
        "--config", config, "check", "--claim", "regseq",
        "--r", "1,2", "--k", "0", "--n", "2", "--method", "quotient",
    ])
    assert code == 1


def test_check_writes_report_and_ledger(tmp_path, capsys):
    out = tmp_path / "report.json"
    ledger = f"sqlite:///{tmp_path / 'ledger.db'}"
    code = main([
        "--config", str(tmp_path / "absent.yaml"), "--ledger", ledger,
        "check", "--claim", "grading", "--r", "2", "--k", "0", "--n", "1", "--out", str(out),
    ])
    assert code == 0
    assert read_json(out)["verdict"] == "pass"
    assert read_json(tmp_path / "report.manifest.json")["exit_code"] == 0


# ── usage ──────────────────────────────────────────────────────────────────

def test_reduce_without_input_is_usage_error(run):
    assert run("reduce", "--out", "x.json") == 2


def test_verify_only_needs_result(run):
    assert run("reduce", "--verify-only") == 2


def test_unknown_base_is_usage_error(run, tmp_path):
    assert run("gen-row", "--r", "2", "--base", "F4", "--out", str(tmp_path / "x.json")) == 2


def test_argparse_errors_exit_two(run):
    with pytest.raises(SystemExit) as exc:
        run("check", "--claim", "nonsense")
    assert exc.value.code == 2
