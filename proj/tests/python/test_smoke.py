import json
import os
from pathlib import Path

import pytest

import flatcheck

CORPUS = Path(os.environ.get("FLATCHECK_CORPUS_DIR", Path(__file__).resolve().parents[2] / "corpus"))


def torsion(ideal=()):
    return flatcheck.Problem(["y"], ["x"], [["x*y"]], list(ideal), label="A/(xy)")


def test_not_flat_with_witness():
    report = flatcheck.check(torsion())
    assert report["schema"] == flatcheck.REPORT_SCHEMA
    verdict = report["verdict"]
    assert verdict["status"] == "not_flat"
    assert verdict["chain"][0]["complement_condition"]["witness"]["coefficient"] == "y"


def test_flat_after_restriction():
    verdict = flatcheck.check(torsion(["y"]))["verdict"]
    assert verdict["status"] == "flat"
    assert verdict["certified_order"] == "exact"


def test_flattener_and_openness():
    problem = flatcheck.Problem(["y1", "y2"], ["x"], [["y1*x - y2"]])
    result = flatcheck.flattener(problem, points=["0,0:1"])["flattener"]
    assert result["total"] == ["y1", "y2"]
    assert all(p["contained"] for p in result["openness"])


def test_oracle_and_validate_agree():
    problem = flatcheck.Problem(["y"], ["x"], [["x", "0"], ["0", "y"]])
    assert flatcheck.oracle(problem)["oracle"]["status"] == "not_flat"
    validation = flatcheck.validate(problem)["validation"]
    assert validation["consistent"] and validation["agree"]


def test_problem_round_trip():
    problem = flatcheck.Problem.from_text(torsion().to_json())
    assert problem.presentation == [["y*x"]]
    assert flatcheck.Problem.from_text(problem.to_json()).to_json() == problem.to_json()


def test_dict_and_path_inputs():
    spec = json.loads((CORPUS / "double_cover.problem.json").read_text())
    assert flatcheck.check(spec)["verdict"]["status"] == "flat"
    assert flatcheck.check(CORPUS / "double_cover.problem.json")["verdict"]["status"] == "flat"


def test_input_errors_raise_value_error():
    with pytest.raises(flatcheck.ProblemError):
        flatcheck.Problem(["y"], ["x"], [["x*z"]])
    with pytest.raises(ValueError):
        flatcheck.Problem(["y"], ["x"], [["x"]], ["x"])
    with pytest.raises(ValueError):
        flatcheck.flattener(torsion(), points=["0,0,0"])


def test_exit_codes():
    _, text, code = flatcheck.run("check", torsion())
    assert code == 0 and "not_flat" in text


def test_corpus_matches():
    ok, entries = flatcheck.run_corpus(CORPUS)
    assert ok and len(entries) >= 10
