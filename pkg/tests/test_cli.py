# end-to-end tests for the command line
# each test runs main() in-process and reads back the JSON report

import json

import pytest

from arithlab.core.config import Settings, settings
from arithlab.main import main


def run_cli(tmp_path, *argv, name="report.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


@pytest.fixture(scope="module")
def fixtures(fixture_dir):
    return {p.stem: str(p) for p in fixture_dir.glob("*.json")}


def test_unknown_suite(tmp_path):
    """Test that an unknown suite name exits with the input-error code"""
    code, report = run_cli(tmp_path, "verify", "--suite", "nonsense")
    assert code == 2
    assert report is None


def test_missing_fixture(tmp_path):
    """Test that a missing fixture file is an input error"""
    code, _ = run_cli(tmp_path, "forms", "invariants", "--form", str(tmp_path / "absent.json"))
    assert code == 2


def test_missing_flag(tmp_path):
    """Test that a required option left out is an input error"""
    code, _ = run_cli(tmp_path, "forms", "jnab", "--n", "5", "--a", "2")
    assert code == 2


def test_defaults_come_from_settings(tmp_path):
    """Test that an unflagged run records the configured seed and budget"""
    code, report = run_cli(tmp_path, "verify", "--suite", "reciprocity")
    assert code == 0
    assert report["config"]["seed"] == settings.SEED
    assert report["config"]["budget"] == settings.TRACE_BUDGET
    assert not {"REPORT_DIR", "FIXTURE_DIR"} & set(Settings.model_fields)


def test_forms_invariants(tmp_path, fixtures):
    """Test the invariants report of the hyperbolic plane"""
    code, report = run_cli(tmp_path, "forms", "invariants", "--form", fixtures["q1"])
    assert code == 0
    assert report["command"] == "forms invariants"
    assert report["passed"] is True
    assert report["fixture_digest"] is not None
    result = report["result"]
    assert result["rank"] == 2
    assert result["det"] == "-1"
    assert result["signatures"] == {"inf": [1, 1]}


def test_report_is_deterministic(tmp_path, fixtures):
    """Test that two runs write byte-identical reports"""
    argv = ["forms", "invariants", "--form", fixtures["j7"]]
    run_cli(tmp_path, *argv, name="first.json")
    run_cli(tmp_path, *argv, name="second.json")
    first = (tmp_path / "first.json").read_bytes()
    second = (tmp_path / "second.json").read_bytes()
    assert first.replace(b"first.json", b"") == second.replace(b"second.json", b"")


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "separation", "--budget", "10", "--seed", "3"],
    ["verify", "--suite", "cocycle", "--seed", "3"],
])
def test_seeded_suite_is_deterministic(tmp_path, argv):
    """Test that rerunning a seeded suite rewrites the same bytes"""
    out = tmp_path / "suite.json"
    first_code = main([*argv, "--out", str(out)])
    first = out.read_bytes()
    second_code = main([*argv, "--out", str(out)])
    assert second_code == first_code
    assert out.read_bytes() == first
    assert json.loads(first)["config"]["seed"] == 3


def test_report_to_stdout(capsys, fixtures):
    """Test that reports go to stdout when --out is omitted"""
    code = main(["forms", "invariants", "--form", fixtures["j7"]])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["result"]["signatures"] == {"inf": [3, 4]}


def test_forms_equiv(tmp_path, fixtures):
    """Test that <1, -1> and <2, -2> are equivalent"""
    code, report = run_cli(tmp_path, "forms", "equiv", "--lhs", fixtures["q1"], "--rhs", fixtures["q2"])
    assert code == 0
    assert report["result"]["equivalent"] is True


def test_forms_jnab(tmp_path):
    """Test the J_5^{2,3} report"""
    code, report = run_cli(tmp_path, "forms", "jnab", "--n", "5", "--a", "2", "--b", "3")
    assert code == 0
    assert report["result"]["entries"] == ["-96", "-36", "4", "72", "48"]
    assert report["result"]["invariants"]["rank"] == 5
    assert report["config"]["options"] == {"a": "2", "b": "3", "n": 5}


def test_forms_admissible(tmp_path, fixtures):
    """Test the admissibility report over Q(sqrt 2)"""
    code, report = run_cli(tmp_path, "forms", "admissible", "--form", fixtures["admissible_j5"])
    assert code == 0
    assert report["result"]["parity_even"] is True


def test_cocycle_solve(tmp_path):
    """Test Hilbert 90 for tau_3 o T^{2,3}"""
    code, report = run_cli(tmp_path, "cocycle", "solve", "--n", "3", "--a", "2", "--b", "3", "--seed", "5")
    assert code == 0
    result = report["result"]
    assert result["relation_checked"] is True
    assert result["transported_form"] is not None
    assert report["config"]["seed"] == 5


def test_cocycle_even_n_needs_chi(tmp_path):
    """Test that the inner kind refuses even n and the chi kind accepts it"""
    code, _ = run_cli(tmp_path, "cocycle", "solve", "--n", "4", "--a", "2", "--b", "3")
    assert code == 2
    code, report = run_cli(tmp_path, "cocycle", "solve", "--n", "2", "--a", "2", "--b", "3", "--kind", "chi")
    assert code == 0
    assert report["result"]["transported_form"] is None


def test_bend_classify(tmp_path, fixtures):
    """Test bending the genus-2 fixture and its SL verdict"""
    code, report = run_cli(tmp_path, "bend", "run", "--fixture", fixtures["genus2_surface"], "--classify")
    assert code == 0
    result = report["result"]
    assert result["relator_holds"] and result["gamma_fixed"]
    assert result["verdict"] == "SL"
    assert result["agrees"] is True
    assert len(result["bent_fixture"]["images"]) == 4
    assert result["trace_field"]["label"] == "Q"
    assert result["trace_field"]["equals_base"] is True
    assert result["trace_field"]["stable_from"] == 1


def test_bend_bad_multipliers(tmp_path, fixtures):
    """Test that multipliers not multiplying to 1 are refused"""
    code, _ = run_cli(tmp_path, "bend", "run", "--fixture", fixtures["genus2_surface"],
                      "--multipliers", "2", "2", "2")
    assert code == 2


def test_separate(tmp_path, fixtures):
    """Test a small separation run at 3 and 5"""
    code, report = run_cli(tmp_path, "separate", "--fixture", fixtures["genus2_surface"],
                           "--primes", "5,3", "--max-power", "1")
    assert code == 0
    result = report["result"]
    assert result["collapse_holds"] is True
    assert [(row["prime"], row["l"]) for row in result["rows"]] == [("3", 0), ("3", 1), ("5", 0), ("5", 1)]
    assert result["phi_images"]["5"]["image"] == [0, 3, 4]


def test_separate_bad_primes(tmp_path, fixtures):
    """Test that an unparsable prime list is an input error"""
    code, _ = run_cli(tmp_path, "separate", "--fixture", fixtures["genus2_surface"], "--primes", "3,x")
    assert code == 2


def test_verify_reciprocity(tmp_path):
    """Test a full suite run through the command line"""
    code, report = run_cli(tmp_path, "verify", "--suite", "reciprocity")
    assert code == 0
    assert report["passed"] is True
    assert report["items"]
    keys = [item["key"] for item in report["items"]]
    assert keys == sorted(keys)
