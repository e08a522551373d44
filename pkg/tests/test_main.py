# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Unit tests for the command-line entry point and its exit codes.
# -----------------------------------------------------------------------------

import csv
import json
from unittest.mock import patch

import numpy as np
import pytest

import config
import main
import utils
import verification
from errors import BoundViolation, DegenerateNormError
from models import LemmaRecord, StageRecord

EXAMPLE = str(config.SAMPLES_DIR / "example_network.json")
MATRIX = str(config.SAMPLES_DIR / "sample_matrix.json")


@pytest.fixture(autouse=True)
def quiet_logging(mocker):
    return mocker.patch("main.utils.setup_logging")


def lemma(name: str, passed: bool) -> LemmaRecord:
    return LemmaRecord(
        lemma=name, case=0, eps_bound=1e-3, eps_actual=1e-4, ledger_ok=passed, passed=passed
    )


# --- Tests for the verify command ---


@patch("main.run_suites")
def test_verify_all_pass(mock_run_suites, tmp_path, capsys):
    """Every case passing exits 0 and writes the summary."""
    mock_run_suites.return_value = [lemma("be_product", True), lemma("ve_sum", True)]
    out = tmp_path / "verify.json"

    assert main.main(["verify", "--cases", "1", "--seed", "4", "--out", str(out)]) == config.EXIT_OK

    mock_run_suites.assert_called_once_with(
        cases=1, seed=4, realize=False, inject_fault=None, tolerance=None
    )
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["passed"] is True
    assert doc["summary"]["ve_sum"] == {"cases": 1, "passed": 1}
    assert [p["m"] for p in doc["erf_polynomials"]] == list(config.ERF_SLOPES)
    assert all(p["basis"] == "chebyshev-T" and p["parity"] == "odd" for p in doc["erf_polynomials"])
    assert "passed: True" in capsys.readouterr().out


@patch("main.run_suites")
def test_verify_failure_exits_1(mock_run_suites, tmp_path):
    """A failed case exits 1 and is listed."""
    mock_run_suites.return_value = [lemma("be_product", False), lemma("ve_sum", True)]
    out = tmp_path / "verify.json"

    assert main.main(["verify", "--out", str(out)]) == config.EXIT_BOUND_VIOLATION
    assert json.loads(out.read_text(encoding="utf-8"))["failed"] == ["be_product"]


@patch("main.run_suites")
def test_verify_circuit_mode_realizes(mock_run_suites, tmp_path):
    """Circuit mode asks the suites for realizations."""
    mock_run_suites.return_value = [lemma("circuit_agreement", True)]
    main.main(["verify", "--mode", "circuit", "--out", str(tmp_path / "v.json")])
    assert mock_run_suites.call_args.kwargs["realize"] is True


def test_verify_inject_fault_real_suite(tmp_path):
    """Injecting a fault into a light suite fails the run."""

    def only_be_product(**kwargs):
        return verification.run_suites(only=["be_product"], **kwargs)

    with patch("main.run_suites", side_effect=only_be_product):
        code = main.main(["verify", "--cases", "2", "--inject-fault", "be_product", "--out", str(tmp_path / "v.json")])
    assert code == config.EXIT_BOUND_VIOLATION


def test_verify_unknown_fault_suite(tmp_path):
    """Unknown suites for --inject-fault are configuration errors."""
    assert main.main(["verify", "--inject-fault", "nope", "--out", str(tmp_path / "v.json")]) == config.EXIT_CONFIG_ERROR


# --- Tests for the run command ---


def test_run_example(tmp_path, capsys):
    """The bundled network passes and writes the report and stage CSV."""
    out = tmp_path / "example.json"

    assert main.main(["run", "--config", EXAMPLE, "--out", str(out)]) == config.EXIT_OK

    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["passed"] is True
    with open(out.with_suffix(".csv"), newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == main.STAGE_CSV_HEADERS
    assert len(rows) == len(doc["stages"]) + 1
    assert "l2 error" in capsys.readouterr().out


def test_run_requires_config():
    """run without --config exits 2."""
    assert main.main(["run"]) == config.EXIT_CONFIG_ERROR


def test_run_missing_spec(tmp_path):
    """A missing spec file exits 2."""
    assert main.main(["run", "--config", str(tmp_path / "absent.json")]) == config.EXIT_CONFIG_ERROR


def test_run_circuit_mode_too_wide(tmp_path):
    """Circuit mode refuses registers above the qubit limit."""
    code = main.main(["run", "--config", EXAMPLE, "--mode", "circuit", "--out", str(tmp_path / "r.json")])
    assert code == config.EXIT_CONFIG_ERROR


@patch("main.quantum_forward")
def test_run_bound_violation_exits_1(mock_forward, tmp_path):
    """Stage errors map onto their exit codes."""
    mock_forward.side_effect = BoundViolation("norm fell below 1/400", stage="block1")
    assert main.main(["run", "--config", EXAMPLE, "--out", str(tmp_path / "r.json")]) == config.EXIT_BOUND_VIOLATION


@patch("main.quantum_forward")
def test_run_numeric_failure_exits_3(mock_forward, tmp_path):
    """Vanishing norms exit 3."""
    mock_forward.side_effect = DegenerateNormError("zero")
    assert main.main(["run", "--config", EXAMPLE, "--out", str(tmp_path / "r.json")]) == config.EXIT_NUMERIC_FAILURE


# --- Tests for the build-qram command ---


def test_build_qram(tmp_path, capsys):
    """The structure document and a_j statistics are written."""
    out = tmp_path / "structure.json"

    assert main.main(["build-qram", "--config", MATRIX, "--out", str(out)]) == config.EXIT_OK

    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["n"] == 16
    assert doc["d"] == config.DEFAULT_ANGLE_BITS
    assert capsys.readouterr().out.startswith("N=16 d=16 a_j:")


def test_build_qram_needs_rescale(tmp_path):
    """Over-norm matrices need --rescale."""
    path = utils.write_json(tmp_path / "w.json", (3.0 * np.eye(4)).tolist())
    out = str(tmp_path / "s.json")
    assert main.main(["build-qram", "--config", str(path), "--out", out]) == config.EXIT_CONFIG_ERROR
    assert main.main(["build-qram", "--config", str(path), "--out", out, "--rescale"]) == config.EXIT_OK


def test_build_qram_rejects_non_matrix(tmp_path):
    """Only rank-2 tensors have a matrix structure."""
    path = utils.write_json(tmp_path / "v.json", [1.0, 0.0])
    assert main.main(["build-qram", "--config", str(path), "--out", str(tmp_path / "s.json")]) == config.EXIT_CONFIG_ERROR


# --- Tests for argument handling ---


@patch("main.config.validate_configuration", return_value=False)
def test_invalid_configuration_exits_2(_):
    """A bad environment stops before any command runs."""
    assert main.main(["verify"]) == config.EXIT_CONFIG_ERROR


@pytest.mark.parametrize("argv", [["verify", "--cases", "0"], ["run", "--config", EXAMPLE, "--shots", "-1"]])
def test_out_of_range_arguments(argv):
    """Pydantic range checks on the arguments exit 2."""
    assert main.main(argv) == config.EXIT_CONFIG_ERROR


def test_unknown_command():
    """argparse rejects unknown commands."""
    with pytest.raises(SystemExit):
        main.main(["train"])


# --- Tests for write_stage_records_to_csv ---


def test_write_stage_records_to_csv(tmp_path):
    """Missing measurements are written as N/A."""
    path = tmp_path / "stages.csv"
    main.write_stage_records_to_csv(path, [StageRecord(stage="input", alpha=1.0, ancillas=0, eps_bound=0.0)])
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[1][0] == "input"
    assert rows[1][4] == "N/A"
