# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Unit tests for the exception hierarchy, exit codes and
# configuration validation.
# -----------------------------------------------------------------------------

import json
from unittest.mock import patch

import pytest

import config
from errors import (
    ApproximationFailure,
    BoundViolation,
    ConfigError,
    ContractViolation,
    DegenerateNormError,
    DimensionMismatch,
    NumericFailure,
    QnnError,
    UpstreamBudgetError,
    exit_code_for,
    with_stage,
)


# --- Tests for exit_code_for ---


@pytest.mark.parametrize(
    "exc, code",
    [
        (ConfigError("bad spec"), config.EXIT_CONFIG_ERROR),
        (FileNotFoundError("spec.json"), config.EXIT_CONFIG_ERROR),
        (json.JSONDecodeError("bad", "{", 0), config.EXIT_CONFIG_ERROR),
        (BoundViolation("too large"), config.EXIT_BOUND_VIOLATION),
        (ContractViolation("premise"), config.EXIT_BOUND_VIOLATION),
        (UpstreamBudgetError("budget"), config.EXIT_BOUND_VIOLATION),
        (DimensionMismatch("shape"), config.EXIT_BOUND_VIOLATION),
        (DegenerateNormError("zero"), config.EXIT_NUMERIC_FAILURE),
        (ApproximationFailure("degree"), config.EXIT_NUMERIC_FAILURE),
        (ZeroDivisionError(), config.EXIT_NUMERIC_FAILURE),
    ],
)
def test_exit_code_for(exc, code):
    """Each error family maps onto its exit code."""
    assert exit_code_for(exc) == code


def test_hierarchy():
    """Configuration errors stay ValueErrors; contract errors do not."""
    assert issubclass(ConfigError, ValueError)
    assert not issubclass(ContractViolation, ValueError)
    assert not issubclass(BoundViolation, ValueError)
    assert issubclass(ApproximationFailure, NumericFailure)
    assert issubclass(DegenerateNormError, QnnError)


# --- Tests for with_stage ---


def test_with_stage_tags_copy():
    """The tagged copy keeps its type and chains the original."""
    original = BoundViolation("norm fell below floor")
    tagged = with_stage(original, "block2")
    assert isinstance(tagged, BoundViolation)
    assert tagged.stage == "block2"
    assert str(tagged) == "[block2] norm fell below floor"
    assert tagged.__cause__ is original
    assert original.stage is None


# --- Tests for validate_configuration ---


def test_validate_configuration_ok():
    """The default configuration is valid."""
    assert config.validate_configuration() is True


@patch("config.QNN_LOG", "LOUD")
def test_validate_configuration_bad_log_level(capsys):
    """Unknown level names are reported."""
    assert config.validate_configuration() is False
    assert "QNN_LOG" in capsys.readouterr().out


@patch("config.CIRCUIT_QUBIT_LIMIT", 0)
def test_validate_configuration_bad_qubit_limit():
    """The circuit qubit limit must be positive."""
    assert config.validate_configuration() is False
