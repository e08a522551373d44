# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Exception hierarchy for the simulator and its mapping onto the
# command-line exit codes.
# -----------------------------------------------------------------------------

import json
from typing import Optional

from pydantic import ValidationError

import config


class QnnError(Exception):
    """Base class for every simulator error. `stage` names the pipeline stage, if any."""

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage

    def __str__(self) -> str:
        base = super().__str__()
        return f"[{self.stage}] {base}" if self.stage else base


class ContractViolation(QnnError):
    """
    A precondition of an operation does not hold. Not a ValueError, so pydantic
    validators let it through unwrapped.
    """


class DimensionMismatch(ContractViolation):
    pass


class AmplificationContractError(ContractViolation):
    """The norm or scale premise of an amplification step does not hold."""


class UpstreamBudgetError(ContractViolation):
    """The error carried by an input exceeds what the consuming block can absorb."""


class DegenerateNormError(QnnError, ArithmeticError):
    """An encoded norm fell below config.ZERO_NORM_THRESHOLD."""


class NumericFailure(QnnError, ArithmeticError):
    pass


class ApproximationFailure(NumericFailure):
    """A polynomial could not be certified within the allowed degree."""


class BoundViolation(QnnError):
    """A measured error exceeds the ledger's guaranteed bound."""


class ConfigError(QnnError, ValueError):
    pass


def with_stage(exc: QnnError, stage: str) -> QnnError:
    """Returns a copy of `exc` tagged with the pipeline stage it surfaced in."""
    tagged = type(exc)(Exception.__str__(exc), stage=stage)
    tagged.__cause__ = exc
    return tagged


def exit_code_for(exc: BaseException) -> int:
    """
    Maps an exception onto the CLI exit-code contract.

    Args:
        exc: The exception that ended a command.

    Returns:
        The process exit status.
    """
    if isinstance(exc, (ConfigError, ValidationError, json.JSONDecodeError, FileNotFoundError)):
        return config.EXIT_CONFIG_ERROR
    if isinstance(exc, (BoundViolation, ContractViolation)):
        return config.EXIT_BOUND_VIOLATION
    if isinstance(exc, (NumericFailure, DegenerateNormError, ArithmeticError)):
        return config.EXIT_NUMERIC_FAILURE
    return config.EXIT_NUMERIC_FAILURE
