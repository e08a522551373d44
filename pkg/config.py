# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Loads configuration settings for the coherent network inference
# simulator from an .env file and defines numeric tolerances and limits.
# -----------------------------------------------------------------------------

import logging
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
# Assumes .env file is in the project root, next to this config.py file.
ENV_PATH = Path(__file__).resolve().parent / ".env"
if not ENV_PATH.exists():
    # Fallback for cases where the script is run from the project root.
    ENV_PATH = Path(".") / ".env"
load_dotenv(dotenv_path=ENV_PATH)

QNN_LOG: str = os.getenv("QNN_LOG", "INFO").upper()

PROJECT_ROOT = Path(__file__).resolve().parent
DATA_DIR = Path(os.getenv("QNN_DATA_DIR", str(PROJECT_ROOT / "data")))
SAMPLES_DIR = PROJECT_ROOT / "samples"
APP_LOG_FILE = DATA_DIR / "qnn_sim.log"
DEFAULT_REPORT_FILE = DATA_DIR / "report.json"
DEFAULT_STAGE_CSV_FILE = DATA_DIR / "stages.csv"
DEFAULT_STRUCTURE_FILE = DATA_DIR / "matrix_structure.json"

# Numeric tolerances
ZERO_NORM_THRESHOLD: float = 1e-12  # Below this an encoded norm counts as annihilated
UNITARY_TOLERANCE: float = 1e-10
BLOCK_NORM_TOLERANCE: float = 1e-10  # Slack on ||block||_2 <= 1
BOUND_TOLERANCE: float = 1e-9  # Slack on ||target - alpha*vec|| <= eps_bound
DILATION_NORM_TOLERANCE: float = 1e-12
SPECTRUM_TOLERANCE: float = 1e-8  # Singular value membership checks

# Circuit mode
CIRCUIT_QUBIT_LIMIT: int = int(os.getenv("QNN_CIRCUIT_QUBIT_LIMIT", "14"))

# Polynomial certification
CERTIFICATION_GRID_POINTS: int = 10_000
MAX_POLY_DEGREE: int = 40_001
POLY_EPS_FLOOR: float = 1e-11  # Smallest error a grid certificate resolves in float64

# QRAM emulation
DEFAULT_ANGLE_BITS: int = 16
MAX_ANGLE_BITS: int = 52  # float64 mantissa
RESCALE_MARGIN: float = 1e-9  # --rescale divides by ||W||_2 (1 + margin)

# Architecture constants
ACTIVATION_SCALE: float = 4.0 / 5.0  # f(x) = erf(4x/5)
SKIP_NORM_ERROR_FACTOR: float = 712.0
STACK_ERROR_GROWTH: float = 1424.0
SKIP_NORM_FLOOR: float = 1.0 / 400.0
OUTPUT_TAU: float = 0.51
OUTPUT_DELTA: float = 0.02
CONV_AMPLIFY_DELTA: float = 0.5

# erf certificates
ERF_SLOPES: tuple = (0.5, 0.8, 1.6)
ERF_CERTIFICATE_EPS: float = 1e-8

# CLI defaults
DEFAULT_CASES: int = 200
DEFAULT_SEED: int = 0
DEFAULT_SHOTS: int = 0

# Exit codes
EXIT_OK: int = 0
EXIT_BOUND_VIOLATION: int = 1
EXIT_CONFIG_ERROR: int = 2
EXIT_NUMERIC_FAILURE: int = 3


def validate_configuration() -> bool:
    """
    Validates that the configuration values are usable.

    Returns:
        bool: True if the configuration is valid, False otherwise.
    """
    problems = []
    if not isinstance(logging.getLevelName(QNN_LOG), int):
        problems.append(f"QNN_LOG={QNN_LOG!r} is not a logging level name")
    if CIRCUIT_QUBIT_LIMIT < 1:
        problems.append("QNN_CIRCUIT_QUBIT_LIMIT must be positive")
    if not 1 <= DEFAULT_ANGLE_BITS <= MAX_ANGLE_BITS:
        problems.append(f"DEFAULT_ANGLE_BITS must lie in [1, {MAX_ANGLE_BITS}]")
    if CERTIFICATION_GRID_POINTS < 16:
        problems.append("CERTIFICATION_GRID_POINTS is too small to certify anything")
    if problems:
        print(f"Error: Invalid configuration: {'; '.join(problems)}")
        print(f"Please check the .env file located at: {ENV_PATH}")
        return False
    return True


if __name__ == "__main__":
    if validate_configuration():
        print("Configuration loaded successfully.")
        print(f"Log level: {QNN_LOG}")
        print(f"Circuit qubit limit: {CIRCUIT_QUBIT_LIMIT}")
        print(f"Data Directory: {DATA_DIR}")
    else:
        print("Configuration validation failed.")
