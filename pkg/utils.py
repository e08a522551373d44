# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Utility functions for the network inference simulator.
# Includes logging setup, file operations and the JSON documents for tensors,
# encodings, polynomials and matrix structures.
# -----------------------------------------------------------------------------

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

# Assuming config.py is in the same directory or accessible via PYTHONPATH
import config
from errors import ConfigError
from models import BlockEncoding, ChebyshevPoly, ConvMatrix, MatrixQramStructure, VectorEncoding

TENSOR_DTYPE = "c128"
TENSOR_LAYOUT = "row-major"


def setup_logging() -> None:
    """
    Configures logging for the application at the level named by QNN_LOG.
    Logs to both console and the file specified in config.APP_LOG_FILE.
    """
    # Ensure a data directory exists for the log file
    ensure_data_directory_exists()

    level = logging.getLevelName(config.QNN_LOG)
    if not isinstance(level, int):
        level = logging.INFO

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # File Handler (always UTF-8)
    file_handler = logging.FileHandler(config.APP_LOG_FILE, encoding="utf-8")
    file_handler.setLevel(level)
    file_formatter = logging.Formatter(
        "%(asctime)s - %(levelname)s - %(name)s - %(module)s - %(message)s"
    )
    file_handler.setFormatter(file_formatter)

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(level)
    console_formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s")
    console_handler.setFormatter(console_formatter)

    # For the Windows console, set encoding to UTF-8
    if hasattr(console_handler.stream, "reconfigure"):
        console_handler.stream.reconfigure(encoding="utf-8")

    root_logger.addHandler(file_handler)
    root_logger.addHandler(console_handler)


def ensure_data_directory_exists() -> None:
    """
    Ensures that the data directory specified in the config exists.
    Creates it if it does not.
    """
    try:
        config.DATA_DIR.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger = logging.getLogger(__name__)
        logger.error(
            f"Could not create data directory: {config.DATA_DIR}. Error: {e}",
            exc_info=True,
        )
        raise


# --- Tensor documents ---


def tensor_to_doc(array: np.ndarray) -> Dict[str, Any]:
    """
    Serializes an array as {"dtype": "c128", "shape", "layout": "row-major", "data"}
    with data a flat list of [re, im] pairs.
    """
    arr = np.asarray(array, dtype=np.complex128)
    flat = arr.reshape(-1)
    return {
        "dtype": TENSOR_DTYPE,
        "shape": list(arr.shape),
        "layout": TENSOR_LAYOUT,
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def tensor_from_doc(doc: Any) -> np.ndarray:
    """
    Reads a tensor document, a kernel document {"C", "D", "K"} or a plain nested
    list of real numbers.

    Raises:
        ConfigError: If the document is malformed.
    """
    if isinstance(doc, dict) and "K" in doc:
        return _kernel_from_doc(doc)
    if isinstance(doc, dict):
        if doc.get("dtype", TENSOR_DTYPE) != TENSOR_DTYPE or doc.get("layout", TENSOR_LAYOUT) != TENSOR_LAYOUT:
            raise ConfigError(f"Unsupported tensor dtype/layout: {doc.get('dtype')}/{doc.get('layout')}.")
        try:
            pairs = np.asarray(doc["data"], dtype=np.float64).reshape(-1, 2)
            shape = tuple(int(s) for s in doc["shape"])
            return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(shape)
        except (KeyError, ValueError, TypeError) as e:
            raise ConfigError(f"Malformed tensor document: {e}") from e
    try:
        return np.asarray(doc, dtype=np.float64)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"Expected a tensor document or a nested list of numbers: {e}") from e


def _kernel_from_doc(doc: Dict[str, Any]) -> np.ndarray:
    try:
        kernel = np.asarray(doc["K"], dtype=np.float64)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"Kernel document has a malformed K: {e}") from e
    if kernel.ndim != 4:
        raise ConfigError(f"Kernel document K must be rank 4, got shape {kernel.shape}.")
    declared = (int(doc.get("C", kernel.shape[0])), int(doc.get("D", kernel.shape[2])))
    if declared != (kernel.shape[0], kernel.shape[2]):
        raise ConfigError(f"Kernel document declares C, D = {declared} but K has shape {kernel.shape}.")
    return kernel


def load_tensor_file(path: Union[str, Path]) -> np.ndarray:
    """Loads a tensor from a .npy file or a JSON tensor document."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Tensor file not found: {path}")
    if path.suffix == ".npy":
        return np.load(path, allow_pickle=False)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return tensor_from_doc(json.load(f))
    except json.JSONDecodeError as e:
        raise ConfigError(f"Could not parse tensor file {path}: {e}") from e


# --- Encoding, polynomial and structure documents ---


def encoding_to_doc(u: Union[BlockEncoding, VectorEncoding]) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"alpha": u.alpha, "ancillas": u.ancillas, "eps_bound": u.eps_bound}
    if isinstance(u, VectorEncoding):
        doc["vec"] = tensor_to_doc(u.vec)
    else:
        doc["block"] = tensor_to_doc(u.block)
    doc["target"] = None if u.target is None else tensor_to_doc(u.target)
    return doc


def poly_to_doc(p: ChebyshevPoly) -> Dict[str, Any]:
    return {
        "basis": "chebyshev-T",
        "coeffs": [float(c) for c in np.real(p.coeffs)],
        "parity": p.parity,
        "degree": p.degree,
        "sup_bound": p.sup_bound,
        "certified_eps": p.certified_eps,
        "interval_c": p.interval_c,
    }


def conv_to_doc(conv: ConvMatrix) -> Dict[str, Any]:
    return {
        "C": conv.channels,
        "D": conv.width,
        "spectral_norm": conv.spectral_norm,
        "kernel_l1": conv.kernel_l1,
        "ratio": conv.ratio,
        "ratio_bound_ok": conv.ratio_bound_ok,
    }


def structure_to_doc(s: MatrixQramStructure) -> Dict[str, Any]:
    return {
        "d": s.d,
        "n": s.unit_columns.shape[1],
        "angle_words": list(s.angle_words),
        "col_norms": [float(a) for a in s.col_norms],
        "unit_columns": tensor_to_doc(s.unit_columns),
    }


def write_json(path: Union[str, Path], payload: Any) -> Path:
    """Writes `payload` with sorted keys and two-space indentation."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, sort_keys=True, indent=2)
        f.write("\n")
    return path


if __name__ == "__main__":
    # Test logging setup
    setup_logging()
    logger = logging.getLogger(__name__)
    logger.info("Utils.py: Logging tests message.")

    doc = tensor_to_doc(np.array([[1.0, 2.0j], [0.5, -1.0]]))
    print(json.dumps(doc))
    print(tensor_from_doc(doc))
