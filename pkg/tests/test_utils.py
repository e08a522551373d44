# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Unit tests for the Utils module.
# -----------------------------------------------------------------------------

import json
import logging
import sys
from unittest.mock import MagicMock, patch

import numpy as np
import pytest

import config
import utils
from block_encodings import be_dilate, ve_from_vector
from convolution import conv_matrix_form
from errors import ConfigError
from models import ConvKernel
from polynomials import t3
from qram import build_matrix_structure


# --- Tests for tensor documents ---


def test_tensor_doc_layout():
    """Flat row-major [re, im] pairs with the c128 tag."""
    doc = utils.tensor_to_doc(np.array([[1.0, 2.0j], [0.5, -1.0]]))
    assert doc["dtype"] == "c128"
    assert doc["layout"] == "row-major"
    assert doc["shape"] == [2, 2]
    assert doc["data"][1] == [0.0, 2.0]
    assert np.allclose(utils.tensor_from_doc(doc), [[1.0, 2.0j], [0.5, -1.0]])


def test_tensor_from_nested_list():
    """Plain nested lists of reals are accepted."""
    assert utils.tensor_from_doc([[1, 2], [3, 4]]).shape == (2, 2)


@pytest.mark.parametrize(
    "doc",
    [
        {"dtype": "f32", "shape": [1], "data": [[1.0, 0.0]]},
        {"dtype": "c128", "layout": "column-major", "shape": [1], "data": [[1.0, 0.0]]},
        {"dtype": "c128", "shape": [2, 2], "data": [[1.0, 0.0]]},
        {"dtype": "c128", "data": [[1.0, 0.0]]},
        [[1, "x"]],
    ],
)
def test_tensor_from_doc_rejects_malformed(doc):
    """Bad dtypes, layouts, shapes and entries raise ConfigError."""
    with pytest.raises(ConfigError):
        utils.tensor_from_doc(doc)


def test_load_tensor_file_json_and_npy(tmp_path):
    """JSON tensor documents and .npy arrays load alike."""
    w = np.arange(4.0).reshape(2, 2)
    utils.write_json(tmp_path / "w.json", utils.tensor_to_doc(w))
    np.save(tmp_path / "w.npy", w)
    assert np.allclose(utils.load_tensor_file(tmp_path / "w.json"), w)
    assert np.allclose(utils.load_tensor_file(tmp_path / "w.npy"), w)


def test_load_tensor_file_missing(tmp_path):
    """Missing files are configuration errors."""
    with pytest.raises(ConfigError, match="not found"):
        utils.load_tensor_file(tmp_path / "absent.json")


def test_load_tensor_file_bad_json(tmp_path):
    """Unparsable files are configuration errors."""
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError, match="Could not parse"):
        utils.load_tensor_file(path)


# --- Tests for structure documents and write_json ---


def test_structure_doc_fields():
    """The structure document carries columns, norms and angle words as JSON."""
    s = build_matrix_structure(np.diag([0.5, 1.0, 0.0, 0.25]), 10)
    doc = json.loads(json.dumps(utils.structure_to_doc(s)))
    assert (doc["d"], doc["n"]) == (10, 4)
    assert np.allclose(utils.tensor_from_doc(doc["unit_columns"]), s.unit_columns)
    assert doc["col_norms"] == pytest.approx([0.5, 1.0, 0.0, 0.25])
    assert doc["angle_words"] == s.angle_words


def test_write_json_sorts_keys(tmp_path):
    """Keys are sorted so reports are byte-stable."""
    path = utils.write_json(tmp_path / "nested" / "out.json", {"b": 1, "a": 2})
    text = path.read_text(encoding="utf-8")
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")


# --- Tests for ensure_data_directory_exists ---


@patch("config.DATA_DIR")
def test_ensure_data_directory_exists_creates_dir(mock_data_dir_path_obj):
    """Test that mkdir is called with parents and exist_ok."""
    utils.ensure_data_directory_exists()

    mock_data_dir_path_obj.mkdir.assert_called_once_with(parents=True, exist_ok=True)


@patch("config.DATA_DIR")
@patch.object(logging.getLoggerClass(), "error")
def test_ensure_data_directory_exists_handles_os_error(mock_logger_error, mock_data_dir_path_obj):
    """Test that OSError during mkdir is logged and re-raised."""
    mock_data_dir_path_obj.mkdir.side_effect = OSError("Test OS Error")

    with pytest.raises(OSError, match="Test OS Error"):
        utils.ensure_data_directory_exists()

    mock_logger_error.assert_called_once()


# --- Tests for setup_logging ---


@patch("utils.ensure_data_directory_exists")
@patch("logging.FileHandler")
@patch("logging.StreamHandler")
@patch("logging.getLogger")
def test_setup_logging_configures_handlers(mock_getLogger, mock_StreamHandler, mock_FileHandler, mock_ensure_data_dir):
    """Test that setup_logging adds the file and console handlers at the QNN_LOG level."""
    mock_root_logger = MagicMock()
    mock_getLogger.return_value = mock_root_logger
    mock_StreamHandler.return_value.stream = MagicMock()

    with patch("config.QNN_LOG", "DEBUG"):
        utils.setup_logging()

    mock_ensure_data_dir.assert_called_once()
    mock_FileHandler.assert_called_once_with(config.APP_LOG_FILE, encoding="utf-8")
    mock_StreamHandler.assert_called_once_with(sys.stdout)
    mock_root_logger.setLevel.assert_called_once_with(logging.DEBUG)
    assert mock_root_logger.addHandler.call_count == 2


@patch("utils.ensure_data_directory_exists")
@patch("logging.FileHandler")
@patch("logging.StreamHandler")
@patch("logging.getLogger")
def test_setup_logging_unknown_level_falls_back(mock_getLogger, mock_StreamHandler, mock_FileHandler, _):
    """An unknown QNN_LOG value falls back to INFO."""
    mock_root_logger = MagicMock()
    mock_getLogger.return_value = mock_root_logger
    mock_StreamHandler.return_value.stream = MagicMock()

    with patch("config.QNN_LOG", "CHATTY"):
        utils.setup_logging()

    mock_root_logger.setLevel.assert_called_once_with(logging.INFO)


# --- Tests for kernel, encoding and polynomial documents ---


def test_kernel_document():
    """{"C", "D", "K"} documents read as rank-4 kernels."""
    k = np.zeros((2, 2, 3, 3))
    k[0, 0, 1, 1] = 1.0
    assert utils.tensor_from_doc({"C": 2, "D": 3, "K": k.tolist()}).shape == (2, 2, 3, 3)


@pytest.mark.parametrize("doc", [{"C": 1, "D": 2, "K": [[1.0]]}, {"C": 2, "D": 2, "K": np.zeros((1, 1, 2, 2)).tolist()}])
def test_kernel_document_rejects_shape(doc):
    """K must be rank 4 and match the declared C and D."""
    with pytest.raises(ConfigError):
        utils.tensor_from_doc(doc)


def test_encoding_to_doc():
    """Vector encodings dump vec and target as tensor documents."""
    doc = utils.encoding_to_doc(ve_from_vector(np.array([3.0, 4.0])))
    assert (doc["alpha"], doc["ancillas"], doc["eps_bound"]) == (1.0, 0, 0.0)
    assert np.allclose(utils.tensor_from_doc(doc["vec"]), [0.6, 0.8])
    block_doc = utils.encoding_to_doc(be_dilate(0.5 * np.eye(2)))
    assert "block" in block_doc and "vec" not in block_doc


def test_poly_to_doc():
    """Polynomial dumps carry the Chebyshev basis tag and parity."""
    doc = utils.poly_to_doc(t3())
    assert doc["basis"] == "chebyshev-T"
    assert doc["parity"] == "odd"
    assert doc["degree"] == 3
    assert doc["coeffs"][3] == pytest.approx(1.0)


def test_conv_to_doc():
    """Convolution reports carry both norms and the ratio check."""
    k = np.zeros((1, 1, 2, 2))
    k[0, 0, 0, 0] = 2.0
    doc = utils.conv_to_doc(conv_matrix_form(ConvKernel(K=k), 1))
    assert doc["spectral_norm"] == pytest.approx(2.0)
    assert doc["kernel_l1"] == pytest.approx(2.0)
    assert doc["ratio_bound_ok"] is True
