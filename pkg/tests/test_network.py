# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Unit tests for network spec loading, the classical oracle,
# budget solving and the end-to-end coherent pipeline.
# -----------------------------------------------------------------------------

import json
from pathlib import Path

import numpy as np
import pytest

import config
import network
import utils
from errors import ConfigError, DimensionMismatch
from models import LemmaRecord

EXAMPLE = config.SAMPLES_DIR / "example_network.json"
BILINEAR = config.SAMPLES_DIR / "bilinear_network.json"
GOLDEN_SCHEMA = Path(__file__).parent / "golden" / "report_schema.json"


@pytest.fixture(scope="module")
def example_spec():
    return network.load_network_spec(EXAMPLE)


@pytest.fixture(scope="module")
def example_report(example_spec):
    return network.quantum_forward(example_spec, network.network_input(example_spec))


@pytest.fixture(scope="module")
def bilinear_spec():
    return network.load_network_spec(BILINEAR)


@pytest.fixture(scope="module")
def bilinear_report(bilinear_spec):
    return network.quantum_forward(bilinear_spec, network.network_input(bilinear_spec))


def write_spec(tmp_path, **overrides):
    doc = {
        "name": "tiny",
        "m": 1,
        "channels_in": 1,
        "k": 1,
        "kernels": [[[[[1.0, 0.5], [0.25, 0.0]]]]],
        "c_bins": 2,
        "regime": 2,
        "input": [[[1.0, 2.0], [3.0, 4.0]]],
    }
    doc.update(overrides)
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


# --- Tests for load_network_spec ---


def test_load_example_spec(example_spec):
    """The bundled spec resolves its final_w file next to it."""
    assert example_spec.side == 4
    assert example_spec.latent_dim == 16
    assert example_spec.final_w.shape == (16, 16)


def test_load_spec_tensor_document(tmp_path):
    """Tensor fields may be tensor documents."""
    doc = utils.tensor_to_doc(np.array([[[1.0, 0.0], [0.0, 1.0]]]))
    spec = network.load_network_spec(write_spec(tmp_path, input=doc))
    assert spec.input.shape == (1, 2, 2)


def test_load_spec_kernel_file(tmp_path):
    """kernels may name a {"C", "D", "K"} document next to the spec."""
    utils.write_json(tmp_path / "k.json", {"C": 1, "D": 2, "K": [[[[1.0, 0.5], [0.25, 0.0]]]]})
    spec = network.load_network_spec(write_spec(tmp_path, kernels="k.json"))
    assert len(spec.kernels) == 1
    assert spec.kernels[0].shape == (1, 1, 2, 2)


def test_load_spec_missing_file(tmp_path):
    """A missing spec is a configuration error."""
    with pytest.raises(ConfigError, match="not found"):
        network.load_network_spec(tmp_path / "absent.json")


def test_load_spec_bad_json(tmp_path):
    """An unparsable spec is a configuration error."""
    path = tmp_path / "spec.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="Could not parse"):
        network.load_network_spec(path)


@pytest.mark.parametrize(
    "overrides",
    [
        {"k": 2},
        {"c_bins": 3},
        {"regime": 3, "final_w": np.eye(4).tolist()},
        {"kernels": [[[[[1.0]]]], [[[[1.0]]]]], "k": 2, "channels_in": 2},
        {"m": 0},
    ],
)
def test_load_spec_rejects_inconsistent(tmp_path, overrides):
    """Validation failures surface as ConfigError."""
    with pytest.raises(ConfigError, match="Invalid network spec"):
        network.load_network_spec(write_spec(tmp_path, **overrides))


# --- Tests for inputs and the classical oracle ---


def test_network_input_is_normalized(example_spec):
    """Inputs are scaled to unit norm."""
    assert np.linalg.norm(network.network_input(example_spec)) == pytest.approx(1.0)


def test_bilinear_network_input():
    """Bilinear specs build the input from the Kronecker product of their paths."""
    spec = network.load_network_spec(BILINEAR)
    x = network.network_input(spec)
    assert x.shape == (4, 2, 2)
    assert np.linalg.norm(x) == pytest.approx(1.0)


def test_bilinear_input_path_count():
    """The path count must match d_paths."""
    with pytest.raises(DimensionMismatch):
        network.bilinear_input([np.ones(2)], 2)


def test_classical_forward_is_distribution(example_spec):
    """y is a probability vector over the classes."""
    y = network.classical_forward(example_spec, network.network_input(example_spec))
    assert y.shape == (2,)
    assert np.all(y >= 0.0)
    assert y.sum() == pytest.approx(1.0)


# --- Tests for budgets ---


def test_stack_budget_splits_share():
    """Input and weight errors each get a quarter of eps / 1424^k."""
    eps_in, eps_w = network.stack_budget(2, 1.0)
    assert eps_in == eps_w == pytest.approx(0.25 / 1424.0**2)


@pytest.mark.parametrize("eps, expected", [(1e-3, 12), (1.0, 2), (1e-30, 52)])
def test_angle_bits_for(eps, expected):
    """Smallest d with pi / 2^d <= eps, clamped to 52."""
    assert network.angle_bits_for(eps) == expected


def test_state_prep_bits_for():
    """Smallest d with 2^-(d-2) sqrt(2^n) <= eps."""
    assert network.state_prep_bits_for(1e-3, 4) == 14


def test_pool_budget():
    """eps sqrt(C) / 2N^2, never looser than inverting 2N delta / sqrt(C) <= eps."""
    assert network.pool_budget(16, 4, 1e-2) == pytest.approx(1e-2 * 2.0 / 512.0)
    assert network.pool_budget(16, 4, 1e-2) <= 1e-2 * 2.0 / (2.0 * 16)


def test_circuit_qubits(example_spec):
    """Main register plus the stack's ancillas."""
    assert network.circuit_qubits(example_spec) == 4 + 2 * (2 * 21 + 4 + 9)


# --- Tests for quantum_forward ---


def test_quantum_forward_example_passes(example_report):
    """The bundled network meets its l2 target with every stage bound holding."""
    assert example_report.passed
    assert example_report.l2_error <= example_report.epsilon
    assert sum(example_report.y_quantum) == pytest.approx(1.0)
    stages = [s.stage for s in example_report.stages]
    assert stages[:2] == ["input", "conv1"]
    assert "output" in stages


def test_quantum_forward_histogram(example_spec):
    """Shots produce a histogram alongside the exact distribution."""
    report = network.quantum_forward(example_spec, network.network_input(example_spec), shots=200, seed=1)
    assert report.shots == 200
    assert sum(report.histogram) == 200
    assert len(report.histogram) == example_spec.c_bins


def test_quantum_forward_report_dumps(example_report):
    """The report carries per-layer convolution norms and the final encoding."""
    assert [c["stage"] for c in example_report.conv_layers] == ["conv1"]
    assert example_report.conv_layers[0]["ratio_bound_ok"] is True
    dump = example_report.final_encoding
    assert dump["alpha"] == pytest.approx(example_report.final_alpha)
    assert dump["vec"]["shape"] == [16]


def test_compare_report(example_report):
    """Comparing with the classical output reproduces the report's error."""
    summary = network.compare_report(example_report, example_report.y_classical)
    assert summary.l2_distance == pytest.approx(example_report.l2_error)
    assert summary.passed == (example_report.l2_error <= example_report.epsilon)
    assert len(summary.stage_table) == len(example_report.stages)


def test_compare_report_class_mismatch(example_report):
    """Class counts must agree."""
    with pytest.raises(DimensionMismatch):
        network.compare_report(example_report, [1.0, 0.0, 0.0])


# --- Tests for the pooled regime ---


def test_quantum_forward_bilinear_passes(bilinear_report):
    """The pooled network meets its l2 target with every stage bound holding."""
    assert bilinear_report.regime == 3
    assert bilinear_report.passed
    assert bilinear_report.l2_error <= bilinear_report.epsilon
    assert "output" not in [s.stage for s in bilinear_report.stages]
    assert all(s.passed for s in bilinear_report.stages)


def test_quantum_forward_bilinear_argmax(bilinear_report):
    """A classical margin above 2 eps pins the predicted class."""
    top, second = sorted(bilinear_report.y_classical, reverse=True)[:2]
    if top - second <= 2.0 * bilinear_report.epsilon:
        pytest.skip("classical margin too small to pin the class")
    assert bilinear_report.argmax_agree
    assert np.argmax(bilinear_report.y_quantum) == np.argmax(bilinear_report.y_classical)


# --- Tests for the report schema ---


def json_type(value):
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "array"
    if isinstance(value, dict):
        return "object"
    return "null"


def assert_matches_schema(doc, schema):
    assert set(doc) == set(schema)
    for field, expected in schema.items():
        allowed = expected if isinstance(expected, list) else [expected]
        assert json_type(doc[field]) in allowed, f"{field}: {json_type(doc[field])} not in {allowed}"


def test_report_schema_is_pinned(example_spec):
    """Report, stage and suite records keep their field names and JSON types."""
    golden = json.loads(GOLDEN_SCHEMA.read_text(encoding="utf-8"))
    report = network.quantum_forward(example_spec, network.network_input(example_spec), shots=50, seed=2)
    doc = report.model_dump(mode="json")
    assert_matches_schema(doc, golden["InferenceReport"])
    for stage in doc["stages"]:
        assert_matches_schema(stage, golden["StageRecord"])
    record = LemmaRecord(lemma="ve_sum", case=0, eps_bound=1e-3, eps_actual=0.0, ledger_ok=True, passed=True)
    assert_matches_schema(record.model_dump(mode="json"), golden["LemmaRecord"])
