# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: End-to-end inference of the residual convolutional network: the
# exact classical reference forward pass, the top-down error budgets, the coherent
# forward pass over encodings and the comparison report.
# -----------------------------------------------------------------------------

import json
import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError
from scipy.special import erf

import config
import linalg
from block_encodings import ve_fanout, ve_from_vector, ve_tensor
from blocks import output_block, output_budget, record_stage, residual_stack, sample_class, stack_ancillas
from convolution import conv_ancillas, conv_block_encoding, conv_matrix_form, unvectorize_image, vectorize_image
from errors import ConfigError, ContractViolation, DegenerateNormError, DimensionMismatch, QnnError, with_stage
from models import (
    ComparisonSummary,
    ConvKernel,
    InferenceReport,
    NetworkSpec,
    PoolingSpec,
    ResidualBlockSpec,
    StackSpec,
    StageRecord,
    VectorEncoding,
)
from nonlinear import pool_error_bound, pool_l2sq
from qram import build_matrix_structure, build_state_tree, rescale_contraction, state_prep_bound, state_prep_ve
import utils

logger = logging.getLogger(__name__)

KAPPA: float = 2.0  # Weight encodings carry W / kappa
INPUT_NORM_TOLERANCE: float = 1e-9


# --- Spec files ---


def load_network_spec(path: Union[str, Path]) -> NetworkSpec:
    """
    Loads a NetworkSpec JSON file. Tensor fields (kernels, final_w, input, paths)
    may be inline tensor documents, nested lists or file names relative to the spec.

    Raises:
        ConfigError: If the file is missing, unparsable or fails validation.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Network spec not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Could not parse network spec {path}: {e}") from e

    base = path.resolve().parent

    def resolve(value):
        if isinstance(value, str):
            return utils.load_tensor_file(base / value)
        return utils.tensor_from_doc(value)

    if "kernels" in doc:
        kernels = doc["kernels"]
        if isinstance(kernels, str):
            stacked = np.real(resolve(kernels))
            doc["kernels"] = [stacked] if stacked.ndim == 4 else list(stacked)
        else:
            doc["kernels"] = [np.real(resolve(k)) for k in kernels]
    for key in ("final_w", "input"):
        if doc.get(key) is not None:
            doc[key] = resolve(doc[key])
    if doc.get("paths") is not None:
        doc["paths"] = [resolve(p) for p in doc["paths"]]

    try:
        spec = NetworkSpec.model_validate(doc)
    except (ValidationError, ContractViolation) as e:
        raise ConfigError(f"Invalid network spec {path}:\n{e}") from e
    logger.info(f"Loaded network spec '{spec.name}' from {path} (regime {spec.regime}, k={spec.k}, M={spec.side})")
    return spec


def network_input(spec: NetworkSpec) -> np.ndarray:
    """
    The [channels][M][M] input of a spec, normalized to unit l2 norm. Bilinear specs
    take the Kronecker product of their paths.

    Raises:
        ConfigError: If the spec carries neither an input nor paths.
    """
    if spec.input is not None:
        x = np.asarray(spec.input)
    elif spec.paths:
        x = unvectorize_image(linalg.kron_all([p / np.linalg.norm(p) for p in spec.paths]), spec.padded_channels)
    else:
        raise ConfigError(f"Network spec '{spec.name}' has neither an input nor bilinear paths.")
    norm = float(np.linalg.norm(x))
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError("The network input is zero.")
    if abs(norm - 1.0) > INPUT_NORM_TOLERANCE:
        logger.info(f"Normalizing network input of norm {norm:.6g}")
    return x / norm


def load_channels(x: np.ndarray, spec: NetworkSpec) -> np.ndarray:
    """Zero-pads the null channels and vectorizes; the input must already be unit-norm."""
    img = np.asarray(x, dtype=np.complex128)
    if img.ndim != 3 or img.shape[1:] != (spec.side, spec.side) or img.shape[0] > spec.padded_channels:
        raise DimensionMismatch(
            f"Input of shape {img.shape} does not fit {spec.padded_channels} channels of {spec.side}x{spec.side}."
        )
    padded = np.zeros((spec.padded_channels, spec.side, spec.side), dtype=np.complex128)
    padded[: img.shape[0]] = img
    vec = vectorize_image(padded)
    if abs(np.linalg.norm(vec) - 1.0) > INPUT_NORM_TOLERANCE:
        raise ContractViolation(f"Network inputs must be unit-norm, got {np.linalg.norm(vec):.12g}.")
    return vec


def _normalized(v: np.ndarray, label: str) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError(f"{label}: the classical activation vanished.")
    return v / norm


def _fanout(vec: np.ndarray, copies: int) -> np.ndarray:
    return np.kron(np.ones(copies) / math.sqrt(copies), vec)


# --- Classical reference ---


def classical_forward(spec: NetworkSpec, x: np.ndarray, rescale: bool = False) -> np.ndarray:
    """
    Exact evaluation of the network: channel fan-out, k skip-norm layers
    psi <- normalize(psi + erf(4/5 * kappa C psi / (2 ||C||))), the optional output
    layer normalize(tau psi + (1 - tau) W |psi|^2) and l2^2 pooling.

    Returns:
        The class probability vector y, summing to one.

    Raises:
        DegenerateNormError: If any layer vanishes.
    """
    psi = _fanout(load_channels(x, spec), spec.channel_fanout)
    for i, raw in enumerate(spec.kernels, start=1):
        conv = conv_matrix_form(ConvKernel.padded(raw), spec.m)
        if conv.spectral_norm <= config.ZERO_NORM_THRESHOLD:
            raise DegenerateNormError(f"layer{i}: the convolution is zero.")
        pre = KAPPA * (conv.matrix @ psi) / (2.0 * conv.spectral_norm)
        psi = _normalized(psi + erf(config.ACTIVATION_SCALE * pre), f"layer{i}")
    if spec.final_w is not None:
        w = rescale_contraction(spec.final_w, rescale)
        psi = _normalized(spec.tau * psi + (1.0 - spec.tau) * (w @ np.abs(psi) ** 2), "output")
    y = pool_l2sq(psi, PoolingSpec(c_bins=spec.c_bins, input_dim=spec.latent_dim))
    return y / y.sum()


# --- Budgets ---


def stack_budget(k: int, eps: float) -> Tuple[float, float]:
    """
    (eps_in, eps_w): the input and per-weight errors a k-block stack with final
    budget eps can absorb; together they stay below eps / 1424^k.
    """
    share = 0.25 * eps / config.STACK_ERROR_GROWTH**k
    return share, share


def pool_budget(n_dim: int, c_bins: int, eps: float) -> float:
    """
    Stack budget eps sqrt(C) / (2 N^2) for networks pooled without a final layer.
    It is stricter than inverting the pooled error 2 N delta / sqrt(C) <= eps.
    """
    return eps * math.sqrt(c_bins) / (2.0 * n_dim**2)


def angle_bits_for(eps: float) -> int:
    """Smallest d with pi / 2^d <= eps, clamped to the float64 mantissa."""
    bits = math.ceil(math.log2(math.pi / eps))
    return int(min(config.MAX_ANGLE_BITS, max(1, bits)))


def state_prep_bits_for(eps: float, n: int) -> int:
    """Smallest d with 2^-(d-2) sqrt(2^n) <= eps, clamped to the float64 mantissa."""
    bits = math.ceil(2.0 + math.log2(math.sqrt(2**n) / eps))
    return int(min(config.MAX_ANGLE_BITS, max(1, bits)))


def circuit_qubits(spec: NetworkSpec) -> int:
    """Lower bound on the register of the final encoding: main qubits plus stack ancillas."""
    n = linalg.num_qubits(spec.latent_dim)
    widths = [ConvKernel.padded(k) for k in spec.kernels]
    b = max(conv_ancillas(k.C, k.D) for k in widths)
    return n + stack_ancillas(0, b, n, spec.k)


# --- Quantum forward ---


def bilinear_input(paths: Sequence[np.ndarray], d_paths: int, realize: bool = False) -> VectorEncoding:
    """
    Brute-force encodings of each path tensored together: the target is
    p_1 (x) ... (x) p_d, of dimension prod len(p_i).

    Raises:
        DimensionMismatch: If the number of paths differs from d_paths.
    """
    if len(paths) != d_paths:
        raise DimensionMismatch(f"Expected {d_paths} bilinear paths, got {len(paths)}.")
    out = ve_from_vector(paths[0], realize)
    for path in paths[1:]:
        out = ve_tensor(out, ve_from_vector(path, realize))
    return out


def _tagged(e: QnnError, stage: str) -> QnnError:
    return e if e.stage else with_stage(e, stage)


def _load_input(
    spec: NetworkSpec, x: np.ndarray, eps_in: float, realize: bool, notes: List[str]
) -> VectorEncoding:
    vec = load_channels(x, spec)
    if spec.regime == 1:
        n = linalg.num_qubits(vec.shape[0])
        bits = spec.angle_bits or state_prep_bits_for(eps_in, n)
        if state_prep_bound(n, bits) > eps_in:
            notes.append(
                f"input: {bits}-bit state preparation bound {state_prep_bound(n, bits):.3e} exceeds budget {eps_in:.3e}"
            )
        psi = state_prep_ve(build_state_tree(vec), bits, realize)
    elif spec.d_paths > 1:
        paths = spec.paths or []
        psi = bilinear_input(paths, spec.d_paths, realize)
        if psi.vec.shape[0] != vec.shape[0] or not np.allclose(psi.target, vec, atol=1e-9):
            raise DimensionMismatch("Bilinear paths do not reproduce the network input.")
    else:
        psi = ve_from_vector(vec, realize)
    return ve_fanout(psi, spec.channel_fanout)


def quantum_forward(
    spec: NetworkSpec,
    x: np.ndarray,
    realize: bool = False,
    shots: int = 0,
    seed: Optional[int] = None,
    rescale: bool = False,
) -> InferenceReport:
    """
    Runs the coherent pipeline: input loading, channel fan-out, one convolution
    block-encoding per layer, the residual stack, the optional output block and
    sampling. Budgets are solved top-down before any stage runs.

    Args:
        spec: The network.
        x: Unit-norm [channels][M][M] input.
        realize: Materialize unitaries where the register allows (circuit mode).
        shots: Histogram samples; 0 reports the exact distribution only.
        seed: Sampling seed, defaulting to spec.seed.
        rescale: Divide an over-norm final_w by its spectral norm.

    Returns:
        An InferenceReport comparing the exact-mode output with classical_forward.

    Raises:
        QnnError: Any stage failure, tagged with its stage.
    """
    seed = spec.seed if seed is None else seed
    notes: List[str] = []
    stages: List[StageRecord] = []
    y_classical = classical_forward(spec, x, rescale)
    n_dim, c_bins, eps = spec.latent_dim, spec.c_bins, spec.epsilon

    if spec.final_w is not None:
        _, required = output_budget(n_dim, c_bins, eps, spec.tau)
        eps_stack = 0.5 * required
        d_out = spec.angle_bits or angle_bits_for(1.5 * required)
        if math.pi / 2**d_out > 1.5 * required:
            notes.append(f"output: {d_out}-bit column norms round by {math.pi / 2**d_out:.3e}")
    else:
        eps_stack = pool_budget(n_dim, c_bins, eps)
    eps_in, eps_w = stack_budget(spec.k, eps_stack)
    if eps_w < config.POLY_EPS_FLOOR:
        notes.append(
            f"stack: per-weight budget {eps_w:.3e} lies below the float64 certification floor "
            f"{config.POLY_EPS_FLOOR:.0e}; ledgers carry the floored bounds"
        )
    logger.info(
        f"Budgets for '{spec.name}': eps={eps:.3e} stack={eps_stack:.3e} input={eps_in:.3e} weight={eps_w:.3e}"
    )

    try:
        psi = _load_input(spec, x, eps_in, realize, notes)
        record_stage(stages, "input", psi)
    except QnnError as e:
        raise _tagged(e, "input") from e

    blocks = []
    conv_layers = []
    for i, raw in enumerate(spec.kernels, start=1):
        stage = f"conv{i}"
        try:
            kernel = ConvKernel.padded(raw)
            conv = conv_matrix_form(kernel, spec.m)
            conv_layers.append({"stage": stage, **utils.conv_to_doc(conv)})
            if not conv.ratio_bound_ok:
                notes.append(f"{stage}: ||K||_1 / ||C||_2 = {conv.ratio:.4g} exceeds D C^1.5")
            weight = conv_block_encoding(
                kernel, spec.m, eps=max(eps_w, config.POLY_EPS_FLOOR), realize=realize, conv=conv
            )
            record_stage(stages, stage, weight)
            blocks.append(ResidualBlockSpec(weight_be=weight, kappa=KAPPA, eps1=1.0))
        except QnnError as e:
            raise _tagged(e, stage) from e

    try:
        out = residual_stack(psi, StackSpec(blocks=blocks, eps=eps_stack), stages)
    except QnnError as e:
        raise _tagged(e, "stack") from e

    if spec.final_w is not None:
        try:
            structure = build_matrix_structure(rescale_contraction(spec.final_w, rescale), d_out)
            enforce = out.eps_bound <= required * (1.0 + 1e-9)
            if not enforce:
                notes.append(
                    f"output: upstream bound {out.eps_bound:.3e} exceeds requirement {required:.3e}; "
                    f"pass/fail rests on measured errors"
                )
            out, pooling = output_block(out, structure, c_bins, eps, stages, enforce_input_budget=enforce, tau=spec.tau)
        except QnnError as e:
            raise _tagged(e, "output") from e
    else:
        pooling = PoolingSpec(c_bins=c_bins, input_dim=n_dim)
        if pool_error_bound(n_dim, c_bins, out.eps_bound) > eps:
            notes.append(f"pooling: propagated bound {pool_error_bound(n_dim, c_bins, out.eps_bound):.3e} exceeds eps")

    try:
        y_quantum = sample_class(out, pooling, 0, seed)
        histogram = sample_class(out, pooling, shots, seed) if shots > 0 else None
    except QnnError as e:
        raise _tagged(e, "sample") from e

    diff = y_quantum - y_classical
    l2 = float(np.linalg.norm(diff))
    report = InferenceReport(
        network=spec.name,
        regime=spec.regime,
        epsilon=eps,
        stages=stages,
        y_classical=[float(v) for v in y_classical],
        y_quantum=[float(v) for v in y_quantum],
        histogram=None if histogram is None else [int(v) for v in histogram],
        shots=shots,
        l2_error=l2,
        l1_error=float(np.abs(diff).sum()),
        argmax_agree=int(np.argmax(y_quantum)) == int(np.argmax(y_classical)),
        budget_notes=notes,
        conv_layers=conv_layers,
        final_alpha=out.alpha,
        final_ancillas=out.ancillas,
        final_eps_bound=out.eps_bound,
        final_encoding=utils.encoding_to_doc(out),
        passed=l2 <= eps and all(s.passed for s in stages),
    )
    for note in notes:
        logger.warning(f"{spec.name}: {note}")
    logger.info(f"Inference '{spec.name}': l2={l2:.3e} eps={eps:.3e} passed={report.passed}")
    return report


def compare_report(quantum: InferenceReport, y: Sequence[float]) -> ComparisonSummary:
    """
    l2 and l1 distances and argmax agreement between a report's exact-mode output
    and a probability vector, plus the per-stage bound-vs-actual table.

    Raises:
        DimensionMismatch: If the class counts differ.
    """
    ours = np.asarray(quantum.y_quantum, dtype=np.float64)
    theirs = np.asarray(y, dtype=np.float64).reshape(-1)
    if ours.shape != theirs.shape:
        raise DimensionMismatch(f"Cannot compare {ours.shape[0]} classes with {theirs.shape[0]}.")
    l2 = float(np.linalg.norm(ours - theirs))
    table = [
        {
            "stage": s.stage,
            "eps_bound": s.eps_bound,
            "eps_actual": s.eps_actual,
            "passed": s.passed,
        }
        for s in quantum.stages
    ]
    return ComparisonSummary(
        l2_distance=l2,
        l1_distance=float(np.abs(ours - theirs).sum()),
        argmax_agree=int(np.argmax(ours)) == int(np.argmax(theirs)),
        passed=l2 <= quantum.epsilon,
        stage_table=table,
    )


if __name__ == "__main__":
    utils.setup_logging()
    sample = load_network_spec(config.SAMPLES_DIR / "example_network.json")
    result = quantum_forward(sample, network_input(sample))
    print(f"l2 error {result.l2_error:.3e} (eps {result.epsilon}) passed={result.passed}")
