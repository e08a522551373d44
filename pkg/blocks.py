# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Architectural blocks on vector-encodings: the skip-norm residual
# block, the k-block residual stack with its error schedule, the linear-pooling
# output block and class sampling.
# -----------------------------------------------------------------------------

import logging
import math
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.special import erf

import config
from block_encodings import ve_deamplify, ve_matvec, ve_normalize, ve_pad, ve_sum
from errors import (
    BoundViolation,
    ContractViolation,
    DegenerateNormError,
    QnnError,
    UpstreamBudgetError,
    with_stage,
)
from models import (
    BlockEncoding,
    MatrixQramStructure,
    PoolingSpec,
    ResidualBlockSpec,
    StackSpec,
    StageRecord,
    VectorEncoding,
)
from nonlinear import erf_apply_ve, matvec_squared, pool_l2sq

logger = logging.getLogger(__name__)


def record_stage(
    recorder: Optional[List[StageRecord]],
    stage: str,
    v: Union[BlockEncoding, VectorEncoding],
    norm_floor: Optional[float] = None,
    norm_value: Optional[float] = None,
) -> StageRecord:
    """Checks the ledger of `v` against its target and appends a StageRecord."""
    actual = v.actual_error()
    passed = actual is None or actual <= v.eps_bound + config.BOUND_TOLERANCE
    if norm_floor is not None and norm_value is not None:
        passed = passed and norm_value >= norm_floor
    record = StageRecord(
        stage=stage,
        alpha=v.alpha,
        ancillas=v.ancillas,
        eps_bound=v.eps_bound,
        eps_actual=actual,
        norm_floor=norm_floor,
        norm_value=norm_value,
        passed=passed,
    )
    if recorder is not None:
        recorder.append(record)
    logger.debug(f"Stage {stage}: {record.model_dump()}")
    return record


def skip_norm_block(
    psi: VectorEncoding,
    spec: ResidualBlockSpec,
    recorder: Optional[List[StageRecord]] = None,
    stage: str = "skip_norm",
) -> VectorEncoding:
    """
    Encodes (psi + f(W psi)) / N with f(x) = erf(4x/5): the weight product, the erf
    activation, a de-amplified skip path combined at tau = 1/2, then normalization.

    Args:
        psi: (1, a, eps0)-vector-encoding.
        spec: Weight encoding of W / kappa and the normalization accuracy eps1.
        recorder: Collects a StageRecord per sub-step when given.
        stage: Label prefix for the records.

    Returns:
        A (1, 2(a + b) + n + 9, 712 (eps0 + eps_w + eps1))-vector-encoding.

    Raises:
        ContractViolation: If psi is not unit-scale.
        DegenerateNormError: If W annihilates psi.
        BoundViolation: If the pre-normalization norm falls below 1/400.
    """
    if not math.isclose(psi.alpha, 1.0, rel_tol=1e-12):
        raise ContractViolation(f"Skip-norm blocks take unit-scale inputs, got alpha={psi.alpha:.6g}.")
    weight = spec.weight_be
    nu = 4.0 * spec.kappa * weight.alpha / 5.0

    product = ve_matvec(weight, psi)
    record_stage(recorder, f"{stage}/matvec", product)
    activated = erf_apply_ve(product, nu, spec.eps1)
    record_stage(recorder, f"{stage}/erf", activated)
    skip = ve_deamplify(psi, 16.0 * nu / math.sqrt(math.pi))
    combined = ve_sum(skip, activated, 0.5)
    norm = 1.0 / combined.alpha
    record_stage(recorder, f"{stage}/sum", combined, config.SKIP_NORM_FLOOR, norm)
    if norm < config.SKIP_NORM_FLOOR:
        raise BoundViolation(f"{stage}: pre-normalization norm {norm:.4g} fell below 1/400.")

    normalized = ve_normalize(combined, combined.alpha, spec.eps1)
    eps = config.SKIP_NORM_ERROR_FACTOR * (psi.eps_bound + weight.eps_bound + spec.eps1)
    out = normalized.model_copy(update={"eps_bound": max(eps, normalized.eps_bound)})
    record_stage(recorder, stage, out)
    logger.debug(f"{stage}: ancillas={out.ancillas} eps_bound={out.eps_bound:.3e} norm={norm:.4g}")
    return out


def skip_sum_norm(psi: np.ndarray, w: np.ndarray, nu: float) -> float:
    """
    Pre-normalization norm of the skip-norm block in closed form:
    sqrt(pi) ||psi + erf(4 W psi / 5)|| / (32 nu), nu being the activation slope.
    """
    psi = np.real(np.asarray(psi))
    combined = psi + erf(config.ACTIVATION_SCALE * (np.real(np.asarray(w)) @ psi))
    return float(math.sqrt(math.pi) * np.linalg.norm(combined) / (32.0 * nu))


def stack_ancillas(a: int, b: int, n: int, k: int) -> int:
    """2^k (a + 2b + n + 9)."""
    return 2**k * (a + 2 * b + n + 9)


def residual_stack(
    psi: VectorEncoding,
    spec: StackSpec,
    recorder: Optional[List[StageRecord]] = None,
) -> VectorEncoding:
    """
    Applies k skip-norm blocks with kappa = 2. Block i normalizes to half of the
    schedule's eps1 (eps / 1424^k for the first block, delta_(i-1) afterwards), so
    the propagated error after block i stays below delta_i = eps / 1424^(k-i) when
    the input and weight errors together stay below eps / 1424^k.

    Returns:
        A (1, 2^k (a + 2b + n + 9), delta_k)-vector-encoding.

    Raises:
        QnnError: Any block failure, tagged with the block index.
    """
    a, n = psi.ancillas, psi.n_qubits
    b = max(block.weight_be.ancillas for block in spec.blocks)
    out = psi
    for i, block in enumerate(spec.blocks, start=1):
        label = f"block{i}"
        eps1 = spec.layer_eps1(i) / 2.0
        try:
            out = skip_norm_block(out, block.model_copy(update={"eps1": eps1}), recorder, label)
        except QnnError as e:
            raise with_stage(e, label) from e
        budget = spec.layer_budget(i)
        if out.eps_bound > budget * (1.0 + 1e-9):
            logger.warning(f"{label}: propagated bound {out.eps_bound:.3e} exceeds schedule {budget:.3e}.")
        logger.info(f"{label}: eps_bound={out.eps_bound:.3e} schedule={budget:.3e} ancillas={out.ancillas}")

    padded = stack_ancillas(a, b, n, spec.k)
    if out.ancillas > padded:
        raise ContractViolation(f"Stack used {out.ancillas} ancillas, more than 2^k(a + 2b + n + 9) = {padded}.")
    return ve_pad(out, padded - out.ancillas)


def output_delta(tau: float) -> float:
    """Lower bound 2 tau - 1 on the norm of tau psi + (1 - tau) W g(psi)."""
    return 2.0 * tau - 1.0


def output_budget(
    n_dim: int, c_bins: int, eps: float, tau: float = config.OUTPUT_TAU
) -> Tuple[float, float]:
    """
    (eps1, eps0) for the output block: eps1 = sqrt(C) eps / (8N) and the input
    requirement eps0 = eps sqrt(C) delta / (24N) with delta = 2 tau - 1.
    """
    root = math.sqrt(c_bins)
    return root * eps / (8.0 * n_dim), eps * root * output_delta(tau) / (24.0 * n_dim)


def output_ancillas(a: int, d: int, n: int) -> int:
    """2a + d + n + 8: the W g(psi) product, the weighted sum and normalization."""
    return 2 * a + d + n + 8


def output_sum_norm(psi: np.ndarray, w: np.ndarray, tau: float = config.OUTPUT_TAU) -> float:
    """N_gamma = ||tau psi + (1 - tau) W g(psi)|| with g(x) = |x|^2."""
    psi = np.asarray(psi)
    gamma = tau * psi + (1.0 - tau) * (np.asarray(w) @ (np.abs(psi) ** 2))
    return float(np.linalg.norm(gamma))


def output_block(
    psi: VectorEncoding,
    w: MatrixQramStructure,
    c_bins: int,
    eps: float,
    recorder: Optional[List[StageRecord]] = None,
    enforce_input_budget: bool = True,
    tau: float = config.OUTPUT_TAU,
) -> Tuple[VectorEncoding, PoolingSpec]:
    """
    Full-rank linear pooling: encodes gamma / N_gamma with
    gamma = tau psi + (1 - tau) W g(psi), ready for C-bin pooling.

    Args:
        psi: (1, a, eps0)-vector-encoding.
        w: Matrix structure of W with ||W||_2 <= 1.
        c_bins: Number of classes C.
        eps: Target l2 error of the pooled distribution.
        recorder: Collects StageRecords when given.
        enforce_input_budget: Reject inputs whose eps0 exceeds the block's requirement.
        tau: Skip weight in (1/2, 1); the default 0.51 gives the floor delta = 0.02.

    Returns:
        The unit-scale encoding, with output_ancillas(a, d, n) ancillas, and its PoolingSpec.

    Raises:
        UpstreamBudgetError: If psi carries more error than eps sqrt(C) delta / (24N).
        BoundViolation: If N_gamma falls below delta = 2 tau - 1.
    """
    if not math.isclose(psi.alpha, 1.0, rel_tol=1e-12):
        raise ContractViolation(f"The output block takes unit-scale inputs, got alpha={psi.alpha:.6g}.")
    dim = psi.vec.shape[0]
    pooling = PoolingSpec(c_bins=c_bins, input_dim=dim)
    if not 0.5 < tau < 1.0:
        raise ContractViolation(f"The output block needs tau in (1/2, 1), got {tau}.")
    delta = output_delta(tau)
    eps1, required = output_budget(dim, c_bins, eps, tau)
    if enforce_input_budget and psi.eps_bound > required * (1.0 + 1e-9):
        raise UpstreamBudgetError(
            f"Input error {psi.eps_bound:.3e} exceeds the output block's requirement {required:.3e}; "
            f"re-run upstream stages at the tighter tolerance."
        )

    squared = matvec_squared(w, psi)
    record_stage(recorder, "output/matvec_squared", squared)
    combined = ve_sum(psi, squared, tau)
    norm = 1.0 / combined.alpha
    record_stage(recorder, "output/sum", combined, delta, norm)
    if norm < delta:
        raise BoundViolation(f"Output norm {norm:.4g} fell below delta = {delta:.4g}.")
    out = ve_normalize(combined, combined.alpha, eps1)
    record_stage(recorder, "output", out)
    return out, pooling


def sample_class(v: VectorEncoding, spec: PoolingSpec, shots: int, seed: int) -> np.ndarray:
    """
    Samples the encoded column and bins the outcomes.

    Args:
        v: The final vector-encoding.
        spec: Pooling bins.
        shots: Number of samples; 0 returns the exact pooled distribution.
        seed: Seed for numpy's default_rng.

    Returns:
        Class counts (shots > 0) or probabilities (shots == 0).

    Raises:
        DegenerateNormError: If the encoded column is zero.
    """
    if shots < 0:
        raise ContractViolation(f"shots must be non-negative, got {shots}.")
    norm = v.norm
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError("Cannot sample from a zero vector.")
    state = v.vec / norm
    if shots == 0:
        return pool_l2sq(state, spec)
    probs = np.abs(state) ** 2
    rng = np.random.default_rng(seed)
    outcomes = rng.choice(spec.input_dim, size=shots, p=probs / probs.sum())
    return np.bincount(outcomes // spec.bin_size, minlength=spec.c_bins)
