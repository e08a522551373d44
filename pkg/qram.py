# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Classical emulation of the memory oracles: classical-data QRAM,
# state-preparation trees, the preprocessed matrix structure, the CR_Y amplitude
# loader and diagonal block-encodings read from QRAM.
# -----------------------------------------------------------------------------

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg as la

import config
import linalg
from block_encodings import be_lcu
from errors import BoundViolation, ConfigError, ContractViolation, DegenerateNormError, DimensionMismatch
from models import BlockEncoding, ClassicalQram, MatrixQramStructure, StatePrepTree, VectorEncoding

logger = logging.getLogger(__name__)


def _check_bits(d: int) -> None:
    if not 1 <= d <= config.MAX_ANGLE_BITS:
        raise ContractViolation(f"Angle precision must lie in [1, {config.MAX_ANGLE_BITS}] bits, got {d}.")


# --- Classical-data QRAM ---


def qram_read(q: ClassicalQram, addr: int) -> int:
    """
    U|i>|0>_d = |i>|x_i>_d for a single address.

    Raises:
        ContractViolation: If addr is out of range.
    """
    if not 0 <= addr < len(q.words):
        raise ContractViolation(f"Address {addr} out of range [0, {len(q.words)}).")
    return q.words[addr]


def qram_read_all(q: ClassicalQram) -> List[int]:
    """Superposed query over every address: the word register reads the whole table."""
    return [qram_read(q, i) for i in range(len(q.words))]


# --- Quantum-data QRAM (state-preparation trees) ---


def build_state_tree(x: Sequence[complex]) -> StatePrepTree:
    """
    Builds the binary tree of partial squared norms over x.

    Raises:
        DegenerateNormError: If x is the zero vector.
    """
    leaves = linalg.as_cvector(x)
    if np.linalg.norm(leaves) <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError("Cannot build a state-preparation tree for the zero vector.")
    n = linalg.num_qubits(leaves.shape[0])
    levels = [np.abs(leaves) ** 2]
    for _ in range(n):
        child = levels[0]
        levels.insert(0, child[0::2] + child[1::2])
    return StatePrepTree(leaves=leaves, levels=levels)


def update_state_tree(tree: StatePrepTree, index: int, value: complex) -> Tuple[StatePrepTree, int]:
    """
    Persistent single-entry update; only the root-to-leaf path is recomputed.

    Returns:
        The new tree and the number of nodes touched (n + 1).
    """
    if not 0 <= index < tree.leaves.shape[0]:
        raise ContractViolation(f"Leaf index {index} out of range.")
    leaves = tree.leaves.copy()
    leaves[index] = value
    levels = [level.copy() for level in tree.levels]
    n = tree.n_qubits
    levels[n][index] = abs(value) ** 2
    touched = 1
    node = index
    for depth in range(n - 1, -1, -1):
        node >>= 1
        levels[depth][node] = levels[depth + 1][2 * node] + levels[depth + 1][2 * node + 1]
        touched += 1
    if levels[0][0] <= config.ZERO_NORM_THRESHOLD**2:
        raise DegenerateNormError("Update zeroed the whole vector.")
    return StatePrepTree(leaves=leaves, levels=levels), touched


def state_prep_bound(n: int, d: int) -> float:
    """2^-(d-2) sqrt(N): the error of d-bit angle storage over an n-qubit tree."""
    return 2.0 ** (-(d - 2)) * math.sqrt(2**n)


def state_prep_ve(
    tree: StatePrepTree, d: int = config.DEFAULT_ANGLE_BITS, realize: bool = False
) -> VectorEncoding:
    """
    Grover-Rudolph preparation from the tree with d-bit rotation angles and phases.

    Args:
        tree: A valid partial-norm tree.
        d: Stored angle precision in bits.
        realize: Materialize a state-preparation unitary.

    Returns:
        A (1, 0, 2^-(d-2) sqrt(N))-vector-encoding of x / ||x||.
    """
    _check_bits(d)
    D = 2**d
    n = tree.n_qubits
    amplitudes = np.ones(1)
    for depth in range(n):
        parent = tree.levels[depth]
        left = tree.levels[depth + 1][0::2]
        ratio = np.divide(left, parent, out=np.ones_like(parent), where=parent > 0.0)
        theta = np.arccos(np.sqrt(np.clip(ratio, 0.0, 1.0)))
        words = np.rint(theta * D / math.pi)
        theta_q = words * math.pi / D
        branch = np.empty(2 * amplitudes.shape[0])
        branch[0::2] = amplitudes * np.cos(theta_q)
        branch[1::2] = amplitudes * np.sin(theta_q)
        amplitudes = branch
    phase_words = np.mod(np.rint(np.angle(tree.leaves) * D / (2.0 * math.pi)), D)
    vec = amplitudes * np.exp(2j * math.pi * phase_words / D)

    target = tree.leaves / np.linalg.norm(tree.leaves)
    eps = 0.0 if np.max(np.abs(vec - target)) == 0.0 else state_prep_bound(n, d)
    realization = linalg.state_unitary(vec) if realize and n <= config.CIRCUIT_QUBIT_LIMIT else None
    out = VectorEncoding(
        vec=vec, alpha=1.0, ancillas=0, eps_bound=eps, target=target, realization=realization, depth="O(n^2)"
    )
    logger.debug(f"state_prep_ve: n={n} d={d} eps_bound={eps:.3e} actual={out.actual_error():.3e}")
    return out


# --- Preprocessed matrix structure ---


def arccos_word(value: float, d: int) -> int:
    """round(arccos(value) D / pi), clipped into d bits."""
    D = 2**d
    return int(min(D - 1, round(math.acos(max(-1.0, min(1.0, value))) * D / math.pi)))


def rescale_contraction(w: np.ndarray, rescale: bool = False) -> np.ndarray:
    """
    Returns W unchanged when ||W||_2 <= 1, else W / (||W||_2 (1 + RESCALE_MARGIN)) if allowed.

    Raises:
        ConfigError: If ||W||_2 > 1 and rescaling is not allowed.
    """
    mat = linalg.as_cmatrix(w)
    norm = linalg.spectral_norm(mat)
    if norm <= 1.0 + config.BLOCK_NORM_TOLERANCE:
        return mat
    if not rescale:
        raise ConfigError(f"||W||_2 = {norm:.12g} exceeds 1; pass --rescale to divide it out.")
    logger.info(f"Rescaling W by 1/{norm * (1.0 + config.RESCALE_MARGIN):.12g}")
    return mat / (norm * (1.0 + config.RESCALE_MARGIN))


def build_matrix_structure(w: np.ndarray, d: int = config.DEFAULT_ANGLE_BITS) -> MatrixQramStructure:
    """
    Decomposes W[:, j] = a_j w_j and stores d-bit arccos words of the a_j.

    Raises:
        ContractViolation: If ||W||_2 > 1 (the caller must pre-scale).
    """
    _check_bits(d)
    mat = linalg.as_cmatrix(w)
    if mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"Matrix structure needs a square matrix, got {mat.shape}.")
    norm = linalg.spectral_norm(mat)
    if norm > 1.0 + config.BLOCK_NORM_TOLERANCE:
        raise ContractViolation(f"||W||_2 = {norm:.12g} > 1; pre-scale the matrix.")
    lengths = np.linalg.norm(mat, axis=0)
    columns = np.eye(mat.shape[0], dtype=np.complex128)
    nonzero = lengths > config.ZERO_NORM_THRESHOLD
    columns[:, nonzero] = mat[:, nonzero] / lengths[nonzero]
    col_norms = np.where(nonzero, np.minimum(lengths, 1.0), 0.0)
    words = [arccos_word(a, d) for a in col_norms]
    logger.debug(f"build_matrix_structure: N={mat.shape[0]} d={d} max a_j={col_norms.max():.6g}")
    return MatrixQramStructure(unit_columns=columns, col_norms=col_norms, angle_words=words, d=d)


def column_loader(s: MatrixQramStructure) -> np.ndarray:
    """U_W = sum_j |j><j| (x) U_{w_j} with U_{w_j}|0> = |w_j>."""
    return la.block_diag(*[linalg.state_unitary(s.unit_columns[:, j]) for j in range(s.unit_columns.shape[1])])


def oracle_uw(s: MatrixQramStructure, psi: VectorEncoding) -> VectorEncoding:
    """
    Applies U_W to |psi>|0>, giving sum_j psi_j |j>|w_j> with the same ledger.

    Raises:
        DimensionMismatch: If psi does not live on the structure's index register.
    """
    dim = s.unit_columns.shape[1]
    if psi.vec.shape[0] != dim:
        raise DimensionMismatch(f"Structure over {dim} columns cannot act on a length-{psi.vec.shape[0]} vector.")
    expand = lambda v: (v[:, np.newaxis] * s.unit_columns.T).reshape(-1)  # noqa: E731
    realization = None
    if psi.realization is not None and psi.total_qubits + s.n_qubits <= config.CIRCUIT_QUBIT_LIMIT:
        loader = np.kron(np.eye(2**psi.ancillas, dtype=np.complex128), column_loader(s))
        realization = loader @ np.kron(psi.realization, np.eye(dim, dtype=np.complex128))
    return VectorEncoding(
        vec=expand(psi.vec),
        alpha=psi.alpha,
        ancillas=psi.ancillas,
        eps_bound=psi.eps_bound,
        target=None if psi.target is None else expand(psi.target),
        realization=realization,
        depth=psi.depth,
    )


# --- CR_Y loader and diagonal block-encodings ---


def cr_y_load(angle_word: int, d: int) -> np.ndarray:
    """
    cos(b t)|0> + sin(b t)|1> with t = pi / 2^d, via the cascade of R_Y(2^j t) over set bits.

    Raises:
        ContractViolation: If angle_word does not fit in d bits.
    """
    _check_bits(d)
    if not 0 <= angle_word < 2**d:
        raise ContractViolation(f"Angle word {angle_word} does not fit in {d} bits.")
    t = math.pi / 2**d
    gate = np.eye(2, dtype=np.complex128)
    for j in range(d):
        if (angle_word >> j) & 1:
            gate = linalg.ry(2**j * t) @ gate
    return gate[:, 0]


def cr_y_gate(d: int) -> np.ndarray:
    """CR_Y(pi/2^d) on (flag, angle register): |x> controls R_Y(x pi / 2^d) on the flag."""
    D = 2**d
    proj0 = np.diag([1.0, 0.0]).astype(np.complex128)
    proj1 = np.diag([0.0, 1.0]).astype(np.complex128)
    gate = np.eye(2 * D, dtype=np.complex128)
    for j in range(d):
        # Angle qubit for bit j sits at position d - j (qubit 0 is the flag).
        rot = np.kron(linalg.ry(2**j * math.pi / D), np.eye(D, dtype=np.complex128))
        on = linalg.apply_on_qubits(proj1, [d - j], d + 1)
        off = linalg.apply_on_qubits(proj0, [d - j], d + 1)
        gate = (on @ rot + off) @ gate
    return gate


def _xor_oracle(words: Sequence[int], d: int) -> np.ndarray:
    """|x>_d |j>_n -> |x XOR b_j>_d |j>_n."""
    D, N = 2**d, len(words)
    perm = np.zeros((D * N, D * N), dtype=np.complex128)
    for x in range(D):
        for j, b in enumerate(words):
            perm[(x ^ b) * N + j, x * N + j] = 1.0
    return perm


def _real_diagonal_be(a: np.ndarray, d: int, realize: bool) -> BlockEncoding:
    D = 2**d
    words = [arccos_word(float(v), d) for v in a]
    block = np.diag(np.cos(np.asarray(words) * math.pi / D)).astype(np.complex128)
    bound = math.pi / D
    actual = float(np.max(np.abs(np.diag(block).real - a)))
    if actual > bound + config.BOUND_TOLERANCE:
        raise BoundViolation(f"Angle rounding error {actual:.3e} exceeds pi/2^d = {bound:.3e}.")
    n = linalg.num_qubits(a.shape[0])
    realization = None
    if realize and 1 + d + n <= config.CIRCUIT_QUBIT_LIMIT:
        oracle = np.kron(np.eye(2, dtype=np.complex128), _xor_oracle(words, d))
        rotation = np.kron(cr_y_gate(d), np.eye(2**n, dtype=np.complex128))
        realization = oracle.conj().T @ rotation @ oracle
    return BlockEncoding(
        block=block,
        alpha=1.0,
        ancillas=d + 1,
        eps_bound=0.0 if actual == 0.0 else bound,
        target=np.diag(a).astype(np.complex128),
        realization=realization,
        depth="O(log^2 N + d)",
    )


def diagonal_be_from_qram(
    a_values: Sequence[complex], d: int = config.DEFAULT_ANGLE_BITS, realize: bool = False
) -> BlockEncoding:
    """
    Block-encoding of diag(a) from d-bit arccos words: U^dag CR_Y U on (flag, angles, main).

    Real entries give a (1, d + 1, pi/2^d)-encoding; complex entries are split into
    real and imaginary parts and combined into a (2, d + 2, 2 pi/2^d)-encoding.

    Raises:
        ContractViolation: If some |a_j| > 1.
    """
    _check_bits(d)
    a = np.asarray(a_values, dtype=np.complex128).reshape(-1)
    linalg.num_qubits(a.shape[0])
    if np.any(np.abs(a) > 1.0 + 1e-12):
        raise ContractViolation(f"Diagonal entries must satisfy |a_j| <= 1; max is {np.abs(a).max():.12g}.")
    if np.all(np.abs(a.imag) <= 1e-15):
        return _real_diagonal_be(np.clip(a.real, -1.0, 1.0), d, realize)

    real_part = _real_diagonal_be(np.clip(a.real, -1.0, 1.0), d, realize)
    imag_part = _real_diagonal_be(np.clip(a.imag, -1.0, 1.0), d, realize)
    shared_eps = max(real_part.eps_bound, imag_part.eps_bound)
    real_part = real_part.model_copy(update={"eps_bound": shared_eps})
    imag_part = imag_part.model_copy(
        update={
            "block": 1j * imag_part.block,
            "target": 1j * imag_part.target,
            "realization": None if imag_part.realization is None else 1j * imag_part.realization,
            "eps_bound": shared_eps,
        }
    )
    return be_lcu([real_part, imag_part], [1.0, 1.0])


if __name__ == "__main__":
    tree = build_state_tree([3.0, 4.0, 0.0, 0.0])
    ve = state_prep_ve(tree, d=12)
    print(f"state_prep_ve: vec={np.round(ve.vec.real, 6)} eps_bound={ve.eps_bound:.3e}")
    print(f"cr_y_load(2, 2) = {np.round(cr_y_load(2, 2), 6)}")
