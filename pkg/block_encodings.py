# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: The block-encoding / vector-encoding calculus. Every operation is
# pure: it returns a new encoding with the exact encoded block (or column), the
# propagated (alpha, ancillas, eps_bound) ledger and, when all inputs carry one
# and the register is small enough, the materialized unitary.
# -----------------------------------------------------------------------------

import logging
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as la

import config
import linalg
import polynomials
from errors import (
    AmplificationContractError,
    ContractViolation,
    DegenerateNormError,
    DimensionMismatch,
)
from models import BlockEncoding, VectorEncoding

logger = logging.getLogger(__name__)


def _fits(total_qubits: int) -> bool:
    return total_qubits <= config.CIRCUIT_QUBIT_LIMIT


def _all_realized(*encodings) -> bool:
    return all(e.realization is not None for e in encodings)


def _stack_product(outer: np.ndarray, outer_anc: int, inner: np.ndarray, inner_anc: int, n: int) -> np.ndarray:
    """
    outer @ inner on the register (outer ancillas, inner ancillas, main), where
    each factor acts on its own ancillas plus the shared main register.
    """
    total = outer_anc + inner_anc + n
    main = list(range(outer_anc + inner_anc, total))
    outer_full = linalg.apply_on_qubits(outer, list(range(outer_anc)) + main, total)
    inner_full = linalg.apply_on_qubits(inner, list(range(outer_anc, outer_anc + inner_anc)) + main, total)
    return outer_full @ inner_full


def _interleave_kron(u: np.ndarray, a: int, n: int, v: np.ndarray, b: int, m: int) -> np.ndarray:
    """U (x) V reordered from (anc_u, main_u, anc_v, main_v) to (anc_u, anc_v, main_u, main_v)."""
    anc_u = list(range(a))
    main_u = list(range(a, a + n))
    anc_v = list(range(a + n, a + n + b))
    main_v = list(range(a + n + b, a + n + b + m))
    return linalg.permute_qubits(np.kron(u, v), anc_u + anc_v + main_u + main_v)


def column_realization(vec: np.ndarray, ancillas: int) -> Optional[np.ndarray]:
    """A unitary whose first column is vec padded with the missing norm on ancilla space."""
    n = linalg.num_qubits(vec.shape[0])
    if not _fits(n + ancillas):
        return None
    column = np.zeros(2 ** (n + ancillas), dtype=np.complex128)
    column[: vec.shape[0]] = vec
    rest = 1.0 - float(np.linalg.norm(vec)) ** 2
    if ancillas == 0 or rest <= 0.0:
        column /= np.linalg.norm(column)
    else:
        column[vec.shape[0]] = np.sqrt(rest)
    return linalg.state_unitary(column)


# --- Extraction ---


def extract_block(realization: np.ndarray, ancillas: int) -> np.ndarray:
    """
    Returns (<0|_a (x) I) U (|0>_a (x) I), the top-left block of U.

    Args:
        realization: A unitary acting on a + n qubits, ancillas leading.
        ancillas: The ancilla count a.

    Raises:
        ContractViolation: If realization is not unitary.
    """
    u = linalg.as_cmatrix(realization)
    if not linalg.is_unitary(u):
        raise ContractViolation("Cannot extract a block from a non-unitary matrix.")
    dim = u.shape[0] // 2**ancillas
    if dim < 1:
        raise DimensionMismatch(f"{ancillas} ancillas exceed the {u.shape[0]}-dimensional register.")
    return u[:dim, :dim].copy()


def extract_vector(realization: np.ndarray, ancillas: int) -> np.ndarray:
    """Returns the first 2^n entries of U|0>, the encoded column."""
    u = linalg.as_cmatrix(realization)
    if not linalg.is_unitary(u):
        raise ContractViolation("Cannot extract a vector from a non-unitary matrix.")
    dim = u.shape[0] // 2**ancillas
    return u[:dim, 0].copy()


# --- Block-encoding constructors ---


def be_dilate(matrix: np.ndarray, alpha: Optional[float] = None, realize: bool = False) -> BlockEncoding:
    """
    Brute-force (alpha, 1, 0)-block-encoding of any matrix via unitary dilation.

    Args:
        matrix: The matrix A to encode.
        alpha: Scale; defaults to max(1, ||A||_2).
        realize: Materialize the dilation unitary.
    """
    a = linalg.as_cmatrix(matrix)
    if alpha is None:
        alpha = max(1.0, linalg.spectral_norm(a))
    block = a / alpha
    realization = None
    if realize and _fits(linalg.num_qubits(a.shape[0]) + 1):
        realization = linalg.unitary_dilation(block)
    return BlockEncoding(block=block, alpha=alpha, ancillas=1, eps_bound=0.0, target=a, realization=realization)


def be_unitary(u: np.ndarray, realize: bool = False) -> BlockEncoding:
    """A unitary is its own (1, 0, 0)-block-encoding."""
    mat = linalg.as_cmatrix(u)
    if not linalg.is_unitary(mat):
        raise ContractViolation("be_unitary needs a unitary matrix.")
    return BlockEncoding(
        block=mat, alpha=1.0, ancillas=0, target=mat, realization=mat if realize else None
    )


def be_identity(n: int, realize: bool = False) -> BlockEncoding:
    return be_unitary(np.eye(2**n, dtype=np.complex128), realize=realize)


def be_adjoint(u: BlockEncoding) -> BlockEncoding:
    return BlockEncoding(
        block=u.block.conj().T,
        alpha=u.alpha,
        ancillas=u.ancillas,
        eps_bound=u.eps_bound,
        target=None if u.target is None else u.target.conj().T,
        realization=None if u.realization is None else u.realization.conj().T,
        depth=u.depth,
    )


def be_negate(u: BlockEncoding) -> BlockEncoding:
    """-U encodes -A with the same ledger."""
    return u.model_copy(
        update={
            "block": -u.block,
            "target": None if u.target is None else -u.target,
            "realization": None if u.realization is None else -u.realization,
        }
    )


def be_scale_to_unit(u: BlockEncoding) -> BlockEncoding:
    """Reads an (alpha, a, eps)-encoding of A as a (1, a, eps/alpha)-encoding of A/alpha."""
    return u.model_copy(
        update={
            "alpha": 1.0,
            "eps_bound": u.eps_bound / u.alpha,
            "target": None if u.target is None else u.target / u.alpha,
        }
    )


def be_pad(u: BlockEncoding, extra: int) -> BlockEncoding:
    """Adds `extra` idle leading ancillas."""
    if extra < 0:
        raise ContractViolation("Cannot remove ancillas by padding.")
    if extra == 0:
        return u
    realization = None
    if u.realization is not None and _fits(u.total_qubits + extra):
        realization = np.kron(np.eye(2**extra, dtype=np.complex128), u.realization)
    return u.model_copy(update={"ancillas": u.ancillas + extra, "realization": realization})


def _target_or_scaled(u: BlockEncoding) -> np.ndarray:
    return u.target if u.target is not None else u.alpha * u.block


# --- Block-encoding composition ---


def be_product(u: BlockEncoding, v: BlockEncoding) -> BlockEncoding:
    """
    Block-encoding of the product A B from encodings of A (u) and B (v).

    Raises:
        DimensionMismatch: If the main registers differ.
    """
    if u.block.shape != v.block.shape:
        raise DimensionMismatch(f"Cannot multiply blocks of shapes {u.block.shape} and {v.block.shape}.")
    target = None
    if u.target is not None or v.target is not None:
        target = _target_or_scaled(u) @ _target_or_scaled(v)
    realization = None
    if _all_realized(u, v) and _fits(u.ancillas + v.ancillas + u.n_qubits):
        realization = _stack_product(u.realization, u.ancillas, v.realization, v.ancillas, u.n_qubits)
    out = BlockEncoding(
        block=u.block @ v.block,
        alpha=u.alpha * v.alpha,
        ancillas=u.ancillas + v.ancillas,
        eps_bound=u.alpha * v.eps_bound + v.alpha * u.eps_bound,
        target=target,
        realization=realization,
        depth="O(T1+T2)",
    )
    logger.debug(f"be_product: alpha={out.alpha:.6g} ancillas={out.ancillas} eps={out.eps_bound:.3e}")
    return out


def be_tensor(u: BlockEncoding, v: BlockEncoding) -> BlockEncoding:
    """Block-encoding of A (x) B."""
    target = None
    if u.target is not None or v.target is not None:
        target = np.kron(_target_or_scaled(u), _target_or_scaled(v))
    realization = None
    if _all_realized(u, v) and _fits(u.total_qubits + v.total_qubits):
        realization = _interleave_kron(
            u.realization, u.ancillas, u.n_qubits, v.realization, v.ancillas, v.n_qubits
        )
    e0, e1 = u.eps_bound, v.eps_bound
    out = BlockEncoding(
        block=np.kron(u.block, v.block),
        alpha=u.alpha * v.alpha,
        ancillas=u.ancillas + v.ancillas,
        eps_bound=e0 * v.alpha + e1 * u.alpha + e0 * e1,
        target=target,
        realization=realization,
        depth="O(max(T1,T2))",
    )
    logger.debug(f"be_tensor: alpha={out.alpha:.6g} ancillas={out.ancillas} eps={out.eps_bound:.3e}")
    return out


def be_lcu(
    parts: Sequence[BlockEncoding],
    weights: Sequence[float],
    prep: Optional[np.ndarray] = None,
) -> BlockEncoding:
    """
    Linear combination sum_j b_j A_j of block-encodings sharing one (alpha, a, eps).

    Args:
        parts: Encodings of the A_j; padded with zero-weight copies up to 2^d.
        weights: Non-negative b_j.
        prep: Optional amplitudes of the state-preparation column, |prep_j|^2 = b_j / ||b||_1.

    Returns:
        An (alpha * beta, a + d, alpha * beta * eps)-encoding with beta = ||b||_1.

    Raises:
        ContractViolation: On negative weights, mismatched signatures or a bad prep column.
    """
    if not parts:
        raise ContractViolation("be_lcu needs at least one part.")
    if len(parts) != len(weights):
        raise ContractViolation(f"{len(parts)} parts but {len(weights)} weights.")
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w < 0.0):
        raise ContractViolation("LCU weights must be non-negative; absorb signs into the parts.")
    first = parts[0]
    for part in parts[1:]:
        if part.block.shape != first.block.shape:
            raise DimensionMismatch("LCU parts act on different registers.")
        if (
            part.ancillas != first.ancillas
            or not np.isclose(part.alpha, first.alpha, rtol=1e-12, atol=0.0)
            or not np.isclose(part.eps_bound, first.eps_bound, rtol=1e-9, atol=1e-15)
        ):
            raise ContractViolation("LCU parts must share one (alpha, ancillas, eps) signature.")

    count = 1 << max(0, len(parts) - 1).bit_length()
    padded = list(parts) + [first] * (count - len(parts))
    w = np.concatenate([w, np.zeros(count - len(parts))])
    beta = float(w.sum())
    if beta <= 0.0:
        raise ContractViolation("LCU weights sum to zero.")
    d = linalg.num_qubits(count)

    if prep is None:
        amplitudes = np.sqrt(w / beta).astype(np.complex128)
    else:
        amplitudes = linalg.as_cvector(prep)
        if amplitudes.shape[0] != count or not np.allclose(np.abs(amplitudes) ** 2, w / beta, atol=1e-10):
            raise ContractViolation("prep amplitudes do not square to the normalized weights.")

    block = sum(wj * p.block for wj, p in zip(w, padded)) / beta
    target = None
    if any(p.target is not None for p in parts):
        target = sum(wj * _target_or_scaled(p) for wj, p in zip(w, padded))

    realization = None
    if _all_realized(*padded) and _fits(d + first.total_qubits):
        prep_u = linalg.state_unitary(amplitudes) if d > 0 else np.eye(1, dtype=np.complex128)
        rest = np.eye(2**first.total_qubits, dtype=np.complex128)
        select = la.block_diag(*[p.realization for p in padded])
        realization = np.kron(prep_u.conj().T, rest) @ select @ np.kron(prep_u, rest)

    max_eps = max(p.eps_bound for p in parts)
    out = BlockEncoding(
        block=block,
        alpha=first.alpha * beta,
        ancillas=first.ancillas + d,
        eps_bound=first.alpha * beta * max_eps,
        target=target,
        realization=realization,
        depth="O(d*T + T_prep)",
    )
    logger.debug(f"be_lcu: {len(parts)} parts, beta={beta:.6g}, ancillas={out.ancillas}")
    return out


def be_basis_projector(i: int, j: int, n: int, realize: bool = False) -> BlockEncoding:
    """
    (1, 2, 0)-block-encoding of |i><j| on n qubits, built as
    X^i . (I - R)/2 . X^j with the reflection R = I - 2|0><0|.

    Raises:
        ContractViolation: If an index is outside [0, 2^n).
    """
    dim = 2**n
    if not (0 <= i < dim and 0 <= j < dim):
        raise ContractViolation(f"Projector indices ({i}, {j}) out of range for {n} qubits.")
    reflection = np.eye(dim, dtype=np.complex128)
    reflection[0, 0] = -1.0
    halves = be_lcu([be_identity(n, realize), be_negate(be_unitary(reflection, realize))], [0.5, 0.5])
    flip_i = be_unitary(_bit_flip(i, n), realize)
    flip_j = be_unitary(_bit_flip(j, n), realize)
    out = be_pad(be_product(be_product(flip_i, halves), flip_j), 1)
    return out.model_copy(update={"target": np.outer(linalg.basis_vector(i, dim), linalg.basis_vector(j, dim))})


def _bit_flip(index: int, n: int) -> np.ndarray:
    """Tensor product of X on the set bits of `index`; maps |0> to |index>."""
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    eye = np.eye(2, dtype=np.complex128)
    bits = [(index >> (n - 1 - q)) & 1 for q in range(n)]
    return linalg.kron_all([x if b else eye for b in bits])


# --- Vector-encoding constructors ---


def ve_from_vector(x: np.ndarray, realize: bool = False) -> VectorEncoding:
    """
    Brute-force (1, 0, 0)-vector-encoding of x / ||x||.

    Raises:
        DegenerateNormError: If x is (numerically) zero.
    """
    vec = linalg.as_cvector(x)
    norm = float(np.linalg.norm(vec))
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError("Cannot encode the zero vector.")
    vec = vec / norm
    realization = linalg.state_unitary(vec) if realize and _fits(linalg.num_qubits(vec.shape[0])) else None
    return VectorEncoding(vec=vec, alpha=1.0, ancillas=0, target=vec, realization=realization)


def ve_pad(u: VectorEncoding, extra: int) -> VectorEncoding:
    if extra < 0:
        raise ContractViolation("Cannot remove ancillas by padding.")
    if extra == 0:
        return u
    realization = None
    if u.realization is not None and _fits(u.total_qubits + extra):
        realization = np.kron(np.eye(2**extra, dtype=np.complex128), u.realization)
    return u.model_copy(update={"ancillas": u.ancillas + extra, "realization": realization})


def _vec_target(u: VectorEncoding) -> np.ndarray:
    if u.target is not None:
        return u.target
    return u.vec / max(u.norm, config.ZERO_NORM_THRESHOLD)


# --- Vector-encoding composition ---


def ve_sum(u: VectorEncoding, v: VectorEncoding, tau: float) -> VectorEncoding:
    """
    Encodes (tau/alpha psi + (1-tau)/beta phi) / N with one controlled-U pair.

    Args:
        u: Encoding of psi with scale alpha.
        v: Encoding of phi with scale beta.
        tau: Mixing weight in [0, 1].

    Raises:
        DimensionMismatch: If the main registers differ.
        DegenerateNormError: If the sum cancels to (numerically) zero.
    """
    if u.vec.shape != v.vec.shape:
        raise DimensionMismatch(f"Cannot add encodings of lengths {u.vec.shape[0]} and {v.vec.shape[0]}.")
    if not 0.0 <= tau <= 1.0:
        raise ContractViolation(f"tau={tau} must lie in [0, 1].")
    c = max(u.ancillas, v.ancillas)
    u, v = ve_pad(u, c - u.ancillas), ve_pad(v, c - v.ancillas)

    vec = tau * u.vec + (1.0 - tau) * v.vec
    if u.target is not None and v.target is not None:
        gamma = (tau / u.alpha) * u.target + ((1.0 - tau) / v.alpha) * v.target
    else:
        gamma = vec
    norm = float(np.linalg.norm(gamma))
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError(f"ve_sum: encoded sum has norm {norm:.3e}; the inputs cancel.")

    realization = None
    if _all_realized(u, v) and _fits(1 + c + u.n_qubits):
        rot = np.array(
            [[np.sqrt(tau), -np.sqrt(1.0 - tau)], [np.sqrt(1.0 - tau), np.sqrt(tau)]], dtype=np.complex128
        )
        rest = np.eye(2 ** (c + u.n_qubits), dtype=np.complex128)
        select = la.block_diag(u.realization, v.realization)
        realization = np.kron(rot.conj().T, rest) @ select @ np.kron(rot, rest)

    out = VectorEncoding(
        vec=vec,
        alpha=1.0 / norm,
        ancillas=1 + c,
        eps_bound=(u.eps_bound / u.alpha + v.eps_bound / v.alpha) / norm,
        target=gamma / norm,
        realization=realization,
        depth="O(T1+T2)",
    )
    logger.debug(f"ve_sum: tau={tau} norm={norm:.6g} alpha={out.alpha:.6g} eps={out.eps_bound:.3e}")
    return out


def ve_matvec(a: BlockEncoding, psi: VectorEncoding) -> VectorEncoding:
    """
    Encodes A psi / ||A psi|| from a block-encoding of A and a vector-encoding of psi.

    Raises:
        DimensionMismatch: If the block and vector act on different registers.
        DegenerateNormError: If A annihilates psi.
    """
    if a.block.shape[1] != psi.vec.shape[0]:
        raise DimensionMismatch(f"Block {a.block.shape} cannot act on a length-{psi.vec.shape[0]} vector.")
    product = _target_or_scaled(a) @ (psi.target if psi.target is not None else psi.alpha * psi.vec)
    norm = float(np.linalg.norm(product))
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError(f"ve_matvec: ||A psi|| = {norm:.3e}; the block annihilates the state.")

    realization = None
    if _all_realized(a, psi) and _fits(a.ancillas + psi.total_qubits):
        realization = _stack_product(a.realization, a.ancillas, psi.realization, psi.ancillas, psi.n_qubits)

    out = VectorEncoding(
        vec=a.block @ psi.vec,
        alpha=a.alpha * psi.alpha / norm,
        ancillas=a.ancillas + psi.ancillas,
        eps_bound=(a.eps_bound + a.alpha * psi.eps_bound) / norm,
        target=product / norm,
        realization=realization,
        depth="O(T_A+T_psi)",
    )
    logger.debug(f"ve_matvec: norm={norm:.6g} alpha={out.alpha:.6g} eps={out.eps_bound:.3e}")
    return out


def ve_tensor(u: VectorEncoding, v: VectorEncoding) -> VectorEncoding:
    """Encodes psi (x) phi; the first factor's qubits lead."""
    target = None
    if u.target is not None and v.target is not None:
        target = np.kron(u.target, v.target)
    realization = None
    if _all_realized(u, v) and _fits(u.total_qubits + v.total_qubits):
        realization = _interleave_kron(
            u.realization, u.ancillas, u.n_qubits, v.realization, v.ancillas, v.n_qubits
        )
    e, d = u.eps_bound, v.eps_bound
    return VectorEncoding(
        vec=np.kron(u.vec, v.vec),
        alpha=u.alpha * v.alpha,
        ancillas=u.ancillas + v.ancillas,
        eps_bound=e + d + e * d,
        target=target,
        realization=realization,
        depth="O(max(T1,T2))",
    )


def ve_concat(parts: Sequence[VectorEncoding]) -> VectorEncoding:
    """
    Encodes (sum_j |j> psi_j / alpha_j) / N with N = sqrt(sum_j 1/alpha_j^2).

    The index register leads the main register; the parts are padded with zero
    vectors up to D = 2^d, which sit behind d extra ancillas with scale D / N.
    Padded lists carry no realization.

    Raises:
        ContractViolation: On an empty list or parts with differing ancillas or eps.
    """
    if not parts:
        raise ContractViolation("ve_concat needs at least one part.")
    count = 1 << max(0, len(parts) - 1).bit_length()
    first = parts[0]
    for part in parts[1:]:
        if part.vec.shape != first.vec.shape:
            raise DimensionMismatch("Concatenated parts must share a main register.")
        if part.ancillas != first.ancillas or not np.isclose(part.eps_bound, first.eps_bound, rtol=1e-9, atol=1e-15):
            raise ContractViolation("Concatenated parts must share ancillas and eps.")
    if count == 1:
        return first
    d = linalg.num_qubits(count)
    padding = [np.zeros_like(first.vec)] * (count - len(parts))
    norm = float(np.sqrt(sum(1.0 / p.alpha**2 for p in parts)))
    vec = np.concatenate([p.vec for p in parts] + padding) / count

    target = None
    if all(p.target is not None for p in parts):
        target = np.concatenate([p.target / p.alpha for p in parts] + padding) / norm

    realization = None
    if not padding and _all_realized(*parts) and _fits(2 * d + first.total_qubits):
        hadamards = linalg.state_unitary(np.ones(count) / np.sqrt(count))
        select = la.block_diag(*[p.realization for p in parts]) @ np.kron(
            hadamards, np.eye(2**first.total_qubits, dtype=np.complex128)
        )
        a, n = first.ancillas, first.n_qubits
        anc_d = list(range(d))
        index = list(range(d, 2 * d))
        anc_a = list(range(2 * d, 2 * d + a))
        main = list(range(2 * d + a, 2 * d + a + n))
        realization = linalg.permute_qubits(np.kron(hadamards, select), anc_d + anc_a + index + main)

    return VectorEncoding(
        vec=vec,
        alpha=count / norm,
        ancillas=d + first.ancillas,
        eps_bound=first.eps_bound,
        target=target,
        realization=realization,
        depth="O(d*D*T)",
    )


def ve_fanout(u: VectorEncoding, copies: int) -> VectorEncoding:
    """
    Equal-copy concatenation (|0> + ... + |D-1>) psi / sqrt(D) as a tensor with the
    uniform state; keeps the (alpha, a, eps) ledger.
    """
    if not linalg.is_power_of_two(copies):
        raise ContractViolation(f"Fan-out needs a power-of-two copy count, got {copies}.")
    if copies == 1:
        return u
    uniform = ve_from_vector(np.ones(copies), realize=u.realization is not None)
    return ve_tensor(uniform, u)


def ve_ket_projector(u: VectorEncoding) -> BlockEncoding:
    """
    Block-encoding of |psi><0| from a vector-encoding of psi: U_psi times the
    encoding of |0><0|; ledger (alpha, a + 2, eps).
    """
    dim = u.vec.shape[0]
    e0 = linalg.basis_vector(0, dim)
    realization = None
    if u.realization is not None and _fits(u.total_qubits + 2):
        wrapped = BlockEncoding(
            block=extract_block(u.realization, u.ancillas), alpha=1.0, ancillas=u.ancillas, realization=u.realization
        )
        realization = be_product(wrapped, be_basis_projector(0, 0, u.n_qubits, realize=True)).realization
    return BlockEncoding(
        block=np.outer(u.vec, e0),
        alpha=u.alpha,
        ancillas=u.ancillas + 2,
        eps_bound=u.eps_bound,
        target=None if u.target is None else np.outer(u.target, e0),
        realization=realization,
        depth=u.depth,
    )


def ve_normalize(u: VectorEncoding, alpha_hint: float, eps1: float) -> VectorEncoding:
    """
    Vector normalization: amplifies the encoded column to unit norm by applying an
    odd sign approximation to the singular value of |phi><0|.

    Args:
        u: Encoding with eps_bound <= 1/2.
        alpha_hint: Upper bound alpha' >= u.alpha; the column norm must be >= 1/(2 alpha').
        eps1: Accuracy of the sign approximation.

    Returns:
        A (1, a + 4, 2(eps + eps1))-vector-encoding of the same target.

    Raises:
        AmplificationContractError: If the column norm or eps premise fails.
    """
    if alpha_hint < u.alpha * (1.0 - 1e-12):
        raise AmplificationContractError(f"alpha_hint {alpha_hint:.6g} is below the encoding scale {u.alpha:.6g}.")
    if u.eps_bound > 0.5:
        raise AmplificationContractError(f"Normalization needs eps <= 1/2, got {u.eps_bound:.3e}.")
    r = u.norm
    floor = 1.0 / (2.0 * alpha_hint)
    if r < floor:
        raise AmplificationContractError(f"Encoded norm {r:.6g} is below 1/(2 alpha') = {floor:.6g}.")

    poly = polynomials.sign_poly(gap=1.0 / alpha_hint, eps=eps1)
    vec = float(poly(r)) * u.vec / r
    realization = None
    if u.realization is not None:
        realization = column_realization(vec, u.ancillas + 4)
    out = VectorEncoding(
        vec=vec,
        alpha=1.0,
        ancillas=u.ancillas + 4,
        eps_bound=2.0 * (u.eps_bound + eps1),
        target=_vec_target(u),
        realization=realization,
        depth=f"O(alpha' log(1/eps1) T), deg={poly.degree}",
    )
    logger.debug(f"ve_normalize: norm {r:.6g} -> {out.norm:.12g} with degree {poly.degree}")
    return out


def ve_deamplify(u: VectorEncoding, tau: float) -> VectorEncoding:
    """
    Scales the encoded column by 1/tau; ledger (alpha tau, a + 2, eps).

    Raises:
        ContractViolation: If tau < 1.
    """
    if tau < 1.0:
        raise ContractViolation(f"De-amplification needs tau >= 1, got {tau}.")
    realization = None
    if u.realization is not None and _fits(u.total_qubits + 2):
        scale = linalg.unitary_dilation(np.array([[1.0 / tau]], dtype=np.complex128))
        realization = np.kron(np.eye(2, dtype=np.complex128), np.kron(scale, u.realization))
    return VectorEncoding(
        vec=u.vec / tau,
        alpha=u.alpha * tau,
        ancillas=u.ancillas + 2,
        eps_bound=u.eps_bound,
        target=u.target,
        realization=realization,
        depth=u.depth,
    )


def ve_subencode(
    u: VectorEncoding,
    inner_ancillas: int,
    inner_alpha: float,
    inner_eps: float,
    drift: float,
    inner_target: Optional[np.ndarray] = None,
) -> VectorEncoding:
    """
    Reads an encoding of an m-qubit state psi, itself (within `drift`) a
    (beta, m - n, delta)-encoding of an n-qubit phi, as an encoding of phi.

    Args:
        u: (alpha, a, eps)-encoding of psi on m qubits.
        inner_ancillas: m - n, the leading qubits of psi acting as ancillas.
        inner_alpha: beta.
        inner_eps: delta.
        drift: gamma, the distance between psi and the exact inner encoding.
        inner_target: phi, when known.

    Returns:
        An (alpha beta, a + m - n, delta + beta(eps + gamma))-vector-encoding.
    """
    if inner_ancillas < 1 or inner_ancillas >= u.n_qubits:
        raise DimensionMismatch(f"Cannot take {inner_ancillas} inner ancillas from {u.n_qubits} qubits.")
    if inner_alpha < 1.0 or inner_eps < 0.0 or drift < 0.0:
        raise ContractViolation("Inner encoding needs beta >= 1 and non-negative delta and drift.")
    dim = 2 ** (u.n_qubits - inner_ancillas)
    return VectorEncoding(
        vec=u.vec[:dim],
        alpha=u.alpha * inner_alpha,
        ancillas=u.ancillas + inner_ancillas,
        eps_bound=inner_eps + inner_alpha * (u.eps_bound + drift),
        target=inner_target,
        realization=u.realization,
        depth=u.depth,
    )


def ve_traceout(u: VectorEncoding, b: int) -> VectorEncoding:
    """
    Treats the b leading main qubits, whose target state is |0>_b, as ancillas.

    Raises:
        ContractViolation: If the traced qubits are not (numerically) in |0>_b.
    """
    if b == 0:
        return u
    if b < 0 or b >= u.n_qubits:
        raise DimensionMismatch(f"Cannot trace out {b} of {u.n_qubits} qubits.")
    dim = 2 ** (u.n_qubits - b)
    target = None
    if u.target is not None:
        tail = float(np.linalg.norm(u.target[dim:]))
        if tail > config.BOUND_TOLERANCE:
            raise ContractViolation(f"Traced qubits are not in |0>: target tail norm {tail:.3e}.")
        head = u.target[:dim]
        target = head / np.linalg.norm(head)
    else:
        tail = u.alpha * float(np.linalg.norm(u.vec[dim:]))
        if tail > u.eps_bound + config.BOUND_TOLERANCE:
            raise ContractViolation(f"Traced qubits carry weight {tail:.3e} beyond the eps budget.")
    return VectorEncoding(
        vec=u.vec[:dim],
        alpha=u.alpha,
        ancillas=u.ancillas + b,
        eps_bound=u.eps_bound,
        target=target,
        realization=u.realization,
        depth=u.depth,
    )
