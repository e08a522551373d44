# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Dense complex linear algebra kernel: Kronecker products, SVD,
# norms, QFT matrices, qubit permutations and exact unitary dilation.
# -----------------------------------------------------------------------------

import logging
from typing import Sequence, Tuple

import numpy as np
import scipy.linalg as la

import config
from errors import ContractViolation, DimensionMismatch, NumericFailure

logger = logging.getLogger(__name__)


def is_power_of_two(value: int) -> bool:
    return value >= 1 and (value & (value - 1)) == 0


def num_qubits(dim: int) -> int:
    """
    Returns n with dim = 2^n.

    Raises:
        DimensionMismatch: If dim is not a power of two.
    """
    if not is_power_of_two(int(dim)):
        raise DimensionMismatch(f"Dimension {dim} is not a power of two; pad it first.")
    return int(dim).bit_length() - 1


def as_cvector(x) -> np.ndarray:
    """Coerces `x` to a finite complex vector whose length is a power of two."""
    vec = np.asarray(x, dtype=np.complex128).reshape(-1)
    num_qubits(vec.shape[0])
    if not np.all(np.isfinite(vec)):
        raise ContractViolation("Vector has non-finite entries.")
    return vec


def as_cmatrix(m) -> np.ndarray:
    """Coerces `m` to a finite complex matrix with power-of-two sides."""
    mat = np.asarray(m, dtype=np.complex128)
    if mat.ndim != 2:
        raise DimensionMismatch(f"Expected a matrix, got shape {mat.shape}.")
    num_qubits(mat.shape[0])
    num_qubits(mat.shape[1])
    if not np.all(np.isfinite(mat)):
        raise ContractViolation("Matrix has non-finite entries.")
    return mat


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    result = np.ones((1, 1), dtype=np.complex128)
    for factor in factors:
        result = np.kron(result, factor)
    return result


def svd(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Singular value decomposition m = U diag(S) V^dagger.

    Args:
        m: The matrix to decompose.

    Returns:
        (U, S, V) with S descending and V (not V^dagger) returned.

    Raises:
        NumericFailure: If the decomposition does not converge.
    """
    try:
        u, s, vh = la.svd(np.asarray(m, dtype=np.complex128), lapack_driver="gesdd")
    except (la.LinAlgError, ValueError) as e:
        logger.warning(f"gesdd failed ({e}); retrying with gesvd.")
        try:
            u, s, vh = la.svd(np.asarray(m, dtype=np.complex128), lapack_driver="gesvd")
        except (la.LinAlgError, ValueError) as e2:
            raise NumericFailure(f"SVD did not converge: {e2}") from e2
    return u, s, vh.conj().T


def spectral_norm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(la.norm(m, 2))


def frobenius_norm(m: np.ndarray) -> float:
    return float(la.norm(m, "fro"))


def hermitian_sqrt(h: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD matrix via eigendecomposition; tiny negative eigenvalues clip to 0."""
    evals, evecs = la.eigh((h + h.conj().T) / 2)
    evals = np.clip(evals, 0.0, None)
    return (evecs * np.sqrt(evals)) @ evecs.conj().T


def unitary_dilation(b: np.ndarray) -> np.ndarray:
    """
    Halmos dilation [[b, sqrt(I - b b^dag)], [sqrt(I - b^dag b), -b^dag]].

    Args:
        b: A square contraction.

    Returns:
        A unitary of twice the dimension whose top-left block is exactly b.

    Raises:
        ContractViolation: If the spectral norm of b exceeds 1 + DILATION_NORM_TOLERANCE.
    """
    b = np.asarray(b, dtype=np.complex128)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise DimensionMismatch(f"Dilation needs a square block, got {b.shape}.")
    norm = spectral_norm(b)
    if norm > 1.0 + config.DILATION_NORM_TOLERANCE:
        raise ContractViolation(f"Cannot dilate a block with spectral norm {norm:.12g} > 1.")
    eye = np.eye(b.shape[0], dtype=np.complex128)
    bd = b.conj().T
    top = np.hstack([b, hermitian_sqrt(eye - b @ bd)])
    bottom = np.hstack([hermitian_sqrt(eye - bd @ b), -bd])
    return np.vstack([top, bottom])


def qft(n: int) -> np.ndarray:
    """F[i, j] = omega^(ij) / sqrt(N) with omega = exp(2 pi i / N), N = 2^n."""
    if n < 1:
        raise ContractViolation("qft needs at least one qubit.")
    dim = 2**n
    idx = np.arange(dim)
    exponent = np.outer(idx, idx) % dim
    return np.exp(2j * np.pi * exponent / dim) / np.sqrt(dim)


def is_unitary(m: np.ndarray, tol: float = config.UNITARY_TOLERANCE) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def basis_vector(index: int, dim: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=np.complex128)
    vec[index] = 1.0
    return vec


def ry(t: float) -> np.ndarray:
    """R_Y(t) = [[cos t, -sin t], [sin t, cos t]] = exp(-i t Y)."""
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def controlled(u: np.ndarray) -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) U with the control as the leading qubit."""
    return la.block_diag(np.eye(u.shape[0], dtype=np.complex128), u)


def state_unitary(x: np.ndarray) -> np.ndarray:
    """
    A unitary whose first column is the unit vector x (brute-force state preparation).
    """
    x = as_cvector(x)
    norm = np.linalg.norm(x)
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise ContractViolation("Cannot prepare the zero vector.")
    x = x / norm
    seed = np.eye(x.shape[0], dtype=np.complex128)
    pivot = int(np.argmax(np.abs(x)))
    seed = np.delete(seed, pivot, axis=1)
    q, _ = la.qr(np.column_stack([x, seed]))
    q[:, 0] *= x[pivot] / q[pivot, 0]
    return q


def permute_qubits(m: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """
    Reorders the qubits of an operator. Qubit 0 is the most significant;
    new qubit i is old qubit perm[i].
    """
    n = num_qubits(m.shape[0])
    if sorted(perm) != list(range(n)):
        raise ContractViolation(f"{perm} is not a permutation of {n} qubits.")
    tensor = m.reshape((2,) * (2 * n))
    axes = list(perm) + [n + p for p in perm]
    return tensor.transpose(axes).reshape(2**n, 2**n)


def apply_on_qubits(op: np.ndarray, targets: Sequence[int], total: int) -> np.ndarray:
    """
    Full 2^total matrix of `op` acting on the ordered qubit positions `targets`,
    identity elsewhere.
    """
    k = num_qubits(op.shape[0])
    if len(targets) != k:
        raise DimensionMismatch(f"Operator acts on {k} qubits, {len(targets)} targets given.")
    rest = [q for q in range(total) if q not in targets]
    full = np.kron(op, np.eye(2 ** len(rest), dtype=np.complex128))
    order = list(targets) + rest
    # Position of qubit q inside `order` becomes its source in the permutation.
    perm = [order.index(q) for q in range(total)]
    return permute_qubits(full, perm)


def cyclic_shift(dim: int, power: int = 1) -> np.ndarray:
    """P^m with P|i> = |i+1 mod N>."""
    return np.roll(np.eye(dim, dtype=np.complex128), power % dim, axis=0)


def unilateral_shift(dim: int, power: int = 1) -> np.ndarray:
    """Q^m with Q|j> = |j+1> for j <= N-2 and Q|N-1> = 0."""
    return np.eye(dim, k=-power, dtype=np.complex128)
