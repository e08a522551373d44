# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: 2D multi-filter convolution as a structured matrix built from
# unilateral shifts, the shift block-encodings and the QRAM-free block-encoding
# of the convolution scaled by twice its spectral norm.
# -----------------------------------------------------------------------------

import logging
from functools import lru_cache
from typing import Optional

import numpy as np

import config
import linalg
import polynomials
from block_encodings import (
    be_basis_projector,
    be_dilate,
    be_identity,
    be_lcu,
    be_negate,
    be_pad,
    be_product,
    be_scale_to_unit,
    be_tensor,
)
from errors import ContractViolation, DimensionMismatch
from models import BlockEncoding, ConvKernel, ConvMatrix

logger = logging.getLogger(__name__)


# --- Image layout ---


def vectorize_image(x: np.ndarray) -> np.ndarray:
    """[channel][row][col] tensor -> vector indexed ch*M^2 + col*M + row."""
    img = np.asarray(x)
    if img.ndim != 3 or img.shape[1] != img.shape[2]:
        raise DimensionMismatch(f"Images are [C][M][M] tensors, got shape {img.shape}.")
    return img.transpose(0, 2, 1).reshape(-1)


def unvectorize_image(v: np.ndarray, channels: int) -> np.ndarray:
    vec = np.asarray(v).reshape(-1)
    side = int(round(np.sqrt(vec.shape[0] // channels)))
    if channels * side * side != vec.shape[0]:
        raise DimensionMismatch(f"Length {vec.shape[0]} is not {channels} square channels.")
    return vec.reshape(channels, side, side).transpose(0, 2, 1)


def direct_convolution(kernel: np.ndarray, x: np.ndarray, correlation: bool = False) -> np.ndarray:
    """
    Brute-force out[c, z, y] = sum_{j,k,l} K[c, j, k, l] X[j, z - k, y - l] with zero
    padding; the correlation variant reads X[j, z + k, y + l].
    """
    K = np.asarray(kernel)
    img = np.asarray(x)
    channels, side = img.shape[0], img.shape[1]
    sign = 1 if correlation else -1
    out = np.zeros((K.shape[0], side, side), dtype=np.result_type(K, img))
    for c in range(K.shape[0]):
        for z in range(side):
            for y in range(side):
                total = 0.0
                for j in range(channels):
                    for k in range(K.shape[2]):
                        for l in range(K.shape[3]):
                            row, col = z + sign * k, y + sign * l
                            if 0 <= row < side and 0 <= col < side:
                                total += K[c, j, k, l] * img[j, row, col]
                out[c, z, y] = total
    return out


# --- Matrix form ---


def conv_matrix_form(kernel: ConvKernel, m: int, correlation: bool = False) -> ConvMatrix:
    """
    C = sum_{i,j,k,l} K[i,j,k,l] |i><j| (x) Q^l (x) Q^k on (channel, column, row).

    Args:
        kernel: Padded [C][C][D][D] filters.
        m: log2 of the image side.
        correlation: Use Q^T (cross-correlation) instead of Q.
    """
    side = 2**m
    C, D = kernel.C, kernel.D
    shifts = [linalg.unilateral_shift(side, p) for p in range(D)]
    if correlation:
        shifts = [s.T for s in shifts]
    matrix = np.zeros((C * side * side,) * 2, dtype=np.complex128)
    for i in range(C):
        for j in range(C):
            chan = np.zeros((C, C), dtype=np.complex128)
            chan[i, j] = 1.0
            for k in range(D):
                for l in range(D):
                    w = kernel.K[i, j, k, l]
                    if w != 0.0:
                        matrix += w * np.kron(chan, np.kron(shifts[l], shifts[k]))
    return ConvMatrix(
        matrix=matrix,
        spectral_norm=linalg.spectral_norm(matrix),
        kernel_l1=float(np.abs(kernel.K).sum()),
        channels=C,
        width=D,
    )


# --- Shift block-encodings ---


def permutation_be(n: int, power: int, realize: bool = False) -> BlockEncoding:
    """(1, 1, 0)-block-encoding of P^m, P|j> = |j + 1 mod N>, realized as F diag(w^-mj) F^dag."""
    if power < 0:
        raise ContractViolation(f"Shift power must be non-negative, got {power}.")
    dim = 2**n
    shift = linalg.cyclic_shift(dim, power)
    realization = None
    if realize and n >= 1:
        f = linalg.qft(n)
        phases = np.exp(-2j * np.pi * power * np.arange(dim) / dim)
        realization = (f * phases) @ f.conj().T
    elif realize:
        realization = shift
    u = BlockEncoding(block=shift, alpha=1.0, ancillas=0, target=shift, realization=realization)
    return be_pad(u, 1)


def shift_q_be(n: int, realize: bool = False) -> BlockEncoding:
    """
    (1, 4, 0)-block-encoding of the unilateral shift Q = P - |0><N-1|: LCU with
    weights (1/2, 1/2) gives Q/2, whose singular values are 0 or 1/2, then
    oblivious amplification doubles it.
    """
    if n < 1:
        raise ContractViolation("The unilateral shift needs at least one qubit.")
    p = be_pad(permutation_be(n, 1, realize), 1)
    corner = be_basis_projector(0, 2**n - 1, n, realize)
    half = be_lcu([p, be_negate(corner)], [0.5, 0.5])
    out = polynomials.oblivious_aa_half(half)
    return out.model_copy(update={"target": linalg.unilateral_shift(2**n, 1)})


@lru_cache(maxsize=128)
def shift_qm_be(n: int, m: int, realize: bool = False) -> BlockEncoding:
    """(1, 4m, 0)-block-encoding of Q^m as an m-fold product."""
    if m < 1:
        raise ContractViolation(f"shift_qm_be needs m >= 1, got {m}.")
    q = shift_q_be(n, realize)
    out = q
    for _ in range(m - 1):
        out = be_product(out, q)
    return out


def _shift_power_be(n: int, power: int, realize: bool) -> BlockEncoding:
    return be_identity(n, realize) if power == 0 else shift_qm_be(n, power, realize)


def conv_ancillas(channels: int, width: int) -> int:
    """3 + 8D + 2 log2(CD)."""
    return 3 + 8 * width + 2 * (linalg.num_qubits(channels) + linalg.num_qubits(width))


# --- Convolution block-encoding ---


def conv_block_encoding(
    kernel: ConvKernel,
    m: int,
    eps: float = 1e-10,
    realize: bool = False,
    correlation: bool = False,
    conv: Optional[ConvMatrix] = None,
) -> BlockEncoding:
    """
    (1, 3 + 8D + 2 log2(CD), eps)-block-encoding of C / (2 ||C||_2).

    The terms |i><j| (x) Q^l (x) Q^k are combined by LCU with weights |K| / ||K||_1
    (signs absorbed by negating terms), giving C / ||K||_1; the scale
    gamma = ||K||_1 / (2 ||C||_2) is then applied by uniform amplification when
    gamma > 1 and by a scalar dilation otherwise.

    Args:
        kernel: Padded filters.
        m: log2 of the image side.
        eps: Amplification accuracy.
        realize: Build realizations where the register allows.
        correlation: Encode the cross-correlation instead.
        conv: The matrix form, when the caller already built it.

    Raises:
        ContractViolation: If the kernel is zero.
    """
    if conv is None:
        conv = conv_matrix_form(kernel, m, correlation)
    if conv.kernel_l1 == 0.0 or conv.spectral_norm <= config.ZERO_NORM_THRESHOLD:
        raise ContractViolation("Cannot block-encode a zero convolution kernel.")
    C, D = kernel.C, kernel.D
    c_bits = linalg.num_qubits(C)
    part_ancillas = 2 + 8 * (D - 1)

    parts, weights = [], []
    for i in range(C):
        for j in range(C):
            projector = be_basis_projector(i, j, c_bits, realize)
            for k in range(D):
                for l in range(D):
                    w = float(kernel.K[i, j, k, l])
                    if w == 0.0:
                        continue
                    col = _shift_power_be(m, l, realize)
                    row = _shift_power_be(m, k, realize)
                    if correlation:
                        col = col.model_copy(
                            update={
                                "block": col.block.T,
                                "target": col.target.T,
                                "realization": None if col.realization is None else col.realization.T,
                            }
                        )
                        row = row.model_copy(
                            update={
                                "block": row.block.T,
                                "target": row.target.T,
                                "realization": None if row.realization is None else row.realization.T,
                            }
                        )
                    term = be_tensor(be_tensor(projector, col), row)
                    term = be_pad(term, part_ancillas - term.ancillas)
                    parts.append(be_negate(term) if w < 0.0 else term)
                    weights.append(abs(w))

    # Normalized weights: alpha is 1 up to rounding
    combined = be_scale_to_unit(be_lcu(parts, np.asarray(weights) / conv.kernel_l1))
    # One more ancilla comes from the scaling step below
    combined = be_pad(combined, conv_ancillas(C, D) - 1 - combined.ancillas)

    gamma = conv.kernel_l1 / (2.0 * conv.spectral_norm)
    if gamma > 1.0:
        out = polynomials.uniform_sv_amplify(combined, gamma, config.CONV_AMPLIFY_DELTA, eps)
    else:
        scalar = be_dilate(gamma * np.eye(combined.block.shape[0]), alpha=1.0, realize=realize)
        out = be_product(scalar, combined)
    out = out.model_copy(update={"target": conv.matrix / (2.0 * conv.spectral_norm)})
    logger.info(
        f"Convolution block-encoding: C={C} D={D} M={2**m} gamma={gamma:.4g} "
        f"ancillas={out.ancillas} eps_bound={out.eps_bound:.3e}"
    )
    return out


if __name__ == "__main__":
    delta = np.zeros((1, 1, 2, 2))
    delta[0, 0, 0, 0] = 1.0
    be = conv_block_encoding(ConvKernel(K=delta), 2)
    print(f"identity kernel: block[0,0] = {be.block[0, 0]:.6f}, ancillas = {be.ancillas}")
