# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Coherent nonlinearity on vector-encodings: polynomial amplitude
# transforms, the erf activation, the rank-independent product W g(psi) with
# g(x) = |x|^2, and squared l2 pooling.
# -----------------------------------------------------------------------------

import logging
import math

import numpy as np
from scipy.special import erf

import config
import polynomials
from block_encodings import (
    be_adjoint,
    be_identity,
    be_tensor,
    column_realization,
    ve_ket_projector,
    ve_matvec,
    ve_traceout,
)
from errors import BoundViolation, ContractViolation, DegenerateNormError, DimensionMismatch
from models import ActivationMeta, ChebyshevPoly, MatrixQramStructure, PoolingSpec, VectorEncoding
from qram import diagonal_be_from_qram, oracle_uw

logger = logging.getLogger(__name__)

REAL_TOLERANCE: float = 1e-12  # Largest imaginary part accepted as a real amplitude


def nlat_ve(u: VectorEncoding, p: ChebyshevPoly, meta: ActivationMeta) -> VectorEncoding:
    """
    Entrywise amplitude transform: encodes f(psi/alpha) / N with N = ||f(psi/alpha)||
    by applying p to the encoded column and dividing by 4 gamma.

    Args:
        u: (alpha, a, eps0)-encoding of a real n-qubit state psi.
        p: Polynomial with p(0) = 0 approximating meta.func within meta.eps1 L / (2 sqrt(N)).
        meta: The function, its Lipschitz constant L and gamma >= max |p(x)/x|.

    Returns:
        A (4 gamma / N, n + 2a + 4, L (eps0/alpha + eps1) / N)-vector-encoding.

    Raises:
        ContractViolation: On complex amplitudes, p(0) != 0 or a polynomial that is too coarse.
        DegenerateNormError: If f(psi/alpha) vanishes.
    """
    if np.max(np.abs(u.vec.imag)) > REAL_TOLERANCE or (
        u.target is not None and np.max(np.abs(u.target.imag)) > REAL_TOLERANCE
    ):
        raise ContractViolation("Amplitude transforms need a real state.")
    if abs(float(p(0.0))) > 1e-15:
        raise ContractViolation(f"Amplitude transforms need p(0) = 0, got {float(p(0.0)):.3e}.")
    dim = u.vec.shape[0]
    required = meta.lipschitz * meta.eps1 / (2.0 * math.sqrt(dim))
    if p.certified_eps > max(required, config.POLY_EPS_FLOOR) * (1.0 + 1e-12):
        raise ContractViolation(
            f"Polynomial error {p.certified_eps:.3e} exceeds L eps1 / (2 sqrt(N)) = {required:.3e}."
        )

    psi = (u.target if u.target is not None else u.alpha * u.vec).real
    image = meta.func(psi / u.alpha)
    norm = float(np.linalg.norm(image))
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError(f"nlat_ve: ||f(psi/alpha)|| = {norm:.3e}.")

    vec = p(u.vec.real) / (4.0 * meta.gamma_bound)
    ancillas = u.n_qubits + 2 * u.ancillas + 4
    out = VectorEncoding(
        vec=vec,
        alpha=4.0 * meta.gamma_bound / norm,
        ancillas=ancillas,
        eps_bound=meta.lipschitz * (u.eps_bound / u.alpha + meta.eps1) / norm,
        target=image / norm,
        realization=None if u.realization is None else column_realization(vec.astype(np.complex128), ancillas),
        depth=f"O({p.degree} T)",
    )
    logger.debug(f"nlat_ve: norm={norm:.6g} alpha={out.alpha:.6g} eps={out.eps_bound:.3e}")
    return out


def erf_meta(nu: float, eps1: float) -> ActivationMeta:
    """erf(nu x) with L = 2 nu / sqrt(pi) and gamma = 4 nu / sqrt(pi)."""
    return ActivationMeta(
        func=lambda x: erf(nu * x),
        lipschitz=2.0 * nu / polynomials.SQRT_PI,
        gamma_bound=4.0 * nu / polynomials.SQRT_PI,
        eps1=eps1,
    )


def erf_error_bound(u: VectorEncoding, nu: float, eps1: float) -> float:
    """2 nu alpha (eps0 + eps1)."""
    return 2.0 * nu * u.alpha * (u.eps_bound + eps1)


def erf_apply_ve(u: VectorEncoding, nu: float, eps1: float) -> VectorEncoding:
    """
    Applies erf(nu x) entrywise to a real vector-encoding.

    Returns:
        A (16 nu / (sqrt(pi) N), 2a + n + 4, eps)-vector-encoding with N >= 1/(2 alpha),
        eps being the smaller of L (eps0/alpha + eps1) / N and 2 nu alpha (eps0 + eps1).

    Raises:
        ContractViolation: If nu < 1/2 or eps1 is out of range.
        BoundViolation: If the norm floor N >= 1/(2 alpha) fails.
    """
    if nu < 0.5:
        raise ContractViolation(f"erf activation needs nu >= 1/2, got {nu}.")
    if not 0.0 < eps1 <= 2.0:
        raise ContractViolation(f"erf activation needs eps1 in (0, 2], got {eps1}.")
    dim = u.vec.shape[0]
    meta = erf_meta(nu, eps1)
    poly = polynomials.erf_poly(nu, nu * eps1 / (10.0 * math.sqrt(dim)), 1.0)
    out = nlat_ve(u, poly, meta)
    norm = 4.0 * meta.gamma_bound / out.alpha
    floor = 1.0 / (2.0 * u.alpha)
    if norm < floor - config.BOUND_TOLERANCE:
        raise BoundViolation(f"erf activation norm {norm:.6g} fell below 1/(2 alpha) = {floor:.6g}.")
    eps = min(out.eps_bound, erf_error_bound(u, nu, eps1))
    return out.model_copy(update={"eps_bound": eps})


def matvec_squared(s: MatrixQramStructure, psi: VectorEncoding) -> VectorEncoding:
    """
    Encodes W g(psi) / N with g(x) = |x|^2 without block-encoding W: the state
    sum_j a_j psi_j |j> is turned into the projector |0><phi|, which contracts the
    entangled state sum_j psi_j |j>|w_j>; the index register is then traced out.

    Returns:
        An (alpha^2 / N, 2a + d + 3 + n, (eps_d + eps + alpha eps) / N)-vector-encoding,
        eps_d being the angle-rounding error of the diagonal encoding.

    Raises:
        DimensionMismatch: If the structure and vector sizes differ.
        DegenerateNormError: If W g(psi) vanishes.
    """
    if s.unit_columns.shape[1] != psi.vec.shape[0]:
        raise DimensionMismatch(
            f"Structure over {s.unit_columns.shape[1]} columns cannot act on a length-{psi.vec.shape[0]} vector."
        )
    n = psi.n_qubits
    diag = diagonal_be_from_qram(s.col_norms, s.d, realize=psi.realization is not None)
    phi = ve_matvec(diag, psi)
    contract = be_tensor(be_adjoint(ve_ket_projector(phi)), be_identity(n, realize=phi.realization is not None))
    entangled = oracle_uw(s, psi)
    out = ve_traceout(ve_matvec(contract, entangled), n)
    logger.debug(
        f"matvec_squared: alpha={out.alpha:.6g} ancillas={out.ancillas} eps={out.eps_bound:.3e}"
    )
    return out


def matvec_squared_oracle(w: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Classical W g(psi) / ||W g(psi)||."""
    out = np.asarray(w) @ (np.abs(np.asarray(psi)) ** 2)
    norm = np.linalg.norm(out)
    if norm <= config.ZERO_NORM_THRESHOLD:
        raise DegenerateNormError("W g(psi) vanishes.")
    return out / norm


def pool_l2sq(x: np.ndarray, spec: PoolingSpec) -> np.ndarray:
    """
    Sums |x_l|^2 over C contiguous bins.

    Raises:
        DimensionMismatch: If len(x) differs from spec.input_dim.
    """
    vec = np.asarray(x).reshape(-1)
    if vec.shape[0] != spec.input_dim:
        raise DimensionMismatch(f"Pooling expects length {spec.input_dim}, got {vec.shape[0]}.")
    return (np.abs(vec) ** 2).reshape(spec.c_bins, spec.bin_size).sum(axis=1)


def pool_error_bound(n_dim: int, c_bins: int, eps: float) -> float:
    """2 N eps / sqrt(C): the l2 error of pooled outputs from an eps-accurate state."""
    return 2.0 * n_dim * eps / math.sqrt(c_bins)


if __name__ == "__main__":
    from block_encodings import ve_from_vector

    state = ve_from_vector(np.ones(4))
    activated = erf_apply_ve(state, 0.8, 1e-3)
    print(f"erf(0.8 psi): target={np.round(activated.target.real, 6)} alpha={activated.alpha:.4f}")
    print(pool_l2sq(activated.target, PoolingSpec(c_bins=2, input_dim=4)))
