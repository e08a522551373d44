# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Chebyshev-basis polynomials for coherent nonlinearities (erf and
# sign approximations, T3) and their exact singular-value transforms: generic
# transforms, uniform singular-value amplification and the 1/2 oblivious
# amplitude amplification step.
# -----------------------------------------------------------------------------

import logging
import math
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.special import erf, erfcinv, ive

import config
import linalg
from errors import (
    AmplificationContractError,
    ApproximationFailure,
    ContractViolation,
)
from models import BlockEncoding, ChebyshevPoly

logger = logging.getLogger(__name__)

SQRT_PI: float = math.sqrt(math.pi)


def chebyshev_grid(lo: float, hi: float, points: int = config.CERTIFICATION_GRID_POINTS) -> np.ndarray:
    """Chebyshev-spaced nodes on [lo, hi], endpoints included."""
    k = np.arange(points)
    nodes = np.cos(np.pi * (k + 0.5) / points)
    grid = 0.5 * (hi + lo) + 0.5 * (hi - lo) * nodes
    return np.concatenate([[lo], np.sort(grid), [hi]])


def _floor_eps(eps: float, label: str) -> float:
    if eps < config.POLY_EPS_FLOOR:
        logger.warning(
            f"{label}: requested eps {eps:.3e} is below the certifiable floor; clamping to {config.POLY_EPS_FLOOR:.1e}."
        )
        return config.POLY_EPS_FLOOR
    return eps


def _sup_on_unit_interval(coeffs: np.ndarray) -> float:
    return float(np.max(np.abs(C.chebval(chebyshev_grid(-1.0, 1.0), coeffs))))


def _bessel_terms(y: float, count: int) -> np.ndarray:
    """e^{-y} I_j(y) for j = 0..count-1."""
    return ive(np.arange(count), y)


def _max_bessel_index(y: float) -> int:
    cap = (config.MAX_POLY_DEGREE - 1) // 2
    return min(cap, int(math.ceil(math.sqrt(90.0 * max(y, 1.0)))) + 20)


def bessel_sum_residual(y: float) -> float:
    """
    e^{-y} (I_0(y) + 2 sum_{j>=1} I_j(y)) - 1, which vanishes by the generating
    function of the modified Bessel functions.
    """
    terms = _bessel_terms(y, _max_bessel_index(y) + 1)
    return float(terms[0] + 2.0 * terms[1:].sum() - 1.0)


def _erf_coeffs(m: float, terms: np.ndarray, order: int) -> np.ndarray:
    coeffs = np.zeros(2 * order + 2)
    coeffs[1] = terms[0]
    for j in range(1, order + 1):
        sign = -1.0 if j % 2 else 1.0
        coeffs[2 * j + 1] += sign * terms[j] / (2 * j + 1)
        coeffs[2 * j - 1] -= sign * terms[j] / (2 * j - 1)
    return coeffs * (2.0 * m / SQRT_PI)


def erf_poly(m: float, eps: float, interval_c: float = 1.0) -> ChebyshevPoly:
    """
    Odd Chebyshev approximation of erf(m x) from the Bessel expansion
    erf(mx) = (2m e^{-m^2/2} / sqrt(pi)) [I_0 T_1 + sum_j (-1)^j I_j (T_{2j+1}/(2j+1) - T_{2j-1}/(2j-1))].

    The order is the smallest whose tail bound (4 c m / sqrt(pi)) sum_{j>J} e^{-y} I_j(y)
    falls under eps/2, then grown until a dense grid certifies eps on [-c, c].

    Args:
        m: Slope, m >= 1/2.
        eps: Target uniform error on [-c, c].
        interval_c: Half-width c of the certification interval.

    Returns:
        ChebyshevPoly: Odd polynomial with P(0) = 0.

    Raises:
        ContractViolation: If m < 1/2 or eps, c are out of range.
        ApproximationFailure: If no order up to MAX_POLY_DEGREE certifies.
    """
    if m < 0.5:
        raise ContractViolation(f"erf_poly needs m >= 1/2, got {m}.")
    if not 0.0 < eps <= 1.0 or not 0.0 < interval_c <= 1.0:
        raise ContractViolation(f"erf_poly needs eps in (0, 1] and c in (0, 1], got eps={eps}, c={interval_c}.")
    eps = _floor_eps(eps, "erf_poly")
    y = m * m / 2.0
    j_max = _max_bessel_index(y)
    terms = _bessel_terms(y, j_max + 2)
    tails = np.cumsum(terms[::-1])[::-1]  # tails[j] = sum_{i>=j} terms[i]
    scale = 4.0 * interval_c * m / SQRT_PI
    order = next((j for j in range(j_max + 1) if scale * tails[j + 1] <= eps / 2.0), j_max)

    grid = chebyshev_grid(-interval_c, interval_c)
    exact = erf(m * grid)
    while True:
        coeffs = _erf_coeffs(m, terms, order)
        err = float(np.max(np.abs(C.chebval(grid, coeffs) - exact)))
        if err <= eps:
            break
        if order >= j_max:
            raise ApproximationFailure(
                f"erf_poly(m={m:.4g}) reached degree {2 * order + 1} with grid error {err:.3e} > {eps:.3e}."
            )
        order = min(j_max, max(order + 1, int(order * 1.25)))

    coeffs[0::2] = 0.0
    logger.debug(f"erf_poly: m={m:.4g} eps={eps:.3e} degree={2 * order + 1} grid_err={err:.3e}")
    return ChebyshevPoly(
        coeffs=coeffs,
        parity="odd",
        sup_bound=_sup_on_unit_interval(coeffs),
        certified_eps=eps,
        interval_c=interval_c,
    )


def sign_poly(gap: float, eps: float) -> ChebyshevPoly:
    """
    Odd polynomial with |P(x) - sign(x)| <= eps on [-1, -gap/2] U [gap/2, 1] and
    |P| <= 1 on [-1, 1], obtained by rescaling a steep erf approximation.

    Raises:
        ContractViolation: If gap is outside (0, 1].
        ApproximationFailure: If the rescaled polynomial fails certification.
    """
    if not 0.0 < gap <= 1.0:
        raise ContractViolation(f"sign_poly needs gap in (0, 1], got {gap}.")
    eps = _floor_eps(min(eps, 1.0), "sign_poly")
    m = max(0.5, 2.0 * float(erfcinv(eps / 2.0)) / gap)
    base = erf_poly(m, eps / 4.0, 1.0)
    coeffs = base.coeffs / (1.0 + eps / 4.0)
    sup = _sup_on_unit_interval(coeffs)
    if sup > 1.0:
        coeffs = coeffs / sup
        sup = 1.0

    plateau = chebyshev_grid(gap / 2.0, 1.0)
    err = float(np.max(np.abs(C.chebval(plateau, coeffs) - 1.0)))
    if err > eps:
        raise ApproximationFailure(f"sign_poly(gap={gap:.4g}) plateau error {err:.3e} > {eps:.3e}.")
    return ChebyshevPoly(coeffs=coeffs, parity="odd", sup_bound=sup, certified_eps=eps, interval_c=1.0)


def t3() -> ChebyshevPoly:
    """T_3(x) = 4x^3 - 3x."""
    return ChebyshevPoly(coeffs=[0.0, 0.0, 0.0, 1.0], parity="odd", sup_bound=1.0, certified_eps=0.0)


def monomial(power: int) -> ChebyshevPoly:
    """x^power in the Chebyshev basis."""
    coeffs = C.poly2cheb([0.0] * power + [1.0])
    coeffs[np.abs(coeffs) < 1e-15] = 0.0
    return ChebyshevPoly(
        coeffs=coeffs, parity="odd" if power % 2 else "even", sup_bound=1.0, certified_eps=0.0
    )


def _apply_sv(matrix: np.ndarray, func: Callable[[np.ndarray], np.ndarray], parity: str) -> np.ndarray:
    u, s, v = linalg.svd(matrix)
    values = func(s)
    if parity == "odd":
        return (u * values) @ v.conj().T
    return (v * values) @ v.conj().T


def sv_transform(u: BlockEncoding, p: ChebyshevPoly) -> BlockEncoding:
    """
    Exact singular-value transform: U p(S) V^dag for odd p, V p(S) V^dag for even p.

    Args:
        u: Encoding of A = alpha * block.
        p: Definite-parity polynomial with sup_bound <= 1.

    Returns:
        A (1, a + 2, eps')-block-encoding of p^SV(A / alpha), where eps' is 0 for
        exact inputs and 4 deg sqrt(eps / alpha) otherwise.

    Raises:
        ContractViolation: If p has no definite parity or exceeds 1 on [-1, 1].
    """
    if p.parity == "none":
        raise ContractViolation("Singular-value transforms need a polynomial of definite parity.")
    if p.sup_bound > 1.0 + config.BOUND_TOLERANCE:
        raise ContractViolation(f"Polynomial sup {p.sup_bound:.12g} exceeds 1.")

    def bounded(s: np.ndarray) -> np.ndarray:
        return np.clip(p(s), -1.0, 1.0)

    block = _apply_sv(u.block, bounded, p.parity)
    target = None
    if u.target is not None:
        target = _apply_sv(u.target / u.alpha, p, p.parity)
    eps = 0.0 if u.eps_bound == 0.0 else 4.0 * max(p.degree, 1) * math.sqrt(u.eps_bound / u.alpha)

    realization = None
    if u.realization is not None and u.total_qubits + 2 <= config.CIRCUIT_QUBIT_LIMIT:
        dilation = linalg.unitary_dilation(block)
        realization = np.kron(np.eye(2 ** (u.ancillas + 1), dtype=np.complex128), dilation)

    return BlockEncoding(
        block=block,
        alpha=1.0,
        ancillas=u.ancillas + 2,
        eps_bound=eps,
        target=target,
        realization=realization,
        depth=f"O({p.degree} T)",
    )


def _amplifier_target(gamma: float, delta: float, eps: float) -> Callable[[np.ndarray], np.ndarray]:
    c = (1.0 - delta / 2.0) / gamma
    k = 2.0 * gamma * float(erfcinv(eps / 2.0)) / delta

    def f(x):
        return gamma * x * 0.5 * (erf(k * (x + c)) - erf(k * (x - c)))

    return f


def amplification_poly(gamma: float, delta: float, eps: float) -> ChebyshevPoly:
    """
    Odd polynomial with |P(x) - gamma x| <= eps on [0, (1 - delta)/gamma] and |P| <= 1,
    interpolating gamma x times a smooth window of erf differences.

    Raises:
        ApproximationFailure: If no degree up to MAX_POLY_DEGREE certifies.
    """
    f = _amplifier_target(gamma, delta, eps)
    region = chebyshev_grid(0.0, (1.0 - delta) / gamma)
    full = chebyshev_grid(-1.0, 1.0)
    degree = 16
    while degree <= config.MAX_POLY_DEGREE:
        coeffs = C.chebinterpolate(f, degree)
        coeffs[0::2] = 0.0
        sup = float(np.max(np.abs(C.chebval(full, coeffs))))
        if sup > 1.0:
            coeffs = coeffs / sup
        err = float(np.max(np.abs(C.chebval(region, coeffs) - gamma * region)))
        if err <= eps:
            logger.debug(f"amplification_poly: gamma={gamma:.4g} degree={degree} err={err:.3e}")
            return ChebyshevPoly(
                coeffs=coeffs,
                parity="odd",
                sup_bound=min(sup, 1.0),
                certified_eps=eps,
                interval_c=min(1.0, (1.0 - delta) / gamma),
            )
        degree *= 2
    raise ApproximationFailure(f"No amplification polynomial for gamma={gamma:.4g} within degree limits.")


def uniform_sv_amplify(u: BlockEncoding, gamma: float, delta: float, eps: float) -> BlockEncoding:
    """
    Uniform singular-value amplification of a (1, a, eps_in)-encoding of A with
    ||A|| <= (1 - delta)/gamma into a (1, a + 1, eps + gamma eps_in)-encoding of gamma A.

    Raises:
        ContractViolation: If gamma, delta, eps or the input scale are out of range.
        AmplificationContractError: If the norm premise fails.
    """
    if gamma <= 1.0 or not 0.0 < delta <= 0.5 or not 0.0 < eps < 1.0:
        raise ContractViolation(f"Amplification needs gamma > 1, delta in (0, 1/2], eps in (0, 1); got {gamma}, {delta}, {eps}.")
    if not math.isclose(u.alpha, 1.0, rel_tol=1e-12):
        raise ContractViolation("Amplification acts on unit-scale encodings; rescale first.")
    norm = linalg.spectral_norm(u.block)
    limit = (1.0 - delta) / gamma
    if norm > limit + config.BOUND_TOLERANCE:
        raise AmplificationContractError(f"||A|| = {norm:.6g} exceeds (1 - delta)/gamma = {limit:.6g}.")

    eps = _floor_eps(eps, "uniform_sv_amplify")
    p = amplification_poly(gamma, delta, eps)
    transformed = sv_transform(u.model_copy(update={"eps_bound": 0.0, "target": None}), p)
    realization = None
    if transformed.realization is not None:
        realization = transformed.realization[
            : transformed.realization.shape[0] // 2, : transformed.realization.shape[1] // 2
        ]
    return BlockEncoding(
        block=transformed.block,
        alpha=1.0,
        ancillas=u.ancillas + 1,
        eps_bound=eps + gamma * u.eps_bound,
        target=None if u.target is None else gamma * u.target,
        realization=realization,
        depth=f"O({p.degree} T)",
    )


def oblivious_aa_half(u: BlockEncoding) -> BlockEncoding:
    """
    Doubles an exact encoded block whose singular values are all 0 or 1/2 by
    applying -T_3, realized as -U R U^dag R U with R = 2 Pi - I.

    Returns:
        A (1, a + 1, 0)-block-encoding of 2 * block.

    Raises:
        ContractViolation: If the block spectrum is not within {0, 1/2} or the input is inexact.
    """
    if u.eps_bound > 0.0:
        raise ContractViolation("Oblivious amplification needs an exact encoding.")
    _, s, _ = linalg.svd(u.block)
    off = np.minimum(np.abs(s), np.abs(s - 0.5))
    if np.max(off) > config.SPECTRUM_TOLERANCE:
        raise ContractViolation(f"Singular values {np.round(s, 10)} are not all in {{0, 1/2}}.")
    b = u.block
    block = -(4.0 * b @ b.conj().T @ b - 3.0 * b)

    realization = None
    if u.realization is not None and u.total_qubits + 1 <= config.CIRCUIT_QUBIT_LIMIT:
        dim = u.realization.shape[0]
        reflect = -np.eye(dim, dtype=np.complex128)
        reflect[: b.shape[0], : b.shape[0]] = np.eye(b.shape[0])
        core = -(u.realization @ reflect @ u.realization.conj().T @ reflect @ u.realization)
        realization = np.kron(np.eye(2, dtype=np.complex128), core)

    return BlockEncoding(
        block=block,
        alpha=1.0,
        ancillas=u.ancillas + 1,
        eps_bound=0.0,
        target=2.0 * b,
        realization=realization,
        depth="O(T)",
    )


def lipschitz_estimate(p: ChebyshevPoly, points: int = config.CERTIFICATION_GRID_POINTS) -> float:
    """Largest finite-difference slope of p on [-1, 1]."""
    grid = np.linspace(-1.0, 1.0, points)
    return float(np.max(np.abs(np.diff(p(grid)) / np.diff(grid))))


def ratio_bounds(p: ChebyshevPoly, points: int = 2_000) -> Tuple[float, float]:
    """(min, max) of |p(x)/x| over a log-spaced grid in (0, 1]."""
    grid = np.logspace(-6, 0, points)
    ratio = np.abs(p(grid) / grid)
    return float(np.min(ratio)), float(np.max(ratio))


if __name__ == "__main__":
    poly = erf_poly(0.8, 1e-6)
    print(f"erf(0.8x): degree {poly.degree}, sup {poly.sup_bound:.6f}, P(0.5) = {poly(0.5):.8f}")
    print(f"T3(1/2) = {t3()(0.5)}")
