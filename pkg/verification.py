# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Randomized verification suites. Every case builds an encoding with
# a known target, measures its actual error against the propagated bound and
# checks the (alpha, ancillas) ledger against the closed-form count.
# -----------------------------------------------------------------------------

import logging
import math
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import minimize
from scipy.special import erf

import config
import linalg
import polynomials
from block_encodings import (
    be_basis_projector,
    be_dilate,
    be_lcu,
    be_product,
    be_tensor,
    extract_block,
    extract_vector,
    ve_concat,
    ve_deamplify,
    ve_from_vector,
    ve_matvec,
    ve_normalize,
    ve_subencode,
    ve_sum,
    ve_tensor,
    ve_traceout,
)
from blocks import output_ancillas, output_block, output_sum_norm, skip_norm_block, skip_sum_norm
from convolution import (
    conv_ancillas,
    conv_block_encoding,
    conv_matrix_form,
    direct_convolution,
    permutation_be,
    shift_q_be,
    vectorize_image,
)
from errors import QnnError
from models import BlockEncoding, ConvKernel, LemmaRecord, NetworkSpec, ResidualBlockSpec, VectorEncoding
from nonlinear import erf_apply_ve, erf_error_bound, matvec_squared, matvec_squared_oracle
from network import network_input, quantum_forward
from qram import build_matrix_structure, build_state_tree, diagonal_be_from_qram, state_prep_bound, state_prep_ve

logger = logging.getLogger(__name__)

HEAVY_CASE_DIVISOR: int = 8  # Whole-network suites run cases // 8 times
CIRCUIT_TOLERANCE: float = 1e-10
CONV_MATCH_TOLERANCE: float = 1e-12
FLOOR_RANDOM_DRAWS: int = 3  # Random inputs per norm-floor case, next to one searched input


class CaseContext(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rng: np.random.Generator
    realize: bool
    fault: bool
    tolerance: float


class Check(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps_bound: float
    eps_actual: float
    ledger_ok: bool
    detail: str = ""


SuiteFn = Callable[[CaseContext], Check]
SUITES: Dict[str, Tuple[SuiteFn, bool]] = {}


def suite(name: str, heavy: bool = False) -> Callable[[SuiteFn], SuiteFn]:
    """Registers a verification suite under `name`."""

    def register(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = (fn, heavy)
        return fn

    return register


# --- Random inputs ---


def random_unit(rng: np.random.Generator, dim: int, complex_valued: bool = True) -> np.ndarray:
    v = rng.normal(size=dim)
    if complex_valued:
        v = v + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_matrix(rng: np.random.Generator, dim: int, norm: float = 1.0, complex_valued: bool = True) -> np.ndarray:
    """A random matrix rescaled to the given spectral norm."""
    m = rng.normal(size=(dim, dim))
    if complex_valued:
        m = m + 1j * rng.normal(size=(dim, dim))
    return norm * m / linalg.spectral_norm(m)


def noisy_be(rng: np.random.Generator, n: int, alpha: float = 1.0, noise: float = 1e-3) -> BlockEncoding:
    """(alpha, 1, ||E||)-encoding of A whose block is (A + E) / alpha."""
    a = random_matrix(rng, 2**n, 0.5 * alpha)
    e = random_matrix(rng, 2**n, noise * rng.uniform(0.0, 1.0))
    return BlockEncoding(block=(a + e) / alpha, alpha=alpha, ancillas=1, eps_bound=linalg.spectral_norm(e), target=a)


def noisy_ve(
    rng: np.random.Generator, n: int, alpha: float = 1.0, noise: float = 1e-3, ancillas: int = 0, real: bool = False
) -> VectorEncoding:
    """(alpha, ancillas, ||e||)-encoding of a unit psi whose column is (psi + e) / alpha."""
    psi = random_unit(rng, 2**n, not real)
    e = random_unit(rng, 2**n, not real) * noise * rng.uniform(0.0, 1.0)
    vec = (psi + e) / alpha
    if np.linalg.norm(vec) > 1.0:
        vec = vec / np.linalg.norm(vec)
        e = alpha * vec - psi
    return VectorEncoding(vec=vec, alpha=alpha, ancillas=ancillas, eps_bound=float(np.linalg.norm(e)), target=psi)


def _ledger(
    ctx: CaseContext,
    enc: Union[BlockEncoding, VectorEncoding],
    alpha: float,
    ancillas: int,
    detail: str = "",
) -> Check:
    """Compares the ledger with the closed-form (alpha, ancillas); a fault doubles alpha."""
    reported = enc.alpha * (2.0 if ctx.fault else 1.0)
    ok = math.isclose(reported, alpha, rel_tol=1e-9) and enc.ancillas == ancillas
    actual = enc.actual_error()
    return Check(
        eps_bound=enc.eps_bound,
        eps_actual=0.0 if actual is None else actual,
        ledger_ok=ok,
        detail=detail or f"alpha={enc.alpha:.6g} ancillas={enc.ancillas}",
    )


# --- Block-encoding calculus ---


@suite("be_product")
def check_be_product(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    alpha, beta = ctx.rng.uniform(1.0, 3.0, size=2)
    u, v = noisy_be(ctx.rng, n, alpha), noisy_be(ctx.rng, n, beta)
    return _ledger(ctx, be_product(u, v), alpha * beta, 2)


@suite("be_tensor")
def check_be_tensor(ctx: CaseContext) -> Check:
    n, m = ctx.rng.integers(1, 3, size=2)
    alpha, beta = ctx.rng.uniform(1.0, 3.0, size=2)
    u, v = noisy_be(ctx.rng, int(n), alpha), noisy_be(ctx.rng, int(m), beta)
    return _ledger(ctx, be_tensor(u, v), alpha * beta, 2)


@suite("be_lcu")
def check_be_lcu(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    count = int(ctx.rng.integers(1, 6))
    alpha = ctx.rng.uniform(1.0, 2.0)
    parts = [be_dilate(random_matrix(ctx.rng, 2**n, alpha), alpha=alpha) for _ in range(count)]
    weights = ctx.rng.uniform(0.1, 1.0, size=count)
    d = max(0, count - 1).bit_length()
    return _ledger(ctx, be_lcu(parts, weights), alpha * weights.sum(), 1 + d)


@suite("be_basis_projector")
def check_be_basis_projector(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    i, j = (int(v) for v in ctx.rng.integers(0, 2**n, size=2))
    return _ledger(ctx, be_basis_projector(i, j, n), 1.0, 2)


# --- Vector-encoding calculus ---


@suite("ve_sum")
def check_ve_sum(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 5))
    a, b = (int(v) for v in ctx.rng.integers(0, 3, size=2))
    u = noisy_ve(ctx.rng, n, ctx.rng.uniform(1.0, 2.0), ancillas=a)
    v = noisy_ve(ctx.rng, n, ctx.rng.uniform(1.0, 2.0), ancillas=b)
    tau = float(ctx.rng.uniform(0.0, 1.0))
    out = ve_sum(u, v, tau)
    gamma = (tau / u.alpha) * u.target + ((1.0 - tau) / v.alpha) * v.target
    return _ledger(ctx, out, 1.0 / np.linalg.norm(gamma), 1 + max(a, b))


@suite("ve_matvec")
def check_ve_matvec(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 5))
    a = noisy_be(ctx.rng, n, ctx.rng.uniform(1.0, 2.0))
    psi = noisy_ve(ctx.rng, n, ctx.rng.uniform(1.0, 2.0), ancillas=int(ctx.rng.integers(0, 3)))
    norm = np.linalg.norm(a.target @ psi.target)
    return _ledger(ctx, ve_matvec(a, psi), a.alpha * psi.alpha / norm, a.ancillas + psi.ancillas)


@suite("ve_tensor")
def check_ve_tensor(ctx: CaseContext) -> Check:
    u = noisy_ve(ctx.rng, int(ctx.rng.integers(1, 3)), ctx.rng.uniform(1.0, 2.0), ancillas=1)
    v = noisy_ve(ctx.rng, int(ctx.rng.integers(1, 3)), ctx.rng.uniform(1.0, 2.0), ancillas=2)
    return _ledger(ctx, ve_tensor(u, v), u.alpha * v.alpha, 3)


@suite("ve_concat")
def check_ve_concat(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    count = int(ctx.rng.integers(2, 6))
    parts = [ve_from_vector(random_unit(ctx.rng, 2**n)) for _ in range(count)]
    parts = [ve_deamplify(p, ctx.rng.uniform(1.0, 2.0)) for p in parts]
    norm = math.sqrt(sum(1.0 / p.alpha**2 for p in parts))
    padded = 1 << (count - 1).bit_length()
    d = padded.bit_length() - 1
    return _ledger(ctx, ve_concat(parts), padded / norm, d + 2)


@suite("ve_normalize")
def check_ve_normalize(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 5))
    u = noisy_ve(ctx.rng, n, ctx.rng.uniform(1.0, 4.0), noise=1e-4, ancillas=int(ctx.rng.integers(0, 3)))
    eps1 = float(10.0 ** ctx.rng.uniform(-6, -2))
    return _ledger(ctx, ve_normalize(u, u.alpha, eps1), 1.0, u.ancillas + 4)


@suite("ve_deamplify")
def check_ve_deamplify(ctx: CaseContext) -> Check:
    u = noisy_ve(ctx.rng, int(ctx.rng.integers(1, 5)), ctx.rng.uniform(1.0, 2.0), ancillas=1)
    tau = float(ctx.rng.uniform(1.0, 3.0))
    return _ledger(ctx, ve_deamplify(u, tau), u.alpha * tau, 3)


@suite("ve_subencode")
def check_ve_subencode(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    inner = int(ctx.rng.integers(1, 3))
    beta = float(ctx.rng.uniform(1.0, 3.0))
    phi = random_unit(ctx.rng, 2**n)
    rest = random_unit(ctx.rng, 2 ** (n + inner) - 2**n)
    psi = np.concatenate([phi / beta, math.sqrt(1.0 - 1.0 / beta**2) * rest])
    out = ve_subencode(ve_from_vector(psi), inner, beta, 0.0, 0.0, inner_target=phi)
    return _ledger(ctx, out, beta, inner)


@suite("ve_traceout")
def check_ve_traceout(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    b = int(ctx.rng.integers(1, 3))
    psi = random_unit(ctx.rng, 2**n)
    u = ve_from_vector(np.kron(linalg.basis_vector(0, 2**b), psi))
    return _ledger(ctx, ve_traceout(u, b), 1.0, b)


# --- QRAM emulation ---


@suite("state_prep_ve")
def check_state_prep(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 6))
    d = int(ctx.rng.integers(6, 17))
    out = state_prep_ve(build_state_tree(random_unit(ctx.rng, 2**n)), d)
    check = _ledger(ctx, out, 1.0, 0)
    ok = check.ledger_ok and out.eps_bound <= state_prep_bound(n, d)
    return check.model_copy(update={"ledger_ok": ok, "detail": f"n={n} d={d}"})


@suite("diagonal_be_from_qram")
def check_diagonal_be(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 5))
    d = int(ctx.rng.integers(4, 13))
    if ctx.rng.uniform() < 0.5:
        out = diagonal_be_from_qram(ctx.rng.uniform(-1.0, 1.0, size=2**n), d)
        return _ledger(ctx, out, 1.0, d + 1)
    values = ctx.rng.uniform(-0.7, 0.7, size=2**n) + 1j * ctx.rng.uniform(-0.7, 0.7, size=2**n)
    return _ledger(ctx, diagonal_be_from_qram(values, d), 2.0, d + 2)


@suite("matvec_squared")
def check_matvec_squared(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 5))
    d = int(ctx.rng.integers(12, 25))
    w = random_matrix(ctx.rng, 2**n, 1.0)
    psi = ve_from_vector(random_unit(ctx.rng, 2**n))
    out = matvec_squared(build_matrix_structure(w, d), psi)
    norm = np.linalg.norm(w @ np.abs(psi.target) ** 2)
    check = _ledger(ctx, out, 1.0 / norm, 2 * psi.ancillas + d + 3 + n)
    gap = float(np.linalg.norm(out.alpha * out.vec - matvec_squared_oracle(w, psi.target)))
    return check.model_copy(update={"eps_actual": max(check.eps_actual, gap)})


# --- Polynomials ---


@suite("erf_poly")
def check_erf_poly(ctx: CaseContext) -> Check:
    m = float(ctx.rng.choice(config.ERF_SLOPES))
    eps = float(10.0 ** ctx.rng.uniform(-8, -3))
    p = polynomials.erf_poly(m, eps)
    grid = polynomials.chebyshev_grid(-1.0, 1.0)
    actual = float(np.max(np.abs(p(grid) - erf(m * grid))))
    _, ratio_max = polynomials.ratio_bounds(p)
    lipschitz = polynomials.lipschitz_estimate(p)
    ok = (
        abs(float(p(0.0))) <= 1e-15
        and ratio_max <= 4.0 * m / math.sqrt(math.pi)
        and lipschitz <= 2.0 * m / math.sqrt(math.pi) + 10.0 * eps
    )
    if ctx.fault:
        ok = False
    return Check(
        eps_bound=eps, eps_actual=actual, ledger_ok=ok, detail=f"m={m} degree={p.degree} lipschitz={lipschitz:.6g}"
    )


@suite("sign_poly")
def check_sign_poly(ctx: CaseContext) -> Check:
    gap = float(ctx.rng.uniform(0.1, 1.0))
    eps = float(10.0 ** ctx.rng.uniform(-8, -2))
    p = polynomials.sign_poly(gap, eps)
    plateau = polynomials.chebyshev_grid(gap / 2.0, 1.0)
    actual = float(np.max(np.abs(p(plateau) - 1.0)))
    ok = p.sup_bound <= 1.0 and 1.0 - eps <= float(p(1.0)) <= 1.0 + config.BOUND_TOLERANCE and not ctx.fault
    return Check(eps_bound=eps, eps_actual=actual, ledger_ok=ok, detail=f"gap={gap:.4g} degree={p.degree}")


@suite("sv_transform")
def check_sv_transform(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    u = be_dilate(random_matrix(ctx.rng, 2**n, ctx.rng.uniform(0.1, 1.0)), alpha=1.0)
    p = polynomials.t3() if ctx.rng.uniform() < 0.5 else polynomials.monomial(1)
    return _ledger(ctx, polynomials.sv_transform(u, p), 1.0, 3)


@suite("uniform_sv_amplify")
def check_uniform_sv_amplify(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    gamma = float(ctx.rng.uniform(1.1, 4.0))
    delta = float(ctx.rng.uniform(0.1, 0.5))
    u = be_dilate(random_matrix(ctx.rng, 2**n, (1.0 - delta) / gamma), alpha=1.0)
    out = polynomials.uniform_sv_amplify(u, gamma, delta, 1e-6)
    return _ledger(ctx, out, 1.0, 2)


@suite("oblivious_aa_half")
def check_oblivious_aa_half(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    left = linalg.state_unitary(random_unit(ctx.rng, 2**n))
    right = linalg.state_unitary(random_unit(ctx.rng, 2**n))
    spectrum = 0.5 * ctx.rng.integers(0, 2, size=2**n)
    b = left @ np.diag(spectrum) @ right.conj().T
    u = BlockEncoding(block=b, alpha=1.0, ancillas=1, target=b)
    out = polynomials.oblivious_aa_half(u)
    return _ledger(ctx, out, 1.0, 2)


# --- Activation and architecture ---


@suite("erf_apply_ve")
def check_erf_apply(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 5))
    nu = float(ctx.rng.choice(config.ERF_SLOPES))
    u = noisy_ve(ctx.rng, n, ctx.rng.uniform(1.0, 2.0), noise=1e-5, real=True)
    out = erf_apply_ve(u, nu, 1e-4)
    norm = float(np.linalg.norm(erf(nu * u.target.real / u.alpha)))
    alpha = 16.0 * nu / (math.sqrt(math.pi) * norm)
    check = _ledger(ctx, out, alpha, 2 * u.ancillas + n + 4, f"nu={nu} alpha={out.alpha:.6g}")
    ok = check.ledger_ok and out.eps_bound <= erf_error_bound(u, nu, 1e-4)
    return check.model_copy(update={"ledger_ok": ok})


@suite("conv_block_encoding")
def check_conv_block_encoding(ctx: CaseContext) -> Check:
    """M = 4 images with C in {1, 2} and D in {2, 4}."""
    m = 2
    channels = int(ctx.rng.choice([1, 2]))
    width = int(ctx.rng.choice([2, 4]))
    kernel = ConvKernel(K=ctx.rng.normal(size=(channels, channels, width, width)))
    image = ctx.rng.normal(size=(channels, 2**m, 2**m))
    conv = conv_matrix_form(kernel, m)
    direct = vectorize_image(direct_convolution(kernel.K, image))
    mismatch = float(np.max(np.abs(conv.matrix @ vectorize_image(image) - direct)))
    # ||vec(K)||^2 <= C ||conv||^2
    frobenius_ok = linalg.frobenius_norm(kernel.K.reshape(-1, 1)) ** 2 <= channels * conv.spectral_norm**2 * (
        1.0 + 1e-12
    )
    out = conv_block_encoding(kernel, m, eps=1e-9, conv=conv)
    check = _ledger(ctx, out, 1.0, conv_ancillas(channels, width))
    ok = check.ledger_ok and conv.ratio_bound_ok and frobenius_ok and mismatch <= CONV_MATCH_TOLERANCE
    return check.model_copy(update={"ledger_ok": ok, "detail": f"ratio={conv.ratio:.4g} mismatch={mismatch:.2e}"})


@suite("skip_norm_block")
def check_skip_norm_block(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    w = _floor_weight(ctx, n)
    weight = be_dilate(w / SKIP_KAPPA, alpha=1.0)
    psi = ve_from_vector(random_unit(ctx.rng, 2**n, complex_valued=False))
    records: list = []
    out = skip_norm_block(psi, ResidualBlockSpec(weight_be=weight, kappa=SKIP_KAPPA, eps1=1e-6), records)
    norm = next(r.norm_value for r in records if r.norm_floor is not None)
    check = _ledger(ctx, out, 1.0, 2 * (psi.ancillas + weight.ancillas) + n + 9)
    ok = check.ledger_ok and norm >= config.SKIP_NORM_FLOOR
    return check.model_copy(update={"ledger_ok": ok, "detail": f"pre-normalization norm {norm:.4g}"})


@suite("output_block")
def check_output_block(ctx: CaseContext) -> Check:
    n = int(ctx.rng.integers(1, 4))
    d = int(ctx.rng.integers(20, 29))
    w = random_matrix(ctx.rng, 2**n, 1.0, complex_valued=False)
    psi = ve_from_vector(random_unit(ctx.rng, 2**n, complex_valued=False))
    records: list = []
    out, _ = output_block(psi, build_matrix_structure(w, d), 2, 1e-2, records)
    norm = next(r.norm_value for r in records if r.norm_floor is not None)
    check = _ledger(ctx, out, 1.0, output_ancillas(psi.ancillas, d, n))
    ok = check.ledger_ok and norm >= config.OUTPUT_DELTA
    return check.model_copy(update={"ledger_ok": ok, "detail": f"N_gamma={norm:.4g}"})


# --- Norm floors ---


SKIP_KAPPA: float = 2.0


def _floor_weight(ctx: CaseContext, n: int) -> np.ndarray:
    """A random real contraction, or W = -I, which pulls the activation against the skip path."""
    if ctx.rng.uniform() < 0.5:
        return random_matrix(ctx.rng, 2**n, 1.0, complex_valued=False)
    return -np.eye(2**n)


def search_norm_floor(
    rng: np.random.Generator, objective: Callable[[np.ndarray], float], dim: int
) -> Tuple[np.ndarray, float]:
    """Minimizes objective over unit real vectors from a random start."""
    start = random_unit(rng, dim, complex_valued=False)
    result = minimize(
        lambda x: objective(x / np.linalg.norm(x)),
        start,
        method="Nelder-Mead",
        options={"maxiter": 400 * dim, "xatol": 1e-10, "fatol": 1e-14},
    )
    psi = result.x / np.linalg.norm(result.x)
    return psi, float(objective(psi))


def _floor_check(
    ctx: CaseContext, objective: Callable[[np.ndarray], float], dim: int, floor: float
) -> Check:
    drawn = min(objective(random_unit(ctx.rng, dim, complex_valued=False)) for _ in range(FLOOR_RANDOM_DRAWS))
    _, searched = search_norm_floor(ctx.rng, objective, dim)
    lowest = min(drawn, searched)
    ok = lowest >= floor - config.BOUND_TOLERANCE and not ctx.fault
    return Check(
        eps_bound=0.0,
        eps_actual=0.0,
        ledger_ok=ok,
        detail=f"random min {drawn:.4g} searched min {searched:.4g} floor {floor:.4g}",
    )


@suite("skip_norm_floor")
def check_skip_norm_floor(ctx: CaseContext) -> Check:
    """Random and searched inputs against the 1/400 pre-normalization floor."""
    n = int(ctx.rng.integers(1, 4))
    w = _floor_weight(ctx, n)
    nu = SKIP_KAPPA * config.ACTIVATION_SCALE
    return _floor_check(ctx, lambda psi: skip_sum_norm(psi, w, nu), 2**n, config.SKIP_NORM_FLOOR)


@suite("output_norm_floor")
def check_output_norm_floor(ctx: CaseContext) -> Check:
    """Random and searched inputs against N_gamma >= 2 tau - 1."""
    n = int(ctx.rng.integers(1, 4))
    w = _floor_weight(ctx, n)
    return _floor_check(ctx, lambda psi: output_sum_norm(psi, w), 2**n, config.OUTPUT_DELTA)


# --- Circuit / semantic agreement ---


def _circuit_check(ctx: CaseContext, enc: Union[BlockEncoding, VectorEncoding], label: str) -> Check:
    if enc.realization is None:
        return Check(eps_bound=CIRCUIT_TOLERANCE, eps_actual=0.0, ledger_ok=False, detail=f"{label}: no realization")
    unitary = linalg.is_unitary(enc.realization, CIRCUIT_TOLERANCE)
    if isinstance(enc, VectorEncoding):
        gap = float(np.max(np.abs(extract_vector(enc.realization, enc.ancillas) - enc.vec)))
    else:
        gap = float(np.max(np.abs(extract_block(enc.realization, enc.ancillas) - enc.block)))
    return Check(eps_bound=CIRCUIT_TOLERANCE, eps_actual=gap, ledger_ok=unitary and not ctx.fault, detail=label)


@suite("circuit_agreement")
def check_circuit_agreement(ctx: CaseContext) -> Check:
    """Extracted blocks of materialized primitives against their semantic blocks."""
    n = int(ctx.rng.integers(1, 3))
    choice = int(ctx.rng.integers(0, 6))
    if choice == 0:
        u = ve_from_vector(random_unit(ctx.rng, 2**n), realize=True)
        v = ve_from_vector(random_unit(ctx.rng, 2**n), realize=True)
        return _circuit_check(ctx, ve_sum(u, v, float(ctx.rng.uniform())), "ve_sum")
    if choice == 1:
        parts = [be_dilate(random_matrix(ctx.rng, 2**n), alpha=1.0, realize=True) for _ in range(3)]
        return _circuit_check(ctx, be_lcu(parts, ctx.rng.uniform(0.1, 1.0, size=3)), "be_lcu")
    if choice == 2:
        return _circuit_check(ctx, permutation_be(n, int(ctx.rng.integers(0, 2**n)), realize=True), "permutation_be")
    if choice == 3:
        return _circuit_check(ctx, diagonal_be_from_qram(ctx.rng.uniform(-1, 1, size=2**n), 4, realize=True), "cr_y")
    if choice == 4:
        i, j = (int(v) for v in ctx.rng.integers(0, 2**n, size=2))
        return _circuit_check(ctx, be_basis_projector(i, j, n, realize=True), "basis_projector")
    return _circuit_check(ctx, shift_q_be(n, realize=True), "shift_q")


# --- End to end ---


def random_network_spec(rng: np.random.Generator, epsilon: float = 1e-2) -> NetworkSpec:
    """A random desk-scale spec: M in {2, 4}, up to two channels, k in {1, 2}."""
    m = int(rng.integers(1, 3))
    channels = int(rng.choice([1, 2]))
    k = int(rng.integers(1, 3))
    side = 2**m
    c_bins = int(rng.choice([2, 4]))
    regime = int(rng.choice([1, 2, 3]))
    kernels = [rng.normal(size=(channels, channels, 2, 2)) for _ in range(k)]
    final_w = None
    if regime != 3:
        dim = channels * side * side
        final_w = random_matrix(rng, dim, 1.0, complex_valued=False)
    return NetworkSpec(
        name=f"random-m{m}-c{channels}-k{k}",
        m=m,
        channels_in=channels,
        k=k,
        kernels=kernels,
        final_w=final_w,
        c_bins=c_bins,
        epsilon=epsilon,
        regime=regime,
        seed=int(rng.integers(0, 2**31)),
        input=rng.uniform(0.1, 1.0, size=(channels, side, side)),
    )


@suite("network_oracle", heavy=True)
def check_network_oracle(ctx: CaseContext) -> Check:
    spec = random_network_spec(ctx.rng)
    report = quantum_forward(spec, network_input(spec))
    ok = all(s.passed for s in report.stages) and not ctx.fault
    return Check(
        eps_bound=spec.epsilon, eps_actual=report.l2_error, ledger_ok=ok, detail=f"{spec.name} regime={spec.regime}"
    )


# --- Runner ---


def run_suites(
    cases: int = config.DEFAULT_CASES,
    seed: int = config.DEFAULT_SEED,
    realize: bool = False,
    inject_fault: Optional[str] = None,
    tolerance: Optional[float] = None,
    only: Optional[List[str]] = None,
) -> List[LemmaRecord]:
    """
    Runs every registered suite (or those in `only`) and returns one record per case.

    Args:
        cases: Randomized cases per suite; heavy suites run cases // 8.
        seed: Base seed; suite i draws from default_rng([seed, i]).
        realize: Include the circuit agreement suite.
        inject_fault: Name of a suite whose ledger is corrupted.
        tolerance: Slack on eps_actual <= eps_bound, default config.BOUND_TOLERANCE.
        only: Restrict to these suite names.

    Returns:
        LemmaRecords in suite then case order.
    """
    tol = config.BOUND_TOLERANCE if tolerance is None else tolerance
    records: List[LemmaRecord] = []
    for index, (name, (fn, heavy)) in enumerate(SUITES.items()):
        if only is not None and name not in only:
            continue
        if name == "circuit_agreement" and not realize:
            continue
        rng = np.random.default_rng([seed, index])
        count = max(1, cases // HEAVY_CASE_DIVISOR) if heavy else cases
        ctx = CaseContext(rng=rng, realize=realize, fault=inject_fault == name, tolerance=tol)
        failures = 0
        for case in range(count):
            try:
                check = fn(ctx)
            except QnnError as e:
                logger.error(f"{name} case {case}: {e}", exc_info=True)
                check = Check(
                    eps_bound=0.0, eps_actual=float("inf"), ledger_ok=False, detail=f"{type(e).__name__}: {e}"
                )
            passed = check.ledger_ok and check.eps_actual <= check.eps_bound + tol
            failures += not passed
            records.append(
                LemmaRecord(
                    lemma=name,
                    case=case,
                    eps_bound=check.eps_bound,
                    eps_actual=check.eps_actual,
                    ledger_ok=check.ledger_ok,
                    passed=passed,
                    detail=check.detail,
                )
            )
        logger.info(f"Suite {name}: {count - failures}/{count} cases passed")
    return records


if __name__ == "__main__":
    for record in run_suites(cases=3, only=["be_product", "ve_sum"]):
        print(record.model_dump())
