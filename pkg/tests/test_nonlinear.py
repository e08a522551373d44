# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Unit tests for the erf activation, the rank-independent
# W g(psi) product and squared l2 pooling.
# -----------------------------------------------------------------------------

import math

import numpy as np
import pytest
from scipy.special import erf

import linalg
import nonlinear
import polynomials
from block_encodings import ve_from_vector
from errors import ContractViolation, DegenerateNormError, DimensionMismatch
from models import ActivationMeta, ChebyshevPoly, PoolingSpec
from qram import build_matrix_structure
from verification import noisy_ve


@pytest.fixture
def rng():
    return np.random.default_rng(11)


@pytest.fixture
def real_state(rng):
    return ve_from_vector(rng.normal(size=4))


# --- Tests for nlat_ve ---


def t3_meta(eps1: float = 1e-3) -> ActivationMeta:
    return ActivationMeta(func=lambda x: 4.0 * x**3 - 3.0 * x, lipschitz=9.0, gamma_bound=3.0, eps1=eps1)


def test_nlat_ve_exact_polynomial(real_state):
    """An exact polynomial encodes f(psi) / N with alpha = 4 gamma / N."""
    out = nonlinear.nlat_ve(real_state, polynomials.t3(), t3_meta())
    image = 4.0 * real_state.target.real**3 - 3.0 * real_state.target.real
    norm = np.linalg.norm(image)
    assert np.allclose(out.target, image / norm, atol=1e-12)
    assert out.alpha == pytest.approx(12.0 / norm)
    assert out.ancillas == 2 + 2 * 0 + 4
    assert out.eps_bound == pytest.approx(9.0 * 1e-3 / norm)
    assert out.actual_error() <= out.eps_bound + 1e-12


def test_nlat_ve_rejects_nonzero_constant(real_state):
    """p(0) must vanish."""
    constant = ChebyshevPoly(coeffs=[1.0], parity="even", sup_bound=1.0)
    with pytest.raises(ContractViolation):
        nonlinear.nlat_ve(real_state, constant, t3_meta())


def test_nlat_ve_rejects_complex_state():
    """Amplitude transforms act on real states."""
    state = ve_from_vector(np.array([1.0, 1j, 0.0, 0.0]))
    with pytest.raises(ContractViolation):
        nonlinear.nlat_ve(state, polynomials.t3(), t3_meta())


# --- Tests for erf_apply_ve ---


@pytest.mark.parametrize("nu", [0.5, 0.8, 1.6])
def test_erf_apply_ve_ledger(real_state, nu):
    """Encodes erf(nu psi) / N with alpha = 16 nu / (sqrt(pi) N) and n + 2a + 4 ancillas."""
    out = nonlinear.erf_apply_ve(real_state, nu, 1e-3)
    image = erf(nu * real_state.target.real)
    norm = np.linalg.norm(image)
    assert np.allclose(out.target, image / norm)
    assert out.alpha == pytest.approx(16.0 * nu / (math.sqrt(math.pi) * norm))
    assert out.ancillas == real_state.n_qubits + 4
    assert out.actual_error() <= out.eps_bound + 1e-9


def test_erf_apply_ve_norm_floor(real_state):
    """N >= 1/(2 alpha) for a unit-scale input."""
    out = nonlinear.erf_apply_ve(real_state, 0.8, 1e-3)
    norm = np.linalg.norm(erf(0.8 * real_state.target.real))
    assert norm >= 0.5


def test_erf_apply_ve_reports_the_tighter_bound():
    """A one-hot input at nu = 1/2 carries 2 nu alpha (eps0 + eps1), below L eps1 / N."""
    out = nonlinear.erf_apply_ve(ve_from_vector(np.array([1.0, 0.0])), 0.5, 1e-3)
    assert out.eps_bound == pytest.approx(1e-3)
    assert out.actual_error() <= out.eps_bound


def test_erf_apply_ve_error_within_ledger_on_random_inputs(rng):
    """Noisy real inputs stay within 2 nu alpha (eps0 + eps1) over 200 cases."""
    for _ in range(200):
        n = int(rng.integers(1, 5))
        nu = float(rng.uniform(0.5, 2.0))
        u = noisy_ve(rng, n, float(rng.uniform(1.0, 3.0)), noise=1e-5, real=True)
        out = nonlinear.erf_apply_ve(u, nu, 1e-4)
        assert out.eps_bound <= nonlinear.erf_error_bound(u, nu, 1e-4)
        assert out.actual_error() <= out.eps_bound + 1e-12


@pytest.mark.parametrize("nu, eps1", [(0.4, 1e-3), (0.8, 0.0), (0.8, 3.0)])
def test_erf_apply_ve_rejects_parameters(real_state, nu, eps1):
    """nu >= 1/2 and eps1 in (0, 2]."""
    with pytest.raises(ContractViolation):
        nonlinear.erf_apply_ve(real_state, nu, eps1)


def test_erf_apply_ve_rejects_complex(rng):
    """Amplitude transforms act on real states only."""
    psi = ve_from_vector(rng.normal(size=4) + 1j * rng.normal(size=4))
    with pytest.raises(ContractViolation):
        nonlinear.erf_apply_ve(psi, 0.8, 1e-3)


# --- Tests for matvec_squared ---


def test_matvec_squared_matches_oracle(rng):
    """W g(psi) / N with alpha = 1/N and d + 3 + n ancillas."""
    w = rng.normal(size=(4, 4))
    w = 0.8 * w / linalg.spectral_norm(w)
    psi = ve_from_vector(rng.normal(size=4))
    out = nonlinear.matvec_squared(build_matrix_structure(w, 20), psi)
    expected = nonlinear.matvec_squared_oracle(w, psi.target)
    assert np.allclose(out.target, expected, atol=1e-12)
    assert out.alpha == pytest.approx(1.0 / np.linalg.norm(w @ np.abs(psi.target) ** 2))
    assert out.ancillas == 20 + 3 + 2
    assert out.actual_error() <= out.eps_bound + 1e-9


def test_matvec_squared_dimension_mismatch(rng):
    """The structure and vector must share a register."""
    with pytest.raises(DimensionMismatch):
        nonlinear.matvec_squared(build_matrix_structure(0.5 * np.eye(4), 8), ve_from_vector(np.ones(8)))


def test_matvec_squared_oracle_degenerate():
    """A vanishing W g(psi) has no normalized image."""
    with pytest.raises(DegenerateNormError):
        nonlinear.matvec_squared_oracle(np.zeros((2, 2)), np.ones(2))


# --- Tests for pooling ---


def test_pool_l2sq_bins():
    """Contiguous bins of squared magnitudes."""
    x = np.array([1.0, 1.0, 0.0, 2.0j]) / math.sqrt(6.0)
    pooled = nonlinear.pool_l2sq(x, PoolingSpec(c_bins=2, input_dim=4))
    assert np.allclose(pooled, [2.0 / 6.0, 4.0 / 6.0])


def test_pool_l2sq_rejects_length():
    """The vector length must match the pooling spec."""
    with pytest.raises(DimensionMismatch):
        nonlinear.pool_l2sq(np.ones(8), PoolingSpec(c_bins=2, input_dim=4))


def test_pool_error_bound():
    """2 N eps / sqrt(C)."""
    assert nonlinear.pool_error_bound(16, 4, 1e-3) == pytest.approx(16e-3)
