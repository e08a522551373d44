# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Unit tests for the polynomial toolkit and singular-value transforms.
# -----------------------------------------------------------------------------

import math
from unittest.mock import patch

import numpy as np
import pytest
from scipy.special import erf

import config
import polynomials
from block_encodings import be_dilate, extract_block
from errors import AmplificationContractError, ContractViolation
from models import ChebyshevPoly


# --- Tests for chebyshev_grid and bessel_sum_residual ---


def test_chebyshev_grid_includes_endpoints():
    """The grid is sorted and closed."""
    grid = polynomials.chebyshev_grid(-0.5, 0.25, points=50)
    assert grid[0] == -0.5
    assert grid[-1] == 0.25
    assert np.all(np.diff(grid) >= 0.0)
    assert grid.shape == (52,)


@pytest.mark.parametrize("y", [0.125, 0.32, 1.28, 5.0])
def test_bessel_sum_residual_vanishes(y):
    """e^-y (I_0 + 2 sum I_j) = 1."""
    assert abs(polynomials.bessel_sum_residual(y)) <= 1e-12


# --- Tests for erf_poly ---


@pytest.mark.parametrize("m", [0.5, 0.8, 1.6])
def test_erf_poly_accuracy_and_shape(m):
    """Odd, P(0) = 0, certified on [-1, 1], bounded ratio P(x)/x."""
    eps = 1e-6
    p = polynomials.erf_poly(m, eps)
    grid = polynomials.chebyshev_grid(-1.0, 1.0)
    assert p.parity == "odd"
    assert abs(float(p(0.0))) <= 1e-15
    assert np.max(np.abs(p(grid) - erf(m * grid))) <= eps
    _, ratio_max = polynomials.ratio_bounds(p)
    assert ratio_max <= 4.0 * m / math.sqrt(math.pi)
    assert p.certified_eps == eps


def test_erf_poly_degree_grows_with_accuracy():
    """Tighter accuracy needs a higher degree."""
    assert polynomials.erf_poly(1.6, 1e-10).degree > polynomials.erf_poly(1.6, 1e-3).degree


def test_erf_poly_restricted_interval():
    """Certification on [-c, c] only."""
    p = polynomials.erf_poly(0.8, 1e-8, interval_c=0.5)
    grid = polynomials.chebyshev_grid(-0.5, 0.5)
    assert np.max(np.abs(p(grid) - erf(0.8 * grid))) <= 1e-8
    assert p.interval_c == 0.5


def test_erf_poly_rejects_small_slope():
    """The slope must be at least 1/2."""
    with pytest.raises(ContractViolation):
        polynomials.erf_poly(0.25, 1e-6)


@patch("polynomials.logger")
def test_erf_poly_floors_tiny_eps(mock_logger):
    """Requests below the float64 floor are clamped with a warning."""
    p = polynomials.erf_poly(0.5, 1e-14)
    assert p.certified_eps == config.POLY_EPS_FLOOR
    mock_logger.warning.assert_called_once()


# --- Tests for sign_poly and fixed polynomials ---


def test_sign_poly_plateau():
    """|P - 1| <= eps on [gap/2, 1] and |P| <= 1 everywhere."""
    gap, eps = 0.2, 1e-4
    p = polynomials.sign_poly(gap, eps)
    plateau = polynomials.chebyshev_grid(gap / 2.0, 1.0)
    assert np.max(np.abs(p(plateau) - 1.0)) <= eps
    assert p.sup_bound <= 1.0
    assert np.max(np.abs(p(polynomials.chebyshev_grid(-1.0, 1.0)))) <= 1.0 + 1e-12


@pytest.mark.parametrize("gap", [0.0, 1.5])
def test_sign_poly_rejects_gap(gap):
    """The gap lies in (0, 1]."""
    with pytest.raises(ContractViolation):
        polynomials.sign_poly(gap, 1e-3)


@pytest.mark.parametrize("x", [-1.0, -0.3, 0.0, 0.5, 1.0])
def test_t3_and_monomials(x):
    """T_3 = 4x^3 - 3x and the monomials evaluate exactly."""
    assert polynomials.t3()(x) == pytest.approx(4 * x**3 - 3 * x)
    assert polynomials.monomial(2)(x) == pytest.approx(x**2)
    assert polynomials.monomial(3)(x) == pytest.approx(x**3)


def test_monomial_parity():
    """Even powers are even polynomials."""
    assert polynomials.monomial(2).parity == "even"
    assert polynomials.monomial(5).parity == "odd"


# --- Tests for sv_transform ---


def test_sv_transform_applies_to_singular_values():
    """An odd transform of diag(s) is diag(p(s))."""
    u = be_dilate(np.diag([0.5, 0.2]), alpha=1.0)
    out = polynomials.sv_transform(u, polynomials.t3())
    t3 = polynomials.t3()
    assert np.allclose(out.block, np.diag([t3(0.5), t3(0.2)]), atol=1e-12)
    assert out.ancillas == 3
    assert out.actual_error() <= 1e-12


def test_sv_transform_even_polynomial():
    """Even transforms act on the right singular space: V p(S) V^dag."""
    a = np.array([[0.0, 0.6], [0.0, 0.0]])
    out = polynomials.sv_transform(be_dilate(a, alpha=1.0), polynomials.monomial(2))
    assert np.allclose(out.block, a.conj().T @ a, atol=1e-12)


def test_sv_transform_robustness_bound():
    """Inexact inputs propagate 4 deg sqrt(eps / alpha)."""
    u = be_dilate(np.diag([0.5, 0.2]), alpha=1.0).model_copy(update={"eps_bound": 1e-6})
    out = polynomials.sv_transform(u, polynomials.t3())
    assert out.eps_bound == pytest.approx(4 * 3 * math.sqrt(1e-6))


def test_sv_transform_needs_parity():
    """Mixed-parity polynomials are rejected."""
    p = ChebyshevPoly(coeffs=[0.1, 0.5], parity="none", sup_bound=0.6)
    with pytest.raises(ContractViolation):
        polynomials.sv_transform(be_dilate(np.eye(2) / 2, alpha=1.0), p)


def test_sv_transform_realization():
    """A realized input gives a unitary whose corner is the transformed block."""
    out = polynomials.sv_transform(be_dilate(np.diag([0.5, 0.2]), alpha=1.0, realize=True), polynomials.t3())
    assert np.allclose(extract_block(out.realization, out.ancillas), out.block, atol=1e-10)


# --- Tests for amplification ---


def test_amplification_poly_is_linear_on_region():
    """|P(x) - gamma x| <= eps on [0, (1 - delta)/gamma], |P| <= 1."""
    gamma, delta, eps = 2.0, 0.5, 1e-6
    p = polynomials.amplification_poly(gamma, delta, eps)
    region = polynomials.chebyshev_grid(0.0, (1.0 - delta) / gamma)
    assert np.max(np.abs(p(region) - gamma * region)) <= eps
    assert p.sup_bound <= 1.0


def test_uniform_sv_amplify():
    """A (1, a, 0)-encoding of A becomes a (1, a + 1, eps)-encoding of gamma A."""
    u = be_dilate(np.diag([0.2, 0.1]), alpha=1.0)
    out = polynomials.uniform_sv_amplify(u, 2.0, 0.5, 1e-6)
    assert out.ancillas == 2
    assert np.allclose(out.target, np.diag([0.4, 0.2]))
    assert out.actual_error() <= 1e-6 + config.BOUND_TOLERANCE


def test_uniform_sv_amplify_premise():
    """||A|| above (1 - delta)/gamma is rejected."""
    u = be_dilate(np.diag([0.5, 0.1]), alpha=1.0)
    with pytest.raises(AmplificationContractError):
        polynomials.uniform_sv_amplify(u, 2.0, 0.5, 1e-6)


@pytest.mark.parametrize("gamma, delta", [(1.0, 0.5), (2.0, 0.0), (2.0, 0.75)])
def test_uniform_sv_amplify_parameter_ranges(gamma, delta):
    """gamma > 1 and delta in (0, 1/2]."""
    with pytest.raises(ContractViolation):
        polynomials.uniform_sv_amplify(be_dilate(np.eye(2) * 0.1, alpha=1.0), gamma, delta, 1e-6)


def test_oblivious_aa_half_doubles_exactly():
    """Singular values 1/2 go to 1, zeros stay zero, realized exactly."""
    u = be_dilate(np.diag([0.5, 0.0]), alpha=1.0, realize=True)
    out = polynomials.oblivious_aa_half(u)
    assert np.allclose(out.block, np.diag([1.0, 0.0]), atol=1e-12)
    assert (out.alpha, out.ancillas, out.eps_bound) == (1.0, 2, 0.0)
    assert np.allclose(extract_block(out.realization, out.ancillas), out.block, atol=1e-10)


def test_oblivious_aa_half_rejects_other_spectra():
    """Only {0, 1/2} spectra are doubled exactly."""
    with pytest.raises(ContractViolation):
        polynomials.oblivious_aa_half(be_dilate(np.diag([0.3, 0.0]), alpha=1.0))


# --- Tests for Lipschitz and ratio estimates ---


def test_lipschitz_and_ratio_of_identity():
    """x has slope one and ratio one."""
    p = polynomials.monomial(1)
    assert polynomials.lipschitz_estimate(p) == pytest.approx(1.0)
    assert polynomials.ratio_bounds(p) == pytest.approx((1.0, 1.0))
