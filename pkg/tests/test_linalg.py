# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Unit tests for the dense linear algebra kernel.
# -----------------------------------------------------------------------------

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import linalg
from errors import ContractViolation, DimensionMismatch


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# --- Tests for num_qubits ---


@pytest.mark.parametrize("dim, expected", [(1, 0), (2, 1), (8, 3), (1024, 10)])
def test_num_qubits_powers_of_two(dim, expected):
    """Powers of two map to their exponent."""
    assert linalg.num_qubits(dim) == expected


@pytest.mark.parametrize("dim", [0, 3, 6, 12])
def test_num_qubits_rejects_other_sizes(dim):
    """Anything else must be padded first."""
    with pytest.raises(DimensionMismatch):
        linalg.num_qubits(dim)


def test_as_cvector_rejects_non_finite():
    """NaN entries are a contract violation."""
    with pytest.raises(ContractViolation):
        linalg.as_cvector([1.0, np.nan])


# --- Tests for unitary_dilation ---


def test_unitary_dilation_embeds_block(rng):
    """The dilation is unitary and its corner is exactly the block."""
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = 0.9 * b / linalg.spectral_norm(b)
    u = linalg.unitary_dilation(b)
    assert u.shape == (8, 8)
    assert linalg.is_unitary(u)
    assert np.allclose(u[:4, :4], b, atol=1e-14)


def test_unitary_dilation_rejects_non_contraction():
    """A block of norm 2 cannot sit inside a unitary."""
    with pytest.raises(ContractViolation):
        linalg.unitary_dilation(2.0 * np.eye(2))


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, (4, 4), elements=st.floats(-1.0, 1.0, allow_nan=False)))
def test_unitary_dilation_of_any_contraction(m):
    """Every rescaled real matrix dilates to a unitary."""
    b = m / max(1.0, linalg.spectral_norm(m))
    u = linalg.unitary_dilation(b)
    assert linalg.is_unitary(u, tol=1e-9)


# --- Tests for qft ---


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_qft_diagonalizes_cyclic_shift(n):
    """F^dag P F = diag(omega^-j)."""
    dim = 2**n
    f = linalg.qft(n)
    d = f.conj().T @ linalg.cyclic_shift(dim) @ f
    expected = np.diag(np.exp(-2j * np.pi * np.arange(dim) / dim))
    assert np.max(np.abs(d - expected)) <= 1e-10


def test_qft_is_unitary():
    """The Fourier matrix is unitary."""
    assert linalg.is_unitary(linalg.qft(3))


# --- Tests for state_unitary ---


def test_state_unitary_first_column(rng):
    """The first column is the requested state."""
    x = rng.normal(size=8) + 1j * rng.normal(size=8)
    x /= np.linalg.norm(x)
    u = linalg.state_unitary(x)
    assert linalg.is_unitary(u)
    assert np.allclose(u[:, 0], x, atol=1e-12)


def test_state_unitary_rejects_zero():
    """The zero vector has no preparation."""
    with pytest.raises(ContractViolation):
        linalg.state_unitary(np.zeros(4))


# --- Tests for qubit permutations ---


def test_permute_qubits_swaps_factors(rng):
    """Swapping two qubits swaps the Kronecker factors."""
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2))
    assert np.allclose(linalg.permute_qubits(np.kron(a, b), [1, 0]), np.kron(b, a))


def test_apply_on_qubits_places_operator():
    """X on the second qubit of two is I (x) X."""
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    full = linalg.apply_on_qubits(x, [1], 2)
    assert np.allclose(full, np.kron(np.eye(2), x))


def test_permute_qubits_rejects_non_permutation():
    """Repeated qubits are rejected."""
    with pytest.raises(ContractViolation):
        linalg.permute_qubits(np.eye(4), [0, 0])


# --- Tests for shifts and svd ---


def test_shifts():
    """P wraps around, Q falls off the end."""
    e = np.eye(4)
    assert np.allclose(linalg.cyclic_shift(4) @ e[:, 3], e[:, 0])
    assert np.allclose(linalg.unilateral_shift(4) @ e[:, 3], 0.0)
    assert np.allclose(linalg.unilateral_shift(4) @ e[:, 1], e[:, 2])


def test_svd_reconstructs(rng):
    """U diag(S) V^dag reproduces the matrix."""
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    u, s, v = linalg.svd(m)
    assert np.allclose((u * s) @ v.conj().T, m)
    assert np.all(np.diff(s) <= 0.0)


def test_norms(rng):
    """||M||_2 <= ||M||_F, with equality for rank one."""
    m = rng.normal(size=(4, 4))
    assert linalg.spectral_norm(m) <= linalg.frobenius_norm(m) + 1e-12
    rank_one = np.outer([1.0, 2.0], [3.0, 4.0])
    assert linalg.spectral_norm(rank_one) == pytest.approx(linalg.frobenius_norm(rank_one))
