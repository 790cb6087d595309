import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian, random_state
from qbrach.evolution import integrate_rk4
from qbrach.exceptions import DimensionError, NotHermitianError
from qbrach.linalg import hermitian_eigensystem, inner_product, matrix_exponential_action


def test_inner_product_examples():
    assert inner_product([1, 0], [1, 0]) == 1
    assert inner_product([1, 0], [0, 1]) == 0
    b = np.array([1, 1j]) / math.sqrt(2)
    # direct summation: conj(1)*1/sqrt2 + conj(0)*i/sqrt2
    assert inner_product([1, 0], b) == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_inner_product_is_conjugate_linear_in_first_argument(rng):
    a, b = random_state(rng, 4), random_state(rng, 4)
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-15)
    assert inner_product(2j * a, b) == pytest.approx(-2j * inner_product(a, b), abs=1e-14)


def test_inner_product_dimension_mismatch():
    with pytest.raises(DimensionError):
        inner_product([1, 0], [1, 0, 0])


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (np.eye(2), [1, 1]),
        ([[0, 1j], [-1j, 0]], [-1, 1]),
        (np.diag([3, -2, 5]), [-2, 3, 5]),
    ],
)
def test_eigensystem_examples(matrix, expected):
    eig = hermitian_eigensystem(matrix)
    np.testing.assert_allclose(eig.eigenvalues, expected, atol=1e-14)


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitianError):
        hermitian_eigensystem([[0, 1], [0, 0]])


@pytest.mark.parametrize("dim", range(2, 9))
def test_eigensystem_reconstruction_and_orthonormality(dim):
    rng = np.random.default_rng(dim)
    for _ in range(100):
        a = random_hermitian(rng, dim)
        eig = hermitian_eigensystem(a)
        v = eig.eigenvectors
        assert np.abs(v.conj().T @ v - np.eye(dim)).max() <= 1e-12
        assert np.linalg.norm(a - eig.reconstruct()) <= 1e-10 * np.linalg.norm(a)
        assert np.all(np.diff(eig.eigenvalues) >= 0)
        # independent LAPACK oracle
        np.testing.assert_allclose(eig.eigenvalues, np.linalg.eigvalsh(a), atol=1e-12)


def test_eigensystem_degenerate_spectrum(rng):
    u = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))[0]
    a = (u * np.array([1.0, 1.0, 1.0, -2.0, -2.0])) @ u.conj().T
    eig = hermitian_eigensystem(0.5 * (a + a.conj().T))
    np.testing.assert_allclose(eig.eigenvalues, [-2, -2, 1, 1, 1], atol=1e-13)


def test_exponential_examples():
    v = np.array([0.6, 0.8j])
    np.testing.assert_allclose(matrix_exponential_action(np.diag([2.0, 3.0]), 0.0, v), v)
    np.testing.assert_allclose(matrix_exponential_action(np.diag([1.0, -1.0]), math.pi, [1, 0]), [-1, 0], atol=1e-15)


def test_exponential_matches_rk4_oracle():
    a = np.array([[0, 1j], [-1j, 0]])
    exact = matrix_exponential_action(a, math.pi / 2, [1, 0])
    oracle = integrate_rk4(lambda s: a, [1, 0], math.pi / 2, 2000)
    np.testing.assert_allclose(exact, oracle, atol=1e-9)


def test_exponential_dimension_mismatch():
    with pytest.raises(DimensionError):
        matrix_exponential_action(np.eye(2), 1.0, [1, 0, 0])


@settings(max_examples=60, deadline=None)
@given(dim=st.integers(2, 8), seed=st.integers(0, 2**32 - 1), s=st.floats(0, 10))
def test_exponential_preserves_norm(dim, seed, s):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, dim)
    v = random_state(rng, dim)
    assert abs(np.linalg.norm(matrix_exponential_action(a, s, v)) - 1) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(2, 8), seed=st.integers(0, 2**32 - 1), s1=st.floats(-5, 5), s2=st.floats(-5, 5))
def test_exponential_group_property(dim, seed, s1, s2):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, dim)
    v = random_state(rng, dim)
    two_step = matrix_exponential_action(a, s2, matrix_exponential_action(a, s1, v))
    np.testing.assert_allclose(two_step, matrix_exponential_action(a, s1 + s2, v), atol=1e-10)
