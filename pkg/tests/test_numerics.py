"""Tests for the dense matrix primitives."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from src.quantum.cob import builtin_basis
from src.quantum.numerics import (
    frobenius_norm, is_density_matrix, kron, real_part_checked, trace_norm, trace_norm_oracle,
)
from src.quantum.states import evaluate, noisy_family
from src.utils.errors import DimensionError, NumericalIntegrityError

ENTRIES = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


def small_matrices(rows, cols):
    return arrays(np.float64, (rows, cols), elements=ENTRIES)


def test_kron_identity_and_scalar():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(kron([[2.0]], m), 2 * m)


def test_kron_of_basis_operators_has_product_trace():
    a1 = builtin_basis("construction1-d2")[0]
    assert abs(np.trace(kron(a1, a1)) - 0.25) < 1e-12


def test_trace_norm_simple_cases():
    assert trace_norm(np.eye(2)) == pytest.approx(2.0, abs=1e-12)
    assert trace_norm(np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(1.0, abs=1e-12)
    assert trace_norm(np.zeros((3, 5))) == 0.0


def test_trace_norm_of_outer_product(rng):
    a = rng.standard_normal(4)
    b = rng.standard_normal(7)
    expected = np.linalg.norm(a) * np.linalg.norm(b)
    assert trace_norm(np.outer(a, b)) == pytest.approx(expected, abs=1e-12)


def test_trace_norm_is_deterministic(rng):
    m = rng.uniform(-1, 1, size=(4, 32))
    assert abs(trace_norm(m) - trace_norm(m.copy())) <= 1e-12


def test_trace_norm_rejects_non_finite():
    with pytest.raises(NumericalIntegrityError):
        trace_norm(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_frobenius_norm():
    assert frobenius_norm(np.eye(2)) == pytest.approx(np.sqrt(2))
    assert frobenius_norm(np.zeros((2, 2))) == 0.0
    assert frobenius_norm(np.array([[1.0], [2.0], [2.0]])) == pytest.approx(3.0)


def test_oracle_simple_cases():
    assert trace_norm_oracle(np.eye(2)) == pytest.approx(2.0, abs=1e-12)
    assert trace_norm_oracle(np.diag([3.0, -4.0])) == pytest.approx(7.0, abs=1e-12)
    assert trace_norm_oracle(np.zeros((2, 3))) == 0.0


def test_oracle_agrees_on_random_matrices(rng):
    for _ in range(1000):
        m = rng.uniform(-1, 1, size=(4, 8))
        assert abs(trace_norm(m) - trace_norm_oracle(m)) <= 1e-9


@pytest.mark.parametrize("shape", [(4, 32), (8, 32), (9, 162), (4, 64)])
def test_oracle_agrees_on_criterion_shapes(rng, shape):
    for _ in range(50):
        m = rng.uniform(-1, 1, size=shape)
        assert abs(trace_norm(m) - trace_norm_oracle(m)) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(a=small_matrices(2, 3), b=small_matrices(3, 2))
def test_trace_norm_is_multiplicative_under_kron(a, b):
    assert abs(trace_norm(np.kron(a, b)) - trace_norm(a) * trace_norm(b)) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(a=small_matrices(3, 4), b=small_matrices(3, 4))
def test_trace_norm_triangle_inequality(a, b):
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-9


@settings(max_examples=100, deadline=None)
@given(m=small_matrices(3, 5))
def test_trace_norm_bounded_by_frobenius(m):
    assert trace_norm(m) <= np.sqrt(3) * frobenius_norm(m) + 1e-9


def test_is_density_matrix():
    assert is_density_matrix(np.eye(2) / 2, 1e-9)
    check = is_density_matrix(np.diag([2.0, -1.0]), 1e-9)
    assert not check
    assert check.min_eigenvalue == pytest.approx(-1.0)


def test_is_density_matrix_on_noisy_ghz():
    rho = evaluate(noisy_family("ghz3"), 0.5)
    assert is_density_matrix(rho.matrix, 1e-9)


def test_is_density_matrix_rejects_non_square():
    with pytest.raises(DimensionError):
        is_density_matrix(np.zeros((2, 3)), 1e-9)


def test_real_part_checked():
    np.testing.assert_array_equal(real_part_checked(np.array([1 + 1e-14j, 2])), [1.0, 2.0])
    with pytest.raises(NumericalIntegrityError):
        real_part_checked(np.array([1 + 1e-6j]))
