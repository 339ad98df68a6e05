"""Tests for COB correlation tensors."""
import itertools

import numpy as np
import pytest

from src.quantum.cob import builtin_basis, resolve_basis
from src.quantum.correlations import (
    CorrelationTensor, correlation_tensor, reconstruct, tensor_rows, vector_norm_squared,
)
from src.quantum.numerics import kron_all
from src.quantum.oracle import SamplerConfig, iter_samples
from src.quantum.states import evaluate, maximally_mixed, mixture, named_state, noisy_family
from src.utils.errors import DimensionError


def direct_coefficient(rho, bases, alphas):
    ops = [basis[a] for basis, a in zip(bases, alphas)]
    return np.trace(rho.matrix @ kron_all(ops)).real


def test_maximally_mixed_tensor_is_flat(qubit_bases3):
    tensor = correlation_tensor(maximally_mixed((2, 2, 2)), qubit_bases3)
    assert tensor.values.shape == (4, 4, 4)
    np.testing.assert_allclose(tensor.values, 1 / 64, atol=1e-15)


def test_entries_match_direct_traces(example2_bases):
    rho = evaluate(noisy_family("example2_phi"), 0.6)
    tensor = correlation_tensor(rho, example2_bases)
    for alphas in [(0, 0, 0), (8, 0, 3), (2, 5, 1), (6, 6, 2), (8, 8, 3)]:
        expected = direct_coefficient(rho, example2_bases, alphas)
        assert tensor.values[alphas] == pytest.approx(expected, abs=1e-12)
        assert tensor[tuple(a + 1 for a in alphas)] == pytest.approx(expected, abs=1e-12)


def test_coefficients_sum_to_one(example2_bases):
    tensor = correlation_tensor(named_state("example2_phi"), example2_bases)
    assert tensor.values.sum() == pytest.approx(1.0, abs=1e-12)


def test_norm_matches_purity(qubit_bases4):
    rho = evaluate(noisy_family("w4"), 0.4)
    tensor = correlation_tensor(rho, qubit_bases4)
    assert vector_norm_squared(tensor) == pytest.approx(rho.purity() / 16, abs=1e-12)


def test_reconstruct_recovers_state(example2_bases):
    rho = evaluate(noisy_family("example2_phi"), 0.3)
    rebuilt = reconstruct(correlation_tensor(rho, example2_bases), example2_bases)
    np.testing.assert_allclose(rebuilt.matrix, rho.matrix, atol=1e-12)


def test_flat_order_has_last_index_fastest(qubit_bases3):
    tensor = correlation_tensor(evaluate(noisy_family("ghz3"), 0.2), qubit_bases3)
    for flat_index, alphas in enumerate(itertools.product(range(4), repeat=3)):
        assert tensor.flat[flat_index] == tensor.values[alphas]


def test_tensor_rows(qubit_bases3):
    tensor = correlation_tensor(named_state("ghz3"), qubit_bases3)
    rows = list(tensor_rows(tensor))
    assert len(rows) == 64
    assert rows[0][:3] == (1, 1, 1)
    assert rows[1][:3] == (1, 1, 2)
    assert rows[-1][:3] == (4, 4, 4)
    assert rows[5][3] == pytest.approx(tensor[1, 2, 2])


def test_values_are_read_only(qubit_bases3):
    tensor = correlation_tensor(named_state("ghz3"), qubit_bases3)
    with pytest.raises(ValueError):
        tensor.values[0, 0, 0] = 0.0


def test_basis_mismatch():
    qubit = builtin_basis("construction1-d2")
    with pytest.raises(DimensionError):
        correlation_tensor(named_state("example2_phi"), [qubit, qubit, qubit])
    with pytest.raises(DimensionError):
        correlation_tensor(named_state("ghz3"), [qubit, qubit])


def test_tensor_shape_must_match_dims():
    with pytest.raises(DimensionError):
        CorrelationTensor((2, 2), ("a", "b"), np.zeros((4, 9)))


@pytest.mark.parametrize("dims", [(2, 2, 2), (3, 3, 2), (2, 2, 2, 2)])
def test_reconstruct_random_states(dims):
    cfg = SamplerConfig(seed=31, count=50, dims=dims, family="mixed_convex")
    bases = [resolve_basis(None, d) for d in dims]
    for rho in iter_samples(cfg):
        rebuilt = reconstruct(correlation_tensor(rho, bases), bases)
        np.testing.assert_allclose(rebuilt.matrix, rho.matrix, rtol=0, atol=1e-10)


@pytest.mark.parametrize("dims", [(2, 2, 2), (3, 3, 2)])
@pytest.mark.parametrize("family", ["mixed_convex", "haar_pure"])
def test_norm_is_bounded_and_tight_only_for_pure_states(dims, family):
    cfg = SamplerConfig(seed=71, count=500, dims=dims, family=family)
    bases = [resolve_basis(None, d) for d in dims]
    size = int(np.prod(dims))
    for rho in iter_samples(cfg):
        norm = vector_norm_squared(correlation_tensor(rho, bases))
        purity = rho.purity()
        assert norm <= 1 / size + 1e-10
        assert norm == pytest.approx(purity / size, abs=1e-10)
        assert (abs(norm * size - 1) < 1e-9) == (abs(purity - 1) < 1e-9)
        if family == "haar_pure":
            assert norm == pytest.approx(1 / size, abs=1e-10)


def test_tensor_is_linear_in_the_state(example2_bases):
    first = evaluate(noisy_family("example2_phi"), 0.8)
    second = next(iter_samples(SamplerConfig(seed=3, count=1, dims=(3, 3, 2), family="mixed_convex")))
    mixed = mixture([first, second], [0.3, 0.7])
    combined = (0.3 * correlation_tensor(first, example2_bases).values
                + 0.7 * correlation_tensor(second, example2_bases).values)
    np.testing.assert_allclose(correlation_tensor(mixed, example2_bases).values, combined, rtol=0, atol=1e-12)
