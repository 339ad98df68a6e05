#!/usr/bin/env python3
"""
COB correlation tensors mu[a1, ..., an] = Tr(rho A^(1)_a1 x ... x A^(n)_an).

Index order is fixed with an fastest-varying; criterion layouts rely on it.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..config import IMAG_TOL
from ..utils.errors import DimensionError
from .numerics import real_part_checked
from .states import DensityMatrix


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """Real coefficients mu with one axis of length d_i^2 per subsystem."""

    dims: tuple
    basis_labels: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        dims = tuple(int(d) for d in self.dims)
        if values.shape != tuple(d * d for d in dims):
            raise DimensionError(f"tensor shape {values.shape} does not match dims {dims}")
        values.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        object.__setattr__(self, "values", values)

    @property
    def n_parties(self):
        return len(self.dims)

    @property
    def flat(self):
        """Values as a vector in (a1, ..., an) order, an fastest."""
        return self.values.ravel()

    def __getitem__(self, alphas):
        """1-based lookup: t[1, 1, 4] is mu_114."""
        return float(self.values[tuple(a - 1 for a in alphas)])


def _check_bases(dims, bases):
    if len(bases) != len(dims):
        raise DimensionError(f"{len(bases)} bases given for {len(dims)} subsystems")
    for k, (d, basis) in enumerate(zip(dims, bases), start=1):
        if basis.dim != d:
            raise DimensionError(f"basis {basis.label} has d={basis.dim} but subsystem {k} has d={d}")


def correlation_tensor(rho, bases):
    """
    Coefficients of rho in the product COB.

    Args:
        rho (DensityMatrix): n-partite state
        bases (sequence): One COBasis per subsystem

    Returns:
        CorrelationTensor: Real tensor of shape (d1^2, ..., dn^2)

    Raises:
        DimensionError: basis dimension mismatch
        NumericalIntegrityError: imaginary residue above IMAG_TOL
    """
    dims = rho.dims
    _check_bases(dims, bases)
    n = len(dims)

    # axes: rows i_k -> k, columns j_k -> n+k, basis labels a_k -> 2n+k
    operands = [rho.matrix.reshape(dims + dims), list(range(2 * n))]
    for k, basis in enumerate(bases):
        operands += [basis.operators, [2 * n + k, n + k, k]]
    raw = np.einsum(*operands, list(range(2 * n, 3 * n)), optimize=True)

    values = real_part_checked(raw, IMAG_TOL, what="correlation tensor")
    logging.debug(f"Computed correlation tensor of shape {values.shape}")
    return CorrelationTensor(dims, tuple(b.label for b in bases), values)


def reconstruct(tensor, bases):
    """
    rho = d1...dn sum mu A^(1) x ... x A^(n).

    Args:
        tensor (CorrelationTensor): Coefficients
        bases (sequence): The bases the tensor was computed in

    Returns:
        DensityMatrix: The reconstructed state
    """
    dims = tensor.dims
    _check_bases(dims, bases)
    n = len(dims)

    # same axis labels as correlation_tensor, contracted the other way
    operands = [tensor.values, list(range(2 * n, 3 * n))]
    for k, basis in enumerate(bases):
        operands += [basis.operators, [2 * n + k, k, n + k]]
    size = int(np.prod(dims))
    matrix = np.einsum(*operands, list(range(2 * n)), optimize=True).reshape(size, size)
    return DensityMatrix(dims, size * matrix)


def vector_norm_squared(tensor):
    """sum mu^2, which equals Tr(rho^2) / (d1...dn)."""
    return float(np.sum(tensor.values**2))


def tensor_rows(tensor):
    """
    Yield (a1, ..., an, mu) rows with 1-based labels, an fastest.
    """
    for index in np.ndindex(*tensor.values.shape):
        yield tuple(i + 1 for i in index) + (float(tensor.values[index]),)
