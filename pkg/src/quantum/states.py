#!/usr/bin/env python3
"""
Multipartite density matrices, the named states and their white-noise families.

Computational basis indices are big-endian over subsystems: the leftmost ket
factor is the most significant digit. For dims (3, 3, 2) the flat index of
|a1 a2 a3> is a1*6 + a2*2 + a3.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..config import AUTO_NORMALIZE_TOL, FAMILY_ORIENTATION, HERMITIAN_TOL, PSD_TOL, STATE_TOL
from ..utils.errors import DimensionError, InputError, ParameterError
from ..utils.file_store import DocumentStore
from ..utils.text_utils import (
    complex_to_pair, matrix_to_pairs, pair_to_complex, pairs_to_matrix,
)
from .numerics import is_density_matrix

ORIENTATIONS = ("noise", "pure")


def _check_dims(dims):
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid subsystem dimensions {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """An n-partite state with its subsystem dimensions."""

    dims: tuple
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        matrix = np.array(self.matrix, dtype=complex)
        size = int(np.prod(dims))
        if matrix.shape != (size, size):
            raise DimensionError(f"matrix shape {matrix.shape} does not match dims {dims}")

        check = is_density_matrix(matrix, PSD_TOL)
        if check.hermitian_residual > STATE_TOL or check.trace_residual > STATE_TOL or not check:
            raise InputError(f"not a density matrix: {check.summary()}")

        if check.hermitian_residual > HERMITIAN_TOL:
            matrix = (matrix + matrix.conj().T) / 2

        matrix.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", matrix)

    @property
    def size(self):
        return self.matrix.shape[0]

    @property
    def n_parties(self):
        return len(self.dims)

    def purity(self):
        """Tr(rho^2)."""
        return float(np.real(np.einsum("ij,ji->", self.matrix, self.matrix)))

    def to_document(self):
        return {"dims": list(self.dims), "matrix": matrix_to_pairs(self.matrix)}


def pure_state(amplitudes, dims):
    """
    |psi><psi| for an amplitude vector in the big-endian computational basis.

    Vectors within AUTO_NORMALIZE_TOL of unit norm are normalized.

    Args:
        amplitudes (sequence): Complex amplitudes, length prod(dims)
        dims (sequence): Subsystem dimensions

    Returns:
        DensityMatrix: The pure state
    """
    dims = _check_dims(dims)
    psi = np.asarray(amplitudes, dtype=complex).ravel()
    if psi.size != int(np.prod(dims)):
        raise DimensionError(f"{psi.size} amplitudes do not match dims {dims}")

    norm = float(np.linalg.norm(psi))
    if norm == 0.0:
        raise InputError("zero amplitude vector")
    if abs(norm - 1.0) > AUTO_NORMALIZE_TOL:
        raise InputError(f"amplitude vector has norm {norm:.8f}, expected 1")

    # renormalize the small drift that passed the check
    psi = psi / norm
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


def basis_index(digits, dims):
    """Flat big-endian index of the product ket |digits>."""
    index = 0
    for digit, d in zip(digits, dims):
        if not 0 <= digit < d:
            raise DimensionError(f"digit {digit} out of range for dimension {d}")
        index = index * d + digit
    return index


def ket(terms, dims):
    """Amplitude vector from {digits: amplitude} over the computational basis."""
    psi = np.zeros(int(np.prod(dims)), dtype=complex)
    for digits, amplitude in terms.items():
        psi[basis_index(digits, dims)] += amplitude
    return psi


def _ghz(n):
    return {(0,) * n: 1 / np.sqrt(2), (1,) * n: 1 / np.sqrt(2)}


def _w4():
    return {(0, 0, 0, 1): 0.5, (0, 0, 1, 0): 0.5, (0, 1, 0, 0): 0.5, (1, 0, 0, 0): 0.5}


def _example2_phi():
    # (|10> + |21>)|0> + (|00> + |11> + |22>)|1>, over sqrt(5)
    digits = [(1, 0, 0), (2, 1, 0), (0, 0, 1), (1, 1, 1), (2, 2, 1)]
    return {k: 1 / np.sqrt(5) for k in digits}


NAMED_STATES = {
    "ghz3": ((2, 2, 2), lambda: _ghz(3)),
    "ghz4": ((2, 2, 2, 2), lambda: _ghz(4)),
    "w4": ((2, 2, 2, 2), _w4),
    "example2_phi": ((3, 3, 2), _example2_phi),
}


def named_state(name):
    """
    One of the fixed pure states: ghz3, ghz4, w4, example2_phi.

    Returns:
        DensityMatrix: The pure state with its dims
    """
    if name not in NAMED_STATES:
        raise InputError(f"unknown state '{name}'; choose from {', '.join(NAMED_STATES)}")
    dims, terms = NAMED_STATES[name]
    return pure_state(ket(terms(), dims), dims)


def maximally_mixed(dims):
    dims = _check_dims(dims)
    size = int(np.prod(dims))
    return DensityMatrix(dims, np.eye(size) / size)


def mixture(states, weights):
    """
    Convex combination sum_z w_z rho_z of states with equal dims.

    Args:
        states (sequence): DensityMatrix values
        weights (sequence): Non-negative weights summing to 1

    Returns:
        DensityMatrix: The mixture
    """
    weights = np.asarray(weights, dtype=float)
    if len(states) != weights.size or not states:
        raise InputError("need one weight per state and at least one state")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > STATE_TOL:
        raise ParameterError(f"mixture weights must be a probability vector, got {weights}")
    dims = states[0].dims
    if any(s.dims != dims for s in states):
        raise DimensionError("mixture components have different dims")
    matrix = sum(w * s.matrix for w, s in zip(weights, states))
    return DensityMatrix(dims, (matrix + matrix.conj().T) / 2)


@dataclass(frozen=True, eq=False)
class NoisyStateFamily:
    """
    White-noise family of a pure state.

    orientation "pure":  rho(x) = (1-x) I/D + x |psi><psi|
    orientation "noise": rho(x) = x I/D + (1-x) |psi><psi|
    """

    name: str
    base_pure_state: DensityMatrix
    orientation: str
    noise_parameter_name: str = "x"

    @property
    def dims(self):
        return self.base_pure_state.dims

    def pure_weight(self, x):
        return x if self.orientation == "pure" else 1.0 - x


def noisy_family(base, orientation=None):
    """
    Build the white-noise family of a named state or a pure DensityMatrix.

    Args:
        base (str or DensityMatrix): State name or pure state
        orientation (str): "pure" or "noise"; named states default to their
            orientation in FAMILY_ORIENTATION, other states to "pure"

    Returns:
        NoisyStateFamily: The family
    """
    if isinstance(base, str):
        name = base
        state = named_state(base)
        orientation = orientation or FAMILY_ORIENTATION.get(base, "pure")
    else:
        name = "custom"
        state = base
        orientation = orientation or "pure"
        if abs(state.purity() - 1.0) > STATE_TOL:
            raise InputError(f"noise families need a pure base state, purity is {state.purity():.10f}")

    if orientation not in ORIENTATIONS:
        raise InputError(f"orientation must be one of {ORIENTATIONS}, got '{orientation}'")
    return NoisyStateFamily(name=name, base_pure_state=state, orientation=orientation)


def evaluate(family, x):
    """
    rho(x) of a noisy family.

    Args:
        family (NoisyStateFamily): The family
        x (float): Parameter in [0, 1]

    Returns:
        DensityMatrix: rho(x)
    """
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"{family.noise_parameter_name} must lie in [0, 1], got {x}")
    size = family.base_pure_state.size
    weight = family.pure_weight(x)
    # white noise is I/D; the pure part keeps the remaining weight
    matrix = (1.0 - weight) * np.eye(size) / size + weight * family.base_pure_state.matrix
    return DensityMatrix(family.dims, matrix)


def partial_trace(state, keep):
    """
    Reduced state on the 1-based labels in keep, in ascending label order.

    Args:
        state (DensityMatrix): Full state
        keep (sequence): Labels to keep

    Returns:
        numpy.ndarray: Reduced density matrix
    """
    dims = state.dims
    n = len(dims)
    keep = sorted(set(keep))
    if not keep or any(not 1 <= k <= n for k in keep):
        raise InputError(f"labels {keep} out of range for {n} parties")

    # axes: kets 0..n-1, bras n..2n-1
    tensor = state.matrix.reshape(dims + dims)
    traced = [k for k in range(1, n + 1) if k not in keep]
    # trace highest label first so remaining axis positions stay valid
    for k in sorted(traced, reverse=True):
        current_n = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=k - 1, axis2=current_n + k - 1)
    size = int(np.prod([dims[k - 1] for k in keep]))
    return tensor.reshape(size, size)


def load_state(path):
    """
    Load a state file: {dims, amplitudes} for pure or {dims, matrix} for mixed.

    Returns:
        DensityMatrix: The loaded state
    """
    document = DocumentStore().load(path)
    if "dims" not in document:
        raise InputError(f"state file {path} has no 'dims'")
    dims = _check_dims(document["dims"])

    if "amplitudes" in document:
        amplitudes = [pair_to_complex(v) for v in document["amplitudes"]]
        state = pure_state(amplitudes, dims)
    elif "matrix" in document:
        state = DensityMatrix(dims, pairs_to_matrix(document["matrix"]))
    else:
        raise InputError(f"state file {path} needs 'amplitudes' or 'matrix'")

    logging.info(f"Loaded state with dims {dims} from {path}")
    return state


def save_state(state, path, amplitudes=None):
    """Write a state file; pure states may be saved by their amplitudes."""
    if amplitudes is not None:
        document = {"dims": list(state.dims), "amplitudes": [complex_to_pair(a) for a in amplitudes]}
    else:
        document = state.to_document()
    return DocumentStore().save(path, document)


def resolve_state(spec):
    """A named state or a state file path."""
    if spec in NAMED_STATES:
        return named_state(spec)
    return load_state(spec)
