#!/usr/bin/env python3
"""
Dense matrix primitives and norms used by every other module.

Matrices are plain numpy arrays: complex for operators and states, real for
criterion matrices.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..config import SVD_RELATIVE_CUTOFF, ORACLE_EIGEN_CUTOFF, IMAG_TOL, PSD_TOL
from ..utils.errors import DimensionError, NumericalIntegrityError


def kron(a, b):
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(matrices):
    """Kronecker product of a non-empty sequence, left to right."""
    result = np.asarray(matrices[0])
    for m in matrices[1:]:
        result = np.kron(result, m)
    return result


def _finite_matrix(m):
    m = np.asarray(m)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalIntegrityError("matrix has non-finite entries")
    return m


def singular_values(m):
    """
    Singular values with those below SVD_RELATIVE_CUTOFF * max set to zero.

    Args:
        m (array_like): Real or complex matrix

    Returns:
        numpy.ndarray: Singular values, descending
    """
    m = _finite_matrix(m)
    if m.size == 0:
        return np.zeros(0)
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros_like(s)
    # drop rounding noise relative to the largest value
    s[s < SVD_RELATIVE_CUTOFF * s[0]] = 0.0
    return s


def trace_norm(m):
    """
    Trace (nuclear) norm: the sum of singular values.

    Args:
        m (array_like): Finite real matrix

    Returns:
        float: ||m||_tr
    """
    return float(np.sum(singular_values(m)))


def frobenius_norm(m):
    """Euclidean norm of the entries."""
    return float(np.linalg.norm(_finite_matrix(m)))


def trace_norm_oracle(m):
    """
    Trace norm through the eigenvalues of the smaller Gram matrix.

    Independent of the SVD path; tests compare the two.

    Args:
        m (array_like): Finite real matrix

    Returns:
        float: Sum of square roots of the eigenvalues of M^T M
    """
    m = _finite_matrix(m)
    if m.size == 0:
        return 0.0
    # the smaller Gram matrix has the same nonzero spectrum
    gram = m @ m.conj().T if m.shape[0] <= m.shape[1] else m.conj().T @ m
    eigenvalues = scipy.linalg.eigvalsh(gram)
    top = eigenvalues.max()
    if top <= 0.0:
        return 0.0
    eigenvalues = np.where(eigenvalues > ORACLE_EIGEN_CUTOFF * top, eigenvalues, 0.0)
    return float(np.sum(np.sqrt(eigenvalues)))


def hermitian_residual(m):
    """max |M[i, j] - conj(M[j, i])|."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def real_part_checked(values, tol=IMAG_TOL, what="value"):
    """
    Return the real part after checking that the imaginary residue is small.

    Raises:
        NumericalIntegrityError: residue above tol, or non-finite entries
    """
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        raise NumericalIntegrityError(f"{what} has non-finite entries")
    if np.iscomplexobj(values):
        residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
        if residue > tol:
            raise NumericalIntegrityError(
                f"{what} has imaginary residue {residue:.3e} above {tol:.1e}"
            )
        return np.ascontiguousarray(values.real)
    return values.astype(float)


@dataclass(frozen=True)
class DensityCheck:
    """Outcome of is_density_matrix with the measured residuals."""

    is_valid: bool
    hermitian_residual: float
    trace_residual: float
    min_eigenvalue: float
    tol: float

    def __bool__(self):
        return self.is_valid

    def summary(self):
        return (
            f"hermitian residual {self.hermitian_residual:.3e}, "
            f"trace residual {self.trace_residual:.3e}, "
            f"min eigenvalue {self.min_eigenvalue:.3e} (tol {self.tol:.1e})"
        )


def is_density_matrix(m, tol=PSD_TOL):
    """
    Check Hermiticity, unit trace and positivity, all within tol.

    Args:
        m (array_like): Square matrix
        tol (float): Tolerance for every check

    Returns:
        DensityCheck: Truthy iff m is a density matrix
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"density matrix must be square, got shape {m.shape}")

    herm = hermitian_residual(m)
    trace_residual = abs(complex(np.trace(m)) - 1.0)
    # eigvalsh reads one triangle only, so symmetrize first
    min_eigenvalue = float(scipy.linalg.eigvalsh((m + m.conj().T) / 2).min())

    valid = herm <= tol and trace_residual <= tol and min_eigenvalue >= -tol
    return DensityCheck(valid, herm, trace_residual, min_eigenvalue, tol)
