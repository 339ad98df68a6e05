#!/usr/bin/env python3
"""
Complete orthogonal bases (COB) and the GSICM measurements they induce.

A COB for dimension d is a set of d^2 Hermitian d x d operators A_a with
Tr(A_a A_b) = delta_ab / d and sum_a A_a = I. Each then has trace 1/d.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from ..config import COB_TOL, DEFAULT_BASIS_BY_DIM, HERMITIAN_TOL, STATE_TOL
from ..utils.errors import (
    BasisValidationError, DimensionError, InputError, ParameterError,
)
from ..utils.file_store import DocumentStore
from ..utils.text_utils import matrix_to_pairs, pairs_to_matrix


def _frozen(array):
    array = np.array(array, dtype=complex)
    adjoint = array.conj().swapaxes(-1, -2)
    if array.size and np.max(np.abs(array - adjoint)) > HERMITIAN_TOL:
        array = (array + adjoint) / 2
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class COBasis:
    """A validated complete orthogonal basis for one subsystem."""

    dim: int
    operators: np.ndarray  # shape (d^2, d, d), read-only
    label: str
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "operators", _frozen(self.operators))

    def __len__(self):
        return self.operators.shape[0]

    def __getitem__(self, alpha):
        """0-based access; A_1 of the printed tables is basis[0]."""
        return self.operators[alpha]

    def to_document(self):
        return {
            "dim": self.dim,
            "label": self.label,
            "provenance": self.provenance,
            "operators": [matrix_to_pairs(op) for op in self.operators],
        }


@dataclass(frozen=True, eq=False)
class GSICM:
    """General symmetric informationally complete measurement P_a = lam A_a + (1-lam) I/d^2."""

    dim: int
    operators: np.ndarray
    purity_parameter: float
    mixing_parameter: float
    overlap_residual: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "operators", _frozen(self.operators))

    def probabilities(self, rho):
        """p_a = Tr(rho P_a) for a d x d density matrix."""
        rho = np.asarray(rho)
        values = np.einsum("ij,aji->a", rho, self.operators)
        return values.real.copy()


@dataclass(frozen=True)
class ValidationReport:
    """Residuals of the COB conditions for a candidate operator set."""

    label: str
    dim: int
    count: int
    orthogonality_residual: float
    worst_pair: tuple
    completeness_residual: float
    hermiticity_residual: float
    trace_residual: float
    tol: float
    passed: bool
    pair_residuals: tuple = field(default=(), repr=False)

    def summary(self):
        a, b = self.worst_pair
        return (
            f"orthogonality {self.orthogonality_residual:.3e} at (A{a}, A{b}), "
            f"completeness {self.completeness_residual:.3e}, "
            f"hermiticity {self.hermiticity_residual:.3e}, "
            f"trace {self.trace_residual:.3e}, tol {self.tol:.1e}: "
            f"{'PASS' if self.passed else 'FAIL'}"
        )

    def failing_pairs(self):
        """1-based (a, b, residual) for every pair with a <= b above tol."""
        return [p for p in self.pair_residuals if p[2] > self.tol]

    def to_dict(self):
        return {
            "label": self.label,
            "dim": self.dim,
            "count": self.count,
            "orthogonality_residual": self.orthogonality_residual,
            "worst_pair": list(self.worst_pair),
            "completeness_residual": self.completeness_residual,
            "hermiticity_residual": self.hermiticity_residual,
            "trace_residual": self.trace_residual,
            "tol": self.tol,
            "passed": self.passed,
            "failing_pairs": [list(p) for p in self.failing_pairs()],
        }


def _stack(ops):
    try:
        stack = np.array([np.asarray(op, dtype=complex) for op in ops])
    except ValueError:
        raise DimensionError("operators have mixed dimensions")
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise DimensionError(f"operators must be square matrices of one size, got {stack.shape}")
    return stack


def validate_cob(ops, tol=COB_TOL, label="unnamed"):
    """
    Measure the orthogonality, completeness and Hermiticity residuals.

    Args:
        ops (sequence): d^2 square matrices of a common dimension d
        tol (float): Pass threshold for every residual
        label (str): Name echoed in the report

    Returns:
        ValidationReport: Residuals and pass/fail
    """
    stack = _stack(ops)
    count, d = stack.shape[0], stack.shape[1]
    if count != d * d:
        raise InputError(f"a COB for d={d} needs {d * d} operators, got {count}")

    # Tr(A_a A_b) against delta_ab / d
    gram = np.einsum("aij,bji->ab", stack, stack)
    residuals = np.abs(gram - np.eye(count) / d)
    worst = np.unravel_index(int(np.argmax(residuals)), residuals.shape)
    # upper triangle, 1-based labels
    pairs = tuple(
        (a + 1, b + 1, float(residuals[a, b]))
        for a in range(count) for b in range(a, count)
    )

    completeness = float(np.linalg.norm(stack.sum(axis=0) - np.eye(d)))
    hermiticity = float(np.max(np.abs(stack - stack.conj().transpose(0, 2, 1))))
    traces = np.einsum("aii->a", stack)
    trace_residual = float(np.max(np.abs(traces - 1.0 / d)))
    ortho = float(residuals.max())

    passed = max(ortho, completeness, hermiticity, trace_residual) <= tol
    report = ValidationReport(
        label=label,
        dim=d,
        count=count,
        orthogonality_residual=ortho,
        worst_pair=(int(worst[0]) + 1, int(worst[1]) + 1),
        completeness_residual=completeness,
        hermiticity_residual=hermiticity,
        trace_residual=trace_residual,
        tol=tol,
        passed=passed,
        pair_residuals=pairs,
    )
    logging.debug(f"Validated {label}: {report.summary()}")
    return report


# Printed bases. Entries are the symbolic constants evaluated in double precision.

def _construction1_d2():
    return [
        [[1 / 2, (1 - 1j) / 4], [(1 + 1j) / 4, 0]],
        [[0, (-1 - 1j) / 4], [(-1 + 1j) / 4, 1 / 2]],
        [[0, (1 + 1j) / 4], [(1 - 1j) / 4, 1 / 2]],
        [[1 / 2, (-1 + 1j) / 4], [(-1 - 1j) / 4, 0]],
    ]


def _construction2_d3():
    s2, s3, s5, s7, s15 = (np.sqrt(v) for v in (2, 3, 5, 7, 15))
    p = (-7 + 3j * s7) / (84 * s3)
    q = 1j / (6 * s5) - 1 / (6 * s7)
    r = -(-5j + s15) / (30 * s2)
    pc, qc, rc = np.conj(p), np.conj(q), np.conj(r)
    t = (-1 - 3j * s7) / (12 * s3)
    u = -1j * s5 / 6 - 1 / (6 * s7)
    v = -(15j + s15) / (30 * s2)
    w = -(-15j + s15) / (30 * s2)
    return [
        [[-2 / 9, p, q], [pc, 1 / 9, r], [qc, rc, 4 / 9]],
        [[1 / 9, 2 / (3 * s3), 0], [2 / (3 * s3), 1 / 9, 0], [0, 0, 1 / 9]],
        [[1 / 9, t, 0], [np.conj(t), 1 / 9, 0], [0, 0, 1 / 9]],
        [[1 / 9, p, 1 / s7], [pc, 1 / 9, 0], [1 / s7, 0, 1 / 9]],
        [[1 / 9, p, u], [pc, 1 / 9, 0], [np.conj(u), 0, 1 / 9]],
        [[1 / 9, p, q], [pc, 1 / 9, np.sqrt(2 / 15)], [qc, np.sqrt(2 / 15), 1 / 9]],
        [[1 / 9, p, q], [pc, 1 / 9, v], [qc, w, 1 / 9]],
        [[4 / 9, p, q], [pc, -2 / 9, r], [qc, rc, 1 / 9]],
        [[1 / 9, p, q], [pc, 4 / 9, r], [qc, rc, -2 / 9]],
    ]


def _construction2_d2():
    s2, s3, s6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)
    z = -1 / (4 * s3) + 1j / (2 * s6)
    y = -1 / (4 * s3) - 1j / s6
    return [
        [[1 / 4 - 1 / (2 * s2), z], [np.conj(z), 1 / 4 + 1 / (2 * s2)]],
        [[1 / 4, s3 / 4], [s3 / 4, 1 / 4]],
        [[1 / 4, y], [np.conj(y), 1 / 4]],
        [[1 / 4 + 1 / (2 * s2), z], [np.conj(z), 1 / 4 - 1 / (2 * s2)]],
    ]


BUILTIN_BASES = {
    "construction1-d2": (_construction1_d2, "qubit basis from construction 1"),
    "construction2-d3": (_construction2_d3, "qutrit basis from construction 2, A7 as printed (15i)"),
    "construction2-d2": (_construction2_d2, "qubit basis from construction 2"),
}


@lru_cache(maxsize=None)
def builtin_basis(name):
    """
    Return one of the printed bases, validated at load time.

    Args:
        name (str): construction1-d2, construction2-d2 or construction2-d3

    Returns:
        COBasis: The validated basis

    Raises:
        InputError: unknown name
        BasisValidationError: the printed matrices fail validation
    """
    if name not in BUILTIN_BASES:
        raise InputError(f"unknown basis '{name}'; choose from {', '.join(BUILTIN_BASES)}")

    builder, provenance = BUILTIN_BASES[name]
    ops = np.array(builder(), dtype=complex)
    report = validate_cob(ops, label=name)
    if not report.passed:
        logging.error(f"Built-in basis {name} failed validation: {report.summary()}")
        raise BasisValidationError(report)

    logging.debug(f"Loaded built-in basis {name}")
    return COBasis(dim=ops.shape[1], operators=ops, label=name, provenance=provenance)


def gell_mann_basis(d):
    """
    Orthonormal Hermitian operator basis {I/sqrt(d), normalized generalized Gell-Mann}.

    Returns:
        numpy.ndarray: shape (d^2, d, d); element 0 is I/sqrt(d), the rest traceless
    """
    basis = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            # real symmetric and imaginary antisymmetric pair for (j, k)
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1
            basis.append(sym / np.sqrt(2))
            asym = np.zeros((d, d), dtype=complex)
            asym[j, k] = -1j
            asym[k, j] = 1j
            basis.append(asym / np.sqrt(2))
    # traceless diagonals
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        basis.append(np.diag(diag).astype(complex) / np.sqrt(l * (l + 1)))
    return np.array(basis)


def generate_cob(d, seed=0):
    """
    Build a COB for any d >= 2 from a seeded orthogonal completion.

    A_a = (1/sqrt(d)) sum_j R[a, j] B_j where B is the orthonormal Gell-Mann
    basis and R is orthogonal with first column (1/d, ..., 1/d).

    Args:
        d (int): Local dimension
        seed (int): Seed for the completion

    Returns:
        COBasis: Validated basis labelled generated-d{d}-s{seed}
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InputError(f"generate_cob needs an integer d >= 2, got {d}")

    n = d * d
    rng = np.random.default_rng(seed)
    seedling = rng.standard_normal((n, n))
    # a constant first column becomes (1/d, ..., 1/d) after QR
    seedling[:, 0] = 1.0
    q, r = np.linalg.qr(seedling)
    # QR fixes columns only up to sign; keep diag(r) positive
    q = q * np.sign(np.diag(r))

    ops = np.einsum("aj,jkl->akl", q, gell_mann_basis(d)) / np.sqrt(d)
    label = f"generated-d{d}-s{seed}"
    report = validate_cob(ops, label=label)
    if not report.passed:
        raise BasisValidationError(report)

    logging.debug(f"Generated basis {label}")
    return COBasis(dim=d, operators=ops, label=label, provenance=f"seeded completion, seed {seed}")


def resolve_basis(spec, dim=None, seed=0):
    """
    Resolve a basis name, file path or None into a COBasis.

    None picks the default for the dimension, or a generated basis.
    """
    if spec is None:
        if dim is None:
            raise InputError("cannot choose a default basis without a dimension")
        name = DEFAULT_BASIS_BY_DIM.get(dim)
        return builtin_basis(name) if name else generate_cob(dim, seed)
    if spec in BUILTIN_BASES:
        return builtin_basis(spec)
    if spec.startswith("generated-d"):
        try:
            d_part, s_part = spec[len("generated-d"):].split("-s")
            return generate_cob(int(d_part), int(s_part))
        except ValueError:
            raise InputError(f"malformed generated basis label '{spec}'")
    return load_basis(spec)


def gsicm_from_cob(basis, lam):
    """
    P_a = lam A_a + (1 - lam) I / d^2.

    Args:
        basis (COBasis): Source basis
        lam (float): Mixing parameter in (0, 1/sqrt(d+1)]

    Returns:
        GSICM: With purity parameter a = Tr(P_a^2)
    """
    d = basis.dim
    upper = 1.0 / np.sqrt(d + 1)
    if not (0.0 < lam <= upper + 1e-15):
        raise ParameterError(f"lambda must lie in (0, {upper:.6f}], got {lam}")

    ops = lam * basis.operators + (1.0 - lam) * np.eye(d) / d**2
    # every P_a must be a positive operator
    min_eigenvalue = min(float(scipy.linalg.eigvalsh(p).min()) for p in ops)
    if min_eigenvalue < -COB_TOL:
        raise ParameterError(
            f"lambda={lam} makes a measurement operator non-positive "
            f"(min eigenvalue {min_eigenvalue:.3e})"
        )

    gram = np.einsum("aij,bji->ab", ops, ops).real
    purities = np.diag(gram)
    if np.ptp(purities) > COB_TOL:
        raise ParameterError(f"purity is not constant over operators (spread {np.ptp(purities):.3e})")

    a = float(purities.mean())
    if not 1.0 / d**3 < a <= 1.0 / d**2 + COB_TOL:
        raise ParameterError(f"purity parameter {a:.12f} outside (1/d^3, 1/d^2]")

    # distinct operators must all overlap by (1 - d a) / (d (d^2 - 1))
    overlap = (1.0 - d * a) / (d * (d * d - 1))
    off_diagonal = gram[~np.eye(d * d, dtype=bool)]
    residual = float(np.max(np.abs(off_diagonal - overlap)))
    if residual > COB_TOL:
        raise ParameterError(f"pairwise overlaps deviate from {overlap:.6e} by {residual:.3e}")

    return GSICM(dim=d, operators=ops, purity_parameter=a, mixing_parameter=float(lam),
                 overlap_residual=residual)


def probabilities_bridge(p, a, lam, d):
    """
    Convert GSICM outcome probabilities into COB coefficients.

    mu_a = lam (d^2-1) / (a d^3 - 1) p_a + 1/d^2 - lam (d^2-1) / (d^2 (a d^3 - 1))

    Args:
        p (sequence): d^2 probabilities summing to 1
        a (float): Purity parameter of the GSICM
        lam (float): Mixing parameter of the GSICM
        d (int): Local dimension

    Returns:
        numpy.ndarray: mu_a = Tr(rho A_a)
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (d * d,):
        raise DimensionError(f"expected {d * d} probabilities, got shape {p.shape}")
    if abs(p.sum() - 1.0) > STATE_TOL:
        raise ParameterError(f"probabilities sum to {p.sum():.12f}, not 1")

    denominator = a * d**3 - 1.0
    if abs(denominator) < 1e-15:
        raise ParameterError("a d^3 = 1 makes the conversion singular")

    scale = lam * (d * d - 1) / denominator
    return scale * p + 1.0 / d**2 - scale / d**2


def load_basis(path, tol=COB_TOL):
    """
    Load and validate a basis file {dim, label, operators}.

    Raises:
        InputError: unreadable or malformed file
        BasisValidationError: operators fail validation
    """
    document = DocumentStore().load(path)
    try:
        dim = int(document["dim"])
        ops = np.array([pairs_to_matrix(op) for op in document["operators"]])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed basis file {path}: {e}")

    label = str(document.get("label", path))
    if ops.ndim != 3 or ops.shape[1] != dim:
        raise DimensionError(f"basis file {path} declares dim {dim} but holds shape {ops.shape}")

    report = validate_cob(ops, tol=tol, label=label)
    if not report.passed:
        raise BasisValidationError(report)

    logging.info(f"Loaded basis {label} (d={dim}) from {path}")
    return COBasis(dim=dim, operators=ops, label=label, provenance=document.get("provenance", path))


def save_basis(basis, path):
    """Write a basis in the {dim, label, operators} file format."""
    return DocumentStore().save(path, basis.to_document())
