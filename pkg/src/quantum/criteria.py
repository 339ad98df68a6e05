#!/usr/bin/env python3
"""
Criterion matrices, separability bounds and verdicts.

Tripartite (parties f|gh, g < h the remaining labels):
  thm1     ||B^{f|gh}|| against one clause of the biseparable bounds
  thm2     mean of the three ||B^{f|gh}|| against (Q1 + Q2 + Q3) / 3
  thm2cut  same statistic against the cut-wise bound (never looser)
  cor1     same statistic against the equal-dimension closed form
n-partite:
  thm3     mode-1 unfolding on label 1 against sqrt(1 / prod d)
  thm4i    mode-1 unfolding on label l1 against sqrt(1 / prod d)
  thm4ii   partition matrix against sqrt(d_ln / prod d)

All labels are 1-based. A margin above zero means entanglement is detected;
margins within BORDERLINE_TOL of zero are inconclusive and flagged.
"""
import logging
from dataclasses import dataclass, field, asdict
from math import sqrt
from typing import Optional

import numpy as np

from ..config import BORDERLINE_TOL, DEFAULT_COEFFS
from ..utils.errors import DimensionError, InputError, ParameterError
from ..utils.text_utils import format_partition, parse_partition
from .correlations import correlation_tensor
from .numerics import trace_norm

CRITERIA = ("thm1", "thm2", "thm2cut", "cor1", "thm3", "thm4i", "thm4ii")
CLAUSES = ("i", "ii", "iii")
CONVENTIONS = ("averaged", "active_partition")
COMPETITORS = ("g1", "g3", "g4", "g5")

DETECTED = "entanglement_detected"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PartitionSpec:
    """Ordered disjoint groups of 1-based labels covering 1..n."""

    n: int
    groups: tuple

    def __post_init__(self):
        groups = tuple(tuple(int(l) for l in g) for g in self.groups)
        labels = [l for g in groups for l in g]
        if any(not g for g in groups):
            raise InputError("partition groups must be non-empty")
        if sorted(labels) != list(range(1, self.n + 1)):
            raise InputError(f"partition {format_partition(groups)} does not cover 1..{self.n} exactly once")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def parse(cls, text, n=None):
        groups = parse_partition(text)
        if n is None:
            n = sum(len(g) for g in groups)
        return cls(n, groups)

    @classmethod
    def cut(cls, f, n=3):
        """Single-party cut f | rest."""
        return cls(n, ((f,), tuple(l for l in range(1, n + 1) if l != f)))

    @property
    def k(self):
        return len(self.groups)

    def __str__(self):
        return format_partition(self.groups)


@dataclass(frozen=True)
class TripartiteCoefficients:
    """Weights (c_f1, c_f2) of the two blocks of B^{f|gh} for f = 1, 2, 3."""

    c11: float = DEFAULT_COEFFS[0]
    c12: float = DEFAULT_COEFFS[1]
    c21: float = DEFAULT_COEFFS[2]
    c22: float = DEFAULT_COEFFS[3]
    c31: float = DEFAULT_COEFFS[4]
    c32: float = DEFAULT_COEFFS[5]

    def __post_init__(self):
        if not all(np.isfinite(v) for v in self.as_tuple()):
            raise ParameterError("coefficients must be finite")

    @classmethod
    def from_sequence(cls, values):
        values = tuple(float(v) for v in values)
        if len(values) != 6:
            raise InputError(f"expected 6 coefficients, got {len(values)}")
        return cls(*values)

    def as_tuple(self):
        return (self.c11, self.c12, self.c21, self.c22, self.c31, self.c32)

    def for_party(self, f):
        values = self.as_tuple()
        return values[2 * (f - 1)], values[2 * (f - 1) + 1]


@dataclass(frozen=True)
class Theorem1Bounds:
    """Right-hand sides for the cuts f|gh (i), g|fh (ii) and h|fg (iii)."""

    i: float
    ii: float
    iii: float

    def clause(self, name):
        return getattr(self, name)

    def max(self):
        return max(self.i, self.ii, self.iii)


@dataclass(frozen=True)
class CriterionSpec:
    """Which criterion to evaluate and with which parameters."""

    criterion: str
    coeffs: TripartiteCoefficients = field(default_factory=TripartiteCoefficients)
    party: int = 1
    clause: str = "i"
    partition: Optional[PartitionSpec] = None
    convention: str = "averaged"

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise InputError(f"unknown criterion '{self.criterion}'; choose from {', '.join(CRITERIA)}")
        if self.clause not in CLAUSES:
            raise InputError(f"clause must be one of {CLAUSES}, got '{self.clause}'")
        if self.convention not in CONVENTIONS:
            raise InputError(f"convention must be one of {CONVENTIONS}, got '{self.convention}'")
        if self.criterion == "thm4ii" and self.partition is None:
            raise InputError("thm4ii needs a partition")


@dataclass
class CriterionReport:
    """Norms, bounds, margin and verdict of one criterion evaluation."""

    criterion: str
    dims: tuple
    basis_labels: tuple
    statistic: float
    bound: float
    margin: float
    verdict: str
    borderline: bool
    norms: dict
    bounds: dict
    coefficients: Optional[dict] = None
    party: Optional[int] = None
    clause: Optional[str] = None
    partition: Optional[str] = None
    convention: Optional[str] = None
    notes: list = field(default_factory=list)

    @property
    def detected(self):
        return self.verdict == DETECTED

    def to_dict(self):
        data = asdict(self)
        data["dims"] = list(self.dims)
        data["basis_labels"] = list(self.basis_labels)
        return data


def _remaining(f, n=3):
    return tuple(l for l in range(1, n + 1) if l != f)


def _check_tripartite(tensor):
    if tensor.n_parties != 3:
        raise DimensionError(f"tripartite tensor required, got {tensor.n_parties} parties")


def _check_label(label, n):
    if not isinstance(label, (int, np.integer)) or not 1 <= label <= n:
        raise InputError(f"party label {label} out of range 1..{n}")


def b_matrix_tripartite(tensor, f, c_f1, c_f2):
    """
    B^{f|gh} = c_f1 B1 + c_f2 B2, a d_f^2 x (d_f d_g^2 d_h^2) matrix.

    B1: the mode-f unfolding (column (a_g - 1) d_h^2 + a_h) in the first
    block of columns, zero elsewhere.
    B2: rows split into d_f groups of d_f rows; row r of group j sits in
    column block j and carries the mode-f row d_f^2 - r + 1 (1-based).

    Args:
        tensor (CorrelationTensor): Tripartite tensor
        f (int): Party on the single side
        c_f1 (float): Weight of B1
        c_f2 (float): Weight of B2

    Returns:
        numpy.ndarray: Real matrix
    """
    _check_tripartite(tensor)
    _check_label(f, 3)
    d_f = tensor.dims[f - 1]
    # party f to the front, (g, h) flattened with h fastest
    unfolded = np.moveaxis(tensor.values, f - 1, 0).reshape(d_f * d_f, -1)
    width = unfolded.shape[1]

    b1 = np.zeros((d_f * d_f, d_f * width))
    b1[:, :width] = unfolded

    b2 = np.zeros_like(b1)
    # row r of group j = r // d_f takes mode row d_f^2 - 1 - r, reversed order
    for r in range(d_f * d_f):
        j = r // d_f
        b2[r, j * width:(j + 1) * width] = unfolded[d_f * d_f - 1 - r]

    return c_f1 * b1 + c_f2 * b2


def theorem1_bounds(dims, f, c_f1, c_f2):
    """
    Bounds on ||B^{f|gh}|| for states separable under f|gh, g|fh and h|fg.

    Args:
        dims (tuple): (d1, d2, d3)
        f (int): Party on the single side of B
        c_f1, c_f2 (float): Block weights

    Returns:
        Theorem1Bounds: clauses i, ii, iii
    """
    if len(dims) != 3:
        raise DimensionError(f"three dimensions required, got {dims}")
    _check_label(f, 3)
    g, h = _remaining(f)
    d_f, d_g, d_h = dims[f - 1], dims[g - 1], dims[h - 1]
    # bounds use the weight magnitudes
    a1, a2 = abs(c_f1), abs(c_f2)
    base = sqrt(1.0 / (d_f * d_g * d_h))

    # f|gh, then g|fh, then h|fg
    first = a1 * base + a2 * sqrt(1.0 / (d_g * d_h))
    second = a1 * sqrt(min(d_f**2, d_h**2)) * base + a2 * sqrt(d_f / (d_g * d_h))
    third = a1 * sqrt(min(d_f**2, d_g**2)) * base + a2 * sqrt(d_f / (d_g * d_h))
    return Theorem1Bounds(first, second, third)


def clause_for_cut(f, k):
    """Clause of theorem1_bounds(f) that holds when the state is separable under k|rest."""
    if f == k:
        return "i"
    g, _ = _remaining(f)
    return "ii" if k == g else "iii"


def tripartite_norms(tensor, coeffs):
    """{"1|23": ||B^{1|23}||, "2|13": ..., "3|12": ...}."""
    _check_tripartite(tensor)
    norms = {}
    for f in (1, 2, 3):
        c1, c2 = coeffs.for_party(f)
        norms[str(PartitionSpec.cut(f))] = trace_norm(b_matrix_tripartite(tensor, f, c1, c2))
    return norms


def gme_statistic(tensor, coeffs, norms=None):
    """B(rho): mean of the three tripartite trace norms."""
    if norms is None:
        norms = tripartite_norms(tensor, coeffs)
    return float(np.mean(list(norms.values())))


def q_values(dims, coeffs):
    """(Q1, Q2, Q3): per-party maxima of the three clause bounds."""
    return tuple(theorem1_bounds(dims, f, *coeffs.for_party(f)).max() for f in (1, 2, 3))


def gme_bound(dims, coeffs):
    """(Q1 + Q2 + Q3) / 3."""
    return float(np.mean(q_values(dims, coeffs)))


def gme_cutwise_bound(dims, coeffs):
    """
    max over cuts k|ij of the mean of the clause bounds valid under that cut.

    Each biseparable pure term obeys the bound of its own cut, so the mean
    statistic of any biseparable mixture is at most this value.
    """
    per_cut = []
    for k in (1, 2, 3):
        total = 0.0
        for f in (1, 2, 3):
            bounds = theorem1_bounds(dims, f, *coeffs.for_party(f))
            total += bounds.clause(clause_for_cut(f, k))
        per_cut.append(total / 3.0)
    return float(max(per_cut))


def corollary1_bound(d, c11, c12):
    """
    (1/3)(c11 sqrt(1/d^3) + c12/d + 2 c11 sqrt(1/d) + 2 c12 sqrt(1/d)).

    Evaluated as written, without absolute values; callers keep c >= 0.
    """
    if d < 2:
        raise InputError(f"corollary bound needs d >= 2, got {d}")
    return (c11 * sqrt(1.0 / d**3) + c12 / d + 2 * c11 * sqrt(1.0 / d) + 2 * c12 * sqrt(1.0 / d)) / 3.0


def b_matrix_mode1(tensor, l1):
    """
    Mode-l1 unfolding: d_l1^2 rows, remaining labels ascending, last fastest.
    """
    _check_label(l1, tensor.n_parties)
    d = tensor.dims[l1 - 1]
    return np.moveaxis(tensor.values, l1 - 1, 0).reshape(d * d, -1)


def b_matrix_partition(tensor, partition):
    """
    Matrix for a k-group partition, with l_n the last label of the last group.

    Rows: (a, labels of the last group except l_n), a outer.
    Columns: (labels outside the last group in partition order, j), j inner.
    Entry: mu with a_ln = (j - 1) d_ln + a.

    Args:
        tensor (CorrelationTensor): n-partite tensor
        partition (PartitionSpec): At least two groups

    Returns:
        numpy.ndarray: (d_ln * prod_rest d^2) x (prod_outside d^2 * d_ln) matrix
    """
    n = tensor.n_parties
    if partition.n != n or partition.k < 2:
        raise InputError(f"partition {partition} does not fit a {n}-partite tensor")

    # rows come from the last group, columns from everything else
    last_group = partition.groups[-1]
    l_n = last_group[-1]
    rest = list(last_group[:-1])
    outside = [l for g in partition.groups[:-1] for l in g]
    d_ln = tensor.dims[l_n - 1]

    # split axis l_n into (j, a) so that a_ln = j * d_ln + a (0-based)
    values = tensor.values
    axis = l_n - 1
    shape = values.shape[:axis] + (d_ln, d_ln) + values.shape[axis + 1:]
    split = values.reshape(shape)

    def position(label):
        return label - 1 if label < l_n else label

    j_axis, a_axis = axis, axis + 1
    # row digits: a then the rest of the last group; column digits: outside labels then j
    order = [a_axis] + [position(l) for l in rest] + [position(l) for l in outside] + [j_axis]
    arranged = np.transpose(split, order)

    rows = d_ln * int(np.prod([tensor.dims[l - 1] ** 2 for l in rest]))
    return arranged.reshape(rows, -1)


def _verdict(margin):
    borderline = abs(margin) <= BORDERLINE_TOL
    if borderline:
        return INCONCLUSIVE, True
    return (DETECTED if margin > 0 else INCONCLUSIVE), False


def _coefficient_dict(coeffs):
    names = ("c11", "c12", "c21", "c22", "c31", "c32")
    return dict(zip(names, coeffs.as_tuple()))


def evaluate_tensor(tensor, spec):
    """
    Evaluate a criterion on an already computed correlation tensor.

    Args:
        tensor (CorrelationTensor): Coefficients of the state
        spec (CriterionSpec): Criterion and parameters

    Returns:
        CriterionReport: Statistic, bound, margin and verdict
    """
    dims = tensor.dims
    n = tensor.n_parties
    name = spec.criterion
    extra = {}
    notes = []

    if name in ("thm1", "thm2", "thm2cut", "cor1"):
        _check_tripartite(tensor)
        coeffs = spec.coeffs
        extra["coefficients"] = _coefficient_dict(coeffs)

        if name == "thm1":
            _check_label(spec.party, 3)
            c1, c2 = coeffs.for_party(spec.party)
            key = str(PartitionSpec.cut(spec.party))
            statistic = trace_norm(b_matrix_tripartite(tensor, spec.party, c1, c2))
            clause_bounds = theorem1_bounds(dims, spec.party, c1, c2)
            norms = {key: statistic}
            bounds = asdict(clause_bounds)
            bound = clause_bounds.clause(spec.clause)
            extra.update(party=spec.party, clause=spec.clause)
        else:
            norms = tripartite_norms(tensor, coeffs)
            if name == "thm2":
                qs = q_values(dims, coeffs)
                bounds = {"Q1": qs[0], "Q2": qs[1], "Q3": qs[2]}
                if spec.convention == "active_partition":
                    # drop cuts whose coefficients are both zero
                    active = [f for f in (1, 2, 3) if any(coeffs.for_party(f))]
                    if not active:
                        raise ParameterError("all coefficients are zero; no active partition")
                    keys = [str(PartitionSpec.cut(f)) for f in active]
                    statistic = float(np.mean([norms[k] for k in keys]))
                    bound = float(np.mean([qs[f - 1] for f in active]))
                    notes.append(f"statistic and bound averaged over active partitions {', '.join(keys)}")
                else:
                    statistic = gme_statistic(tensor, coeffs, norms)
                    bound = float(np.mean(qs))
                extra["convention"] = spec.convention
            elif name == "thm2cut":
                # same statistic, bound taken cut by cut
                statistic = gme_statistic(tensor, coeffs, norms)
                bound = gme_cutwise_bound(dims, coeffs)
                bounds = {"cutwise": bound, "theorem2": gme_bound(dims, coeffs)}
            else:
                if len(set(dims)) != 1:
                    raise InputError(f"cor1 needs equal local dimensions, got {dims}")
                c = coeffs.as_tuple()
                if not (c[0] == c[2] == c[4] and c[1] == c[3] == c[5]):
                    raise ParameterError("cor1 needs c11 = c21 = c31 and c12 = c22 = c32")
                if c[0] < 0 or c[1] < 0:
                    raise ParameterError("cor1 is evaluated as written and needs c11, c12 >= 0")
                statistic = gme_statistic(tensor, coeffs, norms)
                bound = corollary1_bound(dims[0], c[0], c[1])
                bounds = {"corollary1": bound}

    elif name in ("thm3", "thm4i"):
        # full separability is checked through the first label
        l1 = 1 if name == "thm3" else spec.party
        _check_label(l1, n)
        statistic = trace_norm(b_matrix_mode1(tensor, l1))
        bound = sqrt(1.0 / float(np.prod(dims)))
        rest = "".join(str(l) for l in range(1, n + 1) if l != l1)
        key = "|".join(str(l) for l in range(1, n + 1)) if name == "thm3" else f"{l1}|{rest}"
        norms = {key: statistic}
        bounds = {name: bound}
        extra["party"] = l1

    else:
        partition = spec.partition
        statistic = trace_norm(b_matrix_partition(tensor, partition))
        d_ln = dims[partition.groups[-1][-1] - 1]
        # only the split party contributes its dimension to the bound
        bound = sqrt(d_ln / float(np.prod(dims)))
        norms = {str(partition): statistic}
        bounds = {name: bound}
        extra["partition"] = str(partition)

    # positive margin means the state is detected
    margin = statistic - bound
    verdict, borderline = _verdict(margin)
    if borderline:
        logging.warning(f"{name}: margin {margin:.3e} is within {BORDERLINE_TOL:.0e} of zero")

    return CriterionReport(
        criterion=name,
        dims=dims,
        basis_labels=tensor.basis_labels,
        statistic=float(statistic),
        bound=float(bound),
        margin=float(margin),
        verdict=verdict,
        borderline=borderline,
        norms=norms,
        bounds={k: float(v) for k, v in bounds.items()},
        notes=notes,
        **extra,
    )


def evaluate_criterion(rho, bases, spec):
    """
    Compute the correlation tensor of rho and evaluate one criterion.

    Args:
        rho (DensityMatrix): The state
        bases (sequence): One COBasis per subsystem
        spec (CriterionSpec): Criterion and parameters

    Returns:
        CriterionReport: The report
    """
    return evaluate_tensor(correlation_tensor(rho, bases), spec)


def competitor_curves(name, x):
    """
    Detection curves from other criteria; positive means detected.

      g1(x) = 2 - 2x - sqrt(3)
      g3(x) = 9x^2 - 4
      g4(x) = sqrt(1 + x^2) + 2 sqrt(2) x + (x - x^2)/(1 + x^2) - 4
      g5(x) = (4 + 2x^2) / (2 sqrt(4 + x^2)) + x - 2
    """
    x = float(x)
    if name == "g1":
        return 2.0 - 2.0 * x - sqrt(3.0)
    if name == "g3":
        return 9.0 * x * x - 4.0
    if name == "g4":
        return sqrt(1.0 + x * x) + 2.0 * sqrt(2.0) * x + (x - x * x) / (1.0 + x * x) - 4.0
    if name == "g5":
        return (4.0 + 2.0 * x * x) / (2.0 * sqrt(4.0 + x * x)) + x - 2.0
    raise InputError(f"unknown competitor curve '{name}'; choose from {', '.join(COMPETITORS)}")
