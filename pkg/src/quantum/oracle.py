#!/usr/bin/env python3
"""
Seeded sampling of separable-state classes and bound-soundness sweeps.

Pure states are normalized complex Gaussian vectors (Haar distributed);
mixture weights are normalized exponentials over at most MAX_MIXTURE_TERMS terms.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..config import MAX_MIXTURE_TERMS, SOUNDNESS_TOL
from ..utils.errors import InputError
from .cob import resolve_basis
from .correlations import correlation_tensor
from .criteria import PartitionSpec, evaluate_tensor
from .states import DensityMatrix, mixture, pure_state

FAMILIES = ("haar_pure", "mixed_convex", "product_pure", "biseparable_mixture", "k_separable_mixture")


@dataclass(frozen=True)
class SamplerConfig:
    """
    What to sample and how many.

    partition is required for product_pure and k_separable_mixture. For
    biseparable_mixture it is optional: without it every term draws its own
    random single-party cut.
    """

    seed: int
    count: int
    dims: tuple
    family: str
    partition: Optional[PartitionSpec] = None
    max_terms: int = MAX_MIXTURE_TERMS
    symmetrize: bool = False

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.count < 1:
            raise InputError(f"count must be at least 1, got {self.count}")
        if self.family not in FAMILIES:
            raise InputError(f"unknown family '{self.family}'; choose from {', '.join(FAMILIES)}")
        if not 1 <= self.max_terms <= MAX_MIXTURE_TERMS:
            raise InputError(f"max_terms must lie in 1..{MAX_MIXTURE_TERMS}")
        if self.family in ("product_pure", "k_separable_mixture") and self.partition is None:
            raise InputError(f"family {self.family} needs a partition")
        if self.partition is not None:
            if self.partition.n != len(self.dims):
                raise InputError(f"partition {self.partition} does not fit dims {self.dims}")
            if self.family == "biseparable_mixture" and self.partition.k != 2:
                raise InputError("biseparable_mixture needs a two-group partition")
        if self.symmetrize and len(set(self.dims)) != 1:
            raise InputError("symmetrize needs equal local dimensions")

    def to_dict(self):
        return {
            "seed": self.seed,
            "count": self.count,
            "dims": list(self.dims),
            "family": self.family,
            "partition": str(self.partition) if self.partition else None,
            "max_terms": self.max_terms,
            "symmetrize": self.symmetrize,
        }


@dataclass
class ViolationReport:
    """Result of a soundness sweep; sound iff max_margin <= tol."""

    criterion: str
    config: dict
    max_margin: float
    positive_margins: int
    violating_indices: list = field(default_factory=list)
    tol: float = SOUNDNESS_TOL

    @property
    def sound(self):
        return self.max_margin <= self.tol

    def to_dict(self):
        return {
            "criterion": self.criterion,
            "seed": self.config["seed"],
            "config": self.config,
            "max_margin": self.max_margin,
            "positive_margins": self.positive_margins,
            "violating_indices": self.violating_indices,
            "tol": self.tol,
            "sound": self.sound,
        }


def haar_vector(dim, rng):
    """Normalized complex Gaussian vector."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def product_vector(groups, dims, rng):
    """
    Haar factor per group, tensored and reordered to the natural label order.
    """
    vectors = [haar_vector(int(np.prod([dims[l - 1] for l in g])), rng) for g in groups]
    psi = vectors[0]
    for v in vectors[1:]:
        psi = np.kron(psi, v)

    # the kron above runs in group order; move axes back to labels 1..n
    order = [l for g in groups for l in g]
    psi = psi.reshape([dims[l - 1] for l in order])
    psi = np.transpose(psi, np.argsort(order))
    return psi.ravel()


def _term_count(cfg, rng):
    return 1 if cfg.max_terms == 1 else int(rng.integers(1, cfg.max_terms + 1))


def _weights(k, rng):
    if k == 1:
        return np.ones(1)
    w = rng.exponential(size=k)
    return w / w.sum()


def _mix(vectors, weights, dims):
    states = [pure_state(v, dims) for v in vectors]
    return states[0] if len(states) == 1 else mixture(states, weights)


def symmetrize_parties(state):
    """Average of the state over all permutations of its (equal-dimension) parties."""
    n = state.n_parties
    d = state.dims[0]
    tensor = state.matrix.reshape(state.dims + state.dims)
    total = np.zeros_like(tensor)
    # permute row and column axes together
    perms = list(itertools.permutations(range(n)))
    for perm in perms:
        total += np.transpose(tensor, list(perm) + [n + p for p in perm])
    size = d**n
    return DensityMatrix(state.dims, total.reshape(size, size) / len(perms))


def sample_state(cfg, rng=None):
    """
    Draw one state of the configured family.

    Args:
        cfg (SamplerConfig): What to draw
        rng (numpy.random.Generator): Source; a fresh default_rng(cfg.seed) if None

    Returns:
        DensityMatrix: The sample
    """
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    dims = cfg.dims
    n = len(dims)
    size = int(np.prod(dims))

    if cfg.family == "haar_pure":
        state = pure_state(haar_vector(size, rng), dims)
    elif cfg.family == "mixed_convex":
        k = _term_count(cfg, rng)
        vectors = [haar_vector(size, rng) for _ in range(k)]
        state = _mix(vectors, _weights(k, rng), dims)
    elif cfg.family == "product_pure":
        state = pure_state(product_vector(cfg.partition.groups, dims, rng), dims)
    elif cfg.family == "biseparable_mixture":
        k = _term_count(cfg, rng)
        vectors = []
        for _ in range(k):
            if cfg.partition is not None:
                groups = cfg.partition.groups
            else:
                groups = PartitionSpec.cut(int(rng.integers(1, n + 1)), n).groups
            vectors.append(product_vector(groups, dims, rng))
        state = _mix(vectors, _weights(k, rng), dims)
    else:
        k = _term_count(cfg, rng)
        vectors = [product_vector(cfg.partition.groups, dims, rng) for _ in range(k)]
        state = _mix(vectors, _weights(k, rng), dims)

    return symmetrize_parties(state) if cfg.symmetrize else state


def iter_samples(cfg):
    """Yield cfg.count samples from a single generator seeded with cfg.seed."""
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.count):
        yield sample_state(cfg, rng)


def verify_bound_suite(cfg, spec, bases=None):
    """
    Evaluate a criterion on every sample and collect positive margins.

    Args:
        cfg (SamplerConfig): Samples to draw
        spec (CriterionSpec): Criterion to check
        bases (sequence): One COBasis per subsystem; defaults per dimension

    Returns:
        ViolationReport: Max margin and the indices above SOUNDNESS_TOL
    """
    if bases is None:
        bases = [resolve_basis(None, d, cfg.seed) for d in cfg.dims]

    max_margin = -np.inf
    positive = 0
    violating = []
    for index, state in enumerate(iter_samples(cfg)):
        report = evaluate_tensor(correlation_tensor(state, bases), spec)
        max_margin = max(max_margin, report.margin)
        # every positive margin is counted; only those above SOUNDNESS_TOL are violations
        if report.margin > 0:
            positive += 1
        if report.margin > SOUNDNESS_TOL:
            violating.append(index)
            logging.debug(f"Sample {index} exceeds the {spec.criterion} bound by {report.margin:.3e}")

    result = ViolationReport(
        criterion=spec.criterion,
        config=cfg.to_dict(),
        max_margin=float(max_margin),
        positive_margins=positive,
        violating_indices=violating,
    )
    level = logging.INFO if result.sound else logging.WARNING
    logging.log(level, f"{spec.criterion} over {cfg.count} {cfg.family} samples: "
                       f"max margin {result.max_margin:.3e}, {len(violating)} violations")
    return result
