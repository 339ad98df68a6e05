"""Threshold scans on the worked examples and the competitor curves."""
from math import sqrt

import numpy as np
import pytest

from src.quantum.correlations import correlation_tensor
from src.quantum.criteria import (
    CriterionSpec, PartitionSpec, TripartiteCoefficients, b_matrix_tripartite,
)
from src.quantum.numerics import trace_norm
from src.quantum.scan import competitor_root, find_root, locate_sign_change, scan_family
from src.quantum.states import evaluate, noisy_family
from src.utils.errors import ParameterError
from src.utils.text_utils import parse_grid

GRID = parse_grid("0:1:0.01")
TOL = 1e-6
REFERENCE_TOL = 5e-4
LAST_PARTY_ONLY = TripartiteCoefficients.from_sequence((0, 0, 0, 0, 0, 1))


def test_ghz3_equal_dimension_threshold(qubit_bases3):
    result = scan_family(noisy_family("ghz3"), qubit_bases3, CriterionSpec("cor1"), GRID, TOL)
    assert result.threshold == pytest.approx(0.1919, abs=REFERENCE_TOL)
    assert result.detected_side == "below"
    assert result.margins[0] == pytest.approx(0.11785, abs=1e-5)


def test_ghz3_cutwise_bound_agrees_with_corollary(qubit_bases3):
    family = noisy_family("ghz3")
    cor1 = scan_family(family, qubit_bases3, CriterionSpec("cor1"), GRID, TOL)
    cutwise = scan_family(family, qubit_bases3, CriterionSpec("thm2cut"), GRID, TOL)
    assert cutwise.threshold == pytest.approx(cor1.threshold, abs=1e-6)


def test_ghz3_theorem2_never_exceeds_its_bound(qubit_bases3):
    result = scan_family(noisy_family("ghz3"), qubit_bases3, CriterionSpec("thm2"), GRID, TOL)
    assert np.all(result.margins <= 1e-9)


def test_ghz4_thresholds(qubit_bases4):
    family = noisy_family("ghz4")
    mode = scan_family(family, qubit_bases4, CriterionSpec("thm4i", party=1), GRID, TOL)
    assert mode.threshold == pytest.approx(0.4545, abs=REFERENCE_TOL)
    assert mode.threshold == pytest.approx(10 / 22, abs=1e-5)
    assert mode.detected_side == "above"

    spec = CriterionSpec("thm4ii", partition=PartitionSpec.parse("12|34"))
    partition = scan_family(family, qubit_bases4, spec, GRID, TOL)
    assert partition.threshold == pytest.approx(0.4602, abs=REFERENCE_TOL)


def test_w4_threshold(qubit_bases4):
    result = scan_family(noisy_family("w4"), qubit_bases4, CriterionSpec("thm4i", party=1), GRID, TOL)
    assert result.threshold == pytest.approx(0.4891, abs=REFERENCE_TOL)


def test_example2_biseparability_threshold(example2_bases):
    spec = CriterionSpec("thm1", coeffs=LAST_PARTY_ONLY, party=3, clause="i")
    result = scan_family(noisy_family("example2_phi"), example2_bases, spec, GRID, TOL)
    assert result.threshold_found
    assert 0.6 < result.threshold < 0.75
    assert result.detected_side == "above"
    assert result.margins[-1] > 0


def test_example2_gme_threshold_is_absent(example2_bases):
    family = noisy_family("example2_phi")
    spec = CriterionSpec("thm2", coeffs=LAST_PARTY_ONLY, convention="active_partition")
    result = scan_family(family, example2_bases, spec, GRID, TOL)
    assert not result.threshold_found
    assert result.threshold is None
    assert np.all(result.margins < 0)

    tensor = correlation_tensor(evaluate(family, 1.0), example2_bases)
    assert trace_norm(b_matrix_tripartite(tensor, 3, 0.0, 1.0)) <= sqrt(2 / 9) + 1e-9


def test_competitor_roots():
    assert competitor_root("g1") == pytest.approx((2 - sqrt(3)) / 2, abs=1e-8)
    assert competitor_root("g3") == pytest.approx(2 / 3, abs=1e-8)
    assert competitor_root("g5") == pytest.approx(0.783, abs=1e-3)
    assert 0.915 < competitor_root("g4") < 0.925


def test_scan_tabulates_competitors(qubit_bases3):
    result = scan_family(noisy_family("ghz3"), qubit_bases3, CriterionSpec("cor1"),
                         parse_grid("0:1:0.1"), TOL, competitors=("g1", "g3"))
    assert set(result.competitors) == {"g1", "g3"}
    assert len(result.competitors["g1"]) == 11
    data = result.to_dict()
    assert data["threshold_found"]
    assert data["competitor_roots"]["g3"] == pytest.approx(2 / 3, abs=1e-8)


def test_locate_sign_change():
    assert locate_sign_change([1.0, 0.5, -0.2]) == 1
    assert locate_sign_change([-1.0, -2.0]) is None
    assert locate_sign_change([0.0, -1.0]) == 0
    assert locate_sign_change([0.3, 0.0]) == 1


def test_find_root():
    root, achieved = find_root(lambda x: x - 0.3, 0.0, 1.0, 1e-8)
    assert root == pytest.approx(0.3, abs=1e-8)
    assert achieved == 1e-8
    assert find_root(lambda x: x, 0.0, 1.0, 1e-8) == (0.0, 0.0)


def test_scan_rejects_bad_arguments(qubit_bases3):
    family = noisy_family("ghz3")
    spec = CriterionSpec("cor1")
    with pytest.raises(ParameterError):
        scan_family(family, qubit_bases3, spec, GRID, 1e-9)
    with pytest.raises(ParameterError):
        scan_family(family, qubit_bases3, spec, [0.5, 0.2], TOL)
    with pytest.raises(ParameterError):
        scan_family(family, qubit_bases3, spec, [0.5, 1.2], TOL)
