#!/usr/bin/env python3
"""
Utility functions for parsing command-line strings and formatting numbers.
"""
import re

import numpy as np

from ..config import CSV_SIGNIFICANT_DIGITS
from .errors import InputError


def format_number(value, digits=CSV_SIGNIFICANT_DIGITS):
    """
    Format a real number with a fixed count of significant digits.

    Positional notation is always used so that CSV output is byte-stable
    and never switches to exponent form between runs.

    Args:
        value (float): Number to format
        digits (int): Significant digits

    Returns:
        str: Formatted number ("nan" for NaN, "" for None)
    """
    if value is None:
        return ""
    value = float(value)
    if np.isnan(value):
        return "nan"
    if value == 0.0:
        # also folds -0.0
        return "0"
    return np.format_float_positional(
        value, precision=digits, unique=False, fractional=False, trim="-"
    )


def parse_partition(text):
    """
    Parse a partition string into label groups.

    Accepted forms:
    - "12|34"     digits, one label per character
    - "1,2|3,4"   comma-separated labels (needed for labels >= 10)

    Args:
        text (str): Partition string

    Returns:
        tuple: Tuple of tuples of 1-based labels, in the order written
    """
    if not text or not text.strip():
        raise InputError("empty partition string")

    groups = []
    for chunk in text.strip().split("|"):
        chunk = chunk.strip()
        if not chunk:
            raise InputError(f"empty group in partition '{text}'")
        if "," in chunk:
            parts = [p.strip() for p in chunk.split(",")]
        else:
            parts = list(chunk)
        try:
            labels = tuple(int(p) for p in parts)
        except ValueError:
            raise InputError(f"invalid label in partition '{text}'")
        groups.append(labels)

    if len(groups) < 2:
        raise InputError(f"partition '{text}' needs at least two groups")
    return tuple(groups)


def format_partition(groups):
    """Render label groups back into the "12|34" form (commas if any label >= 10)."""
    use_commas = any(label >= 10 for group in groups for label in group)
    sep = "," if use_commas else ""
    return "|".join(sep.join(str(label) for label in group) for group in groups)


def parse_coeffs(text):
    """
    Parse "c11,c12,c21,c22,c31,c32" into six floats.

    Args:
        text (str): Comma-separated coefficients

    Returns:
        tuple: Six floats
    """
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if len(parts) != 6:
        raise InputError(f"expected 6 coefficients, got {len(parts)} in '{text}'")
    try:
        values = tuple(float(p) for p in parts)
    except ValueError:
        raise InputError(f"non-numeric coefficient in '{text}'")
    if not all(np.isfinite(values)):
        raise InputError(f"coefficients must be finite: '{text}'")
    return values


def parse_grid(text):
    """
    Parse a grid "a:b:step" into a strictly increasing array inside [0, 1].

    The end point b is included when it lies on the step lattice.

    Args:
        text (str): Grid as "start:stop:step"

    Returns:
        numpy.ndarray: Grid values
    """
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise InputError(f"grid must look like a:b:step, got '{text}'")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise InputError(f"non-numeric grid '{text}'")

    if step <= 0:
        raise InputError(f"grid step must be positive, got {step}")
    if not (0.0 <= start < stop <= 1.0):
        raise InputError(f"grid must satisfy 0 <= a < b <= 1, got '{text}'")

    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    grid = start + step * np.arange(count)
    grid[-1] = min(grid[-1], stop)
    if np.isclose(grid[-1], stop, rtol=0.0, atol=1e-12):
        grid[-1] = stop
    return grid


def parse_name_list(text):
    """Split "g1,g3" into ["g1", "g3"]; None or "" gives an empty list."""
    if not text:
        return []
    return [p.strip() for p in text.split(",") if p.strip()]


def complex_to_pair(value):
    """Convert a complex number into the [re, im] JSON form."""
    value = complex(value)
    return [float(value.real), float(value.imag)]


def pair_to_complex(pair):
    """Convert an [re, im] pair (or a bare real number) into a complex number."""
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise InputError(f"complex numbers must be [re, im] pairs, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_pairs(matrix):
    """Convert a complex matrix into nested lists of [re, im] pairs."""
    return [[complex_to_pair(v) for v in row] for row in np.asarray(matrix)]


def pairs_to_matrix(rows):
    """
    Convert nested lists of [re, im] pairs into a complex matrix.

    Args:
        rows (list): Square or rectangular nested list

    Returns:
        numpy.ndarray: Complex matrix
    """
    if not rows or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix must be a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("matrix rows have different lengths")
    return np.array([[pair_to_complex(v) for v in row] for row in rows], dtype=complex)
