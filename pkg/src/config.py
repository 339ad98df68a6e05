#!/usr/bin/env python3
"""
Configuration module for the COB entanglement detector.
Contains all tolerances, defaults and the pinned example configurations.

Precedence used by the command line:
  command-line flag > --config JSON value > the constants below.
"""

# Numerical tolerances
HERMITIAN_TOL = 1e-12
COB_TOL = 1e-10
IMAG_TOL = 1e-10
STATE_TOL = 1e-10
PSD_TOL = 1e-9
SVD_RELATIVE_CUTOFF = 1e-13
ORACLE_EIGEN_CUTOFF = 1e-12
BORDERLINE_TOL = 1e-9
SOUNDNESS_TOL = 1e-9

# Amplitude vectors closer than this to unit norm are normalized silently
AUTO_NORMALIZE_TOL = 1e-6

# Threshold scans
DEFAULT_GRID = "0:1:0.01"
DEFAULT_BISECTION_TOL = 1e-6
MIN_BISECTION_TOL = 1e-8
REPRODUCE_TOL = 5e-4

# Sampling
DEFAULT_SEED = 20240101
DEFAULT_SAMPLE_COUNT = 500
MAX_MIXTURE_TERMS = 8

# Output
CSV_SIGNIFICANT_DIGITS = 12
JSON_INDENT = 2

# Logging
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"
LOG_FILE = None

# Coefficients (c11, c12, c21, c22, c31, c32) used when none are given
DEFAULT_COEFFS = (1.0, 0.0, 1.0, 0.0, 1.0, 0.0)

# Default basis per local dimension; other dimensions get a seeded generated basis
DEFAULT_BASIS_BY_DIM = {
    2: "construction1-d2",
    3: "construction2-d3",
}

# Orientation of the white-noise family per named state.
#   "noise": rho(x) = x I/D + (1-x)|psi><psi|
#   "pure":  rho(x) = (1-x) I/D + x|psi><psi|
FAMILY_ORIENTATION = {
    "ghz3": "noise",
    "ghz4": "pure",
    "w4": "pure",
    "example2_phi": "pure",
}

# Pinned configurations reproduced by `reproduce <id>`.
# "note" marks a documented deviation: a row outside tolerance is then
# reported as DEVIATES instead of FAIL.
EXAMPLE_PINS = {
    1: [
        {
            "row": "cor1, GME",
            "state": "ghz3",
            "bases": ["construction1-d2"] * 3,
            "criterion": "cor1",
            "coeffs": (1.0, 0.0, 1.0, 0.0, 1.0, 0.0),
            "reference_threshold": 0.1919,
        },
    ],
    2: [
        {
            "row": "thm1 clause i, 3|12",
            "state": "example2_phi",
            "bases": ["construction2-d3", "construction2-d3", "construction2-d2"],
            "criterion": "thm1",
            "party": 3,
            "clause": "i",
            "coeffs": (0.0, 0.0, 0.0, 0.0, 0.0, 1.0),
            "reference_threshold": 0.496,
            "note": (
                "printed bases and canonical layout give a different threshold; "
                "see DESIGN.md"
            ),
        },
        {
            "row": "thm2 active partition, GME",
            "state": "example2_phi",
            "bases": ["construction2-d3", "construction2-d3", "construction2-d2"],
            "criterion": "thm2",
            "convention": "active_partition",
            "coeffs": (0.0, 0.0, 0.0, 0.0, 0.0, 1.0),
            "reference_threshold": 0.7152,
            "note": (
                "||B^{3|12}|| <= 2||mu|| <= sqrt(2/9) for every state, "
                "so this bound cannot be exceeded; see DESIGN.md"
            ),
        },
    ],
    3: [
        {
            "row": "thm4i, 1|234",
            "state": "ghz4",
            "bases": ["construction1-d2"] * 4,
            "criterion": "thm4i",
            "party": 1,
            "reference_threshold": 0.4545,
        },
        {
            "row": "thm4ii, 12|34",
            "state": "ghz4",
            "bases": ["construction1-d2"] * 4,
            "criterion": "thm4ii",
            "partition": "12|34",
            "reference_threshold": 0.4602,
        },
    ],
    4: [
        {
            "row": "thm4i, 1|234",
            "state": "w4",
            "bases": ["construction1-d2"] * 4,
            "criterion": "thm4i",
            "party": 1,
            "reference_threshold": 0.4891,
        },
    ],
}
