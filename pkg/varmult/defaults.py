"""
Default parameters shared by all analyses.

Every public operation accepts these as keyword arguments;
the command-line interface maps its flags onto them.

Author: Erel Segal-Halevi
Since: 2024-03
"""

# Seed of every random sample point and fuzz case. Echoed into every report.
DEFAULT_SEED = 2009

# Number of random points per probabilistic zero-test and per generic-rank computation.
SAMPLE_COUNT = 8

# Number of fresh points used by the dense brute-force oracle.
ORACLE_SAMPLE_COUNT = 3

# Highest total degree of the polynomial ansatz for multipliers and Lagrangians.
DEGREE_CAP = 4

# Random rationals have numerator in [-COEFFICIENT_BOUND, COEFFICIENT_BOUND] and denominator in [1, COEFFICIENT_BOUND].
COEFFICIENT_BOUND = 10**6

# Decimal digits used when an opaque function (exp, log, sin, cos) must be evaluated numerically.
EVALUATION_DIGITS = 60

# How many extra points may be drawn when a sample point hits a pole.
MAX_RESAMPLES = 64
