# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""Numeric defaults shared across modules."""

EPS = 0.1                      # epsilon of the random-walk indicator bands
SERIES_TOL = 1e-12             # relative truncation of geometric-weighted sums
BISECTION_TOL = 1e-13          # relative bisection tolerance
BISECTION_MAX_ITER = 200
INVERSE_SCAN_POINTS = 256      # envelope scan points per decade
INVERSE_MIN_DECADE = -10
INVERSE_MAX_DECADE = 30
QUAD_REL_TOL = 1e-6
QUAD_LIMIT = 200
CN_TOL = 1e-8                  # relative argument tolerance of the C_n minimization
CN_SCAN_POINTS = 200
CN_INDEX_POINTS = 64           # local-index scan of the C_n bracket
CN_INDEX_MARGIN = 0.1
REGIME_TOL = 0.1
TRANSITION_BAND = 0.25
SIM_MIN_REPS = 1000
SIM_BLOCK_SIZE = 4096          # replications per counter-based RNG block
DEFAULT_REPS = 100000
DEFAULT_SEED = 20260101
THREADS_ENV = "MG1_THREADS"
FLOAT_FORMAT = ".17g"
