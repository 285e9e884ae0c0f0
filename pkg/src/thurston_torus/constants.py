"""
Centralised package constants.

Keeping tolerances, budgets and thresholds in one place lets integrators
override defaults (through :class:`~thurston_torus.search.SearchBudget` and
:class:`~thurston_torus.experiments.ExperimentConfig`) without diving into the
numerical kernels.
"""

# --------------------------------------------------------------------------- #
# Search defaults                                                             #
# --------------------------------------------------------------------------- #

# Node expansions before a search reports itself saturated
SEARCH_MAX_NODES_DEFAULT = 20_000

# Consecutive quiet layers before the search stops
SEARCH_PATIENCE_DEFAULT = 8

# Nodes popped from the frontier per layer
SEARCH_BEAM_DEFAULT = 16

# A layer is quiet unless the incumbent improves by more than this
SEARCH_IMPROVE_TOL = 1e-6

# Relative width inside which two objective values are tied
SEARCH_TIE_TOL = 1e-12

# Witness isolation threshold (heuristic)
SEARCH_GAP_TOL_DEFAULT = 1e-4

# Nodes whose traces have more decimal digits than this are not expanded
TRACE_DIGITS_CEILING = 300

# --------------------------------------------------------------------------- #
# Numerical tolerances                                                        #
# --------------------------------------------------------------------------- #

MARKOV_REL_TOL = 1e-9
TANGENCY_REL_TOL = 1e-7
SYSTOLE_TIE_REL_TOL = 1e-9
SECTOR_BOUNDARY_TOL = 1e-9

# Markov reduction only flips when the largest trace drops by more than this (relative)
REDUCTION_REL_TOL = 1e-12

# Newton steps allowed when projecting onto the Markov variety
PROJECTION_MAX_STEPS = 50

# Guard digits added on top of the magnitude of the traces involved
PRECISION_GUARD_DIGITS = 30

# Working precision past this many digits counts as out of range
PRECISION_DIGITS_CEILING = 5000

# Runs of equal Stern-Brocot moves longer than this use the closed form
CHEBYSHEV_LOOP_LIMIT = 1000

# Translation lengths clamp |trace| at 2 + this
PARABOLIC_CLAMP = 1e-14

# --------------------------------------------------------------------------- #
# Envelope corner solve                                                       #
# --------------------------------------------------------------------------- #

CORNER_BRACKET_LOW = 1e-8
CORNER_BRACKET_HIGH = 1e3
CORNER_XTOL = 1e-12

# --------------------------------------------------------------------------- #
# Experiment thresholds                                                       #
# --------------------------------------------------------------------------- #

EPS0_DEFAULT = 0.3  # thickness threshold for active intervals
EPS1_DEFAULT = 0.1  # "short" threshold for the pivot correspondence
EPS_MARGULIS_DEFAULT = 0.5
PATH_DT_DEFAULT = 0.01

# Underflow floor for flat segment lengths
FLAT_SEGMENT_FLOOR = 1e-300

# --------------------------------------------------------------------------- #
# CLI                                                                         #
# --------------------------------------------------------------------------- #

BUDGET_ENV_VAR = "THURSTON_BUDGET"
EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_IO_ERROR = 2

# SVG canvas size in pixels
SVG_SIZE = 600
