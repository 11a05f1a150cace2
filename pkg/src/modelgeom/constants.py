"""Numerical constants shared by the algebraic and geometric routines."""

# Algebraic identities on unit-scale inputs; callers scale by the input's infinity norm
ABS_TOL = 1e-9
RANK_RTOL = 1e-9  # singular values below RANK_RTOL * largest count as zero

# Finite differences (central stencils)
FD_STEP = 1e-5  # first derivatives
FD_STEP_CURVATURE = 1e-4  # second derivatives / curvature

# Classification thresholds: |value| < ZERO_THRESHOLD is zero, > NONZERO_THRESHOLD is nonzero, the gap is inconclusive
ZERO_THRESHOLD = 1e-4
NONZERO_THRESHOLD = 0.1

# Verification tolerances
INVARIANCE_TOL = 1e-6
COMPOSITION_TOL = 1e-9
KILLING_TOL = 1e-6
GEODESIC_RESIDUAL_TOL = 1e-5
ENERGY_DRIFT_TOL = 1e-6
LENGTH_SPREAD_TOL = 1e-8
DIVERGENCE_TOL = 1e-5
REP_TOL = 1e-8

# Circle representations
HALTON_ANGLES = 16
COMMUTANT_ANGLES = 8

# Sampling defaults
DEFAULT_SAMPLES = 100
DEFAULT_SEED = 0
DEFAULT_MAX_WORKERS = 8  # threads used by batch verification
GEODESIC_STEPS = 1000

MAX_ALGEBRA_DIM = 6
