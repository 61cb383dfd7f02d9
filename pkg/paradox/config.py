# ----------------------------
# Numerical defaults
# ----------------------------
QUAD_ABS_TOL = 1e-12
QUAD_REL_TOL = 1e-10
QUAD_MAX_SUBDIVISIONS = 2000

ROOT_TOL = 1e-9
ROOT_MAX_ITER = 200
SAMPLE_SIZE_TOL = 0.5
SAMPLE_SIZE_CAP = 10**13

# the integrand is dropped where the scaled log-likelihood is below -LIKELIHOOD_WINDOW
LIKELIHOOD_WINDOW = 60.0

MC_CHUNK_SIZE = 8192

# z supplied twice (directly and through alpha or the sample mean) must agree this closely
Z_AGREEMENT_TOL = 1e-9
QUOTED_Z = 1.96

# ----------------------------
# Report defaults
# ----------------------------
TABLE1_ALPHAS = (0.05, 0.04, 0.03, 0.02, 0.01, 0.005)
DEFAULT_C = 0.5
DEFAULT_TAU = 1.0
DEFAULT_SIGMA = 1.0
DEFAULT_THETA0 = 0.0
DEFAULT_ALPHA = 0.05
DEFAULT_REPS = 100_000
DEFAULT_SEED = 20_190_101
DEFAULT_THRESHOLD = 0.5
SIGNIFICANT_DIGITS = 6

# Figure 1, panel A: z from alpha = 0.05, tau = 1, equal prior odds; n on a log grid
PANEL_A_ALPHA = 0.05
PANEL_A_TAU = 1.0
PANEL_A_GRID = "10:1e8:29"
# panel B: n = 100, z = 2.5, equal prior odds; tau on a log grid.
# The posterior rises in tau only once 1 + n tau^2 > z^2, so the grid starts at 1.
PANEL_B_N = 100
PANEL_B_Z = 2.5
PANEL_B_GRID = "1:1e4:17"

CALIBRATION_GRID = "1:1e6:13"
