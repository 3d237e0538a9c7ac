"""Constants and defaults used across kms"""
import pathlib

# ---- constants for argparser -----------------------------------------------
SUBCOMMANDS = (
    "eigen",
    "check",
    "example",
    "solve-local",
    "scan",
    "solve",
)

# ---- environment -----------------------------------------------------------
THREADS_ENV_VAR = "KMS_THREADS"

# ---- artifacts -------------------------------------------------------------
SCHEMA_VERSION = 1

DEFAULT_OUTPUT_DIR = pathlib.Path("./results")
FIELDS_SUBDIR = "fields"

MANIFEST_JSON = "manifest.json"
EIGEN_JSON = "eigen.json"
HYPOTHESES_JSON = "hypotheses.json"
MODEL_JSON = "model.json"
SOLVE_LOCAL_JSON = "solve-local.json"
THEOREM_JSON = "theorem.json"
COEFFICIENT_PROFILE_CSV = "coefficient-profile.csv"
PHI1_CSV = "phi1.csv"
E1_CSV = "e1.csv"
U_ALPHA_CSV = "u_alpha.csv"
SCAN_CSV_TEMPLATE = "scan-k{k}.csv"
FAILED_SCAN_CSV_TEMPLATE = "scan-k{k}-failed.csv"
SOLUTION_CSV_TEMPLATE = "solution-k{k}-{i}.csv"

CURVE_COLUMNS = ("alpha", "P", "g", "a_alpha", "lower_bound", "upper_bound")

# ---- exit codes ------------------------------------------------------------
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_HYPOTHESIS_VETO = 3

# ---- discretization --------------------------------------------------------
MIN_CELLS = 4

# ---- spectral --------------------------------------------------------------
EIGEN_TOL = 1e-10
EIGEN_MAX_ITER = 1000
CG_RTOL = 1e-12
CG_MAXITER_FACTOR = 10  # CG cap is this times the number of unknowns
N_EMBEDDING_TRIALS = 100
EMBEDDING_RTOL = 1e-8

# ---- model -----------------------------------------------------------------
GAMMA_RICHARDSON_EXPONENTS = tuple(range(10, 21))
GAMMA_RICHARDSON_RTOL = 1e-6
PSI_INVERSE_XTOL_FACTOR = 1e-14  # times t_star
INTERVAL_MAX_SAMPLES = 10_000
MONOTONICITY_SAMPLES = 1000
KNOT_ZERO_ATOL = 1e-12
EXAMPLE_SAFETY_FACTOR = 1.01
QUAD_RTOL = 1e-10

# ---- local solver ----------------------------------------------------------
LOCAL_TOL = 1e-10
LOCAL_MAX_ITER = 100_000
SHIFT_FACTOR = 1.1
SHIFT_SAMPLES = 1000
MONOTONE_SLACK = 1e-12  # times max(1, t_star)
SUBSOLUTION_SLACK = 1e-8
INNER_SOLVERS = ("splu", "cg")
DEFAULT_INNER_SOLVER = "splu"
ENERGY_LOG_EVERY = 100

# ---- fixed point engine ----------------------------------------------------
N_SAMPLES = 64
MIN_N_SAMPLES = 16
DELTA_FACTOR = 1e-2
A_MIN_FACTOR = 1e-6
REFINE_TOL_FACTOR = 1e-8  # times t_K
NONLOCAL_TOL_FACTOR = 1e-6  # times max f
MAX_BISECTION_STEPS = 200
CERTIFICATE_SLACK = 1e-8
CLAIM2_GAP_TOL = 1e-5
CONTINUITY_SAFETY_FACTOR = 2.0
