"""Constants which are used throughout the codebase."""

# Environment variable controlling log verbosity
LOG_ENV_VAR = 'NPDUAL_LOG'

# Components that own a logger (npdual.<component>)
COMPONENTS = ('model', 'simplex', 'npsolver', 'certify', 'oracle', 'families', 'cli')

# Ingestion / validation
WEIGHT_SUM_TOL = 1e-12
INGEST_SUM_TOL = 1e-9
DENSITY_NORM_TOL = 1e-9
DUPLICATE_TOL = 1e-12

# Simplex
PIVOT_TOL = 1e-9
FEAS_TOL = 1e-8
BREAKDOWN_PIVOT = 1e-11

# Solver and certificates
TOL_GAP = 1e-7
TOL_SLACK = 1e-7
TOL_BOUNDARY = 1e-7
TOL_CHAIN = 1e-8
TOL_WEAK_DUALITY = 1e-8
SUPPORT_FLOOR = 1e-9
CONVEXITY_TOL = 1e-9
DEFAULT_TRIALS = 1000

# Oracles
GRID_LIMIT = 10**7
GRID_CHUNK = 1 << 16
GRID_FEAS_TOL = 1e-12

# Sampled enlargement-membership check enumerates every indicator test up to this many atoms
EXHAUSTIVE_INDICATOR_ATOMS = 12
INDICATOR_SAMPLES = 4096

# Report file names
REPORT_FILE = 'report.json'
DUAL_RAY_FILE = 'dual_ray.csv'
TEST_FILE = 'test.csv'
LFP_REPORT_FILE = 'lfp_report.json'
PRIOR_FILE = 'prior.csv'
ORACLE_REPORT_FILE = 'oracle_report.json'

# Least favorable prior checks for the Gaussian family
LFP_BOUNDARY_MASS = 0.9
LFP_DISTANCE_TOL = 0.02
TRUNCATION_EDGE_TOL = 1e-6
