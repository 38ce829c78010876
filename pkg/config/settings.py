"""
Global project settings.
"""

# Numerical tolerances
RANK_CUTOFF = 1e-10      # singular values below RANK_CUTOFF * largest count as zero
EQUALITY_EPS = 1e-8      # residual threshold for every identity check
SPECTRAL_GAP = 1e-6      # minimum relative gap between eigenvalues of a random element
F_FIT_EPS = 1e-6         # fitted F entries must stay above this
STATE_DEDUP_EPS = 1e-6   # two idempotent states closer than this are the same state

# Block fingerprints (character covectors) are rounded to this many decimals
FINGERPRINT_DECIMALS = 8

# Randomized splitting of *-algebras
RANDOM_STATE = 42
MAX_SEED_RETRIES = 8
POLISH_STEPS = 4         # Newton steps applied to each spectral projection

# Idempotent state search
SEARCH_SEEDS = 12        # number of random starting states
SEARCH_SUPPORT = 2       # vector states averaged into each random start
N_JOBS = 1               # joblib workers for the search

# Paths
DEFINITIONS_DIR = "data/definitions"
MANIFEST_PATH = "data/definitions/manifest.csv"
