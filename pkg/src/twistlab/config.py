import logging
import os
from fractions import Fraction

from dotenv import load_dotenv

load_dotenv()

# =========================================================
# GLOBAL SETTINGS
# =========================================================
ENGINE_VERSION = "0.4.0"
RANDOM_SEED = 42

LOG_ENV_VAR = "TWISTLAB_LOG"
DEFAULT_LOG_LEVEL = "WARNING"

# =========================================================
# ARITHMETIC BOUNDS
# =========================================================
FACTOR_BOUND = 2**96            # desk-scale factorization limit
PADIC_DEPTH_CAP = 2**10         # p-adic root counting recursion cap

# =========================================================
# DESCENT
# =========================================================
DESCENT_BOUND = 10**6           # max |e_i|

# Local Kummer images are sampled from points with x = a / p^(2j).
# The numerator range starts at p^(ord_p(disc) + extra) and doubles
# up to LOCAL_IMAGE_MAX_DOUBLINGS times before giving up.
LOCAL_IMAGE_EXTRA_ODD = 3
LOCAL_IMAGE_EXTRA_TWO = 5
LOCAL_IMAGE_DENOMINATOR_DEPTH = 3
LOCAL_IMAGE_MAX_DOUBLINGS = 4
LOCAL_IMAGE_START_CAP = 2**14   # initial numerator range never exceeds this

# =========================================================
# SIEVES & DENSITY
# =========================================================
DEFAULT_MAX_X = 10**4
DENSITY_MAX_X = 10**5

# Expected Frobenius-order densities in Gal(Q(E[2])/Q)
CHEBOTAREV_DENSITIES = {
    "S3": {1: Fraction(1, 6), 2: Fraction(1, 2), 3: Fraction(1, 3)},
    "C3": {1: Fraction(1, 3), 3: Fraction(2, 3)},
}

# =========================================================
# OUTPUT CONFIG
# =========================================================
BASE_OUTPUT_PATH = "data/twistlab"
REPORTS_PATH = f"{BASE_OUTPUT_PATH}/reports"
JSON_SAFE_INT_BITS = 53

# =========================================================
# HELPER
# =========================================================
def configure_logging(level: str | None = None) -> None:
    """Configure root logging from TWISTLAB_LOG unless a level is given."""
    name = (level or os.environ.get(LOG_ENV_VAR, DEFAULT_LOG_LEVEL)).upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        format="%(levelname)s: %(message)s",
    )
