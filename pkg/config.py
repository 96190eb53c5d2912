import os
from dotenv import load_dotenv

load_dotenv()

# Engine configuration
ENGINE_CONFIG = {
    "CAP_N": int(os.getenv("MRW_CAP_N", "6")),  # largest n for which Wn is enumerated
    "VERIFY_CAP_N": 5,  # default cap for `verify --suite all`
    "SEED": int(os.getenv("MRW_SEED", "1729")),
    "RANDOM_SAMPLES": 50,  # seeded elements per randomized property
    "RANDOM_COEFF_MAX": 3,  # random coordinates drawn from range(0, RANDOM_COEFF_MAX)
    "PIVOT_PRIME": 2147483647,  # 2^31 - 1, used to pick pivots and independent rows
    "MAX_PRIME": 2 ** 61,
    "NEWTON_MAX_STEPS": 16,
    "CARTAN_EMBED_MAX_N": 4,  # largest n+1 for which the tau_n embedding is checked by verify
    "RESTRICTION_LAWS_MAX_N": 3,  # largest n for which verify checks the restriction laws
    "INT64_SAFE": 2 ** 62,  # bound below which integer contractions stay in int64
}

# Output configuration
OUTPUT_CONFIG = {
    "ZERO_SYMBOL": ".",
    "FORMATS": ("text", "csv", "json"),
    "VERSION": "1.0.0",
    "POLY_VARIABLE": "T",
}

# Logging configuration
LOG_CONFIG = {
    "LEVEL": os.getenv("MRW_LOG_LEVEL", "INFO"),
    "FORMAT": '%(asctime)s - %(levelname)s - %(message)s',
    "FILE": os.getenv("MRW_LOG_FILE", ""),
}


def group_cap() -> int:
    """Current cap on n, re-read from the environment so tests and the CLI can override it"""
    return int(os.getenv("MRW_CAP_N", str(ENGINE_CONFIG["CAP_N"])))
