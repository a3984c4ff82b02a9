# ------------------------------------------------------------------------------
# File: config.py
#
# Purpose:
#   Centralised configuration for the necklace lab.
#
# Why this file exists:
#   - Single source of truth for every constant the modules share
#     (guards, tolerances, generator metadata, output format version).
#   - Environment overrides are loaded from `.env` via python-dotenv and read
#     at call time, so tests and the CLI can change them per process.
#
# Environment variables:
#   NECKLACE_THREADS     worker cap for Monte Carlo blocks (default: CPU count)
#   NECKLACE_LOG_LEVEL   logging level name (default: WARNING)
#   NECKLACE_SEED        default simulation seed (default: LAB_CONFIG value)
# ------------------------------------------------------------------------------

import os
import logging

from dotenv import load_dotenv

from necklace_lab.errors import InputError

load_dotenv()

LAB_CONFIG = {
    # ----------------------------------------------------------------------
    # Output
    # ----------------------------------------------------------------------
    "format_version": "1.0",
    # ----------------------------------------------------------------------
    # Random streams
    # ----------------------------------------------------------------------
    "generator": "numpy.random.PCG64",
    "default_seed": 20150601,
    "block_size": 65536,  # replicates per substream
    # ----------------------------------------------------------------------
    # Exponential guards
    # ----------------------------------------------------------------------
    "enumerate_max_n": 24,
    "strings_max_n": 16,
    "reachable_max_n": 14,
    "process_walk_max_n": 10,
    "bruteforce_max_k": 24,
    # ----------------------------------------------------------------------
    # Numeric evaluation of the closed form
    # ----------------------------------------------------------------------
    "z_max": 0.5,
    "u_fallback_band": 1e-6,
    "pole_tolerance": 1e-12,
    "fallback_terms": 12,
    # ----------------------------------------------------------------------
    # Asymptotic counting (decimal digits carried by mpmath)
    # ----------------------------------------------------------------------
    "golden_dps": 80,
    "normalized_error_bound": 3.0,
    # ----------------------------------------------------------------------
    # Goodness of fit
    # ----------------------------------------------------------------------
    "min_expected_count": 5.0,
    "chi_square_alpha": 0.001,
    # n = 6 acceptance runs
    "calibration_replications": 1_000_000,
    "calibration_seeds": 100,
    "calibration_accepted_percent": 99,
    # sqrt(n) times the Kolmogorov distance to the normal limit
    "clt_scaled_bound": 3.0,
}


def get_threads() -> int:
    """Worker cap from NECKLACE_THREADS, defaulting to the CPU count."""
    raw = os.getenv("NECKLACE_THREADS", "").strip()
    if not raw:
        return max(1, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError as e:
        raise InputError(f"NECKLACE_THREADS must be an integer, got '{raw}'.") from e
    if value < 1:
        raise InputError(f"NECKLACE_THREADS must be >= 1, got {value}.")
    return value


def get_log_level() -> int:
    """Logging level from NECKLACE_LOG_LEVEL (name such as INFO or DEBUG)."""
    name = os.getenv("NECKLACE_LOG_LEVEL", "WARNING").strip().upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise InputError(f"NECKLACE_LOG_LEVEL '{name}' is not a logging level.")
    return level


def get_default_seed() -> int:
    """Seed used by `simulate` when --seed is not given."""
    raw = os.getenv("NECKLACE_SEED", "").strip()
    if not raw:
        return LAB_CONFIG["default_seed"]
    try:
        return int(raw)
    except ValueError as e:
        raise InputError(f"NECKLACE_SEED must be an integer, got '{raw}'.") from e
