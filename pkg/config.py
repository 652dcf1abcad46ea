"""
Configuration settings for the satellite / cell-free load-balancing simulator
"""
import os

from dotenv import load_dotenv

load_dotenv()


class Config:
    """Application configuration"""

    # Output
    OUTPUT_DIR = os.getenv("SIMFAIR_OUTPUT_DIR", "./results")

    # Application Settings
    LOG_LEVEL = os.getenv("SIMFAIR_LOG_LEVEL", "INFO")
    WORKERS = int(os.getenv("SIMFAIR_WORKERS", "1"))
    DEFAULT_SEED = int(os.getenv("SIMFAIR_SEED", "2024"))

    # Monte-Carlo
    MIN_MC_REALIZATIONS = 1000
    MC_BATCH_SIZE = 5000

    # Exhaustive search guard: 2K bits
    EXHAUSTIVE_MAX_BITS = 26
    EXHAUSTIVE_BATCH = 4096

    # Report formatting
    FLOAT_SIG_DIGITS = 9


# Physical constants
PHYSICAL_CONSTANTS = {
    "speed_of_light_mps": 299_792_458.0,
    "thermal_noise_dbm_per_hz": -174.0,
    "earth_radius_m": 6_371_000.0,
}

# Sweep axes and the config key each one drives
SWEEP_AXES = {
    "num_users": "radio.num_users",
    "num_aps": "radio.num_aps",
    "generations": "ga.max_generations",
}

# Connection modes: allowed (AP flag, satellite flag) per user
CONNECTION_MODES = {
    "satellite_only": (0, 1),
    "aps_only": (1, 0),
    "hybrid": (1, 1),
}

# Validation scenario limits
VALIDATION_LIMITS = {
    "max_aps": 8,
    "max_users": 6,
    "max_sat_antennas": 16,
}

# Hitting-time experiment limits
HITTING_TIME_LIMITS = {
    "max_users": 3,
    "min_hit_rate": 0.95,
}
