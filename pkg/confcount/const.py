"""Constants for confcount."""

from typing import Final

SCHEMA_VERSION: Final = 1

# 2**31 - {19, 61, 69, 85, 99}; products of two residues fit in 64 bits.
DEFAULT_PRIMES: Final[tuple[int, ...]] = (
    2147483629,
    2147483587,
    2147483579,
    2147483563,
    2147483549,
)
MAX_PRIME: Final = 2**31
DEFAULT_SEED: Final = 20240611
DEFAULT_TRIALS: Final = 5
AGREEMENT_THRESHOLD: Final = 0.6  # 3 of 5
SAMPLING_RETRY_CAP: Final = 1000

SATURATION_DENOMINATORS: Final = "denominators"
SATURATION_FULL: Final = "full"
SATURATION_MODES: Final = (SATURATION_DENOMINATORS, SATURATION_FULL)

# Groebner engine caps
MAX_BASIS_DEGREE: Final = 120
MAX_PAIRS: Final = 200_000
MAX_BASIS_SIZE: Final = 5_000

COMPACT_MAX_N: Final = 9
MIN_R: Final = 2

FORMAT_TEXT: Final = "text"
FORMAT_JSON: Final = "json"

EXIT_OK: Final = 0
EXIT_INCONSISTENT: Final = 1
EXIT_BAD_INPUT: Final = 2
EXIT_RESOURCE_LIMIT: Final = 3
