import os
from typing import Set
from dotenv import load_dotenv

load_dotenv()

KNOWN_CHECKS = (
    'prop1', 'eq4', 'eq5', 'bs-fibers', 'prop3', 'toeplitz',
    'sk-bracket', 'prop4', 'boundary-scan', 'convergence',
)
KNOWN_GROUPS = ('moduli', 'real', 'complex', 'refinement')


def _parse_checks(env_value: str) -> Set[str]:
    """
    Parse ALAG_ENABLED_CHECKS from environment variable.
    Format: comma-separated check ids or module groups, e.g., "eq4,prop1" or "complex"
    Empty string or "all" means every check is enabled (no filtering).
    """
    if not env_value or env_value.lower() == 'all':
        return set()

    checks = set()
    for check_id in env_value.split(','):
        check_id = check_id.strip().lower()
        if check_id in KNOWN_CHECKS or check_id in KNOWN_GROUPS:
            checks.add(check_id)
    return checks


class Config:
    # Output
    OUTPUT_DIR = os.getenv('ALAG_OUTPUT_DIR', 'reports')

    # Reproducibility
    DEFAULT_SEED = int(os.getenv('ALAG_SEED', 0))
    TOL_SCALE = float(os.getenv('ALAG_TOL_SCALE', 1.0))

    # Logging
    LOG_LEVEL = os.getenv('ALAG_LOG_LEVEL', 'INFO').upper()

    # Concurrency bound for independent checks
    MAX_WORKERS = int(os.getenv('ALAG_MAX_WORKERS', 4))

    # Check selection - restrict every scenario to these check ids
    # Set via environment variable: ALAG_ENABLED_CHECKS=eq4,prop1
    # Use "all" or empty string to allow every check
    ENABLED_CHECKS = _parse_checks(os.getenv('ALAG_ENABLED_CHECKS', 'all'))
