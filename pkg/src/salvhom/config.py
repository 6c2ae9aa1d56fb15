"""Runtime limits and locations, overridable through the environment."""

import os

DEFAULT_CELL_LIMIT = 8_000_000
SNF_CELL_LIMIT = 50_000
PARABOLIC_LIMIT = 2_000_000
# random evaluation points are drawn mod this prime, from a fixed seed
GENERIC_PRIME = 2_147_483_647
SEED = 20240917


_overrides = {}


def override(**values):
    """Set (or with ``None`` clear) process-wide values such as ``cell_limit``."""
    for name, value in values.items():
        if value is None:
            _overrides.pop(name, None)
        else:
            _overrides[name] = value


def cell_limit():
    if "cell_limit" in _overrides:
        return _overrides["cell_limit"]
    return int(os.environ.get("SALV_CELL_LIMIT", DEFAULT_CELL_LIMIT))


def cache_dir():
    return os.environ.get("SALV_CACHE_DIR", ".salv-cache")


def threads():
    value = os.environ.get("SALV_THREADS")
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1
