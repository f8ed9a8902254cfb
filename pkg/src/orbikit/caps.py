"""Size caps for the exponential enumerations.

``ORBIKIT_CAP`` in the environment overrides the default count cap.
"""

import os

DEFAULT_COUNT_CAP = 100_000
MAX_P_ENUMERATION = 8
MAX_P_EXTENDED_POINTS = 5


def count_cap(cap: int | None = None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get("ORBIKIT_CAP")
    if env:
        return int(env)
    return DEFAULT_COUNT_CAP
