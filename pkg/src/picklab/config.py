"""Work-budget configuration.

The budget caps combinatorial work (free words, quiver paths, series terms)
per dataset.  The PICKLAB_BUDGET environment variable overrides the default.
"""

import os

DEFAULT_BUDGET = 10**7


def work_budget() -> int:
    raw = os.environ.get("PICKLAB_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    value = int(raw)
    if value <= 0:
        raise ValueError("PICKLAB_BUDGET must be positive")
    return value
