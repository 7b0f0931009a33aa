from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_MAX_N = "CYCLECAP_MAX_N"


@dataclass(frozen=True)
class Limits:
    """Hard caps on exact computations.

    ``max_count_n`` bounds the big-integer count recurrence,
    ``max_distribution_n`` the floating-point bivariate table and
    ``brute_force_max_n`` the enumeration oracle.
    """

    max_count_n: int = 100_000
    max_distribution_n: int = 5_000
    brute_force_max_n: int = 9


def default_limits() -> Limits:
    """Default caps, with ``CYCLECAP_MAX_N`` overriding the count cap."""
    limits = Limits()
    raw = os.environ.get(ENV_MAX_N)
    if raw:
        limits = replace(limits, max_count_n=int(raw))
    return limits
