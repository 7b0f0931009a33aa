"""Safeguarded Newton iteration on a sign-change bracket."""
from __future__ import annotations

import math
from typing import Callable

from .errors import DomainError, NoConvergence


def newton_bisect(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    rtol: float = 4e-16,
    maxiter: int = 200,
) -> float:
    """Find a root of increasing ``f`` inside ``[lo, hi]``.

    A Newton step is taken whenever it lands strictly inside the current
    bracket; otherwise the bracket is bisected. The bracket shrinks every
    iteration, so convergence is guaranteed for continuous ``f``.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo > 0 or fhi < 0:
        raise DomainError(f"no sign change on [{lo!r}, {hi!r}]: f = ({flo!r}, {fhi!r})")

    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        d = fprime(x)
        step = fx / d if d > 0 and math.isfinite(d) else math.inf
        cand = x - step
        if lo < cand < hi:
            x_new = cand
        else:
            x_new = 0.5 * (lo + hi)
            step = x - x_new
        if abs(step) <= rtol * abs(x_new) or hi - lo <= rtol * abs(x_new):
            return x_new
        x = x_new
    raise NoConvergence(f"newton_bisect: no convergence in {maxiter} iterations")
