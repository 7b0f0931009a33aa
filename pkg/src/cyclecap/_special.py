"""Numerically stable elementary helpers.

``log_expm1_ratio(y) = log((e^y - 1) / y)`` is the building block of the
geometric sum in log form:

    log(sum_{j=1..a} e^{j t}) = t + log(a) + L(a t) - L(t).
"""
from __future__ import annotations

import math

_SMALL = 1e-5


def log_expm1_ratio(y: float) -> float:
    if y < 0:
        raise ValueError("log_expm1_ratio needs y >= 0")
    if y < _SMALL:
        return y / 2 + y * y / 24
    if y > 700:
        return y - math.log(y) + math.log1p(-math.exp(-y))
    return math.log(math.expm1(y) / y)


def d_log_expm1_ratio(y: float) -> float:
    """Derivative of :func:`log_expm1_ratio`: 1/(1 - e^-y) - 1/y."""
    if y < 1e-3:
        return 0.5 + y / 12 - y**3 / 720
    return 1.0 / (-math.expm1(-y)) - 1.0 / y


def log_geometric_sum(t: float, alpha: int) -> float:
    """log(sum_{j=1..alpha} e^{j t}) for t >= 0, without overflow."""
    return t + math.log(alpha) + log_expm1_ratio(alpha * t) - log_expm1_ratio(t)


def d_log_geometric_sum(t: float, alpha: int) -> float:
    """d/dt of :func:`log_geometric_sum`; equals J_1 / S."""
    return 1.0 + alpha * d_log_expm1_ratio(alpha * t) - d_log_expm1_ratio(t)


def g_minus_one(s: float) -> float:
    """s e^s / (e^s - 1) - 1, accurate near s = 0."""
    if s < 1e-4:
        return s / 2 + s * s / 12
    return s / (-math.expm1(-s)) - 1.0
