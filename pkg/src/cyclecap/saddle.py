"""Saddle point x(w) of sum_{j=1..alpha} x^j = n / w and the quantities built on it.

The equation is solved for t = log x, where the geometric sum has the
overflow-free form

    log S(t) = t + log(alpha) + L(alpha t) - L(t),   L(y) = log((e^y - 1) / y).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _special
from .errors import DiagnosticError, DomainError, NoConvergence, OutOfRegime
from .exact import Constraint
from .roots import newton_bisect

__all__ = [
    "SaddleSolution",
    "MomentPair",
    "HDerivatives",
    "RegimeReport",
    "GROWTH_CONSTANT",
    "solve_saddle",
    "saddle_log",
    "x_prime_closed_form",
    "x_double_prime_closed_form",
    "power_sums",
    "moments",
    "h_derivatives",
    "saddle_point_count_approx",
    "regime_check",
]

GROWTH_CONSTANT = 1.0 / (12.0 * math.pi**2 * math.e)

# above this many terms, power sums switch from direct summation to closed forms
DIRECT_SUM_MAX = 100_000
_CHUNK = 1 << 20

RESIDUAL_TOL = 1e-10
SECOND_DERIVATIVE_RTOL = 1e-6
_FD_STEP = 2e-3
_H3_STEP = 1e-4


@dataclass(frozen=True)
class SaddleSolution:
    constraint: Constraint
    w: float
    x: float
    log_x: float
    x_prime: float
    x_double_prime: float
    residual: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["constraint"] = self.constraint.to_dict()
        return d


@dataclass(frozen=True)
class MomentPair:
    m: float
    v: float

    def to_dict(self) -> dict:
        return {"m": self.m, "v": self.v}


@dataclass(frozen=True)
class HDerivatives:
    h1: float
    h2: float
    h3_estimate: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RegimeReport:
    n: int
    alpha: int
    lhs: float
    bound: float
    alpha_at_least_4: bool
    growth_condition: bool
    hypothesis_satisfied: bool
    saddle_regime: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _check_regime(c: Constraint, w: float) -> None:
    if not 0.5 < w < 1.5:
        raise DomainError(f"w must lie in (0.5, 1.5), got {w}")
    if not c.in_saddle_regime(w):
        raise OutOfRegime(
            f"n/(w*alpha) = {c.n / (w * c.alpha):.6g} <= 1 for n={c.n}, alpha={c.alpha}, w={w}"
        )


def saddle_log(n: int, alpha: int, w: float) -> float:
    """t = log x(w), the positive root of log S(t) = log(n / w)."""
    target = math.log(n / w)
    if alpha == 1:
        return target
    u = n / (w * alpha)
    # geometric/arithmetic mean bracket
    lo = math.log(u) / alpha
    hi = 2.0 * math.log(u) / (alpha + 1)

    def f(t: float) -> float:
        return _special.log_geometric_sum(t, alpha) - target

    def fp(t: float) -> float:
        return _special.d_log_geometric_sum(t, alpha)

    return newton_bisect(f, fp, lo, hi)


def x_prime_closed_form(n: int, alpha: int, w: float, t: float) -> float:
    """dx/dw = (x - 1) x / (w (1 - alpha (x - 1) - w alpha x / n))."""
    x = math.exp(t)
    d = math.expm1(t)
    return d * x / (w * (1.0 - alpha * d - w * alpha * x / n))


def x_double_prime_closed_form(n: int, alpha: int, w: float, t: float) -> float:
    """Second derivative obtained by differentiating the closed form of x'(w)."""
    x = math.exp(t)
    d = math.expm1(t)
    e = 1.0 - alpha * d - w * alpha * x / n
    D = w * e
    xp = d * x / D
    dN = (2.0 * x - 1.0) * xp
    dD = (1.0 - alpha * d - 2.0 * w * alpha * x / n) - w * alpha * xp * (1.0 + w / n)
    return (dN - xp * dD) / D


def _richardson_first_second(f, w: float, h: float) -> tuple[float, float]:
    f0 = f(w)

    def diffs(step: float) -> tuple[float, float]:
        fp, fm = f(w + step), f(w - step)
        return (fp - fm) / (2 * step), (fp - 2 * f0 + fm) / step**2

    d1h, d2h = diffs(h)
    d1q, d2q = diffs(h / 2)
    return (4 * d1q - d1h) / 3, (4 * d2q - d2h) / 3


def power_sums(t: float, alpha: int) -> tuple[float, float, float]:
    """(sum x^j, sum j x^j, sum x^j / j) for x = e^t, j = 1..alpha.

    Summed directly in ascending j for alpha <= DIRECT_SUM_MAX. Beyond that
    the first two use closed forms and the third is accumulated in chunks.
    """
    if alpha <= DIRECT_SUM_MAX:
        j = np.arange(1, alpha + 1, dtype=float)
        xj = np.exp(j * t)
        return math.fsum(xj), math.fsum(j * xj), math.fsum(xj / j)
    log_s = _special.log_geometric_sum(t, alpha)
    s = math.exp(log_s)
    j1 = s * _special.d_log_geometric_sum(t, alpha)
    return s, j1, _log_series_sum(t, alpha)


def _log_series_sum(t: float, alpha: int) -> float:
    partials = []
    for start in range(1, alpha + 1, _CHUNK):
        j = np.arange(start, min(start + _CHUNK, alpha + 1), dtype=float)
        partials.append(math.fsum(np.exp(j * t) / j))
    return math.fsum(partials)


def solve_saddle(c: Constraint, w: float = 1.0) -> SaddleSolution:
    """Solve for x(w) > 1 and its first two derivatives in w.

    x'' is estimated by Richardson-extrapolated central differences of
    t(w) = log x(w), then x'' = x (t'' + t'^2). The result must agree with
    the differentiated closed form to SECOND_DERIVATIVE_RTOL.
    """
    _check_regime(c, w)
    n, alpha = c.n, c.alpha
    t = saddle_log(n, alpha, w)
    x = math.exp(t)
    xp = x_prime_closed_form(n, alpha, w, t)

    h = _FD_STEP * w
    dt1, dt2 = _richardson_first_second(lambda s: saddle_log(n, alpha, s), w, h)
    xpp_numeric = x * (dt2 + dt1 * dt1)
    xpp_analytic = x_double_prime_closed_form(n, alpha, w, t)
    if abs(xpp_numeric - xpp_analytic) > SECOND_DERIVATIVE_RTOL * abs(xpp_analytic):
        raise DiagnosticError(
            f"x'' routes disagree: numeric {xpp_numeric!r} vs analytic {xpp_analytic!r}"
        )

    if alpha <= DIRECT_SUM_MAX:
        s = power_sums(t, alpha)[0]
    else:
        s = math.exp(_special.log_geometric_sum(t, alpha))
    residual = abs(s - n / w) / (n / w)
    if residual > RESIDUAL_TOL:
        raise NoConvergence(f"saddle residual {residual:.3g} exceeds {RESIDUAL_TOL}")
    return SaddleSolution(c, w, x, t, xp, xpp_numeric, residual)


def moments(c: Constraint) -> MomentPair:
    """m = sum_j x^j / j and v = m + n x'(1) / x(1) at w = 1."""
    _check_regime(c, 1.0)
    n, alpha = c.n, c.alpha
    t = saddle_log(n, alpha, 1.0)
    m = power_sums(t, alpha)[2] if alpha <= DIRECT_SUM_MAX else _log_series_sum(t, alpha)
    xp = x_prime_closed_form(n, alpha, 1.0, t)
    return MomentPair(m, m + n * xp / math.exp(t))


def _h2(n: int, alpha: int, w: float) -> float:
    t = saddle_log(n, alpha, w)
    return n * x_prime_closed_form(n, alpha, w, t) / (w * math.exp(t))


def h_derivatives(c: Constraint, w: float = 1.0) -> HDerivatives:
    """Leading expressions for h', h'' and a finite-difference estimate of h'''."""
    sol = solve_saddle(c, w)
    n, alpha = c.n, c.alpha
    m_w = _log_series_sum(sol.log_x, alpha)
    h1 = (
        m_w
        - 0.5 * sol.x_prime / sol.x
        + 0.5 * sol.x_double_prime / sol.x_prime
        + 0.5 / w
    )
    h2 = n * sol.x_prime / (w * sol.x)
    h3, _ = _richardson_first_second(lambda s: _h2(n, alpha, s), w, _H3_STEP)
    return HDerivatives(h1, h2, h3)


def saddle_point_count_approx(c: Constraint) -> float:
    """log |S_{n,alpha}| ~ log n! + m - n log x - log(2 pi sum_j j x^j) / 2 at w = 1."""
    _check_regime(c, 1.0)
    n, alpha = c.n, c.alpha
    t = saddle_log(n, alpha, 1.0)
    _, j1, m = power_sums(t, alpha)
    return math.lgamma(n + 1) + m - n * t - 0.5 * math.log(2 * math.pi * j1)


def regime_check(c: Constraint) -> RegimeReport:
    """Evaluate alpha >= 4 and (alpha/n) log n (log log n)^2 < 1/(12 pi^2 e) at this n."""
    n, alpha = c.n, c.alpha
    if n < 3:
        raise DomainError("regime_check needs n >= 3 so that log log n is defined")
    lhs = alpha / n * math.log(n) * math.log(math.log(n)) ** 2
    a_ok = alpha >= 4
    g_ok = lhs < GROWTH_CONSTANT
    return RegimeReport(
        n=n,
        alpha=alpha,
        lhs=lhs,
        bound=GROWTH_CONSTANT,
        alpha_at_least_4=a_ok,
        growth_condition=g_ok,
        hypothesis_satisfied=a_ok and g_ok,
        saddle_regime=c.in_saddle_regime(1.0),
    )
