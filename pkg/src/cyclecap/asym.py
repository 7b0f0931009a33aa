"""Asymptotic toolkit: xi(u), I(z), T_K(z), Ei's expansion and the series for m and v.

xi(u) is the non-zero root of e^xi = 1 + u xi. The mean and variance
predictions expand in powers of 1/xi(n/alpha):

    m ~ (n/alpha) sum_{k>=0} k! / xi^k,    v ~ (n/alpha) sum_{k>=2} (k! - 1) / xi^k.

Both series diverge; by default they are cut at the smallest term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _special
from .errors import DomainError
from .exact import Constraint
from .roots import newton_bisect

__all__ = [
    "XiValue",
    "ExpansionResult",
    "TruncationReason",
    "solve_xi",
    "xi_two_term",
    "eval_I",
    "eval_T",
    "expand_m",
    "expand_v",
    "ei_asymptotic",
]

I_MAX_ARG = 700.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


class TruncationReason(str, Enum):
    REQUESTED_ORDER = "requested_order"
    OPTIMAL_STOP = "optimal_stop"


@dataclass(frozen=True)
class XiValue:
    u: float
    xi: float


@dataclass(frozen=True)
class ExpansionResult:
    """A truncated series; ``terms[i]`` is the term of order ``first_index + i``."""

    value: float
    terms: tuple
    first_index: int
    truncation_index: int
    truncation_reason: TruncationReason
    u: float
    xi: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "terms": list(self.terms),
            "first_index": self.first_index,
            "truncation_index": self.truncation_index,
            "truncation_reason": self.truncation_reason.value,
            "u": self.u,
            "xi": self.xi,
        }


def solve_xi(u: float) -> XiValue:
    """Non-zero root of e^xi = 1 + u xi, found as the root of (e^xi - 1)/xi = u."""
    if u < 1:
        raise DomainError(f"xi(u) needs u >= 1, got {u}")
    if u == 1:
        return XiValue(u, 0.0)
    log_u = math.log(u)

    def f(s: float) -> float:
        return _special.log_expm1_ratio(s) - log_u

    xi = newton_bisect(f, _special.d_log_expm1_ratio, log_u, 2.0 * log_u)
    return XiValue(u, xi)


def xi_two_term(u: float) -> float:
    """log u + log log(u + 2)."""
    if u <= 1:
        raise DomainError(f"xi_two_term needs u > 1, got {u}")
    return math.log(u) + math.log(math.log(u + 2))


def eval_I(z: float) -> float:
    """I(z) = int_0^z (e^t - 1)/t dt = sum_{k>=1} z^k / (k k!)."""
    if z < 0:
        raise DomainError("eval_I needs z >= 0")
    if z > I_MAX_ARG:
        raise OverflowError(f"I({z}) exceeds double range; use a log-scale expansion")
    if z == 0:
        return 0.0
    total = 0.0
    comp = 0.0
    power = 1.0  # z^k / k!
    k = 0
    while True:
        k += 1
        power *= z / k
        term = power / k
        # Neumaier summation
        s = total + term
        if abs(total) >= abs(term):
            comp += (total - s) + term
        else:
            comp += (term - s) + total
        total = s
        if k > z and term < 1e-16 * abs(total + comp):
            return total + comp


def _t_integrand_scaled(t: np.ndarray, K: float, z: float) -> np.ndarray:
    # e^{-z} times the integrand of T_K
    s = t / K
    small = s < 1e-4
    gm1 = np.where(small, s / 2 + s * s / 12, s / -np.expm1(-np.where(small, 1.0, s)) - 1.0)
    return np.exp(t - z) * (-np.expm1(-t)) / t * gm1


def _gl_composite(K: float, z: float, panels: int) -> float:
    edges = np.linspace(0.0, z, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    t = mid + half * _GL_NODES[None, :]
    vals = _t_integrand_scaled(t, K, z)
    return float(np.sum(half * _GL_WEIGHTS[None, :] * vals))


def eval_T(K: float, z: float, *, scaled: bool = False) -> float:
    """T_K(z) = int_0^z (e^t - 1)/t * (t/K * e^{t/K} / (e^{t/K} - 1) - 1) dt.

    Composite 20-point Gauss-Legendre, halving the panel width until two
    successive estimates agree to 1e-10 e^z / K. With ``scaled=True`` the
    value is returned multiplied by e^{-z}, which keeps large z finite.
    """
    if K <= 0:
        raise DomainError("eval_T needs K > 0")
    if not 0 <= z <= math.pi * K:
        raise DomainError(f"eval_T needs 0 <= z <= pi K, got z={z}, K={K}")
    if z == 0:
        return 0.0
    tol = 1e-10 / K
    panels = max(1, math.ceil(z))
    prev = _gl_composite(K, z, panels)
    for _ in range(12):
        panels *= 2
        cur = _gl_composite(K, z, panels)
        if abs(cur - prev) <= tol:
            break
        prev = cur
    return cur if scaled else cur * math.exp(z)


def _truncate(terms_iter, first_index: int, max_order: int | None):
    terms = []
    if max_order is not None:
        if max_order < first_index:
            raise DomainError(f"max_order must be >= {first_index}")
        for k, term in terms_iter:
            if k > max_order:
                break
            terms.append(term)
        return terms, max_order, TruncationReason.REQUESTED_ORDER
    for k, term in terms_iter:
        if terms and abs(term) >= abs(terms[-1]):
            return terms, k - 1, TruncationReason.OPTIMAL_STOP
        terms.append(term)
    raise AssertionError("unreachable: factorial terms always turn around")


def _series_setup(c: Constraint) -> tuple[float, float]:
    u = c.n / c.alpha
    if u <= math.e:
        raise DomainError(f"expansions need n/alpha > e, got {u}")
    return u, solve_xi(u).xi


def _m_terms(u: float, xi: float):
    term = u  # u * k! / xi^k
    k = 0
    while True:
        yield k, term
        k += 1
        term *= k / xi


def _v_terms(u: float, xi: float):
    fact = u * 2.0 / xi**2  # u * k! / xi^k
    inv = u / xi**2  # u / xi^k
    k = 2
    while True:
        yield k, fact - inv
        k += 1
        fact *= k / xi
        inv /= xi


def expand_m(c: Constraint, max_order: int | None = None) -> ExpansionResult:
    u, xi = _series_setup(c)
    terms, idx, reason = _truncate(_m_terms(u, xi), 0, max_order)
    return ExpansionResult(math.fsum(terms), tuple(terms), 0, idx, reason, u, xi)


def expand_v(c: Constraint, max_order: int | None = None) -> ExpansionResult:
    u, xi = _series_setup(c)
    terms, idx, reason = _truncate(_v_terms(u, xi), 2, max_order)
    return ExpansionResult(math.fsum(terms), tuple(terms), 2, idx, reason, u, xi)


def ei_asymptotic(x: float, order: int) -> float:
    """(e^x / x) sum_{k=0..order} k! / x^k."""
    if x <= 1:
        raise DomainError("ei_asymptotic needs x > 1")
    if order < 0:
        raise DomainError("order must be >= 0")
    term = 1.0
    total = [term]
    for k in range(1, order + 1):
        term *= k / x
        total.append(term)
    return math.exp(x) / x * math.fsum(total)
