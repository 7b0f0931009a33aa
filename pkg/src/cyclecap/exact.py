"""Exact counting of permutations with bounded cycle lengths.

a_k = |S_{k,alpha}| satisfies

    a_k = sum_{j=1..min(alpha,k)} (k-1)(k-2)...(k-j+1) * a_{k-j},

which is coefficient extraction of k! [z^k] exp(sum_{j<=alpha} z^j / j).
The sum is evaluated in Horner form, one small-integer multiplication and
one addition per term.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import gmpy2
import numpy as np

from .config import Limits, default_limits
from .errors import DomainError, ResourceLimitError

__all__ = [
    "Constraint",
    "CountTable",
    "CycleCountDistribution",
    "count_constrained",
    "exact_count",
    "log_exact_count",
    "exact_cycle_count_distribution",
    "distribution_moments",
    "brute_force_oracle",
    "brute_force_cycle_types",
    "cycle_lengths",
]


@dataclass(frozen=True)
class Constraint:
    """Permutations of ``n`` elements with every cycle of length <= ``alpha``.

    ``alpha > n`` is clipped to ``n``; the request is kept in ``requested_alpha``.
    """

    n: int
    alpha: int
    requested_alpha: int = field(init=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or int(self.alpha) != self.alpha:
            raise DomainError("n and alpha must be integers")
        if self.n < 1 or self.alpha < 1:
            raise DomainError(f"need n >= 1 and alpha >= 1, got n={self.n}, alpha={self.alpha}")
        object.__setattr__(self, "requested_alpha", int(self.alpha))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", min(int(self.alpha), int(self.n)))

    @property
    def min_cycles(self) -> int:
        return -(-self.n // self.alpha)

    def in_saddle_regime(self, w: float = 1.0) -> bool:
        return self.n / (w * self.alpha) > 1.0

    def to_dict(self) -> dict:
        return {"n": self.n, "alpha": self.alpha, "requested_alpha": self.requested_alpha}


def _int_to_str(value: int) -> str:
    # gmpy2 is not subject to the interpreter's int->str digit limit
    return str(gmpy2.mpz(value))


@dataclass(frozen=True, eq=False)
class CountTable:
    """Exact counts ``a_0..a_n`` for a fixed ``alpha``."""

    constraint: Constraint
    counts: tuple

    @property
    def n(self) -> int:
        return self.constraint.n

    @property
    def alpha(self) -> int:
        return self.constraint.alpha

    @property
    def total(self) -> int:
        return self.counts[-1]

    @cached_property
    def step_ratios(self) -> np.ndarray:
        """s_k = k * a_{k-1} / a_k, correctly rounded, for k = 0..n (s_0 unused)."""
        a = self.counts
        s = np.empty(len(a))
        s[0] = 1.0
        for k in range(1, len(a)):
            s[k] = (k * a[k - 1]) / a[k]
        return s

    def first_step_law(self, k: int) -> np.ndarray:
        """Law of the length j of the cycle holding a fixed element, k elements left.

        Entry ``j-1`` is (k-1)...(k-j+1) * a_{k-j} / a_k for j = 1..min(alpha, k),
        i.e. (1/k) * s_k * s_{k-1} * ... * s_{k-j+1}.
        """
        if not 1 <= k <= self.n:
            raise DomainError(f"k must lie in [1, {self.n}], got {k}")
        J = min(self.alpha, k)
        return np.cumprod(self.step_ratios[k : k - J : -1]) / k

    def to_dict(self) -> dict:
        return {**self.constraint.to_dict(), "counts": [_int_to_str(a) for a in self.counts]}

    @classmethod
    def from_dict(cls, data: dict) -> "CountTable":
        c = Constraint(data["n"], data.get("requested_alpha", data["alpha"]))
        return cls(c, tuple(int(gmpy2.mpz(s)) for s in data["counts"]))


@dataclass(frozen=True)
class CycleCountDistribution:
    """Exact law of the total number of cycles C under the uniform measure on S_{n,alpha}."""

    constraint: Constraint
    probs: dict
    support_min: int
    support_max: int

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ks = np.arange(self.support_min, self.support_max + 1)
        return ks, np.array([self.probs.get(int(k), 0.0) for k in ks])

    def to_dict(self) -> dict:
        return {
            **self.constraint.to_dict(),
            "support_min": self.support_min,
            "support_max": self.support_max,
            "probs": {str(k): p for k, p in sorted(self.probs.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CycleCountDistribution":
        c = Constraint(data["n"], data.get("requested_alpha", data["alpha"]))
        probs = {int(k): float(p) for k, p in data["probs"].items()}
        return cls(c, probs, int(data["support_min"]), int(data["support_max"]))


def _check_count_cap(c: Constraint, limits: Limits | None) -> None:
    limits = limits or default_limits()
    if c.n > limits.max_count_n:
        raise ResourceLimitError(
            f"exact count for n={c.n} exceeds the configured cap {limits.max_count_n}"
        )


def _count_iter(n: int, alpha: int, keep_all: bool):
    tab = [gmpy2.mpz(1)]
    for k in range(1, n + 1):
        lo = max(0, k - alpha)
        # Horner: t <- a_i + i * t for i = lo+1..k-1, starting at a_lo
        t = tab[lo]
        for i in range(lo + 1, k):
            t = tab[i] + i * t
        tab.append(t)
        if not keep_all and len(tab) > alpha + 1:
            tab[k - alpha - 1] = None
    return tab


def count_constrained(c: Constraint, limits: Limits | None = None) -> CountTable:
    """Full table a_0..a_n of |S_{k,alpha}|.

    Memory grows like n^2 log n bits; use :func:`exact_count` when only a_n is needed.
    """
    _check_count_cap(c, limits)
    tab = _count_iter(c.n, c.alpha, keep_all=True)
    return CountTable(c, tuple(int(a) for a in tab))


def exact_count(c: Constraint, limits: Limits | None = None) -> int:
    """|S_{n,alpha}| keeping only a sliding window of alpha+1 table entries."""
    _check_count_cap(c, limits)
    return int(_count_iter(c.n, c.alpha, keep_all=False)[c.n])


def log_exact_count(c: Constraint, limits: Limits | None = None) -> float:
    return math.log(exact_count(c, limits))


def exact_cycle_count_distribution(
    c: Constraint, limits: Limits | None = None, table: CountTable | None = None
) -> CycleCountDistribution:
    """P(C = k) for k = ceil(n/alpha)..n.

    Row r_k is the law of C on S_{k,alpha}. Conditioning on the length j of
    the cycle through a fixed element gives the mixture

        r_k = sum_j P_k(j) * shift(r_{k-j}),

    with P_k the exact first-step law. Every row is a probability vector,
    so no rescaling offsets are needed; only the last alpha rows are kept.
    """
    limits = limits or default_limits()
    if c.n > limits.max_distribution_n:
        raise ResourceLimitError(
            f"distribution for n={c.n} exceeds the configured cap {limits.max_distribution_n}"
        )
    if table is None:
        table = count_constrained(c, limits)
    elif table.constraint != c:
        raise DomainError("count table does not match the constraint")

    n, alpha = c.n, c.alpha
    # Each row is written twice (slots i and i + width) so that the last
    # alpha rows always form one contiguous block of the buffer.
    width = alpha
    wrap = 2 * width < n + 1
    buf = np.zeros((2 * width if wrap else n + 1, n + 1))

    def slot(k: int) -> int:
        return k % width if wrap else k

    buf[0, 0] = 1.0
    if wrap:
        buf[width, 0] = 1.0
    for k in range(1, n + 1):
        law = table.first_step_law(k)
        J = law.size
        start = slot(k - J)
        mix = np.ascontiguousarray(law[::-1]) @ buf[start : start + J, :k]
        i = slot(k)
        buf[i, 1 : k + 1] = mix
        buf[i, 0] = 0.0
        if wrap:
            buf[i + width] = buf[i]
    final = buf[slot(n)]
    final = final / final.sum()

    lo = c.min_cycles
    probs = {k: float(final[k]) for k in range(lo, n + 1)}
    return CycleCountDistribution(c, probs, lo, n)


def distribution_moments(d: CycleCountDistribution) -> tuple[float, float]:
    ks, ps = d.as_arrays()
    ks = ks.astype(float)
    mean = math.fsum(ks * ps)
    second = math.fsum(ks * ks * ps)
    return mean, max(second - mean * mean, 0.0)


def cycle_lengths(perm) -> list[int]:
    """Cycle lengths of a permutation given in one-line form (0-based images)."""
    n = len(perm)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        out.append(length)
    return out


def _enumerate(c: Constraint, limits: Limits | None):
    limits = limits or default_limits()
    if c.n > limits.brute_force_max_n:
        raise ResourceLimitError(
            f"brute force enumeration is limited to n <= {limits.brute_force_max_n}"
        )
    for perm in itertools.permutations(range(c.n)):
        lengths = cycle_lengths(perm)
        if max(lengths) <= c.alpha:
            yield lengths


def brute_force_oracle(
    c: Constraint, limits: Limits | None = None
) -> tuple[int, CycleCountDistribution]:
    """Enumerate all n! permutations and tally the admissible ones by cycle count."""
    tally = Counter(len(lengths) for lengths in _enumerate(c, limits))
    total = sum(tally.values())
    probs = {k: tally.get(k, 0) / total for k in range(c.min_cycles, c.n + 1)}
    return total, CycleCountDistribution(c, probs, c.min_cycles, c.n)


def brute_force_cycle_types(c: Constraint, limits: Limits | None = None) -> dict:
    """Exact law of the cycle type, keyed by the sorted tuple of (length, count) pairs."""
    tally = Counter(
        tuple(sorted(Counter(lengths).items())) for lengths in _enumerate(c, limits)
    )
    total = sum(tally.values())
    return {key: cnt / total for key, cnt in tally.items()}
