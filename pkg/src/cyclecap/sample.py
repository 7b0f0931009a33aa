"""Exact uniform sampling from S_{n,alpha} driven by the exact count table.

With k elements left, the cycle through a fixed element has length j with
probability (k-1)...(k-j+1) a_{k-j} / a_k. Repeating until no element is
left yields a cycle type with exactly the law induced by the uniform
measure; laying those lengths over a uniform shuffle yields the permutation.
"""
from __future__ import annotations

import csv
import io
import json
import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .exact import Constraint, CountTable, count_constrained
from .saddle import moments
from .stats import ks_sample_vs_normal

__all__ = [
    "CycleType",
    "SampleRun",
    "CycleSampler",
    "substream",
    "sample_cycle_type",
    "sample_permutation",
    "sample_cycle_types",
    "run_clt_experiment",
]

_SEED_MAX = 2**64
# cache step CDFs only while n * alpha stays below this many floats
_CACHE_LIMIT = 50_000_000


@dataclass(frozen=True)
class CycleType:
    n: int
    counts: dict

    @property
    def total_cycles(self) -> int:
        return sum(self.counts.values())

    def key(self) -> tuple:
        return tuple(sorted(self.counts.items()))


@dataclass(frozen=True)
class SampleRun:
    constraint: Constraint
    seed: int
    replicates: int
    m: float
    v: float
    cycles: np.ndarray
    standardized_values: np.ndarray

    def summary(self) -> dict:
        ks = ks_sample_vs_normal(self.standardized_values)
        return {
            **self.constraint.to_dict(),
            "seed": self.seed,
            "replicates": self.replicates,
            "m": self.m,
            "v": self.v,
            "sample_mean": float(np.mean(self.cycles)),
            "sample_variance": float(np.var(self.cycles, ddof=1)) if self.replicates > 1 else 0.0,
            "standardized_mean": float(np.mean(self.standardized_values)),
            "ks_distance": ks.distance,
            "ks_location_of_max": ks.location_of_max,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), separators=(",", ":"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(
            f"# n={self.constraint.n},alpha={self.constraint.alpha},seed={self.seed},"
            f"m={self.m!r},v={self.v!r}\n"
        )
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["replicate", "cycles", "standardized"])
        for r, (c, z) in enumerate(zip(self.cycles.tolist(), self.standardized_values.tolist())):
            w.writerow([r, c, repr(z)])
        return buf.getvalue()


def substream(seed: int, replicate: int) -> np.random.Generator:
    """Independent PCG64 stream number ``replicate`` derived from ``seed``."""
    if not 0 <= seed < _SEED_MAX:
        raise DomainError("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replicate,))))


class CycleSampler:
    """Inverse-CDF sampler of cycle lengths, with per-k CDFs built lazily."""

    def __init__(self, table: CountTable):
        self.table = table
        self._cache: dict[int, list] | None = (
            {} if table.n * table.alpha <= _CACHE_LIMIT else None
        )
        self._all: list | None = None

    def cdf(self, k: int) -> list:
        if self._cache is not None:
            hit = self._cache.get(k)
            if hit is not None:
                return hit
        cdf = np.cumsum(self.table.first_step_law(k)).tolist()
        if self._cache is not None:
            self._cache[k] = cdf
        return cdf

    def all_cdfs(self) -> list | None:
        """Every step CDF indexed by k, or None when the cache is disabled."""
        if self._cache is None:
            return None
        if self._all is None:
            for k in range(1, self.table.n + 1):
                self.cdf(k)
            self._all = [None] + [self._cache[k] for k in range(1, self.table.n + 1)]
        return self._all

    def draw_length(self, k: int, u: float) -> int:
        cdf = self.cdf(k)
        j = bisect_right(cdf, u * cdf[-1]) + 1
        return min(j, len(cdf))

    def lengths(self, rng: np.random.Generator) -> list[int]:
        out = []
        k = self.table.n
        while k > 0:
            j = self.draw_length(k, rng.random())
            out.append(j)
            k -= j
        return out

    def count_cycles(self, rng: np.random.Generator) -> int:
        k = self.table.n
        cycles = 0
        cdfs = self.all_cdfs()
        block = rng.random(64).tolist()
        i = 0
        while k > 0:
            if i == 64:
                block = rng.random(64).tolist()
                i = 0
            cdf = cdfs[k] if cdfs is not None else self.cdf(k)
            k -= min(bisect_right(cdf, block[i] * cdf[-1]) + 1, len(cdf))
            i += 1
            cycles += 1
        return cycles


@lru_cache(maxsize=8)
def _sampler_for(table: CountTable) -> CycleSampler:
    return CycleSampler(table)


def sample_cycle_type(table: CountTable, rng: np.random.Generator) -> CycleType:
    lengths = _sampler_for(table).lengths(rng)
    return CycleType(table.n, dict(Counter(lengths)))


def sample_permutation(table: CountTable, rng: np.random.Generator) -> np.ndarray:
    """Uniform element of S_{n,alpha} in one-line form (0-based images)."""
    lengths = _sampler_for(table).lengths(rng)
    order = rng.permutation(table.n)
    images = np.empty(table.n, dtype=np.int64)
    pos = 0
    for j in lengths:
        block = order[pos : pos + j]
        images[block] = np.roll(block, -1)
        pos += j
    return images


def sample_cycle_types(table: CountTable, replicates: int, seed: int) -> list[CycleType]:
    """``replicates`` cycle types; replicate r draws from substream r of ``seed``."""
    return [sample_cycle_type(table, substream(seed, r)) for r in range(replicates)]


def run_clt_experiment(
    c: Constraint, replicates: int, seed: int, table: CountTable | None = None
) -> SampleRun:
    """Draw total cycle counts and standardize them by the saddle-point moments."""
    if replicates < 1:
        raise DomainError("replicates must be positive")
    mp = moments(c)
    if table is None:
        table = count_constrained(c)
    sampler = _sampler_for(table)
    cycles = np.array(
        [sampler.count_cycles(substream(seed, r)) for r in range(replicates)], dtype=np.int64
    )
    z = (cycles - mp.m) / math.sqrt(mp.v)
    return SampleRun(c, seed, replicates, mp.m, mp.v, cycles, z)
