"""Normal CDF, Kolmogorov-Smirnov distances and Pearson chi-square."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import DegenerateError, DomainError
from .exact import CycleCountDistribution

__all__ = [
    "KsReport",
    "phi",
    "ks_exact_vs_normal",
    "ks_sample_vs_normal",
    "chi_square_gof",
    "chi2_critical",
    "CHI2_CRITICAL",
]

MIN_EXPECTED = 5.0

# upper critical values of chi^2_dof, dof = 1..50, keyed by significance level
CHI2_CRITICAL = {
    0.05: (
        3.8415, 5.9915, 7.8147, 9.4877, 11.0705, 12.5916, 14.0671, 15.5073,
        16.9190, 18.3070, 19.6751, 21.0261, 22.3620, 23.6848, 24.9958, 26.2962,
        27.5871, 28.8693, 30.1435, 31.4104, 32.6706, 33.9244, 35.1725, 36.4150,
        37.6525, 38.8851, 40.1133, 41.3371, 42.5570, 43.7730, 44.9853, 46.1943,
        47.3999, 48.6024, 49.8018, 50.9985, 52.1923, 53.3835, 54.5722, 55.7585,
        56.9424, 58.1240, 59.3035, 60.4809, 61.6562, 62.8296, 64.0011, 65.1708,
        66.3386, 67.5048,
    ),
    0.01: (
        6.6349, 9.2103, 11.3449, 13.2767, 15.0863, 16.8119, 18.4753, 20.0902,
        21.6660, 23.2093, 24.7250, 26.2170, 27.6882, 29.1412, 30.5779, 31.9999,
        33.4087, 34.8053, 36.1909, 37.5662, 38.9322, 40.2894, 41.6384, 42.9798,
        44.3141, 45.6417, 46.9629, 48.2782, 49.5879, 50.8922, 52.1914, 53.4858,
        54.7755, 56.0609, 57.3421, 58.6192, 59.8925, 61.1621, 62.4281, 63.6907,
        64.9501, 66.2062, 67.4593, 68.7095, 69.9568, 71.2014, 72.4433, 73.6826,
        74.9195, 76.1539,
    ),
    0.001: (
        10.8276, 13.8155, 16.2662, 18.4668, 20.5150, 22.4577, 24.3219, 26.1245,
        27.8772, 29.5883, 31.2641, 32.9095, 34.5282, 36.1233, 37.6973, 39.2524,
        40.7902, 42.3124, 43.8202, 45.3147, 46.7970, 48.2679, 49.7282, 51.1786,
        52.6197, 54.0520, 55.4760, 56.8923, 58.3012, 59.7031, 61.0983, 62.4872,
        63.8701, 65.2472, 66.6188, 67.9852, 69.3465, 70.7029, 72.0547, 73.4020,
        74.7449, 76.0838, 77.4186, 78.7495, 80.0767, 81.4003, 82.7204, 84.0371,
        85.3506, 86.6608,
    ),
    0.0001: (
        15.1367, 18.4207, 21.1075, 23.5127, 25.7448, 27.8563, 29.8775, 31.8276,
        33.7199, 35.5640, 37.3670, 39.1344, 40.8707, 42.5793, 44.2632, 45.9249,
        47.5664, 49.1894, 50.7955, 52.3860, 53.9620, 55.5246, 57.0746, 58.6130,
        60.1403, 61.6573, 63.1645, 64.6624, 66.1517, 67.6326, 69.1057, 70.5712,
        72.0296, 73.4812, 74.9262, 76.3650, 77.7977, 79.2247, 80.6462, 82.0623,
        83.4733, 84.8793, 86.2806, 87.6773, 89.0695, 90.4574, 91.8412, 93.2209,
        94.5967, 95.9687,
    ),
}


@dataclass(frozen=True)
class KsReport:
    distance: float
    sample_size: Union[int, str]
    location_of_max: float

    def to_dict(self) -> dict:
        return {
            "distance": self.distance,
            "sample_size": self.sample_size,
            "location_of_max": self.location_of_max,
        }


def phi(z: float) -> float:
    """Standard normal distribution function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


_phi_vec = np.vectorize(phi, otypes=[float])


def ks_exact_vs_normal(d: CycleCountDistribution, m: float, v: float) -> KsReport:
    """sup_z |P(C <= m + z sqrt(v)) - Phi(z)| for the exact law of C.

    Between atoms the empirical side is flat and Phi is monotone, so the
    supremum is attained at an atom, approached from the left or the right.
    """
    if not v > 0:
        raise DegenerateError(f"variance must be positive, got {v}")
    ks, ps = d.as_arrays()
    upper = np.cumsum(ps)
    lower = upper - ps
    z = (ks - m) / math.sqrt(v)
    ph = _phi_vec(z)
    gaps = np.maximum(np.abs(upper - ph), np.abs(lower - ph))
    i = int(np.argmax(gaps))
    return KsReport(float(gaps[i]), "exact", float(z[i]))


def ks_sample_vs_normal(values: Sequence[float]) -> KsReport:
    """One-sample KS statistic of ``values`` against Phi."""
    x = np.sort(np.asarray(values, dtype=float))
    N = x.size
    if N == 0:
        raise DomainError("ks_sample_vs_normal needs at least one value")
    ph = _phi_vec(x)
    i = np.arange(1, N + 1)
    d_plus = i / N - ph
    d_minus = ph - (i - 1) / N
    gaps = np.maximum(d_plus, d_minus)
    j = int(np.argmax(gaps))
    return KsReport(float(gaps[j]), int(N), float(x[j]))


def chi_square_gof(
    observed: Mapping,
    expected: Mapping,
    total: int,
    min_expected: float = MIN_EXPECTED,
) -> tuple[float, int]:
    """Pearson statistic and degrees of freedom after merging sparse bins.

    Bins are visited in sorted key order and pooled until the pooled
    expected count reaches ``min_expected``; an under-filled last group is
    folded into its predecessor.
    """
    if abs(math.fsum(expected.values()) - 1.0) > 1e-9:
        raise DomainError("expected probabilities must sum to 1")
    stray = [k for k, cnt in observed.items() if cnt and k not in expected]
    if stray:
        raise DomainError(f"observed bins without expected mass: {stray[:5]}")

    groups: list[list[float]] = []
    obs_acc = exp_acc = 0.0
    for key in sorted(expected):
        obs_acc += observed.get(key, 0)
        exp_acc += expected[key] * total
        if exp_acc >= min_expected:
            groups.append([obs_acc, exp_acc])
            obs_acc = exp_acc = 0.0
    if exp_acc > 0 or obs_acc > 0:
        if groups:
            groups[-1][0] += obs_acc
            groups[-1][1] += exp_acc
        else:
            groups.append([obs_acc, exp_acc])
    if len(groups) < 2:
        raise DomainError("all bins merged into one; sample too small for a chi-square test")
    stat = math.fsum((o - e) ** 2 / e for o, e in groups)
    return stat, len(groups) - 1


def chi2_critical(dof: int, significance: float) -> float:
    try:
        row = CHI2_CRITICAL[significance]
    except KeyError:
        raise DomainError(f"no critical values tabulated for significance {significance}") from None
    if not 1 <= dof <= len(row):
        raise DomainError(f"critical values are tabulated for dof 1..{len(row)}, got {dof}")
    return row[dof - 1]
