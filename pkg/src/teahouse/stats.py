"""Nonparametric statistics kernel: rank-based group comparison, normality
screening, and descriptives.

The group comparison assigns mid-ranks to ties, applies the tie correction,
and takes the p-value from the chi-square upper tail with k-1 degrees of
freedom. Normality screening uses the W statistic with the standard
polynomial approximations for its null distribution (valid for 3 <= n <= 5000).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Sequence

import numpy as np
from scipy.special import gammaincc

from .core import TeahouseError

ALPHA = 0.05  # significance threshold used for star-flagging in reports


class StatsError(TeahouseError):
    pass


class UnsupportedSizeError(StatsError):
    pass


class DegenerateSampleError(StatsError):
    pass


@dataclass(frozen=True)
class Sample:
    values: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.values) < 1:
            raise StatsError("sample must contain at least one value")
        if not all(math.isfinite(v) for v in self.values):
            raise StatsError(f"sample {self.label!r} contains non-finite values")


@dataclass(frozen=True)
class StatTestResult:
    method: str
    statistic: float
    p_value: float
    df: int | None = None
    tie_corrected: bool = False

    def __post_init__(self):
        assert 0.0 <= self.p_value <= 1.0

    @property
    def significant(self) -> bool:
        return self.p_value < ALPHA


def _chi2_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square distribution."""
    return float(gammaincc(df / 2.0, x / 2.0))


def midranks(pooled: Sequence[float]) -> list[float]:
    """Ranks 1..N with tied values sharing their mid-rank."""
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        mid = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def kruskal_wallis(groups: Sequence[Sequence[float] | Sample]) -> StatTestResult:
    """Rank-based one-way comparison of two or more independent groups.

    H = 12/(N(N+1)) * sum(R_i^2/n_i) - 3(N+1), divided by the tie correction
    1 - sum(t^3 - t)/(N^3 - N). When every observation is identical the
    correction vanishes and the only coherent limit is H = 0, p = 1.
    """
    seqs = [list(g.values) if isinstance(g, Sample) else list(g) for g in groups]
    if len(seqs) < 2:
        raise StatsError("need at least 2 groups")
    if any(len(s) == 0 for s in seqs):
        raise StatsError("every group must contain at least one observation")
    sizes = [len(s) for s in seqs]
    n_total = sum(sizes)
    if n_total < 3:
        raise StatsError("need at least 3 observations in total")
    df = len(seqs) - 1

    pooled = [v for s in seqs for v in s]
    if all(v == pooled[0] for v in pooled):
        return StatTestResult("kruskal_wallis", 0.0, 1.0, df=df, tie_corrected=True)

    ranks = midranks(pooled)
    h = 0.0
    start = 0
    for size in sizes:
        r_sum = sum(ranks[start : start + size])
        h += r_sum * r_sum / size
        start += size
    h = 12.0 / (n_total * (n_total + 1)) * h - 3.0 * (n_total + 1)

    tie_sum = 0
    seen: dict[float, int] = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    for count in seen.values():
        tie_sum += count**3 - count
    correction = 1.0 - tie_sum / (n_total**3 - n_total)
    h /= correction
    h = max(h, 0.0)  # guard tiny negative float residue

    return StatTestResult(
        "kruskal_wallis", h, min(1.0, _chi2_sf(h, df)), df=df, tie_corrected=True
    )


# -- normality screening -------------------------------------------------------

# Polynomial coefficients (highest order first) for the W-statistic weights and
# its null distribution, from the standard AS R94 approximation.
_C1 = (-2.706056, 4.434685, -2.07119, -0.147981, 0.221157, 0.0)
_C2 = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981, 0.0)
_C3 = (-0.0006714, 0.025054, -0.39978, 0.544)
_C4 = (-0.0020322, 0.062767, -0.77857, 1.3822)
_C5 = (0.0038915, -0.083751, -0.31082, -1.5861)
_C6 = (0.0030302, -0.082676, -0.4803)
_G = (0.459, -2.273)  # gamma = 0.459*n - 2.273, for 4 <= n <= 11

_SQRT_HALF = math.sqrt(0.5)
_PI6 = 6.0 / math.pi
_STQR = math.asin(math.sqrt(0.75))


def _sw_half_weights(n: int) -> np.ndarray:
    """Positive weight magnitudes a_1..a_{n//2}: the coefficient of the i-th
    smallest order statistic is -a_i, of the i-th largest +a_i."""
    if n == 3:
        return np.array([_SQRT_HALF])
    nd = NormalDist()
    # Lower-half expected normal order statistics (negative values).
    m = np.array([nd.inv_cdf((i - 0.375) / (n + 0.25)) for i in range(1, n // 2 + 1)])
    summ2 = 2.0 * float(np.sum(m * m))
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    a1 = np.polyval(_C1, rsn) - m[0] / ssumm2
    a = np.empty(n // 2)
    if n > 5:
        a2 = np.polyval(_C2, rsn) - m[1] / ssumm2
        fac = math.sqrt(
            (summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2) / (1.0 - 2.0 * a1**2 - 2.0 * a2**2)
        )
        a[0], a[1] = a1, a2
        a[2:] = -m[2:] / fac
    else:
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a1**2))
        a[0] = a1
        a[1:] = -m[1:] / fac
    return a


def shapiro_wilk(sample: Sequence[float] | Sample) -> StatTestResult:
    """W statistic and p-value for the normality of one sample.

    Supported for 3 <= n <= 5000; constant samples are rejected as degenerate.
    W is invariant under positive affine transforms of the data.
    """
    values = list(sample.values) if isinstance(sample, Sample) else list(sample)
    n = len(values)
    if n < 3 or n > 5000:
        raise UnsupportedSizeError(f"sample size {n} outside supported range 3..5000")
    xs = np.sort(np.asarray(values, dtype=float))
    if xs[-1] - xs[0] <= 0:
        raise DegenerateSampleError("zero-variance sample")

    half = _sw_half_weights(n)
    a = np.zeros(n)
    a[: n // 2] = -half
    a[n - n // 2 :] = half[::-1]

    xc = xs - xs.mean()
    w = float(np.dot(a, xc) ** 2 / np.dot(xc, xc))
    w = min(w, 1.0)

    if n == 3:
        p = _PI6 * (math.asin(math.sqrt(w)) - _STQR)
        p = min(max(p, 0.0), 1.0)
        return StatTestResult("shapiro_wilk", w, p)

    w1 = 1.0 - w
    if n <= 11:
        gamma = np.polyval(_G, n)
        y = math.log(w1)
        if y >= gamma:
            return StatTestResult("shapiro_wilk", w, 0.0)
        y = -math.log(gamma - y)
        mu = np.polyval(_C3, n)
        sigma = math.exp(np.polyval(_C4, n))
    else:
        u = math.log(n)
        y = math.log(w1)
        mu = np.polyval(_C5, u)
        sigma = math.exp(np.polyval(_C6, u))
    z = (y - mu) / sigma
    p = NormalDist().cdf(-z)  # upper tail
    return StatTestResult("shapiro_wilk", w, min(max(p, 0.0), 1.0))


# -- descriptives -----------------------------------------------------------------


@dataclass(frozen=True)
class DescriptiveSummary:
    n: int
    mean: float
    sd: float | None  # n-1 denominator; None when undefined (n == 1)
    minimum: float
    maximum: float


@dataclass(frozen=True)
class CategoricalSummary:
    n: int
    counts: dict[str, int]
    percentages: dict[str, float]


def describe(values: Sequence[float]) -> DescriptiveSummary:
    if not values:
        raise StatsError("empty column")
    n = len(values)
    mean = sum(values) / n
    sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1)) if n > 1 else None
    return DescriptiveSummary(n=n, mean=mean, sd=sd, minimum=min(values), maximum=max(values))


def describe_categorical(values: Sequence[str]) -> CategoricalSummary:
    if not values:
        raise StatsError("empty column")
    n = len(values)
    counts: dict[str, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return CategoricalSummary(
        n=n,
        counts=counts,
        percentages={k: 100.0 * c / n for k, c in counts.items()},
    )
