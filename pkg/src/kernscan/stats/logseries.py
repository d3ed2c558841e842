"""Log-series distribution: pmf, maximum likelihood fit and chi-square test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from scipy.special import gammainc, gammaincc

THETA_LO = 1e-9
THETA_HI = 1 - 1e-9
MIN_EXPECTED = 5.0


def pmf(k: int, theta: float) -> float:
    return -(theta ** k) / (k * math.log1p(-theta))


def mean(theta: float) -> float:
    return -theta / ((1 - theta) * math.log1p(-theta))


def chi2_cdf(x: float, dof: int) -> float:
    if x <= 0:
        return 0.0
    return float(gammainc(dof / 2.0, x / 2.0))


def chi2_sf(x: float, dof: int) -> float:
    if x <= 0:
        return 1.0
    return float(gammaincc(dof / 2.0, x / 2.0))


def solve_theta(sample_mean: float, tol: float = 1e-10) -> tuple[float, str]:
    """Root of mean(theta) = sample_mean by bisection; second item flags a boundary."""
    lo, hi = THETA_LO, THETA_HI
    if sample_mean <= mean(lo):
        return lo, "lower"
    if sample_mean >= mean(hi):
        return hi, "upper"
    while hi - lo >= tol:
        mid = (lo + hi) / 2
        if mean(mid) < sample_mean:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2, ""


@dataclass(frozen=True)
class LogSeriesFit:
    theta: float
    chi2: float
    dof: int
    p_value: float
    n: int
    bins: tuple[tuple[int, int, float], ...]  # (first k of bin, observed, expected); last bin open-ended
    boundary: str = ""


def logseries_fit(histogram: Mapping[int, int]) -> LogSeriesFit:
    """Fit to a histogram {k: number of files with k faults}, k >= 1."""
    hist = {int(k): int(c) for k, c in histogram.items() if c}
    if any(k < 1 for k in hist):
        raise ValueError("counts must be at least 1")
    n = sum(hist.values())
    if n == 0:
        raise ValueError("empty histogram")
    m = sum(k * c for k, c in hist.items()) / n
    theta, boundary = solve_theta(m)
    kmax = max(hist)
    bins = []
    cum = 0.0
    for k in range(1, kmax + 1):
        obs = hist.get(k, 0) if k < kmax else sum(c for kk, c in hist.items() if kk >= kmax)
        if k < kmax:
            p = pmf(k, theta)
            cum += p
        else:
            p = max(0.0, 1.0 - cum)
        bins.append([k, obs, n * p])
    # fold sparse tail bins into their predecessor
    while len(bins) > 1 and bins[-1][2] < MIN_EXPECTED:
        last = bins.pop()
        bins[-1][1] += last[1]
        bins[-1][2] += last[2]
    chi2 = sum((o - e) ** 2 / e for _, o, e in bins if e > 0)
    dof = len(bins) - 2
    p_value = chi2_sf(chi2, dof) if dof >= 1 else math.nan
    return LogSeriesFit(theta, chi2, dof, p_value, n, tuple((k, o, e) for k, o, e in bins), boundary)


def sample(theta: float, size: int, rng) -> list[int]:
    """Draws by inversion, for tests and demos; *rng* is a ``random.Random``."""
    u = [rng.random() for _ in range(size)]
    out = []
    log1m = math.log1p(-theta)
    for x in u:
        k, p = 1, -theta / log1m
        cum = p
        while cum < x and k < 10_000_000:
            k += 1
            p *= theta * (k - 1) / k
            cum += p
        out.append(k)
    return out
