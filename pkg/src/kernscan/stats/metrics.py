"""Correlation, churn regression and developer commitment."""

from __future__ import annotations

import datetime as dt
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample correlation; NaN when either series is constant."""
    if len(x) != len(y):
        raise ValueError("series differ in length")
    n = len(x)
    if n < 2:
        raise ValueError("need at least two points")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [a - mx for a in x]
    dy = [b - my for b in y]
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0 or syy == 0:
        return math.nan
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    r2: float
    adj_r2: float
    n: int


def origin_regression(points: Sequence[tuple[float, float]]) -> RegressionFit:
    """Least squares line through the origin."""
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    sxx = math.fsum(x * x for x, _ in points)
    if sxx == 0:
        raise ValueError("all x are zero: slope undefined")
    slope = math.fsum(x * y for x, y in points) / sxx
    syy = math.fsum(y * y for _, y in points)
    rss = math.fsum((y - slope * x) ** 2 for x, y in points)
    if syy == 0:
        return RegressionFit(slope, math.nan, math.nan, n)
    r2 = 1 - rss / syy
    return RegressionFit(slope, r2, 1 - (1 - r2) * n / (n - 1), n)


def packets(points: Sequence, size: int = 10) -> list[list]:
    """Consecutive groups of *size*; a trailing single point joins the previous group."""
    groups = [list(points[i:i + size]) for i in range(0, len(points), size)]
    if len(groups) > 1 and len(groups[-1]) < 2:
        groups[-2].extend(groups.pop())
    return groups


def churn_regression(points: Sequence[tuple[float, float]], size: int = 10) -> tuple[list[RegressionFit], RegressionFit]:
    return [origin_regression(g) for g in packets(points, size)], origin_regression(points)


# ---------------------------------------------------------------------------


def commitment(commit_dates: Iterable[dt.date], as_of: dt.date) -> int:
    dates = list(commit_dates)
    if not dates:
        raise ValueError("developer has no commits")
    first = min(dates)
    if as_of < first:
        raise ValueError(f"as_of {as_of} precedes first commit {first}")
    return len(dates) * (as_of - first).days


def commitment_distribution(scores: Mapping[str, int], commits: Mapping[str, int]) -> dict[int, int]:
    """Commits per integer percentile of the normalised commitment score."""
    top = max(scores.values(), default=0)
    hist: Counter = Counter()
    for dev, score in scores.items():
        pct = 100 if top == 0 else math.floor(100 * score / top + 0.5)
        hist[pct] += commits[dev]
    return dict(sorted(hist.items()))
