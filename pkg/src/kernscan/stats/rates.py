"""Fault rates, relative rates and densities."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, NamedTuple


class FaultRate(NamedTuple):
    rate: float
    empty: bool  # no notes at all

    def __float__(self) -> float:
        return self.rate


def fault_rate(faults: int, notes: int) -> FaultRate:
    if faults < 0 or notes < 0:
        raise ValueError("counts must be non-negative")
    if faults > notes:
        raise ValueError(f"more faults ({faults}) than notes ({notes})")
    if notes == 0:
        return FaultRate(0.0, True)
    return FaultRate(faults / notes, False)


def _rate(faults: int, notes: int) -> Fraction:
    return Fraction(faults, notes) if notes else Fraction(0)


def relative_rate_fraction(d: str, counts: Mapping[str, tuple[int, int]]) -> Fraction | None:
    """Exact rate of directory *d* over the pooled rate of all the others.

    Returns ``None`` when the other directories have no faults, in which
    case the ratio is infinite (or undefined if *d* has none either).
    """
    if d not in counts:
        raise KeyError(d)
    f_d, n_d = counts[d]
    f_o = sum(f for k, (f, _) in counts.items() if k != d)
    n_o = sum(n for k, (_, n) in counts.items() if k != d)
    if n_o == 0:
        raise ValueError(f"directories other than {d} have no notes")
    other = _rate(f_o, n_o)
    if other == 0:
        return None
    return _rate(f_d, n_d) / other


def relative_rate(d: str, counts: Mapping[str, tuple[int, int]]) -> float:
    r = relative_rate_fraction(d, counts)
    if r is None:
        return math.inf if _rate(*counts[d]) > 0 else math.nan
    return float(r)


def density_per_kloc(faults: int, loc: int) -> float:
    if loc <= 0:
        raise ValueError("line count must be positive")
    return faults * 1000.0 / loc
