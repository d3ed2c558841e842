"""Kaplan-Meier estimation of fault lifespans."""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

YEAR_DAYS = 365.25
IGNORE_FIRST = "ignore_first_version"
MIN_BOUND = "min_bound"
MAX_BOUND = "max_bound"
MIDPOINT = "midpoint"
CENSOR_MODES = (IGNORE_FIRST, MIN_BOUND, MAX_BOUND, MIDPOINT)

# gap between the first Linux release and 2.6.0, used to place the earliest
# possible birth of faults already present in the first studied version
_FIRST_RELEASE = dt.date(1994, 3, 14)
_SERIES_START = dt.date(2003, 12, 17)
DEFAULT_GAP = _SERIES_START - _FIRST_RELEASE


class Step(NamedTuple):
    time: float
    survival: float
    at_risk: int
    events: int
    lower: float = math.nan
    upper: float = math.nan


@dataclass(frozen=True)
class SurvivalCurve:
    steps: tuple[Step, ...]
    mean: float
    median: float | None
    bound: float  # largest observed time, the limit of the restricted mean
    no_events: bool = False

    def at(self, t: float) -> float:
        s = 1.0
        for st in self.steps:
            if st.time > t:
                break
            s = st.survival
        return s


def km_estimate(observations: Iterable[tuple[float, bool]], bands: bool = False, z: float = 1.959963984540054) -> SurvivalCurve:
    obs = sorted((float(t), bool(e)) for t, e in observations)
    if not obs:
        raise ValueError("no observations")
    if obs[0][0] < 0:
        raise ValueError("negative lifespan")
    times = sorted({t for t, e in obs if e})
    n_total = len(obs)
    steps = []
    s = 1.0
    gw = 0.0
    i = 0  # observations with time < current t
    for t in times:
        while i < n_total and obs[i][0] < t:
            i += 1
        at_risk = n_total - i
        d = sum(1 for tt, e in obs[i:] if tt == t and e)
        s *= 1 - d / at_risk
        lo = hi = math.nan
        if bands:
            if at_risk > d:
                gw += d / (at_risk * (at_risk - d))
                half = z * s * math.sqrt(gw)
                lo, hi = max(0.0, s - half), min(1.0, s + half)
            else:
                lo, hi = 0.0, 0.0
        steps.append(Step(t, s, at_risk, d, lo, hi))
    bound = obs[-1][0]
    area, prev_t, prev_s = 0.0, 0.0, 1.0
    for st in steps:
        area += prev_s * (st.time - prev_t)
        prev_t, prev_s = st.time, st.survival
    area += prev_s * (bound - prev_t)
    median = next((st.time for st in steps if st.survival <= 0.5), None)
    return SurvivalCurve(tuple(steps), area, median, bound, not steps)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensorConfig:
    mode: str
    horizon_date: dt.date
    midpoint_date: dt.date

    def __post_init__(self):
        if self.mode not in CENSOR_MODES:
            raise ValueError(f"censor mode must be one of {', '.join(CENSOR_MODES)}")


def censor_config(mode: str, first_date: dt.date, horizon: dt.date | None = None) -> CensorConfig:
    horizon = horizon or first_date - DEFAULT_GAP
    mid = horizon + (first_date - horizon) / 2
    return CensorConfig(mode, horizon, mid)


def years(a: dt.date, b: dt.date) -> float:
    return (b - a).days / YEAR_DAYS


def lifespans(histories: Sequence, dates: Mapping[str, dt.date], config: CensorConfig) -> list[tuple[float, bool]]:
    """(lifespan in years, death observed) per history under a censoring mode.

    *histories* need ``birth_version``, ``death_version`` and ``left_censored``.
    """
    last = max(dates.values())
    out = []
    for h in histories:
        birth = dates[h.birth_version]
        if h.left_censored:
            if config.mode == IGNORE_FIRST:
                continue
            if config.mode == MAX_BOUND:
                birth = config.horizon_date
            elif config.mode == MIDPOINT:
                birth = config.midpoint_date
        if h.death_version is None:
            out.append((years(birth, last), False))
        else:
            out.append((years(birth, dates[h.death_version]), True))
    return out
