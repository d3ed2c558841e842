"""Link reports of one version to those of the next."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ..checkers import Report
from .diff import Hunk, LineMap

AUTO_SAME = "auto_same"
UNKNOWN = "unknown"
DEAD = "dead"


@dataclass(frozen=True)
class Correlation:
    old: Report
    new: Report | None
    mode: str
    candidates: tuple[int, ...] = field(default=())  # new-report lines, nearest first

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "old": self.old.to_json(),
            "new": None if self.new is None else self.new.to_json(),
            "candidates": list(self.candidates),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Correlation":
        new = None if d["new"] is None else Report.from_json(d["new"])
        return cls(Report.from_json(d["old"]), new, d["mode"], tuple(d.get("candidates", ())))


def correlate(
    old_reports: Iterable[Report],
    new_reports: Iterable[Report],
    hunks: Mapping[str, Sequence[Hunk] | None],
    new_files: set[str] | None = None,
) -> tuple[list[Correlation], list[Report]]:
    """Correlate two adjacent versions.

    ``hunks[file]`` is the diff of a file present in both versions (``None``
    meaning identical).  A file missing from ``hunks`` counts as deleted
    unless it appears in ``new_files``, in which case it is taken as
    unchanged.  Returns the correlations of the old reports and the new
    reports left unmatched (births).
    """
    olds = sorted(old_reports)
    news = sorted(new_reports)
    by_site: dict[tuple, list[Report]] = defaultdict(list)
    by_file: dict[str, list[Report]] = defaultdict(list)
    for r in news:
        by_site[(r.file, r.line, r.checker, r.key)].append(r)
        by_file[r.file].append(r)

    used: set[Report] = set()
    result: dict[Report, Correlation] = {}
    maps = {}

    def present(f: str) -> bool:
        return f in hunks or (new_files is not None and f in new_files)

    for r in olds:
        if not present(r.file):
            continue
        if r.file not in maps:
            maps[r.file] = LineMap(hunks.get(r.file))
        line = maps[r.file](r.line)
        if line is None:
            continue
        for cand in by_site.get((r.file, line, r.checker, r.key), ()):
            if cand not in used:
                used.add(cand)
                result[r] = Correlation(r, cand, AUTO_SAME)
                break

    pending = [r for r in olds if r not in result]
    cands: dict[Report, list[Report]] = {}
    pairs = []
    for i, r in enumerate(pending):
        if not present(r.file):
            continue
        cs = [n for n in by_file.get(r.file, ()) if n not in used and n.checker == r.checker and n.key == r.key]
        cs.sort(key=lambda n: (abs(n.line - r.line), n.line))
        cands[r] = cs
        pairs.extend((abs(n.line - r.line), i, n.line, n) for n in cs)
    pairs.sort(key=lambda p: p[:3])
    match: dict[Report, Report] = {}
    for _, i, _, n in pairs:
        r = pending[i]
        if r in match or n in used:
            continue
        match[r] = n
        used.add(n)
    for r in pending:
        cs = tuple(n.line for n in cands.get(r, ()))
        if r in match:
            result[r] = Correlation(r, match[r], UNKNOWN, cs)
        else:
            result[r] = Correlation(r, None, DEAD, cs)

    births = [n for n in news if n not in used]
    return [result[r] for r in olds], births
