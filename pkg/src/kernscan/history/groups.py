"""Groups of correlated reports, annotations, worksheets and fault histories."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from ..checkers import Report
from .correlate import AUTO_SAME, UNKNOWN, Correlation

FAULT = "fault"
FP = "fp"
STATUSES = (FAULT, FP, UNKNOWN)


def group_id(version: str, r: Report) -> str:
    raw = "\0".join((version, r.checker, r.file, str(r.line), r.key))
    return hashlib.sha1(raw.encode("utf-8")).hexdigest()[:12]


@dataclass
class Group:
    id: str
    checker: str
    file: str
    key: str
    birth: str
    members: list[tuple[str, int, str]] = field(default_factory=list)  # (version, line, fn)
    relinked: list[str] = field(default_factory=list)  # versions joined through an unknown link

    @property
    def versions(self) -> list[str]:
        return [m[0] for m in self.members]

    @property
    def last(self) -> tuple[str, int, str]:
        return self.members[-1]

    def to_json(self) -> dict:
        return {
            "group": self.id, "checker": self.checker, "file": self.file, "key": self.key,
            "birth": self.birth, "members": [list(m) for m in self.members], "relinked": self.relinked,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Group":
        return cls(d["group"], d["checker"], d["file"], d["key"], d["birth"],
                   [tuple(m) for m in d["members"]], list(d.get("relinked", ())))


def track_groups(
    versions: Sequence[str],
    reports: Mapping[str, Iterable[Report]],
    correlations: Mapping[tuple[str, str], Iterable[Correlation]],
) -> dict[str, Group]:
    """Chain reports into groups along the version sequence."""
    groups: dict[str, Group] = {}
    owner: dict[Report, str] = {}

    def start(version: str, r: Report) -> str:
        gid = group_id(version, r)
        groups[gid] = Group(gid, r.checker, r.file, r.key, version, [(version, r.line, r.fn)])
        return gid

    first = versions[0]
    for r in sorted(reports.get(first, ())):
        owner[r] = start(first, r)
    for prev, cur in zip(versions, versions[1:]):
        nxt: dict[Report, str] = {}
        for c in sorted(correlations.get((prev, cur), ()), key=lambda c: c.old):
            if c.new is None or c.old not in owner:
                continue
            gid = owner[c.old]
            groups[gid].members.append((cur, c.new.line, c.new.fn))
            if c.mode != AUTO_SAME:
                groups[gid].relinked.append(cur)
            nxt[c.new] = gid
        for r in sorted(reports.get(cur, ())):
            if r not in nxt:
                nxt[r] = start(cur, r)
        owner = nxt
    return dict(sorted(groups.items()))


def dump_groups(groups: Mapping[str, Group]) -> str:
    return "".join(json.dumps(g.to_json(), sort_keys=True) + "\n" for g in groups.values())


def load_groups(text: str) -> dict[str, Group]:
    out = {}
    for line in text.splitlines():
        if line.strip():
            g = Group.from_json(json.loads(line))
            out[g.id] = g
    return out


# ---------------------------------------------------------------------------
# Annotation store: JSON lines, later records win


@dataclass(frozen=True)
class Annotation:
    group: str
    status: str
    comment: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {', '.join(STATUSES)}, not {self.status!r}")

    def to_json(self) -> dict:
        return {"group": self.group, "status": self.status, "comment": self.comment}


def parse_store(text: str) -> list[Annotation]:
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            d = json.loads(line)
            out.append(Annotation(d["group"], d["status"], d.get("comment", "")))
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"annotation store line {n}: {exc}") from None
    return out


def dump_store(records: Iterable[Annotation]) -> str:
    return "".join(json.dumps(a.to_json(), sort_keys=True) + "\n" for a in records)


def effective(records: Iterable[Annotation]) -> dict[str, Annotation]:
    out: dict[str, Annotation] = {}
    for a in records:
        out[a.group] = a
    return out


def _relink_note(version: str) -> str:
    return f"relinked at {version}"


def reset_relinked(
    groups: Mapping[str, Group],
    records: Sequence[Annotation],
    previous: Mapping[str, Group] | None = None,
) -> list[Annotation]:
    """Records putting groups linked through an uncertain match back to unknown.

    Only links absent from *previous* (the groups of the last correlation
    run) count: a link the user has already seen and annotated stands.  A
    group is reset once per relinking version; running this twice on the
    same data adds nothing.
    """
    current = effective(records)
    seen = {(a.group, a.comment.rsplit("; ", 1)[-1]) for a in records}
    known = {(g.id, v) for g in (previous or {}).values() for v in g.relinked}
    out = []
    for g in groups.values():
        for v in g.relinked:
            note = _relink_note(v)
            if (g.id, note) in seen or (g.id, v) in known:
                continue
            prior = current.get(g.id)
            if prior is not None and prior.status != UNKNOWN:
                out.append(Annotation(g.id, UNKNOWN, f"was {prior.status}; {note}"))
    return out


# ---------------------------------------------------------------------------
# Worksheet


class WorksheetError(ValueError):
    pass


_HEAD = re.compile(r"^\[group ([0-9a-f]+)\] (\S+) (\S+):(\d+) fn=(\S*)$")
_HIST = re.compile(r"^history: (\S+)\.\.(\S+)$")
_STATUS = re.compile(r"^status = (\S+)$")


def export_worksheet(groups: Mapping[str, Group], records: Iterable[Annotation]) -> str:
    """Worksheet listing every group whose status is still unknown."""
    current = effective(records)
    todo = [g for g in groups.values() if current.get(g.id, Annotation(g.id, UNKNOWN)).status == UNKNOWN]
    todo.sort(key=lambda g: (g.file, g.last[1], g.checker, g.key, g.id))
    blocks = []
    for g in todo:
        v, line, fn = g.last
        blocks.append(
            f"[group {g.id}] {g.checker} {g.file}:{line} fn={fn}\n"
            f"history: {g.members[0][0]}..{v}\n"
            f"status = unknown\n"
        )
    return "\n".join(blocks)


def parse_worksheet(text: str) -> list[tuple[str, str, int]]:
    """(group, status, line number of the status line) for every record."""
    lines = text.splitlines()
    out = []
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        if i + 2 >= len(lines):
            raise WorksheetError(f"line {i + 1}: incomplete record")
        head = _HEAD.match(lines[i])
        if head is None:
            raise WorksheetError(f"line {i + 1}: expected '[group <id>] <checker> <file>:<line> fn=<name>'")
        if _HIST.match(lines[i + 1]) is None:
            raise WorksheetError(f"line {i + 2}: expected 'history: <first>..<last>'")
        st = _STATUS.match(lines[i + 2])
        if st is None:
            raise WorksheetError(f"line {i + 3}: expected 'status = <status>'")
        if st.group(1) not in STATUSES:
            raise WorksheetError(f"line {i + 3}: status must be one of {', '.join(STATUSES)}, not {st.group(1)!r}")
        out.append((head.group(1), st.group(1), i + 3))
        i += 3
        if i < len(lines) and lines[i].strip():
            raise WorksheetError(f"line {i + 1}: records must be separated by a blank line")
    return out


def apply_worksheet(
    text: str, groups: Mapping[str, Group], records: Iterable[Annotation], comment: str = "worksheet"
) -> list[Annotation]:
    """New store records for every status the worksheet changes."""
    current = effective(records)
    out = []
    for gid, status, line in parse_worksheet(text):
        if gid not in groups:
            raise WorksheetError(f"line {line - 2}: unknown group {gid}")
        old = current.get(gid)
        if old is None or old.status != status:
            a = Annotation(gid, status, comment)
            out.append(a)
            current[gid] = a
    return out


# ---------------------------------------------------------------------------
# Fault histories


class AnnotationConflict(ValueError):
    pass


@dataclass(frozen=True)
class FaultHistory:
    group_id: str
    checker: str
    file: str
    key: str
    dir_class: str
    birth_version: str
    death_version: str | None
    left_censored: bool
    right_censored: bool
    born_with_file: bool
    died_with_file: bool


def check_conflicts(groups: Mapping[str, Group], records: Iterable[Annotation]) -> None:
    """A group may not flip between fault and fp without passing through unknown."""
    last: dict[str, str] = {}
    bad = []
    for a in records:
        prev = last.get(a.group)
        if prev in (FAULT, FP) and a.status in (FAULT, FP) and a.status != prev:
            bad.append(a.group)
        last[a.group] = a.status
    if bad:
        parts = []
        for gid in sorted(set(bad)):
            vs = groups[gid].versions if gid in groups else []
            parts.append(f"{gid} ({', '.join(vs)})" if vs else gid)
        raise AnnotationConflict("contradictory annotations for group(s): " + "; ".join(parts))


def build_histories(
    groups: Mapping[str, Group],
    records: Sequence[Annotation],
    versions: Sequence[str],
    files_by_version: Mapping[str, set[str]],
    classify: Callable[[str], str],
) -> list[FaultHistory]:
    check_conflicts(groups, records)
    status = effective(records)
    first_seen: dict[str, int] = {}
    for i, v in enumerate(versions):
        for p in files_by_version.get(v, ()):
            first_seen.setdefault(p, i)
    idx = {v: i for i, v in enumerate(versions)}
    out = []
    for g in groups.values():
        a = status.get(g.id)
        if a is None or a.status != FAULT:
            continue
        b = idx[g.birth]
        last = idx[g.versions[-1]]
        death = versions[last + 1] if last + 1 < len(versions) else None
        out.append(FaultHistory(
            g.id, g.checker, g.file, g.key, classify(g.file), g.birth, death,
            left_censored=b == 0,
            right_censored=death is None,
            born_with_file=first_seen.get(g.file) == b,
            died_with_file=death is not None and g.file not in files_by_version.get(death, set()),
        ))
    out.sort(key=lambda h: (idx[h.birth_version], h.file, h.group_id))
    return out
