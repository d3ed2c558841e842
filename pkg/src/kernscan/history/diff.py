"""Line diffs as partitions into unchanged and changed hunks."""

from __future__ import annotations

from difflib import SequenceMatcher
from typing import NamedTuple, Sequence

UNCHANGED = "unchanged"
CHANGED = "changed"


class Hunk(NamedTuple):
    old_start: int  # 1-based; for an empty range, the line before which it sits
    old_len: int
    new_start: int
    new_len: int
    kind: str

    @property
    def old_range(self) -> tuple[int, int]:
        return self.old_start, self.old_len

    @property
    def new_range(self) -> tuple[int, int]:
        return self.new_start, self.new_len


def _lines(text: str | Sequence[str]) -> list[str]:
    return text.splitlines() if isinstance(text, str) else list(text)


def diff_files(old: str | Sequence[str], new: str | Sequence[str]) -> list[Hunk]:
    a, b = _lines(old), _lines(new)
    hunks: list[Hunk] = []
    for tag, i1, i2, j1, j2 in SequenceMatcher(None, a, b, autojunk=False).get_opcodes():
        kind = UNCHANGED if tag == "equal" else CHANGED
        if hunks and hunks[-1].kind == kind == CHANGED:
            h = hunks[-1]
            hunks[-1] = Hunk(h.old_start, h.old_len + i2 - i1, h.new_start, h.new_len + j2 - j1, CHANGED)
        else:
            hunks.append(Hunk(i1 + 1, i2 - i1, j1 + 1, j2 - j1, kind))
    return hunks


def identity_hunks(n_lines: int) -> list[Hunk]:
    return [Hunk(1, n_lines, 1, n_lines, UNCHANGED)] if n_lines else []


class LineMap:
    """Maps old line numbers through the unchanged hunks of a diff."""

    def __init__(self, hunks: Sequence[Hunk] | None):
        self.hunks = None if hunks is None else list(hunks)

    def __call__(self, old_line: int) -> int | None:
        if self.hunks is None:  # file known to be identical
            return old_line
        for h in self.hunks:
            if h.old_start <= old_line < h.old_start + h.old_len:
                if h.kind == UNCHANGED:
                    return h.new_start + (old_line - h.old_start)
                return None
        return None
