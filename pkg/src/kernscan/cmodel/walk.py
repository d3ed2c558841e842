"""Forward path exploration over an event tree.

Each analysis supplies a transfer function ``step(state, event)`` and an
``assume(state, facts)`` hook for branch arms.  States must be hashable;
identical states reaching the same point are merged, which keeps the
walk linear in practice.  Loops run their body at most once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable

from .events import EVENT_TYPES, Branch, Jump, Label, Return, Switch

STATE_LIMIT = 512


@dataclass
class _Frame:
    kind: str  # "loop" or "switch"
    breaks: set = field(default_factory=set)
    continues: set = field(default_factory=set)


def _no_assume(state, facts):
    return state


class PathWalker:
    def __init__(
        self,
        step: Callable[[Hashable, object], Hashable],
        assume: Callable[[Hashable, tuple], Hashable] = _no_assume,
        limit: int = STATE_LIMIT,
    ):
        self.step = step
        self.assume = assume
        self.limit = limit
        self.truncated = False

    def run(self, body: tuple, init: Hashable) -> set:
        """Return the set of states at function exit (returns and fall-off)."""
        self.exits: set = set()
        self.pending: dict[str, set] = {}
        self.seen_labels: set[str] = set()
        self.frames: list[_Frame] = []
        self.truncated = False
        self.exits |= self._seq(body, {init})
        return self.exits

    def _cap(self, states: set) -> set:
        if len(states) <= self.limit:
            return states
        self.truncated = True
        return set(sorted(states, key=repr)[: self.limit])

    def _seq(self, nodes, states: set) -> set:
        for node in nodes:
            if isinstance(node, Label):
                self.seen_labels.add(node.name)
                states = states | self.pending.pop(node.name, set())
                continue
            states = self._cap(self._node(node, states))
        return states

    def _events(self, evs, states: set) -> set:
        for e in evs:
            states = {self.step(s, e) for s in states}
        return states

    def _node(self, node, states: set) -> set:
        if isinstance(node, EVENT_TYPES):
            states = {self.step(s, node) for s in states}
            if isinstance(node, Return):
                self.exits |= states
                return set()
            return states
        if isinstance(node, Branch):
            cond = self._events(node.condition, states)
            if node.loop == "do":
                frame = _Frame("loop")
                self.frames.append(frame)
                body = self._seq(node.then, states)
                self.frames.pop()
                return self._events(node.condition, body | frame.continues) | frame.breaks
            then_in = {self.assume(s, node.then_facts) for s in cond}
            else_in = {self.assume(s, node.else_facts) for s in cond}
            if node.loop:
                frame = _Frame("loop")
                self.frames.append(frame)
                body = self._seq(node.then, then_in)
                self.frames.pop()
                return body | else_in | frame.breaks | frame.continues
            return self._seq(node.then, then_in) | self._seq(node.orelse, else_in)
        if isinstance(node, Switch):
            cond = self._events(node.condition, states)
            frame = _Frame("switch")
            self.frames.append(frame)
            fall: set = set()
            for arm in node.arms:
                fall = self._seq(arm, cond | fall)
            self.frames.pop()
            out = fall | frame.breaks
            if not node.has_default:
                out |= cond
            return out
        if isinstance(node, Jump):
            if node.kind == "goto":
                if node.label not in self.seen_labels:
                    self.pending.setdefault(node.label, set()).update(states)
                # backward gotos close the path (loops run once)
                return set()
            for frame in reversed(self.frames):
                if node.kind == "break":
                    frame.breaks |= states
                    break
                if frame.kind == "loop":
                    frame.continues |= states
                    break
            return set()
        return states
