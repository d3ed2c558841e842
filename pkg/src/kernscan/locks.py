"""Lock / interrupt / RCU state machine used by the closures and checkers."""

from __future__ import annotations

from typing import NamedTuple

from .cmodel.events import Call, Fact
from .config import CheckerConfig

LOCK = "lock"
INTR = "intr"
COMBINED = "combined"


class Held(NamedTuple):
    cls: str
    key: str
    line: int
    fn: str
    spinning: bool  # holding it forbids blocking
    intr_off: bool


class LockState(NamedTuple):
    held: tuple[Held, ...] = ()
    rcu: tuple[tuple[int, str], ...] = ()  # (line, callee) of unmatched RCU read locks
    released_external: bool = False  # released a lock this function never took
    irq_on_external: bool = False

    @property
    def spin_depth(self) -> int:
        return sum(1 for h in self.held if h.spinning)

    @property
    def intr_off(self) -> bool:
        return any(h.intr_off for h in self.held)

    @property
    def rcu_depth(self) -> int:
        return len(self.rcu)


class LockTable:
    """Classifies callees according to a :class:`CheckerConfig`."""

    def __init__(self, config: CheckerConfig):
        self.config = config
        self.lock = set(config.lock_fns)
        self.unlock = set(config.unlock_fns)
        self.sleeping = set(config.sleeping_lock_fns)
        self.intr_off = set(config.intr_off_fns)
        self.intr_on = set(config.intr_on_fns)
        self.combined = set(config.combined_fns)
        self.combined_release = set(config.combined_release_fns)
        self.intr_only = set(config.combined_intr_only_fns)
        self.rcu_lock = set(config.rcu_lock_fns)
        self.rcu_unlock = set(config.rcu_unlock_fns)

    def acquire_class(self, callee: str) -> str | None:
        if callee in self.lock:
            return LOCK
        if callee in self.intr_off:
            return INTR
        if callee in self.combined:
            return COMBINED
        return None

    def held_for(self, callee: str, key: str, line: int) -> Held:
        cls = self.acquire_class(callee)
        if cls == LOCK:
            return Held(LOCK, key, line, callee, callee not in self.sleeping, False)
        if cls == INTR:
            return Held(INTR, "", line, callee, False, True)
        return Held(COMBINED, key, line, callee, callee not in self.intr_only, True)

    def release_class(self, callee: str) -> str | None:
        if callee in self.unlock:
            return LOCK
        if callee in self.intr_on:
            return INTR
        if callee in self.combined_release:
            return COMBINED
        return None


def _key(call: Call) -> str:
    return call.arg_keys[0] if call.arg_keys else ""


def acquire(state: LockState, held: Held) -> LockState:
    return state._replace(held=state.held + (held,))


def release(state: LockState, cls: str, key: str) -> LockState:
    if cls == INTR:
        key = ""
    for i in range(len(state.held) - 1, -1, -1):
        h = state.held[i]
        if h.cls == cls and h.key == key:
            return state._replace(held=state.held[:i] + state.held[i + 1 :])
    if cls == INTR:
        return state._replace(irq_on_external=True)
    if cls == COMBINED:
        return state._replace(released_external=True, irq_on_external=True)
    return state._replace(released_external=True)


def lock_step(table: LockTable, state: LockState, call: Call) -> LockState:
    """Apply the lock effect of one call (trylock in conditions excluded)."""
    name = call.callee
    if name in table.rcu_lock:
        return state._replace(rcu=state.rcu + ((call.line, name),))
    if name in table.rcu_unlock:
        return state._replace(rcu=state.rcu[:-1]) if state.rcu else state
    cls = table.acquire_class(name)
    if cls is not None:
        if call.conditional:
            return state
        return acquire(state, table.held_for(name, _key(call), call.line))
    cls = table.release_class(name)
    if cls is not None:
        return release(state, cls, _key(call))
    return state


def lock_assume(table: LockTable, state: LockState, facts: tuple[Fact, ...]) -> LockState:
    for f in facts:
        if f.kind == "trylock" and table.acquire_class(f.callee) is not None:
            state = acquire(state, table.held_for(f.callee, f.key, f.line))
    return state
