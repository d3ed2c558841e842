"""Fault checkers.

Each checker walks a function's event tree and produces reports; notes are
counted separately by :func:`count_notes` from a single pass over the
events.  Reports are anchored at the site of the note that makes them
relevant (the acquire for a lock that is never released, the freeing call
for a use after free, the null test for an inconsistent test), so every
report lands on a note and fault rates stay at or below one.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .closure import Closures, compute_closures
from .cmodel import (
    ArrayDecl,
    Assign,
    BoundCheck,
    Call,
    Deref,
    FloatConst,
    FunctionModel,
    IndexUse,
    NullTest,
    PathWalker,
    SizeofExpr,
    SizeofSelf,
    iter_events,
)
from .config import DEFAULT_CONFIG, CheckerConfig
from .locks import COMBINED, INTR, LOCK, LockState, LockTable, lock_assume, lock_step


class KindInfo(NamedTuple):
    name: str
    find: str
    fix: str
    impact: str


_TABLE = {
    "Block": ("hard", "hard", "low"),
    "Null": ("hard", "hard", "low"),
    "Var": ("easy", "easy", "low"),
    "IsNull": ("easy", "easy", "low"),
    "NullRef": ("easy", "hard", "low"),
    "Range": ("easy", "easy", "low"),
    "Lock": ("easy", "easy", "high"),
    "Intr": ("easy", "easy", "high"),
    "LockIntr": ("easy", "easy", "high"),
    "Free": ("hard", "easy", "high"),
    "Float": ("easy", "hard", "high"),
    "Size": ("easy", "easy", "high"),
}
# which row of the assessment table each checker takes its properties from
_ROW = {
    "BlockLock": "Block", "BlockIntr": "Block", "BlockRCU": "Block",
    "LockRCU": "Lock", "DerefRCU": "Lock",
}

KIND_NAMES = (
    "BlockLock", "BlockIntr", "Null", "Var", "IsNull", "NullRef", "Range",
    "Lock", "Intr", "LockIntr", "Free", "Float", "Size",
    "BlockRCU", "LockRCU", "DerefRCU",
)
KINDS = {k: KindInfo(k, *_TABLE[_ROW.get(k, k)]) for k in KIND_NAMES}
RCU_KINDS = ("BlockRCU", "LockRCU", "DerefRCU")


def validate_kinds(names: Iterable[str]) -> tuple[str, ...]:
    names = tuple(names)
    bad = [n for n in names if n not in KINDS]
    if bad:
        raise ValueError(f"unknown checker(s): {', '.join(bad)}")
    return names


@dataclass(frozen=True, order=True)
class Report:
    file: str
    line: int
    checker: str
    key: str
    fn: str = field(compare=False)
    msg: str = field(compare=False, default="")

    def to_json(self) -> dict:
        return {"checker": self.checker, "file": self.file, "fn": self.fn,
                "line": self.line, "key": self.key, "msg": self.msg}

    @classmethod
    def from_json(cls, d: dict) -> "Report":
        return cls(d["file"], d["line"], d["checker"], d["key"], d["fn"], d.get("msg", ""))


@dataclass(frozen=True, order=True)
class Note:
    file: str
    line: int
    checker: str
    fn: str

    def to_json(self) -> dict:
        return {"checker": self.checker, "file": self.file, "fn": self.fn, "line": self.line}

    @classmethod
    def from_json(cls, d: dict) -> "Note":
        return cls(d["file"], d["line"], d["checker"], d["fn"])


class _Sink:
    def __init__(self, model: FunctionModel):
        self.model = model
        self.reports: dict[tuple, Report] = {}
        self.truncated = False

    def add(self, checker: str, line: int, key: str, msg: str) -> None:
        r = Report(self.model.file, line, checker, key, self.model.name, msg)
        self.reports.setdefault((checker, line, key), r)

    def walk(self, step, assume, body, init) -> set:
        w = PathWalker(step, assume)
        exits = w.run(body, init)
        self.truncated |= w.truncated
        return exits


def _covers(prefix: str, key: str) -> bool:
    if key == prefix:
        return True
    return key.startswith(prefix) and key[len(prefix):].startswith(("->", ".", "["))


def _kill(state: frozenset, key: str) -> frozenset:
    hit = [e for e in state if _covers(key, e[0])]
    return state.difference(hit) if hit else state


def _no_assume(state, facts):
    return state


# ---------------------------------------------------------------------------
# Locks, interrupts, RCU


_BALANCE_KIND = {LOCK: "Lock", INTR: "Intr", COMBINED: "LockIntr"}


def _holds_lock(h, table: LockTable) -> bool:
    return h.cls == LOCK or (h.cls == COMBINED and h.fn not in table.intr_only)


def _lock_walk(model: FunctionModel, closures: Closures, config: CheckerConfig, sink: _Sink) -> None:
    table = LockTable(config)
    blocking = closures.blocking
    deref_fns = set(config.rcu_deref_fns)

    def step(state: LockState, e):
        if not isinstance(e, Call):
            return state
        name = e.callee
        if name in blocking or e.has_gfp_kernel:
            spins = [h for h in state.held if h.spinning]
            if spins:
                h = spins[-1]
                sink.add("BlockLock", e.line, name,
                         f"{name} may block while {h.fn}({h.key}) from line {h.line} is held")
            if state.intr_off:
                h = [h for h in state.held if h.intr_off][-1]
                sink.add("BlockIntr", e.line, name,
                         f"[advisory] {name} may block with interrupts off since {h.fn} at line {h.line}")
            if state.rcu:
                line, fn = state.rcu[-1]
                sink.add("BlockRCU", e.line, name,
                         f"{name} may block inside the RCU read section opened by {fn} at line {line}")
        if name in deref_fns and not state.rcu:
            key = e.arg_keys[0] if e.arg_keys else ""
            sink.add("DerefRCU", e.line, key, f"{name}({key}) outside any RCU read section")
        cls = table.acquire_class(name)
        if cls is not None and not e.conditional:
            new = table.held_for(name, e.arg_keys[0] if e.arg_keys else "", e.line)
            if _holds_lock(new, table) and new.key:
                for h in state.held:
                    if _holds_lock(h, table) and h.key == new.key and not (
                        h.fn.startswith("read_") and name.startswith("read_")
                    ):
                        sink.add(_BALANCE_KIND[cls], e.line, new.key,
                                 f"{name}({new.key}) while already held since line {h.line}")
                        break
        return lock_step(table, state, e)

    exits = sink.walk(step, lambda s, f: lock_assume(table, s, f), model.body, LockState())
    for state in sorted(exits):
        for h in state.held:
            key = h.key or h.fn
            sink.add(_BALANCE_KIND[h.cls], h.line, key, f"{h.fn}({h.key}) not released on some path")
        for line, fn in state.rcu:
            sink.add("LockRCU", line, fn, f"{fn} not matched by an unlock on some path")


# ---------------------------------------------------------------------------
# NULL


def _null_walk(model: FunctionModel, closures: Closures, sink: _Sink) -> None:
    members = closures.null_returning

    # entries: (key, callee, call line, tested)
    def step(state: frozenset, e):
        if isinstance(e, Call):
            if e.assigned_to is not None and e.callee in members:
                return state | {(e.assigned_to, e.callee, e.line, False)}
            return state
        if isinstance(e, Assign):
            return _kill(state, e.key)
        if isinstance(e, NullTest):
            hit = {x for x in state if x[0] == e.key and not x[3]}
            if hit:
                return (state - hit) | {(k, c, ln, True) for k, c, ln, _ in hit}
            return state
        if isinstance(e, Deref):
            for k, c, ln, tested in state:
                if k == e.key and not tested:
                    sink.add("Null", ln, k, f"result of {c} dereferenced at line {e.line} without a NULL check")
        return state

    def assume(state: frozenset, facts):
        for f in facts:
            if f.kind == "nonnull":
                state = frozenset(x for x in state if x[0] != f.key)
            elif f.kind == "null":
                state = frozenset((k, c, ln, False if k == f.key else t) for k, c, ln, t in state)
        return state

    sink.walk(step, assume, model.body, frozenset())


def _isnull_walk(model: FunctionModel, sink: _Sink) -> None:
    # entries: (key, line of the test that found it NULL)
    def step(state: frozenset, e):
        if isinstance(e, Assign):
            return _kill(state, e.key)
        if isinstance(e, Deref):
            for k, ln in state:
                if k == e.key:
                    sink.add("IsNull", ln, k, f"{k} dereferenced at line {e.line} where it is known to be NULL")
        return state

    def assume(state: frozenset, facts):
        for f in facts:
            if f.kind == "nonnull":
                state = frozenset(x for x in state if x[0] != f.key)
            elif f.kind == "null":
                state = state | {(f.key, f.line)}
        return state

    sink.walk(step, assume, model.body, frozenset())


def _nullref_walk(model: FunctionModel, sink: _Sink) -> None:
    # entries: (key, line of the first dereference)
    def step(state: frozenset, e):
        if isinstance(e, Deref):
            if not any(k == e.key for k, _ in state):
                return state | {(e.key, e.line)}
            return state
        if isinstance(e, Assign):
            return _kill(state, e.key)
        if isinstance(e, NullTest):
            for k, ln in state:
                if k == e.key:
                    sink.add("NullRef", e.line, k, f"{k} tested for NULL after being dereferenced at line {ln}")
        return state

    sink.walk(step, _no_assume, model.body, frozenset())


# ---------------------------------------------------------------------------
# Free


def _free_walk(model: FunctionModel, closures: Closures, sink: _Sink) -> None:
    freed_idx = {}

    def indices(callee):
        if callee not in freed_idx:
            freed_idx[callee] = closures.freed_args(callee)
        return freed_idx[callee]

    def use(state, key, line):
        for k, c, ln in state:
            if k == key:
                sink.add("Free", ln, k, f"{k} used at line {line} after {c}")

    # entries: (key, freeing callee, line)
    def step(state: frozenset, e):
        if isinstance(e, Deref):
            use(state, e.key, e.line)
        elif isinstance(e, Assign):
            return _kill(state, e.key)
        elif isinstance(e, Call):
            for k in e.arg_keys:
                use(state, k, e.line)
            new = {(e.arg_keys[j], e.callee, e.line) for j in indices(e.callee) if j < len(e.arg_keys)}
            new = {x for x in new if x[0]}
            if new:
                return state | new
        return state

    sink.walk(step, _no_assume, model.body, frozenset())


# ---------------------------------------------------------------------------
# Range


def _user_key(key: str) -> str:
    return key[1:] if key.startswith("&") else key


def _range_walk(model: FunctionModel, config: CheckerConfig, sink: _Sink) -> None:
    sources = set(config.user_copy_fns)

    # entries: (key, line of the copy from user space)
    def step(state: frozenset, e):
        if isinstance(e, Call) and e.callee in sources and e.arg_keys:
            k = _user_key(e.arg_keys[0])
            if k:
                return state | {(k, e.line)}
        elif isinstance(e, BoundCheck):
            return frozenset(x for x in state if x[0] != e.key)
        elif isinstance(e, Assign):
            return _kill(state, e.key)
        elif isinstance(e, IndexUse):
            for k, ln in state:
                if k == e.index_key:
                    sink.add("Range", ln, k, f"{k} from user space used as an index at line {e.line} unchecked")
        return state

    sink.walk(step, _no_assume, model.body, frozenset())


# ---------------------------------------------------------------------------
# Var, Float, Size: no path state needed


def _pointee(model: FunctionModel, key: str | None) -> str | None:
    t = model.var_types.get(key or "")
    if not t or not t.endswith("*"):
        return None
    t = " ".join(t[:-1].split())
    return t or None


def _norm(t: str) -> str:
    return " ".join(t.split())


def _intra(model: FunctionModel, config: CheckerConfig, sink: _Sink) -> None:
    one_byte = set(config.one_byte_types)
    allocs = set(config.alloc_fns)
    for e in iter_events(model.body):
        if isinstance(e, ArrayDecl):
            if e.count is None or e.static:
                continue
            size = e.count * config.element_size(e.element_type, e.pointer)
            if size >= config.var_byte_threshold:
                sink.add("Var", e.line, e.name, f"{size}-byte array {e.name} on the stack")
        elif isinstance(e, FloatConst):
            if not e.folded_with_constant:
                sink.add("Float", e.line, e.text, f"floating point constant {e.text}")
        elif isinstance(e, SizeofSelf):
            sink.add("Size", e.line, e.key, f"allocation sized by the pointer {e.key} itself")
        elif isinstance(e, Call) and e.callee in allocs and e.assigned_to and e.sizeof_args:
            pointee = _pointee(model, e.assigned_to)
            if pointee is None or pointee == "void" or pointee in one_byte:
                continue
            types = [_norm(t) for t in e.sizeof_args]
            if pointee in types or any(t in one_byte for t in types):
                continue
            sink.add("Size", e.line, e.assigned_to,
                     f"{e.assigned_to} points to {pointee} but is allocated with sizeof({types[0]})")


# ---------------------------------------------------------------------------


def check_function(
    model: FunctionModel, closures: Closures, config: CheckerConfig = DEFAULT_CONFIG
) -> tuple[list[Report], bool]:
    """All reports for one function, plus whether any walk was truncated."""
    sink = _Sink(model)
    _lock_walk(model, closures, config, sink)
    _null_walk(model, closures, sink)
    _isnull_walk(model, sink)
    _nullref_walk(model, sink)
    _free_walk(model, closures, sink)
    _range_walk(model, config, sink)
    _intra(model, config, sink)
    return sorted(sink.reports.values()), sink.truncated


def function_notes(model: FunctionModel, closures: Closures, config: CheckerConfig = DEFAULT_CONFIG) -> list[Note]:
    table = LockTable(config)
    one_byte = set(config.one_byte_types)
    allocs = set(config.alloc_fns)
    user = set(config.user_copy_fns)
    deref_fns = set(config.rcu_deref_fns)
    events = list(iter_events(model.body))
    deref_keys = {e.key for e in events if isinstance(e, Deref)}
    out: list[Note] = []

    def note(kind, line):
        out.append(Note(model.file, line, kind, model.name))

    for e in events:
        if isinstance(e, Call):
            name = e.callee
            if name in closures.blocking or e.has_gfp_kernel:
                for k in ("BlockLock", "BlockIntr", "BlockRCU"):
                    note(k, e.line)
            if e.assigned_to is not None and name in closures.null_returning:
                note("Null", e.line)
            if closures.freed_args(name):
                note("Free", e.line)
            if name in user:
                note("Range", e.line)
            cls = table.acquire_class(name)
            if cls is not None:
                note(_BALANCE_KIND[cls], e.line)
            if name in table.rcu_lock:
                note("LockRCU", e.line)
            if name in deref_fns:
                note("DerefRCU", e.line)
            if name in allocs and any(_norm(t) not in one_byte for t in e.sizeof_args):
                note("Size", e.line)
        elif isinstance(e, NullTest):
            if e.key in deref_keys:
                note("IsNull", e.line)
                note("NullRef", e.line)
        elif isinstance(e, ArrayDecl):
            note("Var", e.line)
        elif isinstance(e, (SizeofExpr, SizeofSelf)):
            t = model.var_types.get(e.key)
            if t is None or _norm(t) not in one_byte:
                note("Size", e.line)
        elif isinstance(e, FloatConst):
            # every floating point constant outside constant folding is both note and fault
            if not e.folded_with_constant:
                note("Float", e.line)
    return out


@dataclass
class CheckResult:
    reports: list[Report]
    notes: list[Note]
    truncated: list[str]  # "file:function" whose path sets hit the cap
    closures: Closures | None = None


def count_notes(models: Iterable[FunctionModel], closures: Closures,
                config: CheckerConfig = DEFAULT_CONFIG) -> dict[str, int]:
    counts = {k: 0 for k in KIND_NAMES}
    for m in models:
        for n in function_notes(m, closures, config):
            counts[n.checker] += 1
    return counts


def check_models(
    models: Iterable[FunctionModel],
    config: CheckerConfig = DEFAULT_CONFIG,
    closures: Closures | None = None,
    kinds: Iterable[str] | None = None,
) -> CheckResult:
    models = list(models)
    if closures is None:
        closures = compute_closures(models, config)
    selected = set(validate_kinds(kinds)) if kinds is not None else set(KIND_NAMES)
    reports: dict[tuple, Report] = {}
    notes: list[Note] = []
    truncated = []
    for m in models:
        rs, trunc = check_function(m, closures, config)
        if trunc:
            truncated.append(f"{m.file}:{m.name}")
        for r in rs:
            if r.checker in selected:
                # identical sites from duplicated #if arms collapse here
                reports.setdefault((r.checker, r.file, r.line, r.key), r)
        notes.extend(n for n in function_notes(m, closures, config) if n.checker in selected)
    return CheckResult(sorted(reports.values()), sorted(notes), sorted(truncated), closures)


def faults_outside_notes(reports: Iterable[Report], notes: Iterable[Note]) -> list[Report]:
    """Reports whose site carries no note of the same checker (should be empty)."""
    sites = {(n.checker, n.file, n.line) for n in notes}
    return [r for r in reports if (r.checker, r.file, r.line) not in sites]


# ---------------------------------------------------------------------------
# JSON-lines files, one per (version, checker)


def _dump(rows) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


def write_results(out_dir: str, version: str, result: CheckResult, kinds: Iterable[str] = KIND_NAMES) -> list[str]:
    vdir = os.path.join(out_dir, version)
    os.makedirs(vdir, exist_ok=True)
    written = []
    for kind in kinds:
        for suffix, rows in (
            ("reports", [r.to_json() for r in result.reports if r.checker == kind]),
            ("notes", [n.to_json() for n in result.notes if n.checker == kind]),
        ):
            path = os.path.join(vdir, f"{kind}.{suffix}.jsonl")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(_dump(rows))
            written.append(path)
    return written


def read_results(out_dir: str, version: str, kinds: Iterable[str] = KIND_NAMES) -> tuple[list[Report], list[Note]]:
    vdir = os.path.join(out_dir, version)
    reports, notes = [], []
    for kind in kinds:
        for suffix, cls, acc in (("reports", Report, reports), ("notes", Note, notes)):
            path = os.path.join(vdir, f"{kind}.{suffix}.jsonl")
            if not os.path.exists(path):
                continue
            with open(path, encoding="utf-8") as fh:
                acc.extend(cls.from_json(json.loads(line)) for line in fh if line.strip())
    return sorted(reports), sorted(notes)
