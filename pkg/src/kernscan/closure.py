"""Call graph and the blocking / NULL-returning / freeing function sets.

Every set is the least fixed point of a monotone rule started from a seed
set.  Rounds are synchronous: a function added in round ``k`` was derived
only from members present after round ``k - 1``, so provenance records the
length of the shortest derivation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable

from .cmodel import Assign, Call, FunctionModel, NullTest, PathWalker, Return, iter_events
from .config import DEFAULT_CONFIG, CheckerConfig
from .locks import LockState, LockTable, lock_assume, lock_step

PLAIN = "plain"
AFTER_UNLOCK = "after_unlock"
AFTER_IRQ_ON = "after_irq_on"
GUARDS = (PLAIN, AFTER_UNLOCK, AFTER_IRQ_ON)  # strongest first

BLOCKING = "blocking"
NULL_RETURNING = "null_returning"
FREEING = "freeing"
ROLES = (BLOCKING, NULL_RETURNING, FREEING)


def _guard_of(state: LockState) -> str:
    if state.released_external:
        return AFTER_UNLOCK
    if state.irq_on_external:
        return AFTER_IRQ_ON
    return PLAIN


def _stronger(a: str, b: str) -> str:
    return a if GUARDS.index(a) <= GUARDS.index(b) else b


@dataclass
class CallGraph:
    nodes: tuple[str, ...] = ()
    edges: dict[tuple[str, str], str] = field(default_factory=dict)

    def add_edge(self, caller: str, callee: str, guard: str = PLAIN) -> None:
        old = self.edges.get((caller, callee))
        self.edges[(caller, callee)] = guard if old is None else _stronger(old, guard)

    def sorted_edges(self) -> list[tuple[str, str, str]]:
        return [(a, b, g) for (a, b), g in sorted(self.edges.items())]

    def callees(self) -> set[str]:
        return {b for _, b in self.edges}


def call_site_guards(model: FunctionModel, table: LockTable) -> dict[tuple[str, int], str]:
    """Guard of every direct call site, keyed by (callee, line)."""
    sites: dict[tuple[str, int], str] = {}

    def step(state: LockState, event):
        if isinstance(event, Call):
            key = (event.callee, event.line)
            g = _guard_of(state)
            sites[key] = _stronger(sites[key], g) if key in sites else g
            return lock_step(table, state, event)
        return state

    PathWalker(step, lambda s, facts: lock_assume(table, s, facts)).run(model.body, LockState())
    return sites


def build_callgraph(models: Iterable[FunctionModel], config: CheckerConfig = DEFAULT_CONFIG) -> CallGraph:
    table = LockTable(config)
    graph = CallGraph()
    names = set()
    for m in models:
        names.add(m.name)
        for (callee, _line), guard in sorted(call_site_guards(m, table).items()):
            graph.add_edge(m.name, callee, guard)
    graph.nodes = tuple(sorted(names))
    return graph


# ---------------------------------------------------------------------------
# Fixpoint


@dataclass(frozen=True)
class FunctionSet:
    role: str
    provenance: dict  # member -> "seed" | "derived(round k)"

    @property
    def members(self) -> frozenset:
        return frozenset(self.provenance)

    @property
    def seeds(self) -> frozenset:
        return frozenset(m for m, p in self.provenance.items() if p == "seed")

    @property
    def rounds(self) -> int:
        return max((_round(p) for p in self.provenance.values()), default=0)

    def __contains__(self, item) -> bool:
        return item in self.provenance

    def __len__(self) -> int:
        return len(self.provenance)


def _round(prov: str) -> int:
    return 0 if prov == "seed" else int(prov[len("derived(round "):-1])


def fixpoint(
    candidates: Iterable[Hashable],
    seeds: Iterable[Hashable],
    derives: Callable[[Hashable, frozenset], bool],
    role: str = "",
) -> FunctionSet:
    """Least set containing *seeds* and closed under *derives*.

    ``derives(node, members)`` must be monotone in ``members``.
    """
    prov = {s: "seed" for s in seeds}
    pool = sorted(set(candidates) - set(prov), key=repr)
    k = 0
    while True:
        members = frozenset(prov)
        new = [n for n in pool if derives(n, members)]
        if not new:
            break
        k += 1
        for n in new:
            prov[n] = f"derived(round {k})"
        pool = [n for n in pool if n not in prov]
    return FunctionSet(role, prov)


def edge_fixpoint(
    edges: Iterable[tuple[str, str]], seeds: Iterable[str], role: str = ""
) -> FunctionSet:
    """Backward closure: a caller joins when one of its callees is a member."""
    succ: dict[str, set[str]] = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    return fixpoint(succ, seeds, lambda f, m: not succ[f].isdisjoint(m), role)


# ---------------------------------------------------------------------------
# Blocking


def blocking_seeds(models: Iterable[FunctionModel], config: CheckerConfig = DEFAULT_CONFIG) -> set[str]:
    seeds = set(config.blocking_seed_fns)
    for m in models:
        if any(isinstance(e, Call) and e.has_gfp_kernel for e in _events(m)):
            seeds.add(m.name)
    return seeds


def blocking_set(graph: CallGraph, seeds: Iterable[str]) -> FunctionSet:
    plain = [(a, b) for (a, b), g in graph.edges.items() if g == PLAIN]
    return edge_fixpoint(plain, seeds, BLOCKING)


# ---------------------------------------------------------------------------
# NULL-returning


def null_seeds(models: Iterable[FunctionModel]) -> set[str]:
    return {m.name for m in models if any(isinstance(e, Return) and e.returns_null_literal for e in _events(m))}


def returns_unchecked(model: FunctionModel) -> set[str]:
    """Callees whose result *model* may return without testing it."""
    found: set[str] = set()

    def step(state: frozenset, event):
        if isinstance(event, Call) and event.assigned_to is not None:
            return state | {(event.assigned_to, event.callee)}
        if isinstance(event, (Assign, NullTest)):
            return frozenset(p for p in state if not _covers(event.key, p[0]))
        if isinstance(event, Return):
            if event.value_call is not None:
                found.add(event.value_call)
            elif event.value_key is not None:
                found.update(c for k, c in state if k == event.value_key)
        return state

    PathWalker(step).run(model.body, frozenset())
    return found


def null_relation(models: Iterable[FunctionModel]) -> list[tuple[str, str]]:
    return sorted({(m.name, g) for m in models for g in returns_unchecked(m)})


def null_set(models: Iterable[FunctionModel]) -> FunctionSet:
    models = list(models)
    return edge_fixpoint(null_relation(models), null_seeds(models), NULL_RETURNING)


# ---------------------------------------------------------------------------
# Freeing: members are (function, parameter index) pairs


def param_passes(model: FunctionModel) -> list[frozenset]:
    """For each exit path, the (callee, arg index, param index) passes made on it.

    A parameter stops counting once it has been reassigned.
    """
    index = {p: j for j, p in enumerate(model.params)}

    def step(state, event):
        passes, killed = state
        if isinstance(event, Call):
            new = {
                (event.callee, i, index[k])
                for i, k in enumerate(event.arg_keys)
                if k in index and k not in killed
            }
            if new:
                passes = passes | new
        elif isinstance(event, Assign) and event.key in index:
            killed = killed | {event.key}
        return passes, killed

    exits = PathWalker(step).run(model.body, (frozenset(), frozenset()))
    return sorted({p for p, _ in exits}, key=sorted)


def freeing_set(models: Iterable[FunctionModel], config: CheckerConfig = DEFAULT_CONFIG) -> FunctionSet:
    paths: dict[tuple[str, int], list[list[frozenset]]] = {}
    for m in models:
        exits = param_passes(m)
        for j in range(len(m.params)):
            paths.setdefault((m.name, j), []).append(exits)

    def derives(node, members) -> bool:
        j = node[1]
        for exits in paths[node]:
            if exits and all(any((g, i) in members for g, i, jj in st if jj == j) for st in exits):
                return True
        return False

    seeds = {(f, 0) for f in config.free_fns}
    return fixpoint(paths, seeds, derives, FREEING)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Closures:
    graph: CallGraph
    blocking: FunctionSet
    null_returning: FunctionSet
    freeing: FunctionSet

    def freed_args(self, callee: str) -> tuple[int, ...]:
        return tuple(sorted(j for f, j in self.freeing.members if f == callee))

    def to_jsonl(self) -> str:
        rows = []
        for fs in (self.blocking, self.null_returning, self.freeing):
            for member, prov in fs.provenance.items():
                if fs.role == FREEING:
                    name, j = member
                    rows.append(((fs.role, name, j), {"role": fs.role, "name": name, "param": j,
                                                      "provenance": prov}))
                else:
                    rows.append(((fs.role, member, -1), {"role": fs.role, "name": member,
                                                         "provenance": prov}))
        rows.sort(key=lambda r: r[0])
        return "".join(json.dumps(r, sort_keys=True) + "\n" for _, r in rows)


def compute_closures(models: Iterable[FunctionModel], config: CheckerConfig = DEFAULT_CONFIG) -> Closures:
    models = list(models)
    graph = build_callgraph(models, config)
    return Closures(
        graph,
        blocking_set(graph, blocking_seeds(models, config)),
        null_set(models),
        freeing_set(models, config),
    )


def _covers(prefix: str, key: str) -> bool:
    """True when an assignment to *prefix* invalidates facts about *key*."""
    if key == prefix:
        return True
    if not key.startswith(prefix):
        return False
    rest = key[len(prefix):]
    return rest.startswith(("->", ".", "["))


def _events(model: FunctionModel):
    return iter_events(model.body)
