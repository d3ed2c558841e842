"""Event and event-tree node types.

A function body becomes a tuple of nodes.  Leaves are events (calls,
dereferences, null tests, ...); structure comes from :class:`Branch`
(if / loops), :class:`Switch`, :class:`Jump` (goto/break/continue) and
:class:`Label`.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import ClassVar, Iterator, Union

IS_NULL = "is_null"
IS_NOT_NULL = "is_not_null"


@dataclass(frozen=True)
class Call:
    kind: ClassVar[str] = "Call"
    line: int
    callee: str
    arg_keys: tuple[str, ...] = ()
    has_gfp_kernel: bool = False
    sizeof_args: tuple[str, ...] = ()
    assigned_to: str | None = None
    # set when the call is itself a condition atom (trylock); its effect
    # then comes from the enclosing branch's facts
    conditional: bool = False


@dataclass(frozen=True)
class Deref:
    kind: ClassVar[str] = "Deref"
    line: int
    key: str


@dataclass(frozen=True)
class NullTest:
    kind: ClassVar[str] = "NullTest"
    line: int
    key: str
    polarity: str


@dataclass(frozen=True)
class Assign:
    kind: ClassVar[str] = "Assign"
    line: int
    key: str


@dataclass(frozen=True)
class Return:
    kind: ClassVar[str] = "Return"
    line: int
    returns_null_literal: bool = False
    value_key: str | None = None
    value_call: str | None = None


@dataclass(frozen=True)
class ArrayDecl:
    kind: ClassVar[str] = "ArrayDecl"
    line: int
    name: str
    element_type: str
    count: int | None = None
    pointer: bool = False
    static: bool = False


@dataclass(frozen=True)
class FloatConst:
    kind: ClassVar[str] = "FloatConst"
    line: int
    text: str
    folded_with_constant: bool = False


@dataclass(frozen=True)
class SizeofSelf:
    kind: ClassVar[str] = "SizeofSelf"
    line: int
    key: str


@dataclass(frozen=True)
class SizeofExpr:
    kind: ClassVar[str] = "SizeofExpr"
    line: int
    key: str


@dataclass(frozen=True)
class IndexUse:
    kind: ClassVar[str] = "IndexUse"
    line: int
    index_key: str


@dataclass(frozen=True)
class BoundCheck:
    kind: ClassVar[str] = "BoundCheck"
    line: int
    key: str


Event = Union[
    Call, Deref, NullTest, Assign, Return, ArrayDecl, FloatConst,
    SizeofSelf, SizeofExpr, IndexUse, BoundCheck,
]
EVENT_TYPES = (
    Call, Deref, NullTest, Assign, Return, ArrayDecl, FloatConst,
    SizeofSelf, SizeofExpr, IndexUse, BoundCheck,
)


@dataclass(frozen=True)
class Fact:
    """Something known to hold on entry to one arm of a branch."""

    kind: str  # "null", "nonnull" or "trylock"
    key: str
    line: int
    callee: str = ""


@dataclass(frozen=True)
class Branch:
    line: int
    condition: tuple = ()
    then: tuple = ()
    orelse: tuple = ()
    then_facts: tuple[Fact, ...] = ()
    else_facts: tuple[Fact, ...] = ()
    loop: str = ""  # "", "loop" or "do"


@dataclass(frozen=True)
class Switch:
    line: int
    condition: tuple = ()
    arms: tuple = ()
    has_default: bool = False


@dataclass(frozen=True)
class Jump:
    line: int
    kind: str  # "goto", "break", "continue"
    label: str = ""


@dataclass(frozen=True)
class Label:
    line: int
    name: str


@dataclass
class FunctionModel:
    name: str
    file: str
    start_line: int
    end_line: int
    params: tuple[str, ...] = ()
    var_types: dict[str, str] = field(default_factory=dict)
    body: tuple = ()
    tokens: list = field(default_factory=list, repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.end_line - self.start_line + 1


def iter_events(nodes) -> Iterator:
    """Yield every event of a tree in source/evaluation order."""
    for node in nodes:
        if isinstance(node, Branch):
            yield from node.condition
            yield from iter_events(node.then)
            yield from iter_events(node.orelse)
        elif isinstance(node, Switch):
            yield from node.condition
            for arm in node.arms:
                yield from iter_events(arm)
        elif isinstance(node, EVENT_TYPES):
            yield node


def payload(event) -> str:
    data = asdict(event)
    data.pop("line")
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def dump_events(models) -> list[str]:
    """Debug dump lines ``line<TAB>kind<TAB>payload`` sorted by line then kind."""
    rows = []
    for model in models:
        for ev in iter_events(model.body):
            rows.append((ev.line, ev.kind, payload(ev)))
    rows.sort()
    return [f"{line}\t{kind}\t{p}" for line, kind, p in rows]
