"""Random C programs whose call graph is known, plus reachability oracles.

Every function has the shape::

    void *f3(void *p, int x)
    {
        kmalloc(8, GFP_KERNEL);      optional blocking seed
        schedule();                  optional
        kfree(p);                    optional freeing seed
        f7(0, x);                    plain calls
        f2(p, x);                    plain calls that pass p on
        if (x)
            f9(p, x);                conditional pass of p
        spin_unlock(&l);  or  sti(); optional
        f4(0, x);                    calls behind the release
        if (x > 1)
            return NULL;             optional null seed
        return f5(0, x);   or  r = f5(0, x); if (r) ...; return r;   or  return p;
    }
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field


@dataclass
class Fn:
    name: str
    gfp: bool = False
    sched: bool = False
    kfree: bool = False
    plain: list = field(default_factory=list)
    passes: list = field(default_factory=list)
    cond_passes: list = field(default_factory=list)
    release: str = ""  # "", "unlock" or "irq_on"
    guarded: list = field(default_factory=list)
    ret_null: bool = False
    ret_call: str | None = None
    ret_checked: bool = False

    def source(self) -> str:
        L = [f"void *{self.name}(void *p, int x)", "{", "\tvoid *r;"]
        if self.gfp:
            L.append("\tkmalloc(8, GFP_KERNEL);")
        if self.sched:
            L.append("\tschedule();")
        if self.kfree:
            L.append("\tkfree(p);")
        L += [f"\t{g}(0, x);" for g in self.plain]
        L += [f"\t{g}(p, x);" for g in self.passes]
        for g in self.cond_passes:
            L += ["\tif (x)", f"\t\t{g}(p, x);"]
        if self.release == "unlock":
            L.append("\tspin_unlock(&big_lock);")
        elif self.release == "irq_on":
            L.append("\tsti();")
        L += [f"\t{g}(0, x);" for g in self.guarded]
        if self.ret_null:
            L += ["\tif (x > 1)", "\t\treturn NULL;"]
        if self.ret_call and not self.ret_checked:
            L.append(f"\treturn {self.ret_call}(0, x);")
        elif self.ret_call:
            L += [f"\tr = {self.ret_call}(0, x);", "\tif (r)", "\t\tx = 0;", "\treturn r;"]
        else:
            L.append("\treturn p;")
        L.append("}")
        return "\n".join(L) + "\n"

    def plain_callees(self) -> set:
        out = set(self.plain) | set(self.passes) | set(self.cond_passes)
        if self.sched:
            out.add("schedule")
        if self.gfp:
            out.add("kmalloc")
        if self.kfree:
            out.add("kfree")
        if self.ret_call and not self.release:
            out.add(self.ret_call)
        return out


def random_program(rng: random.Random, n: int = 30) -> list[Fn]:
    names = [f"f{i}" for i in range(n)]
    fns = []
    for name in names:
        others = [x for x in names if x != name]
        f = Fn(name)
        f.gfp = rng.random() < 0.08
        f.sched = rng.random() < 0.05
        f.kfree = rng.random() < 0.1
        f.plain = rng.sample(others, rng.choice([0, 0, 1, 1, 2]))
        f.passes = rng.sample(others, rng.choice([0, 0, 0, 1]))
        f.cond_passes = rng.sample(others, rng.choice([0, 0, 1]))
        f.release = rng.choice(["", "", "", "unlock", "irq_on"])
        if f.release:
            f.guarded = rng.sample(others, rng.choice([1, 2]))
        f.ret_null = rng.random() < 0.1
        if rng.random() < 0.5:
            f.ret_call = rng.choice(others)
            f.ret_checked = rng.random() < 0.3
        fns.append(f)
    return fns


def program_source(fns: list[Fn]) -> str:
    return "static spinlock_t big_lock;\n\n" + "\n".join(f.source() for f in fns)


def _backward(succ: dict[str, set], seeds: set) -> set:
    """Every node from which a seed is reachable along *succ*."""
    members = set(seeds)
    changed = True
    while changed:
        changed = False
        for a, bs in succ.items():
            if a not in members and bs & members:
                members.add(a)
                changed = True
    return members


def blocking_oracle(fns: list[Fn]) -> set:
    seeds = {"schedule"} | {f.name for f in fns if f.gfp}
    return _backward({f.name: f.plain_callees() for f in fns}, seeds)


def null_oracle(fns: list[Fn]) -> set:
    seeds = {f.name for f in fns if f.ret_null}
    succ = {f.name: ({f.ret_call} if f.ret_call and not f.ret_checked else set()) for f in fns}
    return _backward(succ, seeds)


def freeing_oracle(fns: list[Fn]) -> set:
    seeds = {"kfree"} | {f.name for f in fns if f.kfree}
    return _backward({f.name: set(f.passes) for f in fns}, seeds) - {"kfree"}
