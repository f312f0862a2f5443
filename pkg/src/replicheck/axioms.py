"""Correctness axioms over abstract executions (completed invocations only).

An abstract execution is the set of completed invocations with their method,
argument and return value, plus the session order among them.  ``match``
pairs a producer with the consumer that returned its argument, and
``hb_Γ = (match ∪ so_Γ)+``.  Quantified variables range over invocations and
are not required to be distinct.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from . import values

AXIOMS = {
    "stack": ("addrem", "injective", "empty-so", "empty-hb", "lifo1", "lifo2"),
    "queue": ("addrem", "injective", "empty-so", "empty-hb", "fifo1", "fifo2"),
    "exchanger": ("addrem", "injective", "exchange"),
}

TITLES = {"addrem": "AddRem", "injective": "Injective", "empty-so": "Empty[SO]",
          "empty-hb": "Empty[HB]", "lifo1": "LIFO-1", "lifo2": "LIFO-2",
          "fifo1": "FIFO-1", "fifo2": "FIFO-2", "exchange": "Exchange"}


class AxiomError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomId:
    datatype: str
    name: str

    def __post_init__(self):
        if self.datatype not in AXIOMS:
            raise AxiomError(f"unknown datatype {self.datatype!r}")
        if self.name not in AXIOMS[self.datatype]:
            raise AxiomError(f"axiom {self.name!r} is not applicable to {self.datatype} libraries (-NA-)")

    @property
    def title(self) -> str:
        return TITLES[self.name]

    def __str__(self):
        return self.title


def axioms_for(datatype: str) -> list[AxiomId]:
    return [AxiomId(datatype, n) for n in AXIOMS[datatype]]


@dataclass(frozen=True)
class Inv:
    """A completed invocation as seen by the axioms (void returns are BOT)."""

    slot: int
    session: int
    method: str
    arg: int
    ret: int


@dataclass
class AbstractExecution:
    datatype: str
    invs: list[Inv]  # in session order within each session

    @classmethod
    def from_execution(cls, datatype: str, ex) -> "AbstractExecution":
        invs = []
        for inv in ex.history.invocations:
            if inv.slot in ex.rets:
                r = ex.rets[inv.slot]
                invs.append(Inv(inv.slot, inv.session, inv.method, inv.arg,
                                values.BOT if r is None else r))
        return cls(datatype, invs)

    def so(self, g1: Inv, g2: Inv) -> bool:
        return g1.session == g2.session and g1.slot < g2.slot


@dataclass(frozen=True)
class Counterexample:
    axiom: AxiomId
    binding: dict  # variable name -> slot

    def describe(self, ae: AbstractExecution) -> str:
        by_slot = {g.slot: g for g in ae.invs}
        parts = []
        for var, slot in self.binding.items():
            g = by_slot[slot]
            parts.append(f"{var}={render_inv(g)}")
        return ", ".join(parts)


def render_inv(g: Inv) -> str:
    if g.method in ("push", "enqueue"):
        return f"{g.method}({g.arg})"
    if g.method == "exchange":
        return f"exchange({g.arg}):{values.show(g.ret)}"
    return f"{g.method}:{values.show(g.ret)}"


PRODUCER = {"stack": "push", "queue": "enqueue"}
CONSUMER = {"stack": "pop", "queue": "dequeue"}


def match(datatype: str, g1: Inv, g2: Inv) -> bool:
    return (g1.method == PRODUCER[datatype] and g2.method == CONSUMER[datatype]
            and g1.arg == g2.ret)


def hb_gamma(ae: AbstractExecution) -> set[tuple[int, int]]:
    """(match ∪ so_Γ)+ over slots; empty for exchangers (no match)."""
    rel = set()
    for g1, g2 in product(ae.invs, repeat=2):
        if ae.so(g1, g2) or (ae.datatype in PRODUCER and match(ae.datatype, g1, g2)):
            rel.add((g1.slot, g2.slot))
    changed = True
    while changed:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        changed = bool(extra)
        rel |= extra
    return rel


def check(ae: AbstractExecution, ax: AxiomId) -> Optional[Counterexample]:
    """None when the axiom holds, otherwise a binding of its universal variables."""
    if ax.datatype != ae.datatype:
        raise AxiomError(f"{ax.title} is a {ax.datatype} axiom, execution is a {ae.datatype}")
    G, dt = ae.invs, ae.datatype
    cex = lambda **b: Counterexample(ax, b)  # noqa: E731
    if dt == "exchanger":
        if ax.name == "addrem":
            for g1 in G:
                if g1.ret != values.BOT and not any(g2.arg == g1.ret for g2 in G):
                    return cex(g1=g1.slot)
        elif ax.name == "injective":
            for g1, g2, g3 in product(G, repeat=3):
                if g2.ret == g1.arg and g3.ret == g1.arg and g2 != g3:
                    return cex(g1=g1.slot, g2=g2.slot, g3=g3.slot)
        else:
            for g1, g2 in product(G, repeat=2):
                if g1.arg == g2.ret and g1.ret != g2.arg:
                    return cex(g1=g1.slot, g2=g2.slot)
        return None

    m = lambda x, y: match(dt, x, y)  # noqa: E731
    prod, cons = PRODUCER[dt], CONSUMER[dt]
    hb = hb_gamma(ae)
    rel = (lambda x, y: ae.so(x, y)) if ax.name == "empty-so" else (lambda x, y: (x.slot, y.slot) in hb)
    matched = lambda x: any(m(x, y) for y in G)  # noqa: E731
    if ax.name == "addrem":
        for g in G:
            if g.method == cons and g.ret != values.EMPTY and not any(m(g2, g) for g2 in G):
                return cex(g=g.slot)
    elif ax.name == "injective":
        for g1, g2, g3 in product(G, repeat=3):
            if m(g1, g2) and m(g1, g3) and g2 != g3:
                return cex(g1=g1.slot, g2=g2.slot, g3=g3.slot)
    elif ax.name in ("empty-so", "empty-hb"):
        for g1, g2 in product(G, repeat=2):
            if (g1.method == cons and g1.ret == values.EMPTY and g2.method == prod
                    and rel(g2, g1) and not matched(g2)):
                return cex(g1=g1.slot, g2=g2.slot)
    elif ax.name == "lifo1":
        for g1, g2, g3 in product(G, repeat=3):
            if g1.method == prod and m(g2, g3) and rel(g2, g1) and rel(g1, g3) and not matched(g1):
                return cex(g1=g1.slot, g2=g2.slot, g3=g3.slot)
    elif ax.name == "lifo2":
        for g1, g2, g3, g4 in product(G, repeat=4):
            if m(g1, g4) and m(g2, g3) and rel(g2, g1) and rel(g3, g4) and rel(g1, g3):
                return cex(g1=g1.slot, g2=g2.slot, g3=g3.slot, g4=g4.slot)
    elif ax.name == "fifo1":
        for g1, g2, g3 in product(G, repeat=3):
            if g1.method == prod and m(g2, g3) and rel(g1, g2) and not matched(g1):
                return cex(g1=g1.slot, g2=g2.slot, g3=g3.slot)
    elif ax.name == "fifo2":
        for g1, g2, g3, g4 in product(G, repeat=4):
            if m(g1, g4) and m(g2, g3) and rel(g1, g2) and rel(g3, g4):
                return cex(g1=g1.slot, g2=g2.slot, g3=g3.slot, g4=g4.slot)
    return None


def parse_axiom(datatype: str, text: str) -> AxiomId:
    name = text.strip().lower().replace("_", "-").replace("[", "-").replace("]", "")
    name = {"lifo-1": "lifo1", "lifo-2": "lifo2", "fifo-1": "fifo1", "fifo-2": "fifo2",
            "emptyso": "empty-so", "emptyhb": "empty-hb"}.get(name, name)
    return AxiomId(datatype, name)
