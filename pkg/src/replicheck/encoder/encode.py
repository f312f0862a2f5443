"""Ground encoding of bounded executions into an SMT-LIB2 script.

Invocations ``1..k`` are fixed slots; each gets ``J`` event slots where ``J``
is the largest number of event atoms of any unrolled method, so the ``n``-th
event atom of whatever method invocation ``i`` runs lives in slot ``(i, n)``.
All symbols are documented in ``docs/encoding.md``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .. import values
from ..axioms import AxiomId
from ..frontend import ast as A
from ..frontend.universe import POISON, LocationUniverse, location_universe
from ..frontend.unroll import Ite, SFieldLoc, SVar, UnrolledMethod, unroll_library
from ..policies import Policy
from .terms import FALSE, TRUE, and_, app, eq, implies, ite, ne, not_, num, or_

GROUPS = ("implementation", "abstract-execution", "store", "policy", "spec-negation", "value-domain")

# every symbol the encoder declares or defines matches exactly one of these
SYMBOLS = {
    r"meth_(\d+)": "method code of invocation i",
    r"sess_(\d+)": "session of invocation i",
    r"arg_(\d+)": "argument of invocation i",
    r"ret_(\d+)": "return value of invocation i",
    r"done_(\d+)": "invocation i completed within the unroll bound",
    r"rho_(\d+)_(\w+?)_(\w+)_(\d+)": "SSA version v of local x of method m in invocation i",
    r"act_e(\d+)": "event slot e is executed",
    r"rd_e(\d+)": "event e reads (read or update)",
    r"wr_e(\d+)": "event e writes (write or update)",
    r"loc_e(\d+)": "location code accessed by event e",
    r"rval_e(\d+)": "value read by event e",
    r"wval_e(\d+)": "value written by event e",
    r"arpos_e(\d+)": "arbitration position of write e on its location",
    r"vis_e(\d+)_e(\d+)": "visibility edge",
    r"hb_e(\d+)_e(\d+)": "happens-before edge (lower bound of (vis | so)+)",
    r"so_e(\d+)_e(\d+)": "session order between event slots (defined)",
    r"rf_e(\d+)_e(\d+)": "read e2 takes its value from write e1",
    r"rfinit_e(\d+)": "read e sees no write and returns the initial value",
    r"wfr_e(\d+)_e(\d+)": "auxiliary: write e1 visible to an so-earlier event of e2's session",
    r"match_(\d+)_(\d+)": "producer i matched by consumer j (defined)",
    r"hbg(\d+)_(\d+)_(\d+)": "stage t of the squaring closure of match | so over invocations",
}


@dataclass
class EventSlot:
    id: int  # 1-based flat index
    inv: int
    pos: int  # 1-based position among the invocation's event atoms
    atoms: dict  # method -> Atom occupying this position
    locs: frozenset = frozenset()  # location codes it may touch
    can_read: bool = False
    can_write: bool = False

    @property
    def name(self) -> str:
        return f"e{self.id}"


@dataclass
class Encoding:
    lib: A.LibraryDef
    k: int
    policy: Policy
    axiom: AxiomId
    uni: LocationUniverse
    unrolled: dict
    J: int
    method_codes: dict
    events: list
    text: str = ""
    counts: dict = field(default_factory=dict)

    def event(self, inv: int, pos: int) -> EventSlot:
        return self.events[(inv - 1) * self.J + pos - 1]

    @property
    def code_methods(self) -> dict:
        return {c: m for m, c in self.method_codes.items()}


class _Script:
    def __init__(self):
        self.decls: list[str] = []
        self.body: list[str] = []
        self.counts: dict[str, int] = {g: 0 for g in GROUPS}
        self.group = GROUPS[0]
        self.declared: set[str] = set()

    def declare(self, name: str, sort: str):
        if name not in self.declared:
            self.declared.add(name)
            self.decls.append(f"(declare-const {name} {sort})")

    def define(self, name: str, sort: str, term: str):
        self.declared.add(name)
        self.body.append(f"(define-fun {name} () {sort} {term})")

    def section(self, group: str):
        self.group = group
        self.body.append(f"\n; ==== group: {group} ====")

    def note(self, text: str):
        self.body.append(f"; {text}")

    def add(self, term: str):
        if term == TRUE:
            return
        self.counts[self.group] += 1
        self.body.append(f"(assert {term})")


class Encoder:
    def __init__(self, lib: A.LibraryDef, k: int, policy: Policy, axiom: AxiomId,
                 bounds: dict | int = 1):
        if k < 1:
            raise ValueError("k must be at least 1")
        if axiom.datatype != lib.datatype:
            raise ValueError(f"{axiom.title} does not apply to a {lib.datatype} library")
        self.lib, self.k, self.policy, self.axiom = lib, k, policy, axiom
        self.uni = location_universe(lib, k)
        self.unrolled: dict[str, UnrolledMethod] = unroll_library(lib, bounds)
        self.codes = {m: c for c, m in enumerate(lib.methods, start=1)}
        self.J = max([len(u.events) for u in self.unrolled.values()] + [1])
        self.events: list[EventSlot] = []
        for i in range(1, k + 1):
            for j in range(1, self.J + 1):
                atoms = {m: u.events[j - 1] for m, u in self.unrolled.items() if j <= len(u.events)}
                locs = set()
                for a in atoms.values():
                    locs |= self.loc_class(a.loc)
                self.events.append(EventSlot(
                    (i - 1) * self.J + j, i, j, atoms, frozenset(locs),
                    any(a.kind in ("read", "cas") for a in atoms.values()),
                    any(a.kind in ("write", "cas") for a in atoms.values())))
        self.s = _Script()

    def event(self, inv: int, pos: int) -> EventSlot:
        return self.events[(inv - 1) * self.J + pos - 1]

    # -- translation of method-level terms ---------------------------------

    def loc_class(self, loc) -> set[int]:
        if isinstance(loc, A.GlobalLoc):
            return {self.uni.globals[loc.name]}
        return {code for _, code in self.uni.rows_with_field(loc.field)} | {POISON}

    def rho(self, i: int, m: str, v: SVar) -> str:
        if v.version == 0:
            return f"arg_{i}" if v.name == "a" else "0"
        name = f"rho_{i}_{m}_{v.name}_{v.version}"
        self.s.declare(name, "Int")
        return name

    def tr(self, e, i: int, m: str) -> str:
        if isinstance(e, A.Const):
            return num(e.value)
        if isinstance(e, A.Name):
            return num(self.uni.consts[e.name])
        if isinstance(e, SVar):
            return self.rho(i, m, e)
        if isinstance(e, Ite):
            return ite(self.trb(e.cond, i, m), self.tr(e.then, i, m), self.tr(e.orelse, i, m))
        if isinstance(e, A.BinOp):
            x, y = self.tr(e.left, i, m), self.tr(e.right, i, m)
            if e.op == "/":
                return ite(eq(y, "0"), "0", app("div", x, y))
            return app(e.op, x, y)
        raise TypeError(e)

    def trb(self, b, i: int, m: str) -> str:
        if isinstance(b, A.BoolConst):
            return TRUE if b.value else FALSE
        if isinstance(b, A.Cmp):
            x, y = self.tr(b.left, i, m), self.tr(b.right, i, m)
            if b.op == "==":
                return eq(x, y)
            if b.op == "!=":
                return ne(x, y)
            return app(b.op, x, y)
        if isinstance(b, A.Not):
            return not_(self.trb(b.arg, i, m))
        f = and_ if b.op == "and" else or_
        return f(self.trb(b.left, i, m), self.trb(b.right, i, m))

    def tr_loc(self, loc, i: int, m: str) -> str:
        if isinstance(loc, A.GlobalLoc):
            return num(self.uni.globals[loc.name])
        x = self.tr(loc.var, i, m)
        term = num(POISON)
        for row, code in sorted(self.uni.rows_with_field(loc.field), reverse=True):
            term = ite(eq(x, num(row)), num(code), term)
        return term

    def initval(self, loc_term: str, codes) -> str:
        term = "0"
        for code in sorted(codes, reverse=True):
            v = self.uni.initval[code]
            if v != 0:
                term = ite(eq(loc_term, num(code)), num(v), term)
        return term

    # -- per-event symbols --------------------------------------------------

    def ev(self, e: EventSlot, what: str) -> str:
        name = f"{what}_{e.name}"
        sort = "Bool" if what in ("act", "rd", "wr", "rfinit") else "Int"
        self.s.declare(name, sort)
        return name

    def vis(self, e: EventSlot, f: EventSlot) -> str:
        if e.id == f.id or (e.inv == f.inv and e.pos > f.pos):
            return FALSE
        name = f"vis_{e.name}_{f.name}"
        self.s.declare(name, "Bool")
        return name

    def hb(self, e: EventSlot, f: EventSlot) -> str:
        if e.id == f.id or (e.inv == f.inv and e.pos > f.pos):
            return FALSE
        name = f"hb_{e.name}_{f.name}"
        self.s.declare(name, "Bool")
        return name

    def so(self, e: EventSlot, f: EventSlot) -> str:
        if e.inv == f.inv:
            return and_(self.ev(e, "act"), self.ev(f, "act")) if e.pos < f.pos else FALSE
        if e.inv > f.inv:
            return FALSE
        return and_(self.ev(e, "act"), self.ev(f, "act"), eq(f"sess_{e.inv}", f"sess_{f.inv}"))

    def same_loc(self, e: EventSlot, f: EventSlot) -> str:
        if not (e.locs & f.locs):
            return FALSE
        return eq(self.ev(e, "loc"), self.ev(f, "loc"))

    def writes_same(self, g: EventSlot, f: EventSlot) -> str:
        """g is an active write/update to the location f accesses."""
        if not g.can_write or not (g.locs & f.locs) or g.id == f.id:
            return FALSE
        return and_(self.ev(g, "act"), self.ev(g, "wr"), self.same_loc(g, f))

    # -- groups -------------------------------------------------------------

    def implementation(self):
        s = self.s
        s.section("implementation")
        for i in range(1, self.k + 1):
            done_terms = []
            act_terms = {e.id: [] for e in self.events if e.inv == i}
            for m, u in self.unrolled.items():
                pre_m = eq(f"meth_{i}", num(self.codes[m]))
                pos = 0
                for atom in u.atoms:
                    g = self.trb(atom.guard, i, m)
                    pre = and_(pre_m, g)
                    if atom.kind == "assign":
                        s.add(implies(pre_m, eq(self.rho(i, m, atom.target), self.tr(atom.expr, i, m))))
                    elif atom.kind == "alloc":
                        row = self.uni.row_id(atom.label, i)
                        s.add(implies(pre_m, eq(self.rho(i, m, atom.target), num(row))))
                    elif atom.kind == "return":
                        done_terms.append(pre)
                        val = num(values.BOT) if atom.expr is None else self.tr(atom.expr, i, m)
                        s.add(implies(pre, eq(f"ret_{i}", val)))
                    else:
                        pos += 1
                        e = self.event(i, pos)
                        s.note(f"{e.name} = invocation {i} event {pos}: {m} label {atom.label_str} {atom.kind}")
                        act_terms[e.id].append(pre)
                        act, rd, wr = self.ev(e, "act"), self.ev(e, "rd"), self.ev(e, "wr")
                        loc, rval, wval = self.ev(e, "loc"), self.ev(e, "rval"), self.ev(e, "wval")
                        L = self.tr_loc(atom.loc, i, m)
                        if atom.kind == "read":
                            s.add(implies(pre, and_(rd, not_(wr), eq(loc, L),
                                                    eq(self.rho(i, m, atom.target), rval))))
                        elif atom.kind == "write":
                            s.add(implies(pre, and_(wr, not_(rd), eq(loc, L),
                                                    eq(wval, self.tr(atom.expr, i, m)))))
                        else:
                            e1, e2 = self.tr(atom.expr, i, m), self.tr(atom.expr2, i, m)
                            ok = eq(rval, e1)
                            s.add(implies(pre, and_(
                                rd, eq(loc, L), eq(wr, ok), implies(ok, eq(wval, e2)),
                                eq(self.rho(i, m, atom.target),
                                   ite(ok, num(values.TRUE), num(values.FALSE))))))
            s.declare(f"done_{i}", "Bool")
            s.add(eq(f"done_{i}", or_(*done_terms)))
            for eid, terms in act_terms.items():
                e = self.events[eid - 1]
                s.add(eq(self.ev(e, "act"), or_(*terms)))

    def abstract_execution(self):
        s, k = self.s, self.k
        s.section("abstract-execution")
        for i in range(1, k + 1):
            s.declare(f"meth_{i}", "Int")
            s.declare(f"sess_{i}", "Int")
            s.declare(f"arg_{i}", "Int")
            s.declare(f"ret_{i}", "Int")
            s.add(or_(*[eq(f"meth_{i}", num(c)) for c in self.codes.values()]))
        s.note("sessions are numbered in order of first invocation (symmetry breaking)")
        s.add(eq("sess_1", "1"))
        for i in range(1, k):
            s.add(or_(eq(f"sess_{i + 1}", f"sess_{i}"), eq(f"sess_{i + 1}", app("+", f"sess_{i}", "1"))))
            s.note(f"an invocation stuck at the unroll bound ends its session")
            s.add(implies(not_(f"done_{i}"), ne(f"sess_{i + 1}", f"sess_{i}")))
        for e, f in product(self.events, repeat=2):
            t = self.so(e, f)
            if t != FALSE:
                s.define(f"so_{e.name}_{f.name}", "Bool", t)

    def store(self):
        s, E = self.s, self.events
        s.section("store")
        for e, f in product(E, repeat=2):
            v = self.vis(e, f)
            if v == FALSE:
                continue
            s.add(implies(v, and_(self.ev(e, "act"), self.ev(f, "act"))))
        s.note("hb: least relation containing vis and so, closed under composition, acyclic")
        for e, f in product(E, repeat=2):
            if e.id == f.id:
                continue
            h = self.hb(e, f)
            if h == FALSE:
                continue
            s.add(implies(self.vis(e, f), h))
            so = self.so(e, f)
            if so != FALSE:
                s.add(implies(f"so_{e.name}_{f.name}", h))
            if e.id < f.id:
                s.add(not_(and_(h, self.hb(f, e))))
        for e, f, g in product(E, repeat=3):
            if len({e.id, f.id, g.id}) < 3:
                continue
            h1, h2 = self.hb(e, f), self.hb(f, g)
            if FALSE in (h1, h2):
                continue
            s.add(implies(and_(h1, h2), self.hb(e, g)))
        s.note("arbitration: per-location total order of writes via integer positions")
        writers = [e for e in E if e.can_write]
        for e, f in product(writers, repeat=2):
            if e.id == f.id or not (e.locs & f.locs):
                continue
            both = and_(self.writes_same(e, f), self.ev(f, "act"), self.ev(f, "wr"))
            if e.id < f.id:
                s.add(implies(both, ne(self.ev(e, "arpos"), self.ev(f, "arpos"))))
            h = self.hb(e, f)
            if h != FALSE:
                s.add(implies(and_(h, both), app("<", self.ev(e, "arpos"), self.ev(f, "arpos"))))
        s.note("reads-from: the ar-latest visible write, or the initial value if none is visible")
        for f in E:
            if not f.can_read:
                continue
            srcs = [e for e in writers if e.id != f.id and e.locs & f.locs]
            act, rd, loc, rval = self.ev(f, "act"), self.ev(f, "rd"), self.ev(f, "loc"), self.ev(f, "rval")
            rfinit = self.ev(f, "rfinit")
            rfs = []
            for e in srcs:
                if self.vis(e, f) == FALSE:
                    continue
                r = f"rf_{e.name}_{f.name}"
                s.declare(r, "Bool")
                rfs.append(r)
                later = [implies(and_(self.vis(g, f), self.writes_same(g, f)),
                                 app("<", self.ev(g, "arpos"), self.ev(e, "arpos")))
                         for g in srcs if g.id != e.id and self.vis(g, f) != FALSE]
                s.add(implies(r, and_(act, rd, self.writes_same(e, f), self.vis(e, f),
                                      eq(rval, self.ev(e, "wval")), *later)))
            none = [not_(and_(self.vis(g, f), self.writes_same(g, f)))
                    for g in srcs if self.vis(g, f) != FALSE]
            s.add(implies(rfinit, and_(act, rd, eq(rval, self.initval(loc, f.locs)), *none)))
            s.add(implies(and_(act, rd), or_(rfinit, *rfs)))
        s.note("an update consumes its source: no two updates read from the same write")
        updaters = [e for e in E if e.can_read and e.can_write]
        for f1, f2 in product(updaters, repeat=2):
            if f1.id >= f2.id or not (f1.locs & f2.locs):
                continue
            w1, w2 = self.ev(f1, "wr"), self.ev(f2, "wr")
            for e in writers:
                if e.id in (f1.id, f2.id) or FALSE in (self.vis(e, f1), self.vis(e, f2)):
                    continue
                if not (e.locs & f1.locs & f2.locs):
                    continue
                s.add(not_(and_(f"rf_{e.name}_{f1.name}", f"rf_{e.name}_{f2.name}", w1, w2)))
            s.add(not_(and_(self.ev(f1, "rfinit"), self.ev(f2, "rfinit"), w1, w2,
                            self.same_loc(f1, f2))))

    def policy_group(self):
        s, E, atoms = self.s, self.events, self.policy.atoms
        s.section("policy")
        s.note(f"policy {self.policy.name}")
        if "CC" in atoms:
            for e, f in product(E, repeat=2):
                h = self.hb(e, f)
                if h != FALSE:
                    s.add(implies(h, self.vis(e, f)))
            return
        if "RYW" in atoms:
            for e, f in product(E, repeat=2):
                so = self.so(e, f)
                if so != FALSE:
                    s.add(implies(f"so_{e.name}_{f.name}", self.vis(e, f)))
        cv = "CV" in atoms
        for a, b, c in product(E, repeat=3):
            if len({a.id, b.id, c.id}) < 3:
                continue
            if "MW" in atoms and not cv and self.so(a, b) != FALSE and self.vis(b, c) != FALSE:
                s.add(implies(and_(f"so_{a.name}_{b.name}", self.vis(b, c)), self.vis(a, c)))
            if "MR" in atoms and self.vis(a, b) != FALSE and self.so(b, c) != FALSE:
                s.add(implies(and_(self.vis(a, b), f"so_{b.name}_{c.name}"), self.vis(a, c)))
            if cv and self.hb(a, b) != FALSE and self.vis(b, c) != FALSE:
                s.add(implies(and_(self.hb(a, b), self.vis(b, c)), self.vis(a, c)))
        if "WFR" in atoms and not cv:
            s.note("wfr_x_y: x is visible to an so-predecessor of y")
            for a, b, c in product(E, repeat=3):
                if a.id == b.id or b.id == c.id or a.id == c.id:
                    continue
                if self.vis(a, b) == FALSE or self.so(b, c) == FALSE:
                    continue
                name = f"wfr_{a.name}_{c.name}"
                s.declare(name, "Bool")
                s.add(implies(and_(self.vis(a, b), f"so_{b.name}_{c.name}"), name))
            for a, c, d in product(E, repeat=3):
                name = f"wfr_{a.name}_{c.name}"
                if name not in s.declared or a.id == d.id or c.id == d.id:
                    continue
                if self.vis(c, d) == FALSE:
                    continue
                s.add(implies(and_(name, self.vis(c, d)), self.vis(a, d)))

    # -- negated axiom ----------------------------------------------------------

    def spec_negation(self):
        s, k, dt = self.s, self.k, self.lib.datatype
        s.section("spec-negation")
        s.note(f"negation of {self.axiom.title}")
        I = range(1, k + 1)
        done = lambda i: f"done_{i}"  # noqa: E731
        is_m = lambda i, m: eq(f"meth_{i}", num(self.codes[m])) if m in self.codes else FALSE  # noqa: E731
        prod, cons = self.lib.producer, self.lib.consumer
        name = self.axiom.name
        if dt == "exchanger":
            if name == "addrem":
                f = or_(*[and_(done(i1), ne(f"ret_{i1}", num(values.BOT)),
                               *[implies(done(i2), ne(f"arg_{i2}", f"ret_{i1}")) for i2 in I])
                          for i1 in I])
            elif name == "injective":
                f = or_(*[and_(done(i1), done(i2), done(i3), eq(f"ret_{i2}", f"arg_{i1}"),
                               eq(f"ret_{i3}", f"arg_{i1}"))
                          for i1, i2, i3 in product(I, repeat=3) if i2 != i3])
            else:
                f = or_(*[and_(done(i1), done(i2), eq(f"arg_{i1}", f"ret_{i2}"),
                               ne(f"ret_{i1}", f"arg_{i2}"))
                          for i1, i2 in product(I, repeat=2)])
            s.add(f)
            return
        for i, j in product(I, repeat=2):
            if i != j:
                s.define(f"match_{i}_{j}", "Bool",
                         and_(done(i), done(j), is_m(i, prod), is_m(j, cons), eq(f"arg_{i}", f"ret_{j}")))
        match = lambda i, j: FALSE if i == j else f"match_{i}_{j}"  # noqa: E731
        so_i = lambda i, j: and_(done(i), done(j), eq(f"sess_{i}", f"sess_{j}")) if i < j else FALSE  # noqa: E731
        rel = self._hb_gamma(match, so_i) if name != "empty-so" else so_i
        unmatched = lambda i: and_(*[not_(match(i, j)) for j in I])  # noqa: E731
        if name == "addrem":
            f = or_(*[and_(done(i), is_m(i, cons), ne(f"ret_{i}", num(values.EMPTY)),
                           *[not_(match(j, i)) for j in I]) for i in I])
        elif name == "injective":
            f = or_(*[and_(match(a, b), match(a, c)) for a, b, c in product(I, repeat=3) if b != c])
        elif name in ("empty-so", "empty-hb"):
            f = or_(*[and_(done(a), is_m(a, cons), eq(f"ret_{a}", num(values.EMPTY)),
                           done(b), is_m(b, prod), rel(b, a), unmatched(b))
                      for a, b in product(I, repeat=2)])
        elif name == "lifo1":
            f = or_(*[and_(done(a), is_m(a, prod), match(b, c), rel(b, a), rel(a, c), unmatched(a))
                      for a, b, c in product(I, repeat=3)])
        elif name == "lifo2":
            f = or_(*[and_(match(a, d), match(b, c), rel(b, a), rel(c, d), rel(a, c))
                      for a, b, c, d in product(I, repeat=4)])
        elif name == "fifo1":
            f = or_(*[and_(done(a), is_m(a, prod), match(b, c), rel(a, b), unmatched(a))
                      for a, b, c in product(I, repeat=3)])
        else:  # fifo2
            f = or_(*[and_(match(a, d), match(b, c), rel(a, b), rel(c, d))
                      for a, b, c, d in product(I, repeat=4)])
        s.add(f)

    def _hb_gamma(self, match, so_i):
        """Exact (match ∪ so_Γ)+ by repeated squaring; returns a pair -> term function."""
        s, k = self.s, self.k
        I = range(1, k + 1)
        stages = max(0, math.ceil(math.log2(k - 1))) if k > 2 else 0
        s.note(f"hb over invocations: {stages} squaring stage(s)")
        for i, j in product(I, repeat=2):
            s.declare(f"hbg0_{i}_{j}", "Bool")
            s.add(eq(f"hbg0_{i}_{j}", or_(match(i, j), so_i(i, j))))
        for t in range(1, stages + 1):
            for i, j in product(I, repeat=2):
                s.declare(f"hbg{t}_{i}_{j}", "Bool")
                s.add(eq(f"hbg{t}_{i}_{j}", or_(f"hbg{t - 1}_{i}_{j}",
                                                 *[and_(f"hbg{t - 1}_{i}_{l}", f"hbg{t - 1}_{l}_{j}")
                                                   for l in I])))
        return lambda i, j: f"hbg{stages}_{i}_{j}"

    def value_domain(self):
        s, k = self.s, self.k
        s.section("value-domain")
        producer = self.lib.producer
        pc = num(self.codes[producer])
        s.note(f"{producer} arguments are pairwise distinct values in 1..{k}; other arguments are BOT")
        for i in range(1, k + 1):
            p = eq(f"meth_{i}", pc)
            s.add(implies(p, and_(app(">=", f"arg_{i}", "1"), app("<=", f"arg_{i}", num(k)))))
            s.add(implies(not_(p), eq(f"arg_{i}", num(values.BOT))))
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                s.add(implies(and_(eq(f"meth_{i}", pc), eq(f"meth_{j}", pc)), ne(f"arg_{i}", f"arg_{j}")))

    def build(self) -> Encoding:
        # abstract-execution first so that meth/sess/arg/ret are declared before use
        self.abstract_execution()
        self.implementation()
        self.store()
        self.policy_group()
        self.spec_negation()
        self.value_domain()
        s = self.s
        header = [
            f"; bounded check: library {self.lib.name} ({self.lib.datatype}), k = {self.k}",
            f"; policy {self.policy.name}, negated axiom {self.axiom.title}",
            f"; unroll bounds {', '.join(f'{m}={u.bound}' for m, u in self.unrolled.items())}",
            f"; method codes {', '.join(f'{m}={c}' for m, c in self.codes.items())}",
            f"; event slots per invocation J = {self.J}",
            "; locations " + ", ".join(f"{c}={n}" for c, n in enumerate(self.uni.names)),
            "(set-option :produce-models true)",
        ]
        text = "\n".join(header + s.decls + s.body + ["(check-sat)", "(get-model)", ""])
        return Encoding(self.lib, self.k, self.policy, self.axiom, self.uni, self.unrolled,
                        self.J, dict(self.codes), self.events, text, dict(s.counts))


def encode(lib: A.LibraryDef, k: int, policy: Policy, axiom: AxiomId,
           bounds: dict | int = 1) -> Encoding:
    return Encoder(lib, k, policy, axiom, bounds).build()
