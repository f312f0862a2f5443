"""Loop unrolling, SSA renaming and per-statement guard construction.

The result is a loop-free list of atoms.  Each atom carries the path condition
(guard) under which it executes, written over SSA versions of the locals.
Version 0 of a local is its initial value (0); version 0 of ``a`` is the
argument.  Branch joins introduce ``assign`` atoms whose right-hand side is an
:class:`Ite` over the incoming versions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Union

from . import ast as A

TRUE = A.BoolConst(True)
FALSE = A.BoolConst(False)


@dataclass(frozen=True)
class SVar:
    name: str
    version: int

    def __str__(self):
        return f"{self.name}{self.version}"


@dataclass(frozen=True)
class Ite:
    cond: A.BoolExpr
    then: "SExpr"
    orelse: "SExpr"


SExpr = Union[A.Const, A.Name, SVar, A.BinOp, Ite]


@dataclass(frozen=True)
class SFieldLoc:
    var: SExpr
    field: str


SLoc = Union[A.GlobalLoc, SFieldLoc]

EVENT_KINDS = ("read", "write", "cas")


@dataclass(frozen=True)
class Atom:
    index: int
    kind: str  # read | write | cas | assign | alloc | return
    guard: A.BoolExpr
    label: int = 0
    copy: tuple = ()
    target: Optional[SVar] = None
    loc: Optional[SLoc] = None
    expr: Optional[SExpr] = None  # written value / assigned value / CAS expected / returned value
    expr2: Optional[SExpr] = None  # CAS new value
    table: Optional[str] = None

    @property
    def is_event(self) -> bool:
        return self.kind in EVENT_KINDS

    @property
    def label_str(self) -> str:
        if not self.label:
            return "-"
        tail = [str(c) for c in self.copy if c != 1]
        return ".".join([str(self.label), *tail]) if tail else str(self.label)


@dataclass
class UnrolledMethod:
    name: str
    bound: int
    atoms: list[Atom]
    stuck: list[A.BoolExpr] = field(default_factory=list)

    @property
    def events(self) -> list[Atom]:
        return [a for a in self.atoms if a.is_event]

    @property
    def returns(self) -> list[Atom]:
        return [a for a in self.atoms if a.kind == "return"]

    def completion_guard(self) -> A.BoolExpr:
        g = FALSE
        for r in self.returns:
            g = disj(g, r.guard)
        return g


# -- boolean smart constructors --------------------------------------------


def conj(a, b):
    if a == FALSE or b == FALSE:
        return FALSE
    if a == TRUE:
        return b
    if b == TRUE:
        return a
    return A.BoolOp("and", a, b)


def disj(a, b):
    if a == TRUE or b == TRUE:
        return TRUE
    if a == FALSE:
        return b
    if b == FALSE:
        return a
    return A.BoolOp("or", a, b)


def neg(a):
    if isinstance(a, A.BoolConst):
        return A.BoolConst(not a.value)
    if isinstance(a, A.Not):
        return a.arg
    return A.Not(a)


# -- substitution -----------------------------------------------------------


def subst(e, env):
    if isinstance(e, A.Var):
        return env.get(e.name, A.Const(0))
    if isinstance(e, A.BinOp):
        return A.BinOp(e.op, subst(e.left, env), subst(e.right, env))
    if isinstance(e, A.Cmp):
        return A.Cmp(e.op, subst(e.left, env), subst(e.right, env))
    if isinstance(e, A.BoolOp):
        return A.BoolOp(e.op, subst(e.left, env), subst(e.right, env))
    if isinstance(e, A.Not):
        return A.Not(subst(e.arg, env))
    return e  # Const, Name, BoolConst


def subst_loc(loc, env):
    if isinstance(loc, A.GlobalLoc):
        return loc
    return SFieldLoc(env.get(loc.var, A.Const(0)), loc.field)


def svars(e) -> set[SVar]:
    """SSA variables referenced by an expression, guard or location."""
    if isinstance(e, SVar):
        return {e}
    if isinstance(e, (A.BinOp, A.Cmp, A.BoolOp)):
        return svars(e.left) | svars(e.right)
    if isinstance(e, A.Not):
        return svars(e.arg)
    if isinstance(e, Ite):
        return svars(e.cond) | svars(e.then) | svars(e.orelse)
    if isinstance(e, SFieldLoc):
        return svars(e.var)
    return set()


class _Unroller:
    def __init__(self, bound: int):
        self.bound = bound
        self.atoms: list[Atom] = []
        self.versions: dict[str, int] = defaultdict(int)
        self.stuck: list[A.BoolExpr] = []

    def fresh(self, name: str) -> SVar:
        self.versions[name] += 1
        return SVar(name, self.versions[name])

    def emit(self, **kw) -> Atom:
        atom = Atom(index=len(self.atoms), **kw)
        self.atoms.append(atom)
        return atom

    def merge(self, g1, env1, g2, env2):
        if g1 == FALSE:
            return g2, env2
        if g2 == FALSE:
            return g1, env1
        g = disj(g1, g2)
        env = {}
        for name in sorted(set(env1) | set(env2)):
            v1, v2 = env1.get(name, A.Const(0)), env2.get(name, A.Const(0))
            if v1 == v2:
                env[name] = v1
            else:
                phi = self.fresh(name)
                self.emit(kind="assign", guard=g, target=phi, expr=Ite(g1, v1, v2))
                env[name] = phi
        return g, env

    def body(self, stmts, guard, env, copy):
        for s in stmts:
            if guard == FALSE:
                break
            guard, env = self.stmt(s, guard, env, copy)
        return guard, env

    def stmt(self, s, guard, env, copy):
        if isinstance(s, A.Assign):
            rhs = subst(s.expr, env)
            v = self.fresh(s.var)
            self.emit(kind="assign", guard=guard, target=v, expr=rhs)
            return guard, {**env, s.var: v}
        if isinstance(s, A.Alloc):
            v = self.fresh(s.var)
            self.emit(kind="alloc", guard=guard, label=s.label, copy=copy, target=v, table=s.table)
            return guard, {**env, s.var: v}
        if isinstance(s, A.Read):
            loc = subst_loc(s.loc, env)
            v = self.fresh(s.var)
            self.emit(kind="read", guard=guard, label=s.label, copy=copy, target=v, loc=loc)
            return guard, {**env, s.var: v}
        if isinstance(s, A.Write):
            self.emit(kind="write", guard=guard, label=s.label, copy=copy,
                      loc=subst_loc(s.loc, env), expr=subst(s.expr, env))
            return guard, env
        if isinstance(s, A.Cas):
            loc, e1, e2 = subst_loc(s.loc, env), subst(s.expected, env), subst(s.new, env)
            v = self.fresh(s.var)
            self.emit(kind="cas", guard=guard, label=s.label, copy=copy, target=v, loc=loc,
                      expr=e1, expr2=e2)
            return guard, {**env, s.var: v}
        if isinstance(s, A.Return):
            self.emit(kind="return", guard=guard,
                      expr=None if s.expr is None else subst(s.expr, env))
            return FALSE, env
        if isinstance(s, A.If):
            cond = subst(s.cond, env)
            g1, env1 = self.body(s.then, conj(guard, cond), env, copy)
            g2, env2 = self.body(s.orelse, conj(guard, neg(cond)), env, copy)
            return self.merge(g1, env1, g2, env2)
        if isinstance(s, A.While):
            return self.loop(s, guard, env, self.bound, copy)
        raise TypeError(s)

    def loop(self, s, guard, env, remaining, copy):
        if guard == FALSE:
            return FALSE, env
        cond = subst(s.cond, env)
        exit_guard = conj(guard, neg(cond))
        if remaining == 0:
            stuck = conj(guard, cond)
            if stuck != FALSE:
                self.stuck.append(stuck)
            return exit_guard, env
        it = self.bound - remaining + 1
        g_body, env_body = self.body(s.body, conj(guard, cond), env, copy + (it,))
        g_rest, env_rest = self.loop(s, g_body, env_body, remaining - 1, copy)
        return self.merge(exit_guard, env, g_rest, env_rest)


def unroll(method: A.MethodDef, bound: int = 1) -> UnrolledMethod:
    """Replace every ``while`` by ``bound`` nested guarded copies.

    A path that would need another iteration after the last copy is recorded
    in ``stuck`` and produces no further atoms; the invocation never completes
    along it.  Falling off the end of the body is an implicit ``return;``.
    """
    if bound < 1:
        raise ValueError("unroll bound must be >= 1")
    u = _Unroller(bound)
    env = {"a": SVar("a", 0)}
    g, _ = u.body(method.body, TRUE, env, ())
    if g != FALSE:
        u.emit(kind="return", guard=g, expr=None)
    return UnrolledMethod(method.name, bound, u.atoms, u.stuck)


def unroll_library(lib: A.LibraryDef, bounds: dict[str, int] | int = 1) -> dict[str, UnrolledMethod]:
    out = {}
    for name, m in lib.methods.items():
        b = bounds if isinstance(bounds, int) else bounds.get(name, 1)
        out[name] = unroll(m, b)
    return out
