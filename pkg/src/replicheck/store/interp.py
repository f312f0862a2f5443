"""Direct interpreter of library methods against a replicated store.

This layer works on the syntax tree (not the unrolled form used by the
encoder), so it can serve as an independent oracle.  An invocation's local
state is a pure function of its method, argument, slot and the values its
events returned so far; we re-run the method from the start instead of
cloning coroutines.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .. import values
from ..frontend import ast as A
from ..frontend.universe import POISON, LocationUniverse


class Stuck(Exception):
    """The invocation needs more loop iterations than the unroll bound allows."""


@dataclass(frozen=True)
class Request:
    kind: str  # read | write | cas
    loc: int
    label: str
    value: Optional[int] = None  # written value, or CAS expected value
    new: Optional[int] = None  # CAS new value


@dataclass(frozen=True)
class Finished:
    ret: Optional[int]


@dataclass(frozen=True)
class Blocked:
    """Stuck at the unroll bound: no further events."""


def euclid_div(x: int, y: int) -> int:
    # SMT-LIB integer division (remainder always non-negative); x / 0 = 0 by convention
    if y == 0:
        warnings.warn("division by zero evaluates to 0", RuntimeWarning, stacklevel=2)
        return 0
    q = x // y
    if x - q * y < 0:
        q += 1
    return q


def eval_expr(e, env, uni: LocationUniverse) -> int:
    if isinstance(e, A.Const):
        return e.value
    if isinstance(e, A.Name):
        return uni.consts[e.name]
    if isinstance(e, A.Var):
        return env.get(e.name, 0)
    x, y = eval_expr(e.left, env, uni), eval_expr(e.right, env, uni)
    if e.op == "+":
        return x + y
    if e.op == "-":
        return x - y
    if e.op == "*":
        return x * y
    return euclid_div(x, y)


_CMP = {"<": int.__lt__, "<=": int.__le__, "==": int.__eq__, "!=": int.__ne__,
        ">": int.__gt__, ">=": int.__ge__}


def eval_bool(b, env, uni) -> bool:
    if isinstance(b, A.BoolConst):
        return b.value
    if isinstance(b, A.Cmp):
        return _CMP[b.op](eval_expr(b.left, env, uni), eval_expr(b.right, env, uni))
    if isinstance(b, A.Not):
        return not eval_bool(b.arg, env, uni)
    if b.op == "and":
        return eval_bool(b.left, env, uni) and eval_bool(b.right, env, uni)
    return eval_bool(b.left, env, uni) or eval_bool(b.right, env, uni)


def resolve(loc, env, uni) -> int:
    if isinstance(loc, A.GlobalLoc):
        return uni.globals[loc.name]
    code = uni.field_location(env.get(loc.var, 0), loc.field)
    if code == POISON:
        warnings.warn(f"{loc.var}.{loc.field} accessed through a value that is not a row; "
                      "using the poison location", RuntimeWarning, stacklevel=2)
    return code


class _Return(Exception):
    def __init__(self, value):
        self.value = value


def _label(label: int, copy: tuple) -> str:
    tail = [str(c) for c in copy if c != 1]
    return ".".join([str(label), *tail]) if tail else str(label)


def _run(body, env, ctx, copy):
    """Generator: yields Requests, receives event results, raises _Return/Stuck."""
    uni, slot, bound = ctx
    for s in body:
        if isinstance(s, A.Assign):
            env[s.var] = eval_expr(s.expr, env, uni)
        elif isinstance(s, A.Alloc):
            env[s.var] = uni.row_id(s.label, slot)
        elif isinstance(s, A.Read):
            env[s.var] = yield Request("read", resolve(s.loc, env, uni), _label(s.label, copy))
        elif isinstance(s, A.Write):
            yield Request("write", resolve(s.loc, env, uni), _label(s.label, copy),
                          eval_expr(s.expr, env, uni))
        elif isinstance(s, A.Cas):
            loc = resolve(s.loc, env, uni)
            e1, e2 = eval_expr(s.expected, env, uni), eval_expr(s.new, env, uni)
            got = yield Request("cas", loc, _label(s.label, copy), e1, e2)
            env[s.var] = values.TRUE if got == e1 else values.FALSE
        elif isinstance(s, A.Return):
            raise _Return(None if s.expr is None else eval_expr(s.expr, env, uni))
        elif isinstance(s, A.If):
            branch = s.then if eval_bool(s.cond, env, uni) else s.orelse
            yield from _run(branch, env, ctx, copy)
        elif isinstance(s, A.While):
            it = 0
            while eval_bool(s.cond, env, uni):
                it += 1
                if it > bound:
                    raise Stuck()
                yield from _run(s.body, env, ctx, copy + (it,))
        else:
            raise TypeError(s)


class Program:
    """A parsed library bound to a location universe and per-method unroll bounds."""

    def __init__(self, lib: A.LibraryDef, uni: LocationUniverse, bounds: dict[str, int] | int = 1):
        self.lib, self.uni = lib, uni
        self.bounds = {m: (bounds if isinstance(bounds, int) else bounds.get(m, 1)) for m in lib.methods}
        self.next_step = lru_cache(maxsize=200_000)(self._next_step)

    def _next_step(self, method: str, arg: int, slot: int, results: tuple):
        """What the invocation does after its events returned ``results``."""
        env = {"a": arg}
        gen = _run(self.lib.methods[method].body, env, (self.uni, slot, self.bounds[method]), ())
        try:
            req = gen.send(None)
            for r in results:
                req = gen.send(r)
            return req
        except _Return as r:
            return Finished(r.value)
        except StopIteration:
            return Finished(None)
        except Stuck:
            return Blocked()
