"""Tiny SMT-LIB2 term builder: terms are strings, with constant folding."""

from __future__ import annotations

TRUE, FALSE = "true", "false"


def num(v: int) -> str:
    return str(v) if v >= 0 else f"(- {-v})"


def and_(*xs) -> str:
    xs = [x for x in xs if x != TRUE]
    if FALSE in xs:
        return FALSE
    xs = list(dict.fromkeys(xs))
    if not xs:
        return TRUE
    return xs[0] if len(xs) == 1 else f"(and {' '.join(xs)})"


def or_(*xs) -> str:
    xs = [x for x in xs if x != FALSE]
    if TRUE in xs:
        return TRUE
    xs = list(dict.fromkeys(xs))
    if not xs:
        return FALSE
    return xs[0] if len(xs) == 1 else f"(or {' '.join(xs)})"


def not_(x: str) -> str:
    if x == TRUE:
        return FALSE
    if x == FALSE:
        return TRUE
    if x.startswith("(not ") and x.endswith(")"):
        inner = x[5:-1]
        if _single_term(inner):
            return inner
    return f"(not {x})"


def _single_term(s: str) -> bool:
    if not s.startswith("("):
        return " " not in s
    depth = 0
    for i, ch in enumerate(s):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0:
            return i == len(s) - 1
    return False


def implies(a: str, b: str) -> str:
    if a == FALSE or b == TRUE:
        return TRUE
    if a == TRUE:
        return b
    if b == FALSE:
        return not_(a)
    return f"(=> {a} {b})"


def eq(a: str, b: str) -> str:
    if a == b:
        return TRUE
    if _is_num(a) and _is_num(b):
        return FALSE
    return f"(= {a} {b})"


def _is_num(s: str) -> bool:
    return s.lstrip("-").isdigit() or (s.startswith("(- ") and s[3:-1].isdigit())


def ne(a: str, b: str) -> str:
    return not_(eq(a, b))


def ite(c: str, a: str, b: str) -> str:
    if c == TRUE or a == b:
        return a
    if c == FALSE:
        return b
    return f"(ite {c} {a} {b})"


def app(op: str, *xs) -> str:
    return f"({op} {' '.join(xs)})"
