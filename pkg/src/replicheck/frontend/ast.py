"""Syntax tree of the library DSL.

Locals start with a lower-case letter, replicated locations (globals, static
rows) and reserved constants start with an upper-case letter.  Statements that
touch a replicated location, plus allocations, carry a source label assigned in
textual order by the parser.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


# -- expressions ------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Name:
    """Symbolic constant: NULL, EMPTY, BOT, TRUE, FALSE or a static row."""

    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Name, Var, BinOp]


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # one of < <= == != > >=
    left: Expr
    right: Expr


@dataclass(frozen=True)
class BoolOp:
    op: str  # "and" | "or"
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Not:
    arg: "BoolExpr"


BoolExpr = Union[BoolConst, Cmp, BoolOp, Not]


# -- locations --------------------------------------------------------------


@dataclass(frozen=True)
class GlobalLoc:
    name: str


@dataclass(frozen=True)
class FieldLoc:
    """``var.Field``: the field of the row whose id the local holds."""

    var: str
    field: str


Loc = Union[GlobalLoc, FieldLoc]


# -- statements -------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class Read:
    var: str
    loc: Loc
    label: int = 0


@dataclass(frozen=True)
class Write:
    loc: Loc
    expr: Expr
    label: int = 0


@dataclass(frozen=True)
class Cas:
    var: str
    loc: Loc
    expected: Expr
    new: Expr
    label: int = 0


@dataclass(frozen=True)
class Alloc:
    var: str
    table: str
    label: int = 0


@dataclass(frozen=True)
class If:
    cond: BoolExpr
    then: tuple
    orelse: tuple = ()


@dataclass(frozen=True)
class While:
    cond: BoolExpr
    body: tuple


@dataclass(frozen=True)
class Return:
    expr: Optional[Expr] = None


Stmt = Union[Assign, Read, Write, Cas, Alloc, If, While, Return]
EVENT_STMTS = (Read, Write, Cas)


# -- declarations -----------------------------------------------------------


@dataclass(frozen=True)
class Table:
    name: str
    fields: tuple[str, ...]
    inits: tuple[Expr, ...]  # initial value per field


@dataclass(frozen=True)
class Global:
    name: str
    init: Expr


@dataclass(frozen=True)
class StaticRow:
    name: str
    table: str


@dataclass(frozen=True)
class MethodDef:
    name: str
    body: tuple


DATATYPES = ("stack", "queue", "exchanger")

# producer / consumer method names per datatype
ROLES = {
    "stack": ("push", "pop"),
    "queue": ("enqueue", "dequeue"),
    "exchanger": ("exchange", None),
}


@dataclass(frozen=True)
class LibraryDef:
    name: str
    datatype: str
    globals: tuple[Global, ...] = ()
    tables: tuple[Table, ...] = ()
    rows: tuple[StaticRow, ...] = ()
    methods: dict = field(default_factory=dict, compare=True, hash=False)

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)

    @property
    def producer(self) -> str:
        return ROLES[self.datatype][0]

    @property
    def consumer(self) -> Optional[str]:
        return ROLES[self.datatype][1]

    def method_names(self) -> list[str]:
        return list(self.methods)


def walk(stmts):
    """Yield every statement of a body, depth first, in textual order."""
    for s in stmts:
        yield s
        if isinstance(s, If):
            yield from walk(s.then)
            yield from walk(s.orelse)
        elif isinstance(s, While):
            yield from walk(s.body)
