"""Recursive-descent parser and pretty-printer for ``.rdsl`` library sources."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .. import values
from . import ast as A


class DslError(Exception):
    """Syntax or static-check failure, with a source position when known."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + msg)


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+) |
    (?P<nl>\n) |
    (?P<comment>(\#|//)[^\n]*) |
    (?P<num>\d+) |
    (?P<ident>[A-Za-z_][A-Za-z0-9_]*) |
    (?P<op>==|!=|<=|>=|&&|\|\||[-+*/<>=!(){};,.:])
    """,
    re.VERBOSE,
)

KEYWORDS = {"library", "datatype", "global", "init", "table", "row", "method",
            "if", "else", "while", "return", "new", "CAS", "true", "false"}


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Tok(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - start + 1))
    return toks


def is_local(name: str) -> bool:
    return name[0].islower() or name[0] == "_"


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.label = 0
        self.globals: dict[str, A.Global] = {}
        self.tables: dict[str, A.Table] = {}
        self.rows: dict[str, A.StaticRow] = {}

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Tok | None = None):
        tok = tok or self.tok
        raise DslError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Tok:
        tok = self.tok
        if not self.accept(text):
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return tok

    def ident(self) -> Tok:
        tok = self.tok
        if tok.kind != "ident":
            self.error(f"expected identifier, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def next_label(self) -> int:
        self.label += 1
        return self.label

    # -- declarations -------------------------------------------------------

    def library(self) -> A.LibraryDef:
        self.expect("library")
        name = self.ident().text
        self.expect("datatype")
        dt_tok = self.ident()
        datatype = dt_tok.text.lower()
        if datatype not in A.DATATYPES:
            self.error(f"unknown datatype {dt_tok.text!r}", dt_tok)
        methods: dict[str, A.MethodDef] = {}
        while self.tok.kind != "eof":
            head = self.tok
            if self.accept("global"):
                g = self.ident()
                if not g.text[0].isupper():
                    self.error("global names must start with an upper-case letter", g)
                self.declare(g)
                self.expect("init")
                self.globals[g.text] = A.Global(g.text, self.expr(allow_locals=False))
            elif self.accept("table"):
                t = self.ident()
                self.declare(t)
                self.expect("(")
                fields, inits = [], []
                while True:
                    f = self.ident()
                    if f.text in fields:
                        self.error(f"duplicate field {f.text!r}", f)
                    fields.append(f.text)
                    inits.append(self.expr(allow_locals=False) if self.accept("=") else A.Const(0))
                    if not self.accept(","):
                        break
                self.expect(")")
                self.tables[t.text] = A.Table(t.text, tuple(fields), tuple(inits))
            elif self.accept("row"):
                r = self.ident()
                self.declare(r)
                self.expect(":")
                tname = self.ident()
                if tname.text not in self.tables:
                    self.error(f"undeclared table {tname.text!r}", tname)
                self.rows[r.text] = A.StaticRow(r.text, tname.text)
            elif self.accept("method"):
                m = self.ident()
                if m.text in methods:
                    self.error(f"duplicate method {m.text!r}", m)
                self.expect("(")
                arg = self.ident()
                if arg.text != "a":
                    self.error("the method argument must be named 'a'", arg)
                self.expect(")")
                methods[m.text] = A.MethodDef(m.text, self.block(in_loop=False))
            else:
                self.error(f"unexpected {head.text!r} at top level")
            self.accept(";")
        lib = A.LibraryDef(name, datatype, tuple(self.globals.values()),
                           tuple(self.tables.values()), tuple(self.rows.values()), methods)
        check_roles(lib)
        return lib

    def declare(self, tok: Tok):
        if tok.text in self.globals or tok.text in self.tables or tok.text in self.rows:
            self.error(f"duplicate declaration of {tok.text!r}", tok)
        if tok.text in values.RESERVED or tok.text in KEYWORDS:
            self.error(f"{tok.text!r} is reserved", tok)

    # -- statements ---------------------------------------------------------

    def block(self, in_loop: bool) -> tuple:
        self.expect("{")
        out = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                self.error("unterminated block")
            out.append(self.stmt(in_loop))
        return tuple(out)

    def stmt(self, in_loop: bool) -> A.Stmt:
        tok = self.tok
        if self.accept("if"):
            self.expect("(")
            cond = self.bexpr()
            self.expect(")")
            then = self.block(in_loop)
            orelse: tuple = ()
            if self.accept("else"):
                orelse = (self.stmt(in_loop),) if self.tok.text == "if" else self.block(in_loop)
            return A.If(cond, then, orelse)
        if self.accept("while"):
            self.expect("(")
            cond = self.bexpr()
            self.expect(")")
            return A.While(cond, self.block(True))
        if self.accept("return"):
            if self.accept(";"):
                return A.Return(None)
            e = self.expr()
            self.expect(";")
            return A.Return(e)
        # assignment forms
        target = self.ident()
        if self.accept("."):
            loc = self.field_loc(target)
            self.expect("=")
            s = A.Write(loc, self.expr(), self.next_label())
            self.expect(";")
            return s
        if not is_local(target.text):
            if target.text not in self.globals:
                self.error(f"undeclared location {target.text!r}", target)
            self.expect("=")
            s = A.Write(A.GlobalLoc(target.text), self.expr(), self.next_label())
            self.expect(";")
            return s
        if target.text == "a":
            self.error("the argument 'a' cannot be reassigned", target)
        self.expect("=")
        s = self.rhs(target.text, in_loop)
        self.expect(";")
        return s

    def field_loc(self, base: Tok) -> A.FieldLoc:
        if not is_local(base.text):
            self.error(f"field access needs a local holding a row id, not {base.text!r}", base)
        f = self.ident()
        if not any(f.text in t.fields for t in self.tables.values()):
            self.error(f"undeclared field {f.text!r}", f)
        return A.FieldLoc(base.text, f.text)

    def rhs(self, var: str, in_loop: bool) -> A.Stmt:
        tok = self.tok
        if self.accept("new"):
            self.expect("(")
            t = self.ident()
            if t.text not in self.tables:
                self.error(f"undeclared table {t.text!r}", t)
            self.expect(")")
            if in_loop:
                self.error("allocation inside a loop is not supported", tok)
            return A.Alloc(var, t.text, self.next_label())
        if self.accept("CAS"):
            self.expect("(")
            loc = self.location()
            self.expect(",")
            e1 = self.expr()
            self.expect(",")
            e2 = self.expr()
            self.expect(")")
            return A.Cas(var, loc, e1, e2, self.next_label())
        nxt = self.toks[self.i + 1]
        if tok.kind == "ident" and nxt.text in (";", "."):
            if nxt.text == "." :
                self.i += 2
                return A.Read(var, self.field_loc(tok), self.next_label())
            if tok.text in self.globals:
                self.i += 1
                return A.Read(var, A.GlobalLoc(tok.text), self.next_label())
        return A.Assign(var, self.expr())

    def location(self) -> A.Loc:
        base = self.ident()
        if self.accept("."):
            return self.field_loc(base)
        if base.text not in self.globals:
            self.error(f"undeclared location {base.text!r}", base)
        return A.GlobalLoc(base.text)

    # -- expressions --------------------------------------------------------

    def bexpr(self) -> A.BoolExpr:
        left = self.bterm()
        while self.accept("||"):
            left = A.BoolOp("or", left, self.bterm())
        return left

    def bterm(self) -> A.BoolExpr:
        left = self.bfactor()
        while self.accept("&&"):
            left = A.BoolOp("and", left, self.bfactor())
        return left

    def bfactor(self) -> A.BoolExpr:
        if self.accept("!"):
            return A.Not(self.bfactor())
        if self.accept("true"):
            return A.BoolConst(True)
        if self.accept("false"):
            return A.BoolConst(False)
        if self.tok.text == "(":
            # parenthesised boolean or arithmetic; try boolean first
            save = self.i
            self.i += 1
            try:
                b = self.bexpr()
                self.expect(")")
                if self.tok.text not in ("==", "!=", "<", "<=", ">", ">=", "+", "-", "*", "/"):
                    return b
            except DslError:
                pass
            self.i = save
        left = self.expr()
        op = self.tok
        if op.text not in ("==", "!=", "<", "<=", ">", ">="):
            self.error("expected a comparison operator", op)
        self.i += 1
        return A.Cmp(op.text, left, self.expr())

    def expr(self, allow_locals: bool = True) -> A.Expr:
        left = self.term(allow_locals)
        while self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            left = A.BinOp(op, left, self.term(allow_locals))
        return left

    def term(self, allow_locals: bool) -> A.Expr:
        left = self.atom(allow_locals)
        while self.tok.text in ("*", "/"):
            op = self.tok.text
            self.i += 1
            left = A.BinOp(op, left, self.atom(allow_locals))
        return left

    def atom(self, allow_locals: bool) -> A.Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return A.Const(int(tok.text))
        if self.accept("-"):
            return A.BinOp("-", A.Const(0), self.atom(allow_locals))
        if self.accept("("):
            e = self.expr(allow_locals)
            self.expect(")")
            return e
        if tok.kind == "ident":
            self.i += 1
            if tok.text in values.RESERVED or tok.text in self.rows:
                return A.Name(tok.text)
            if tok.text in self.globals:
                self.error(f"location {tok.text!r} cannot appear in an expression; read it into a local", tok)
            if not is_local(tok.text):
                self.error(f"undeclared location {tok.text!r}", tok)
            if not allow_locals:
                self.error(f"local {tok.text!r} not allowed here", tok)
            if tok.text in KEYWORDS:
                self.error(f"{tok.text!r} is reserved", tok)
            return A.Var(tok.text)
        self.error(f"unexpected {tok.text or 'end of input'!r} in expression")


def check_roles(lib: A.LibraryDef):
    for role in A.ROLES[lib.datatype]:
        if role is not None and role not in lib.methods:
            raise DslError(f"a {lib.datatype} library must define method {role!r}")


def parse_library(text: str) -> A.LibraryDef:
    """Parse ``.rdsl`` source into a :class:`LibraryDef`.

    Raises :class:`DslError` with line/column on syntax errors, undeclared
    locations, and reassignment of the argument ``a``.
    """
    return Parser(text).library()


# -- pretty printing --------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def fmt_expr(e: A.Expr, prec: int = 0) -> str:
    if isinstance(e, A.Const):
        return str(e.value)
    if isinstance(e, A.Name):
        return e.name
    if isinstance(e, A.Var):
        return e.name
    p = _PREC[e.op]
    # right operand binds tighter so that a - (b - c) survives the round trip
    s = f"{fmt_expr(e.left, p)} {e.op} {fmt_expr(e.right, p + 1)}"
    return f"({s})" if p < prec else s


def fmt_bool(b: A.BoolExpr, prec: int = 0) -> str:
    if isinstance(b, A.BoolConst):
        return "true" if b.value else "false"
    if isinstance(b, A.Cmp):
        return f"{fmt_expr(b.left)} {b.op} {fmt_expr(b.right)}"
    if isinstance(b, A.Not):
        return f"!({fmt_bool(b.arg)})"
    p = 1 if b.op == "or" else 2
    op = "||" if b.op == "or" else "&&"
    s = f"{fmt_bool(b.left, p)} {op} {fmt_bool(b.right, p + 1)}"
    return f"({s})" if p < prec else s


def fmt_loc(loc: A.Loc) -> str:
    return loc.name if isinstance(loc, A.GlobalLoc) else f"{loc.var}.{loc.field}"


def fmt_stmt(s: A.Stmt, indent: int = 1) -> list[str]:
    pad = "  " * indent
    if isinstance(s, A.Assign):
        return [f"{pad}{s.var} = {fmt_expr(s.expr)};"]
    if isinstance(s, A.Read):
        return [f"{pad}{s.var} = {fmt_loc(s.loc)};"]
    if isinstance(s, A.Write):
        return [f"{pad}{fmt_loc(s.loc)} = {fmt_expr(s.expr)};"]
    if isinstance(s, A.Cas):
        return [f"{pad}{s.var} = CAS({fmt_loc(s.loc)}, {fmt_expr(s.expected)}, {fmt_expr(s.new)});"]
    if isinstance(s, A.Alloc):
        return [f"{pad}{s.var} = new({s.table});"]
    if isinstance(s, A.Return):
        return [f"{pad}return;" if s.expr is None else f"{pad}return {fmt_expr(s.expr)};"]
    if isinstance(s, A.While):
        return [f"{pad}while ({fmt_bool(s.cond)}) {{", *fmt_body(s.body, indent + 1), f"{pad}}}"]
    lines = [f"{pad}if ({fmt_bool(s.cond)}) {{", *fmt_body(s.then, indent + 1)]
    if s.orelse:
        lines += [f"{pad}}} else {{", *fmt_body(s.orelse, indent + 1)]
    return lines + [f"{pad}}}"]


def fmt_body(body, indent):
    return [line for s in body for line in fmt_stmt(s, indent)]


def pretty(lib: A.LibraryDef) -> str:
    out = [f"library {lib.name} datatype {lib.datatype}"]
    # tables and rows first: global initialisers may name rows
    for t in lib.tables:
        fields = ", ".join(f"{f} = {fmt_expr(e)}" for f, e in zip(t.fields, t.inits))
        out.append(f"table {t.name}({fields})")
    out += [f"row {r.name} : {r.table}" for r in lib.rows]
    out += [f"global {g.name} init {fmt_expr(g.init)}" for g in lib.globals]
    for m in lib.methods.values():
        out += ["", f"method {m.name}(a) {{", *fmt_body(m.body, 1), "}"]
    return "\n".join(out) + "\n"
