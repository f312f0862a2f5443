"""Static enumeration of replicated locations and row ids for a bound ``k``."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import values
from . import ast as A

POISON = 0  # location code reached by dereferencing something that is not a row id


@dataclass
class LocationUniverse:
    k: int
    names: list[str]  # loc code -> printable name; code 0 is the poison location
    initval: dict[int, int]
    globals: dict[str, int]
    row_ids: dict[tuple, int]  # ("static", name) or ("site", label, slot) -> row id
    row_names: dict[int, str]
    row_table: dict[int, str]
    field_locs: dict[tuple[int, str], int] = field(default_factory=dict)
    consts: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        # the poison location is bookkeeping, not a declared location
        return len(self.names) - 1

    def row_id(self, site: int, slot: int) -> int:
        return self.row_ids[("site", site, slot)]

    def field_location(self, row: int, fname: str) -> int:
        return self.field_locs.get((row, fname), POISON)

    def rows_with_field(self, fname: str) -> list[tuple[int, int]]:
        return [(r, loc) for (r, f), loc in self.field_locs.items() if f == fname]

    def const(self, name: str) -> int:
        return self.consts[name]

    def show_value(self, v: int) -> str:
        return self.row_names.get(v, values.show(v))


def alloc_sites(lib: A.LibraryDef) -> list[A.Alloc]:
    sites = [s for m in lib.methods.values() for s in A.walk(m.body) if isinstance(s, A.Alloc)]
    return sorted(sites, key=lambda s: s.label)


def const_value(e: A.Expr, consts: dict[str, int]) -> int:
    if isinstance(e, A.Const):
        return e.value
    if isinstance(e, A.Name):
        return consts[e.name]
    raise ValueError(f"initial values must be constants, got {e!r}")


def location_universe(lib: A.LibraryDef, k: int) -> LocationUniverse:
    """One location per global, per static-row field, and per
    (allocation site, invocation slot, field); row ids start at ``ROW_BASE``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    consts = dict(values.RESERVED)
    row_ids: dict[tuple, int] = {}
    row_names: dict[int, str] = {}
    row_table: dict[int, str] = {}
    nxt = values.ROW_BASE
    for r in lib.rows:
        row_ids[("static", r.name)] = nxt
        row_names[nxt] = r.name
        row_table[nxt] = r.table
        consts[r.name] = nxt
        nxt += 1
    sites = alloc_sites(lib)
    for s in sites:
        for slot in range(1, k + 1):
            row_ids[("site", s.label, slot)] = nxt
            row_names[nxt] = f"L{slot}" if len(sites) == 1 else f"L{s.label}_{slot}"
            row_table[nxt] = s.table
            nxt += 1

    names, initval, globs = ["POISON"], {POISON: 0}, {}
    for g in lib.globals:
        code = len(names)
        names.append(g.name)
        globs[g.name] = code
        initval[code] = const_value(g.init, consts)
    field_locs = {}
    for row, tname in row_table.items():
        t = lib.table(tname)
        for fname, init in zip(t.fields, t.inits):
            code = len(names)
            names.append(f"{row_names[row]}.{fname}")
            field_locs[(row, fname)] = code
            initval[code] = const_value(init, consts)
    return LocationUniverse(k, names, initval, globs, row_ids, row_names, row_table,
                            field_locs, consts)
