"""Consistency policies over store states, and the lattice they form.

A policy is a set of atomic guarantees; it holds on a state when every atom's
predicate holds.  Causal visibility is only offered together with the
session guarantees it is usually bundled with (``cv`` = MW+MR+WFR+CV), and
RYW+CV is causal consistency, so the lattice has 18 points: the 16 subsets of
the four session guarantees, ``cv`` and ``cc``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .store.state import StoreState, bits

SESSION_ATOMS = ("RYW", "MW", "MR", "WFR")
ATOMS = SESSION_ATOMS + ("CV", "CC")
ALIASES = {"RMW": "RYW"}


def _normalize(atoms) -> frozenset:
    atoms = set(atoms)
    if "CV" in atoms:
        atoms |= {"MW", "MR", "WFR"}
    if "CC" in atoms or {"CV", "RYW"} <= atoms:
        atoms = set(ATOMS)
    return frozenset(atoms)


@dataclass(frozen=True)
class Policy:
    atoms: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "atoms", _normalize(self.atoms))

    @classmethod
    def parse(cls, text: str) -> "Policy":
        """Parse ``ec``, ``mw+mr``, ``cc`` ... (case-insensitive, ``rmw`` = ``ryw``)."""
        atoms = set()
        for part in text.replace(" ", "").upper().split("+"):
            part = ALIASES.get(part, part)
            if part in ("EC", ""):
                continue
            if part not in ATOMS:
                raise ValueError(f"unknown consistency policy {part.lower()!r}")
            atoms.add(part)
        return cls(frozenset(atoms))

    @property
    def name(self) -> str:
        if not self.atoms:
            return "EC"
        if "CC" in self.atoms:
            return "CC"
        if "CV" in self.atoms:
            return "CV"
        return "+".join(a for a in ("MW", "MR", "WFR", "RYW") if a in self.atoms)

    def __str__(self):
        return self.name

    def __le__(self, other: "Policy") -> bool:
        return self.atoms <= other.atoms

    def __lt__(self, other: "Policy") -> bool:
        return self.atoms < other.atoms


EC = Policy()
CC = Policy(frozenset({"CC"}))


# -- predicates -------------------------------------------------------------


def _union(masks, sel: int) -> int:
    acc = 0
    for j in bits(sel):
        acc |= masks[j]
    return acc


def _atom_holds(atom: str, chi: StoreState) -> bool:
    vis, so = chi.vis_in, chi.so_in
    n = len(chi.events)
    if atom == "RYW":
        # so(s1,s2) => vis(s1,s2)
        return all(so[i] & ~vis[i] == 0 for i in range(n))
    if atom == "MW":
        # so(s1,s2) & vis(s2,s3) => vis(s1,s3)
        return all(_union(so, vis[i]) & ~vis[i] == 0 for i in range(n))
    if atom == "MR":
        # vis(s1,s2) & so(s2,s3) => vis(s1,s3)
        return all(_union(vis, so[i]) & ~vis[i] == 0 for i in range(n))
    if atom == "WFR":
        # vis(s1,s2) & so(s2,s3) & vis(s3,s4) => vis(s1,s4)
        seen_before = [_union(vis, so[i]) for i in range(n)]
        return all(_union(seen_before, vis[i]) & ~vis[i] == 0 for i in range(n))
    hb = chi.hb_in()
    if atom == "CV":
        # hb(s1,s2) & vis(s2,s3) => vis(s1,s3)
        return all(_union(hb, vis[i]) & ~vis[i] == 0 for i in range(n))
    if atom == "CC":
        # hb(s1,s2) => vis(s1,s2)
        return all(hb[i] & ~vis[i] == 0 for i in range(n))
    raise ValueError(atom)


def holds(p: Policy, chi: StoreState) -> bool:
    """Does every atom of ``p`` hold on ``chi``?  EC holds everywhere."""
    return all(_atom_holds(a, chi) for a in sorted(p.atoms))


def violated_atoms(p: Policy, chi: StoreState) -> list[str]:
    return [a for a in sorted(p.atoms) if not _atom_holds(a, chi)]


def hb(chi: StoreState) -> set[tuple[int, int]]:
    """hb = (vis ∪ so)+ as a set of pairs."""
    return chi.pairs(chi.hb_in())


def minimal_visibility(p: Policy, chi: StoreState, session: int, seed: int = 0) -> int:
    """Least set of events (as a mask) containing ``seed`` that a new event of
    ``session`` may see so that ``p`` still holds after adding it.

    Every policy obligation created by a new event is a visibility edge into
    that event, so the admissible visible sets are exactly the supersets of
    this least fixpoint that are closed under the same rules.
    """
    atoms = p.atoms
    vis, so = chi.vis_in, chi.so_in
    so_new = chi.session_mask(session)
    hb = chi.hb_in() if atoms & {"CV", "CC"} else None
    required = seed
    if "RYW" in atoms:
        required |= so_new
    if "MR" in atoms:
        required |= _union(vis, so_new)
    seen_before = None
    if "WFR" in atoms:
        seen_before = [_union(vis, so[i]) for i in range(len(chi.events))]
    while True:
        nxt = required
        if "MW" in atoms:
            nxt |= _union(so, nxt)
        if seen_before is not None:
            nxt |= _union(seen_before, nxt)
        if "CV" in atoms:
            nxt |= _union(hb, nxt)
        if "CC" in atoms:
            nxt |= _union(hb, nxt | so_new)
        if nxt == required:
            return required
        required = nxt


# -- lattice ----------------------------------------------------------------


@lru_cache(maxsize=None)
def lattice() -> tuple[Policy, ...]:
    """All 18 points, weakest first (by atom count, then name)."""
    pts = {Policy(frozenset(c)) for r in range(len(SESSION_ATOMS) + 1)
           for c in combinations(SESSION_ATOMS, r)}
    pts |= {Policy(frozenset({"CV"})), CC}
    return tuple(sorted(pts, key=lambda q: (len(q.atoms), q.name)))


def next_stronger(p: Policy) -> list[Policy]:
    """Minimal strict upper bounds of ``p`` in the lattice."""
    above = [q for q in lattice() if p < q]
    return [q for q in above if not any(r < q for r in above)]


def minimal(policies) -> list[Policy]:
    ps = list(dict.fromkeys(policies))
    return [p for p in ps if not any(q < p for q in ps)]
