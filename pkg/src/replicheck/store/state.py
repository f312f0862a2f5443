"""Replicated-store events and states.

Relations are kept as per-event predecessor bitmasks: bit ``j`` of
``vis_in[i]`` is set iff ``vis(j, i)``.  Event ids are positions in
``events``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

INIT = -1  # rf source of a read that sees no write to its location


@dataclass(frozen=True)
class Event:
    id: int
    session: int
    kind: str  # "R" | "W" | "U"
    loc: int
    rval: Optional[int] = None
    wval: Optional[int] = None
    slot: int = 0
    label: str = ""

    @property
    def reads(self) -> bool:
        return self.kind != "W"

    @property
    def writes(self) -> bool:
        return self.kind != "R"


def bits(mask: int):
    """Indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class StoreState:
    events: tuple = ()
    vis_in: tuple = ()
    so_in: tuple = ()
    ar: tuple = ()  # sorted ((loc, (id, id, ...)), ...), each order oldest-first
    rf: tuple = ()  # per event: source id, INIT, or None for plain writes
    _hb: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.events)

    @classmethod
    def build(cls, events, vis=(), so=(), ar=None, rf=None) -> "StoreState":
        """Convenience constructor from explicit pair lists (used by tests)."""
        n = len(events)
        vis_in, so_in = [0] * n, [0] * n
        for a, b in vis:
            vis_in[b] |= 1 << a
        for a, b in so:
            so_in[b] |= 1 << a
        ar = ar or {}
        rf = rf or {}
        return cls(tuple(events), tuple(vis_in), tuple(so_in),
                   tuple(sorted((loc, tuple(order)) for loc, order in ar.items())),
                   tuple(rf.get(e.id) for e in events))

    # -- derived views ------------------------------------------------------

    def ar_order(self, loc: int) -> tuple:
        for l, order in self.ar:
            if l == loc:
                return order
        return ()

    def ar_pairs(self) -> set[tuple[int, int]]:
        out = set()
        for _, order in self.ar:
            for i, a in enumerate(order):
                for b in order[i + 1:]:
                    out.add((a, b))
        return out

    def pairs(self, rel: tuple) -> set[tuple[int, int]]:
        return {(a, b) for b, m in enumerate(rel) for a in bits(m)}

    def session_mask(self, session: int) -> int:
        m = 0
        for e in self.events:
            if e.session == session:
                m |= 1 << e.id
        return m

    def hb_in(self) -> tuple:
        """Predecessor masks of hb = (vis ∪ so)+."""
        if self._hb is not None:
            return self._hb
        n = len(self.events)
        direct = [self.vis_in[i] | self.so_in[i] for i in range(n)]
        hb = list(direct)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = hb[i]
                for j in bits(hb[i]):
                    acc |= hb[j]
                if acc != hb[i]:
                    hb[i], changed = acc, True
        result = tuple(hb)
        object.__setattr__(self, "_hb", result)
        return result

    def writes_to(self, loc: int) -> list[int]:
        return [e.id for e in self.events if e.writes and e.loc == loc]

    def rf_of(self, eid: int) -> Optional[int]:
        """The write/update event a read or update reads from, or None.

        Computed from vis and ar: the ar-latest visible write to the same
        location.  None when no such write is visible (the read observed
        the location's initial value) or when ``eid`` is a plain write.
        """
        e = self.events[eid]
        if not e.reads:
            return None
        order = self.ar_order(e.loc)
        best = None
        for w in order:
            if self.vis_in[eid] >> w & 1 and w != eid:
                best = w
        return best

    def with_event(self, ev: Event, vis_mask: int, ar_index: Optional[int], rf) -> "StoreState":
        so_mask = self.session_mask(ev.session)
        ar = self.ar
        if ev.writes:
            order = list(self.ar_order(ev.loc))
            order.insert(ar_index, ev.id)
            ar = tuple(sorted([(l, o) for l, o in self.ar if l != ev.loc] + [(ev.loc, tuple(order))]))
        return replace(self, events=self.events + (ev,), vis_in=self.vis_in + (vis_mask,),
                       so_in=self.so_in + (so_mask,), ar=ar, rf=self.rf + (rf,), _hb=None)


def check_invariants(chi: StoreState) -> list[str]:
    """Return the violated store invariants (empty when the state is well formed)."""
    problems = []
    n = len(chi.events)
    for i in range(n):
        if chi.vis_in[i] >> i & 1:
            problems.append(f"vis not irreflexive at {i}")
        for j in bits(chi.vis_in[i]):
            if chi.vis_in[j] >> i & 1:
                problems.append(f"vis not anti-symmetric on ({j},{i})")
    for loc, order in chi.ar:
        if sorted(order) != sorted(chi.writes_to(loc)):
            problems.append(f"ar not total on location {loc}")
    for i in range(n):
        expected = 0
        for e in chi.events[:i]:
            if e.session == chi.events[i].session:
                expected |= 1 << e.id
        if chi.so_in[i] != expected:
            problems.append(f"so not the session order at {i}")
    hb = chi.hb_in()
    for i in range(n):
        if hb[i] >> i & 1:
            problems.append(f"hb cycle through {i}")
    for a, b in chi.ar_pairs():
        if hb[a] >> b & 1:
            problems.append(f"causal arbitration: hb({b},{a}) but ar({a},{b})")
    return problems
