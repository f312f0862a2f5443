"""Histories, configurations and exhaustive exploration of executions.

Exploration picks, at every step, a session and the visible set / rf source /
arbitration slot of its next event.  In the default (``minimal``) mode a read
first fixes the write it reads from and then sees only what the policy forces
on top of that write; writes see only what is forced.  Seeing less never
disables a later step (every policy obligation and the causal-arbitration
constraint only grow with vis), so this explores the same set of observable
outcomes as trying every visible set, which ``exhaustive`` mode does for
cross-checking on tiny inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional

from .. import policies as P
from .. import values
from .interp import Blocked, Finished, Program, Request
from .state import INIT, Event, StoreState, bits


@dataclass(frozen=True)
class Invocation:
    slot: int  # 1-based position in the history (session-major)
    session: int
    method: str
    arg: int


@dataclass(frozen=True)
class History:
    sessions: tuple  # tuple of tuples of Invocation

    @classmethod
    def of(cls, sessions) -> "History":
        """Build from ``[[(method, arg), ...], ...]``; slots numbered session-major."""
        out, slot = [], 0
        for s, invs in enumerate(sessions, start=1):
            row = []
            for m, a in invs:
                slot += 1
                row.append(Invocation(slot, s, m, a))
            out.append(tuple(row))
        return cls(tuple(out))

    @property
    def invocations(self) -> list[Invocation]:
        return [inv for row in self.sessions for inv in row]

    def __len__(self):
        return sum(len(r) for r in self.sessions)

    def __str__(self):
        return " | ".join(
            f"s{i}: " + "; ".join(v.method if v.arg == values.BOT else f"{v.method}({v.arg})" for v in row)
            for i, row in enumerate(self.sessions, start=1))


@dataclass(frozen=True)
class Step:
    """One store step: session, visible set (event ids), arbitration index."""

    session: int
    visible: tuple
    ar_index: Optional[int] = None


@dataclass(frozen=True)
class Config:
    chi: StoreState
    progress: tuple  # per session: (index of current invocation, results so far)
    rets: tuple = ()  # (slot, ret) for finished invocations, in completion order
    blocked: tuple = ()  # slots stuck at the unroll bound
    consumed: tuple = ()  # sorted (loc, source) pairs already read by an update


@dataclass
class Execution:
    history: History
    chi: StoreState
    rets: dict  # slot -> return value of completed invocations
    blocked: frozenset
    steps: list

    @property
    def complete(self) -> set:
        return set(self.rets)


class StepError(Exception):
    pass


class Machine:
    def __init__(self, program: Program, history: History, policy: "P.Policy"):
        self.prog, self.history, self.policy = program, history, policy
        self.uni = program.uni

    def initial(self) -> Config:
        return Config(StoreState(), tuple((0, ()) for _ in self.history.sessions))

    # -- session bookkeeping ------------------------------------------------

    def current(self, cfg: Config, s: int) -> Optional[Invocation]:
        pos, _ = cfg.progress[s - 1]
        row = self.history.sessions[s - 1]
        if pos >= len(row) or row[pos].slot in cfg.blocked:
            return None
        return row[pos]

    def settle(self, cfg: Config) -> Optional[Config]:
        """Retire finished / blocked invocations.  None if a blocked
        invocation is not the last of its session (not a legal run)."""
        progress, rets, blocked = list(cfg.progress), list(cfg.rets), set(cfg.blocked)
        for s in range(1, len(progress) + 1):
            while True:
                pos, res = progress[s - 1]
                row = self.history.sessions[s - 1]
                if pos >= len(row) or row[pos].slot in blocked:
                    break
                inv = row[pos]
                nxt = self.prog.next_step(inv.method, inv.arg, inv.slot, res)
                if isinstance(nxt, Finished):
                    rets.append((inv.slot, nxt.ret))
                    progress[s - 1] = (pos + 1, ())
                elif isinstance(nxt, Blocked):
                    if pos != len(row) - 1:
                        return None
                    blocked.add(inv.slot)
                else:
                    break
        return Config(cfg.chi, tuple(progress), tuple(rets), tuple(sorted(blocked)), cfg.consumed)

    def pending(self, cfg: Config, s: int) -> Optional[tuple[Invocation, Request]]:
        inv = self.current(cfg, s)
        if inv is None:
            return None
        return inv, self.prog.next_step(inv.method, inv.arg, inv.slot, cfg.progress[s - 1][1])

    def terminal(self, cfg: Config) -> bool:
        return all(self.current(cfg, s) is None for s in range(1, len(cfg.progress) + 1))

    # -- single step --------------------------------------------------------

    def _apply(self, cfg, s, inv, req, vis_mask, ar_index, result):
        chi = cfg.chi
        eid = len(chi.events)
        rf, rval, wval, kind = None, None, None, "W"
        consumed = cfg.consumed
        if req.kind in ("read", "cas"):
            src = self._source(chi, req.loc, vis_mask)
            rf = INIT if src is None else src
            rval = self.uni.initval[req.loc] if src is None else chi.events[src].wval
            kind = "R"
            if req.kind == "cas" and rval == req.value:
                kind, wval = "U", req.new
                if (req.loc, rf) in consumed:
                    raise StepError("two updates read from the same write")
                consumed = tuple(sorted(consumed + ((req.loc, rf),)))
        else:
            wval = req.value
        ev = Event(eid, s, kind, req.loc, rval, wval, inv.slot, req.label)
        if ev.writes:
            if ar_index is None or not 0 <= ar_index <= len(chi.ar_order(req.loc)):
                raise StepError("write without a valid arbitration index")
        else:
            ar_index = None
        chi2 = chi.with_event(ev, vis_mask, ar_index, rf if ev.reads else None)
        pos, res = cfg.progress[s - 1]
        progress = list(cfg.progress)
        progress[s - 1] = (pos, res + (rval if req.kind != "write" else None,))
        return Config(chi2, tuple(progress), cfg.rets, cfg.blocked, consumed)

    def _source(self, chi: StoreState, loc: int, vis_mask: int) -> Optional[int]:
        best = None
        for w in chi.ar_order(loc):
            if vis_mask >> w & 1:
                best = w
        return best

    def ar_floor(self, chi: StoreState, loc: int, session: int, vis_mask: int) -> int:
        """Lowest arbitration index compatible with causal arbitration."""
        hb = chi.hb_in()
        preds = vis_mask | chi.session_mask(session)
        for j in bits(preds):
            preds |= hb[j]
        floor = 0
        for i, w in enumerate(chi.ar_order(loc)):
            if preds >> w & 1:
                floor = i + 1
        return floor

    def step(self, cfg: Config, step: Step) -> Config:
        """Apply an explicit step, checking every store rule (used for replay)."""
        s = step.session
        got = self.pending(cfg, s)
        if got is None:
            raise StepError(f"session {s} has nothing left to run")
        inv, req = got
        chi = cfg.chi
        vis_mask = 0
        for v in step.visible:
            if not 0 <= v < len(chi.events):
                raise StepError(f"visible event {v} does not exist yet")
            vis_mask |= 1 << v
        eid = len(chi.events)
        ar_index = step.ar_index
        if req.kind == "write" or req.kind == "cas":
            if ar_index is not None and ar_index < self.ar_floor(chi, req.loc, s, vis_mask):
                raise StepError("arbitration contradicts happens-before")
        nxt = self._apply(cfg, s, inv, req, vis_mask, ar_index, None)
        if not P.holds(self.policy, nxt.chi):
            raise StepError(f"step violates policy {self.policy}")
        settled = self.settle(nxt)
        if settled is None:
            raise StepError("an invocation stuck at the unroll bound is followed by another")
        return settled

    # -- successor enumeration ---------------------------------------------

    def successors(self, cfg: Config, exhaustive: bool = False):
        for s in range(1, len(cfg.progress) + 1):
            got = self.pending(cfg, s)
            if got is None:
                continue
            inv, req = got
            for vis_mask, ar_index in self._choices(cfg, s, req, exhaustive):
                try:
                    nxt = self._apply(cfg, s, inv, req, vis_mask, ar_index, None)
                except StepError:
                    continue
                if exhaustive and not P.holds(self.policy, nxt.chi):
                    continue
                settled = self.settle(nxt)
                if settled is not None:
                    yield Step(s, tuple(bits(vis_mask)), ar_index), settled

    def _choices(self, cfg, s, req, exhaustive):
        chi = cfg.chi
        if exhaustive:
            masks = range(1 << len(chi.events))
        elif req.kind == "write":
            masks = [P.minimal_visibility(self.policy, chi, s, 0)]
        else:
            masks = []
            for src in [None] + chi.writes_to(req.loc):
                seed = 0 if src is None else 1 << src
                m = P.minimal_visibility(self.policy, chi, s, seed)
                if self._source(chi, req.loc, m) == src:
                    masks.append(m)
        for m in masks:
            writes = req.kind == "write"
            if req.kind == "cas":
                src = self._source(chi, req.loc, m)
                rval = self.uni.initval[req.loc] if src is None else chi.events[src].wval
                writes = rval == req.value
            if not writes:
                yield m, None
                continue
            n = len(chi.ar_order(req.loc))
            for idx in range(self.ar_floor(chi, req.loc, s, m), n + 1):
                yield m, idx


def canonical_key(cfg: Config) -> tuple:
    """Interleaving-independent key: events named by (session, index in session)."""
    chi = cfg.chi
    counters: dict[int, int] = {}
    name = []
    for e in chi.events:
        counters[e.session] = counters.get(e.session, 0) + 1
        name.append((e.session, counters[e.session]))
    evs = tuple(sorted(
        (name[e.id], e.kind, e.loc, e.rval, e.wval,
         tuple(sorted(name[j] for j in bits(chi.vis_in[e.id]))),
         None if chi.rf[e.id] is None or chi.rf[e.id] == INIT else name[chi.rf[e.id]],
         chi.rf[e.id] == INIT)
        for e in chi.events))
    ar = tuple((loc, tuple(name[w] for w in order)) for loc, order in chi.ar)
    consumed = tuple(sorted((loc, (0, 0) if src == INIT else name[src]) for loc, src in cfg.consumed))
    return evs, ar, cfg.progress, tuple(sorted(cfg.rets)), cfg.blocked, consumed


def explore(machine: Machine, exhaustive: bool = False, limit: Optional[int] = None) -> Iterator[Execution]:
    """Depth-first search over configurations; yields each terminal one once.

    Runs where some session can no longer move (for example a CAS whose only
    readable writes are already consumed by other updates) are dropped.
    """
    start = machine.settle(machine.initial())
    if start is None:
        return
    seen = set()
    stack = [(start, [])]
    count = 0
    while stack:
        cfg, path = stack.pop()
        key = canonical_key(cfg)
        if key in seen:
            continue
        seen.add(key)
        if limit is not None and len(seen) > limit:
            raise RuntimeError(f"exploration exceeded {limit} states")
        if machine.terminal(cfg):
            count += 1
            yield Execution(machine.history, cfg.chi, dict(cfg.rets), frozenset(cfg.blocked), path)
            continue
        for st, nxt in machine.successors(cfg, exhaustive):
            stack.append((nxt, path + [st]))


def replay(machine: Machine, steps) -> Execution:
    """Re-run an explicit schedule, raising :class:`StepError` on any illegal step."""
    cfg = machine.settle(machine.initial())
    if cfg is None:
        raise StepError("history is not runnable")
    for st in steps:
        cfg = machine.step(cfg, st)
    if not machine.terminal(cfg):
        raise StepError("schedule ends before every session finished")
    return Execution(machine.history, cfg.chi, dict(cfg.rets), frozenset(cfg.blocked), list(steps))
