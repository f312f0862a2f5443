"""Solver invocation, model decoding, witness validation and policy search."""

from __future__ import annotations

import json
import logging
import os
import shutil
import subprocess
import sysconfig
import tempfile
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import values
from .axioms import AbstractExecution, AxiomId, Counterexample, axioms_for, check as check_axiom
from .encoder import Encoding, encode
from .frontend import ast as A
from .frontend.universe import location_universe
from .policies import EC, Policy, lattice, minimal, next_stronger
from .store import History, Machine, Program, Step, StepError, replay

log = logging.getLogger(__name__)

SOLVERS = ("z3", "cvc5", "yices-smt2")


class SolverError(RuntimeError):
    pass


def find_solver(explicit: Optional[str] = None) -> str:
    """Solver binary: explicit argument, then $REPLICHECK_SOLVER, then the first on PATH."""
    for cand in (explicit, os.environ.get("REPLICHECK_SOLVER")):
        if cand:
            path = shutil.which(cand)
            if not path:
                raise SolverError(f"solver {cand!r} not found")
            return path
    # the z3-solver wheel puts its binary next to this interpreter's scripts
    scripts = sysconfig.get_path("scripts")
    for name in SOLVERS:
        path = shutil.which(name) or shutil.which(name, path=scripts)
        if path:
            return path
    raise SolverError("no SMT solver found (install z3-solver or set REPLICHECK_SOLVER)")


@dataclass
class SolverResult:
    status: str  # sat | unsat | unknown | timeout
    model: dict = field(default_factory=dict)
    seconds: float = 0.0
    raw: str = ""


# -- S-expressions -------------------------------------------------------------


def parse_sexprs(text: str) -> list:
    toks, i, n = [], 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            toks.append(c)
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c == '"':
            j = text.index('"', i + 1)
            toks.append(text[i:j + 1])
            i = j + 1
        elif c == "|":
            j = text.index("|", i + 1)
            toks.append(text[i + 1:j])
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            toks.append(text[i:j])
            i = j
    out, stack = [], [[]]
    for t in toks:
        if t == "(":
            stack.append([])
        elif t == ")":
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(t)
    return stack[0]


def _value(v):
    if isinstance(v, list):
        if len(v) == 2 and v[0] == "-":
            return -_value(v[1])
        raise SolverError(f"unexpected model value {v!r}")
    if v == "true":
        return True
    if v == "false":
        return False
    return int(v)


def parse_model(text: str) -> dict:
    """``{name: value}`` for every nullary ``define-fun`` in a ``(get-model)`` reply."""
    model = {}
    for top in parse_sexprs(text):
        if not isinstance(top, list):
            continue
        items = top[1:] if top and top[0] == "model" else top
        for d in items:
            if isinstance(d, list) and len(d) == 5 and d[0] == "define-fun" and d[2] == []:
                try:
                    model[d[1]] = _value(d[4])
                except (SolverError, ValueError):
                    pass
    return model


def solve(script: str, solver: Optional[str] = None, timeout: Optional[float] = None,
          keep: Optional[str] = None) -> SolverResult:
    exe = find_solver(solver)
    path = keep
    if path is None:
        fd, path = tempfile.mkstemp(suffix=".smt2")
        os.close(fd)
    with open(path, "w") as fh:
        fh.write(script)
    cmd = [exe, path]
    if os.path.basename(exe).startswith("cvc5"):
        cmd.insert(1, "--produce-models")
    start = time.monotonic()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        return SolverResult("timeout", seconds=time.monotonic() - start)
    finally:
        if keep is None:
            os.unlink(path)
    secs = time.monotonic() - start
    out = proc.stdout
    first = out.strip().split("\n", 1)[0].strip() if out.strip() else ""
    if first not in ("sat", "unsat", "unknown"):
        raise SolverError(f"solver failed: {(proc.stderr or out).strip()[:400]}")
    model = parse_model(out.split("\n", 1)[1]) if first == "sat" else {}
    return SolverResult(first, model, secs, out)


# -- decoding ----------------------------------------------------------------


@dataclass
class WEvent:
    id: int  # flat event slot (model numbering)
    inv: int
    session: int
    label: str
    kind: str
    loc: int
    rval: Optional[int]
    wval: Optional[int]
    arpos: Optional[int]
    method: str


@dataclass
class Witness:
    library: str
    datatype: str
    axiom: AxiomId
    policy: Policy
    k: int
    bounds: dict
    sessions: list  # per session: list of (slot, method, arg)
    rets: dict  # slot -> ret for completed invocations
    events: list  # WEvent in schedule order
    vis: list  # pairs of event ids (model numbering)
    schedule: list  # Step objects (replay numbering = position in ``events``)
    loc_names: list
    row_names: dict
    counterexample: Optional[Counterexample] = None
    validated: bool = False

    @property
    def history(self) -> History:
        return History.of([[(m, a) for _, m, a in row] for row in self.sessions])

    def abstract_execution(self) -> AbstractExecution:
        from .axioms import Inv

        invs = [Inv(slot, s, m, a, self.rets[slot])
                for s, row in enumerate(self.sessions, start=1)
                for slot, m, a in row if slot in self.rets]
        return AbstractExecution(self.datatype, invs)

    @classmethod
    def from_json(cls, d: dict) -> "Witness":
        """Inverse of :meth:`to_json` (event ids become schedule positions)."""
        from .axioms import parse_axiom

        rows: dict[int, list] = {}
        rets = {}
        for h in d["history"]:
            rows.setdefault(h["session"], []).append((h["slot"], h["method"], h["arg"]))
            if h["complete"]:
                rets[h["slot"]] = h["ret"]
        loc_names: dict[int, str] = {}
        events, vis = [], []
        for e in d["events"]:
            events.append(WEvent(e["id"], e["slot"], e["session"], e["label"], e["kind"], e["loc"],
                                 e["rval"], e["wval"], None, ""))
            loc_names[e["loc"]] = e.get("loc_name", f"loc{e['loc']}")
            vis += [(a, e["id"]) for a in e["vis"]]
        names = [loc_names.get(i, f"loc{i}") for i in range(max(loc_names, default=-1) + 1)]
        schedule = [Step(s["session"], tuple(s["visible"]), s["ar_index"]) for s in d["schedule"]]
        return cls(d["library"], d["datatype"], parse_axiom(d["datatype"], d["axiom"]),
                   Policy.parse(d["policy"]), d["k"], d["unroll"],
                   [rows[s] for s in sorted(rows)], rets, events, vis, schedule, names, {})

    def to_json(self) -> dict:
        order = {e.id: n for n, e in enumerate(self.events)}
        history = []
        for s, row in enumerate(self.sessions, start=1):
            for slot, m, a in row:
                history.append({"slot": slot, "session": s, "method": m, "arg": a,
                                "complete": slot in self.rets, "ret": self.rets.get(slot)})
        return {
            "library": self.library, "datatype": self.datatype, "axiom": self.axiom.name,
            "policy": self.policy.name, "k": self.k, "unroll": self.bounds,
            "history": history,
            "events": [{"id": order[e.id], "slot": e.inv, "session": e.session, "label": e.label,
                        "kind": e.kind, "loc": e.loc, "loc_name": self.loc_names[e.loc],
                        "rval": e.rval, "wval": e.wval,
                        "vis": sorted(order[a] for a, b in self.vis if b == e.id)}
                       for e in self.events],
            "schedule": [{"session": st.session, "visible": list(st.visible),
                          "ar_index": st.ar_index} for st in self.schedule],
            "counterexample": None if self.counterexample is None else self.counterexample.binding,
            "validated": self.validated,
        }


def decode(enc: Encoding, model: dict) -> Witness:
    """Read history, events and visibility out of a model; derive a replay schedule."""
    g = lambda name, default=None: model.get(name, default)  # noqa: E731
    code_m = enc.code_methods
    k = enc.k
    sess = [g(f"sess_{i}", 1) for i in range(1, k + 1)]
    nsess = max(sess)
    sessions = [[] for _ in range(nsess)]
    rets = {}
    inv_session = {}
    for i in range(1, k + 1):
        m = code_m[g(f"meth_{i}")]
        arg = g(f"arg_{i}", 0)
        sessions[sess[i - 1] - 1].append((i, m, arg))
        inv_session[i] = sess[i - 1]
        if g(f"done_{i}", False):
            rets[i] = g(f"ret_{i}", 0)
    evs = {}
    for e in enc.events:
        if not g(f"act_{e.name}", False):
            continue
        m = code_m[g(f"meth_{e.inv}")]
        atom = e.atoms[m]
        rd, wr = g(f"rd_{e.name}", False), g(f"wr_{e.name}", False)
        kind = "U" if rd and wr else ("R" if rd else "W")
        evs[e.id] = WEvent(e.id, e.inv, inv_session[e.inv], atom.label_str, kind,
                           g(f"loc_{e.name}", 0), g(f"rval_{e.name}", 0) if rd else None,
                           g(f"wval_{e.name}", 0) if wr else None,
                           g(f"arpos_{e.name}", 0) if wr else None, m)
    vis = sorted((a, b) for a in evs for b in evs if g(f"vis_e{a}_e{b}", False))
    # schedule: topological order of vis ∪ so, ties broken by slot id
    preds = {e: set() for e in evs}
    for a, b in vis:
        preds[b].add(a)
    for a in evs:
        for b in evs:
            ea, eb = evs[a], evs[b]
            if ea.session == eb.session and (ea.inv, a) < (eb.inv, b):
                preds[b].add(a)
    order, placed = [], set()
    while len(order) < len(evs):
        ready = [e for e in sorted(evs) if e not in placed and preds[e] <= placed]
        if not ready:
            raise SolverError("model has a happens-before cycle")
        order.append(ready[0])
        placed.add(ready[0])
    pos = {e: n for n, e in enumerate(order)}
    schedule = []
    for n, e in enumerate(order):
        ev = evs[e]
        visible = tuple(sorted(pos[a] for a, b in vis if b == e))
        ar_index = None
        if ev.kind != "R":
            ar_index = sum(1 for x in order[:n] if evs[x].kind != "R" and evs[x].loc == ev.loc
                           and evs[x].arpos < ev.arpos)
        schedule.append(Step(ev.session, visible, ar_index))
    return Witness(enc.lib.name, enc.lib.datatype, enc.axiom, enc.policy, k,
                   {m: u.bound for m, u in enc.unrolled.items()}, sessions, rets,
                   [evs[e] for e in order], vis, schedule, list(enc.uni.names),
                   dict(enc.uni.row_names))


class ValidationError(Exception):
    pass


def validate(lib: A.LibraryDef, w: Witness) -> Counterexample:
    """Replay the witness on the store interpreter.

    Checks every step against the store rules and the policy, that the
    replayed events and return values coincide with the decoded ones, and that
    the resulting abstract execution violates the axiom.  Returns the
    counterexample; raises :class:`ValidationError` otherwise.
    """
    uni = location_universe(lib, w.k)
    machine = Machine(Program(lib, uni, w.bounds), w.history, w.policy)
    try:
        ex = replay(machine, w.schedule)
    except StepError as err:
        raise ValidationError(f"replay rejected: {err}") from err
    if len(ex.chi.events) != len(w.events):
        raise ValidationError("replay produced a different number of events")
    for got, want in zip(ex.chi.events, w.events):
        fields_got = (got.session, got.slot, got.label, got.kind, got.loc, got.rval, got.wval)
        fields_want = (want.session, want.inv, want.label, want.kind, want.loc, want.rval, want.wval)
        if fields_got != fields_want:
            raise ValidationError(f"event {got.id} replays as {fields_got}, model says {fields_want}")
    rets = {s: (values.BOT if r is None else r) for s, r in ex.rets.items()}
    if rets != w.rets:
        raise ValidationError(f"replayed returns {rets} differ from model {w.rets}")
    cex = check_axiom(AbstractExecution.from_execution(lib.datatype, ex), w.axiom)
    if cex is None:
        raise ValidationError(f"replayed execution satisfies {w.axiom.title}")
    w.counterexample, w.validated = cex, True
    return cex


# -- checking and search ------------------------------------------------------


@dataclass
class CheckResult:
    status: str  # violation | none | unknown
    k: int
    seconds: float
    witness: Optional[Witness] = None
    per_k: list = field(default_factory=list)  # (k, solver status, seconds)
    script: Optional[str] = None
    encoding: Optional[Encoding] = None  # of the satisfiable query
    model: Optional[dict] = None


def check(lib: A.LibraryDef, axiom: AxiomId, policy: Policy, k: int, bounds: dict | int = 1,
          timeout: Optional[float] = None, solver: Optional[str] = None, exact: bool = False,
          k_min: int = 1, keep_script: Optional[str] = None) -> CheckResult:
    """Look for a violation with up to ``k`` invocations (exactly ``k`` if ``exact``).

    Sizes are tried in increasing order so a reported witness is as small as
    possible.  A timeout or solver ``unknown`` at any size makes the overall
    answer ``unknown`` unless a larger size still produces a violation.
    """
    start = time.monotonic()
    per_k, unknown = [], False
    sizes = [k] if exact else range(max(1, k_min), k + 1)
    for n in sizes:
        enc = encode(lib, n, policy, axiom, bounds)
        res = solve(enc.text, solver, timeout, keep_script)
        per_k.append((n, res.status, round(res.seconds, 3)))
        log.info("%s %s %s k=%d: %s (%.2fs)", lib.name, axiom.title, policy.name, n, res.status, res.seconds)
        if res.status == "sat":
            w = decode(enc, res.model)
            try:
                validate(lib, w)
            except ValidationError as err:
                raise SolverError(f"model at k={n} failed validation: {err}") from err
            return CheckResult("violation", n, time.monotonic() - start, w, per_k,
                               encoding=enc, model=res.model)
        if res.status != "unsat":
            unknown = True
    return CheckResult("unknown" if unknown else "none", k, time.monotonic() - start, None, per_k)


@dataclass
class SearchConfig:
    k_min: int = 2
    k_max: int = 6
    query_timeout: float = 300.0
    budget: float = 3600.0
    bounds: dict | int = 1
    solver: Optional[str] = None


@dataclass
class SearchReport:
    library: str
    axiom: str
    weakest: list  # names of ⊑-minimal policies with no violation up to k_max
    violations: dict  # policy name -> k of the violation found
    unresolved: list  # policies where some query timed out / unknown / budget ran out
    seconds: float
    queries: list = field(default_factory=list)  # (policy, k, status, seconds)

    @property
    def cell(self) -> str:
        if not self.weakest:
            # nothing proved safe: either the budget ran out or even CC is violated
            return "unknown" if self.unresolved else "none"
        return " | ".join(self.weakest)


def weakest_policy_search(lib: A.LibraryDef, axiom: AxiomId, cfg: SearchConfig = SearchConfig()) -> SearchReport:
    """Climb the lattice from EC.  A policy with a violation is refuted (and
    so is everything below it); its immediate successors are tried next.  A
    policy is reported safe only when every size up to ``k_max`` came back
    unsat, never on timeout/unknown."""
    start = time.monotonic()
    violations, safe, unresolved, queries = {}, [], [], []
    frontier, seen = [EC], set()
    while frontier:
        p = frontier.pop(0)
        if p in seen:
            continue
        seen.add(p)
        if any(q <= p for q in safe):
            continue  # already covered by a weaker safe policy
        status, found_k = "none", None
        for n in range(cfg.k_min, cfg.k_max + 1):
            left = cfg.budget - (time.monotonic() - start)
            if left <= 0:
                status = "unknown"
                break
            r = check(lib, axiom, p, n, cfg.bounds, min(cfg.query_timeout, left), cfg.solver, exact=True)
            queries.append((p.name, n, r.per_k[-1][1], r.per_k[-1][2]))
            if r.status == "violation":
                status, found_k = "violation", n
                break
            if r.status == "unknown":
                status = "unknown"
                break
        if status == "violation":
            violations[p.name] = found_k
            frontier.extend(q for q in next_stronger(p) if q not in seen)
        elif status == "none":
            safe.append(p)
        else:
            unresolved.append(p.name)
    return SearchReport(lib.name, axiom.title, [p.name for p in minimal(safe)], violations,
                        unresolved, time.monotonic() - start, queries)


def search_all(lib: A.LibraryDef, cfg: SearchConfig = SearchConfig()) -> dict:
    return {ax.title: weakest_policy_search(lib, ax, cfg) for ax in axioms_for(lib.datatype)}
