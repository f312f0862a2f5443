"""Command line: ``replicheck check | search | simulate``.

Exit codes of ``check``: 0 no violation, 1 violation, 2 unknown, 3 error.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from . import BENCHMARKS, benchmark_path, values
from .axioms import AbstractExecution, AxiomError, axioms_for, check as check_axiom, parse_axiom, render_inv
from .driver import SearchConfig, SolverError, ValidationError, Witness, check, validate, weakest_policy_search
from .frontend import DslError, location_universe, parse_library
from .oracle import outcomes
from .policies import Policy
from .render import render_witness, show_trace, store_trace
from .store import History

EXIT_NONE, EXIT_VIOLATION, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def load_library(spec: str):
    """A path to an ``.rdsl`` file or the name of a bundled benchmark."""
    path = Path(spec)
    if not path.exists() and spec in BENCHMARKS:
        path = Path(str(benchmark_path(spec)))
    if not path.exists():
        raise FileNotFoundError(f"no such library file or bundled benchmark: {spec}")
    return parse_library(path.read_text())


def parse_unroll(text: str | None, lib) -> dict:
    bounds = {m: 1 for m in lib.methods}
    if not text:
        return bounds
    for part in text.split(","):
        if "=" in part:
            m, n = part.split("=", 1)
            if m.strip() not in bounds:
                raise ValueError(f"--unroll names unknown method {m.strip()!r}")
            bounds[m.strip()] = int(n)
        else:
            bounds = {m: int(part) for m in bounds}
    if min(bounds.values()) < 1:
        raise ValueError("unroll bounds must be >= 1")
    return bounds


_INV = re.compile(r"^\s*(\w+)\s*:\s*(\w+)\s*(?:\(\s*(-?\d+)?\s*\))?\s*$")


def parse_history(text: str, lib) -> History:
    """``"s1:push(1);s2:pop;s1:pop"`` -> History (sessions in order of first mention)."""
    sessions: dict[str, list] = {}
    for item in filter(str.strip, text.split(";")):
        m = _INV.match(item)
        if not m:
            raise ValueError(f"bad invocation {item!r} (expected session:method or session:method(arg))")
        sess, meth, arg = m.groups()
        if meth not in lib.methods:
            raise ValueError(f"unknown method {meth!r}")
        if meth == lib.producer:
            if arg is None:
                raise ValueError(f"{meth} needs an argument")
            a = int(arg)
        else:
            a = values.BOT
        sessions.setdefault(sess, []).append((meth, a))
    return History.of(list(sessions.values()))


def _emit(args, payload: dict, human: str):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(human)


def cmd_check(args) -> int:
    lib = load_library(args.library)
    if args.replay:
        d = json.loads(Path(args.replay).read_text())
        w = Witness.from_json(d)
        try:
            cex = validate(lib, w)
        except ValidationError as err:
            print(f"witness rejected: {err}")
            return EXIT_ERROR
        print(f"witness replays: violates {w.axiom.title} under {w.policy.name} "
              f"({cex.describe(w.abstract_execution())})")
        return EXIT_VIOLATION
    if not args.axiom:
        raise ValueError("--axiom is required")
    axiom = parse_axiom(lib.datatype, args.axiom)
    policy = Policy.parse(args.policy)
    bounds = parse_unroll(args.unroll, lib)
    res = check(lib, axiom, policy, args.k, bounds, args.timeout, args.solver, exact=args.exact,
                keep_script=args.emit_smt)
    payload = {"library": lib.name, "axiom": axiom.name, "policy": policy.name, "k": args.k,
               "status": res.status, "queries": res.per_k, "seconds": round(res.seconds, 3)}
    if res.status == "violation":
        w = res.witness
        wj = w.to_json()
        payload["witness"] = wj
        out = Path(args.out) if args.out else None
        if out:
            out.write_text(json.dumps(wj, indent=2))
        ae = w.abstract_execution()
        human = (f"VIOLATION of {axiom.title} under {policy.name} with k = {res.k} "
                 f"({res.seconds:.1f}s)\n\n{render_witness(w, lib.producer)}\n\n"
                 f"counterexample: {w.counterexample.describe(ae)}\nwitness validated by replay")
        if out:
            human += f"; written to {out}"
        _emit(args, payload, human)
        return EXIT_VIOLATION
    if res.status == "none":
        _emit(args, payload, f"no violation of {axiom.title} under {policy.name} for k <= {args.k} "
                             f"({res.seconds:.1f}s)")
        return EXIT_NONE
    _emit(args, payload, f"UNKNOWN: some query timed out or the solver gave up ({res.per_k})")
    return EXIT_UNKNOWN


def cmd_search(args) -> int:
    lib = load_library(args.library)
    if args.axiom in (None, "all"):
        axs = axioms_for(lib.datatype)
    else:
        axs = [parse_axiom(lib.datatype, a) for a in args.axiom.split(",")]
    cfg = SearchConfig(k_min=args.k_min, k_max=args.k_max, query_timeout=args.timeout,
                       budget=args.budget, bounds=parse_unroll(args.unroll, lib), solver=args.solver)
    reports = []
    for ax in axs:
        r = weakest_policy_search(lib, ax, cfg)
        reports.append(r)
        if args.format != "json":
            extra = f" (violations at {r.violations})" if r.violations else f" (no violation up to k = {cfg.k_max})"
            if r.unresolved:
                extra += f", unresolved {r.unresolved}"
            print(f"{ax.title:>10}: {r.cell}{extra}  [{r.seconds:.1f}s]", file=sys.stderr if args.quiet else sys.stdout)
    cells = {r.axiom: r.cell for r in reports}
    if args.format == "json":
        print(json.dumps({"library": lib.name, "cells": cells,
                          "reports": [r.__dict__ for r in reports]}, indent=2, default=str))
    else:
        print(f"{lib.name} | " + " | ".join(f"{a}: {c}" for a, c in cells.items()))
    return EXIT_NONE


def cmd_simulate(args) -> int:
    lib = load_library(args.library)
    h = parse_history(args.history or "", lib)
    policy = Policy.parse(args.policy)
    exs = outcomes(lib, h, policy, parse_unroll(args.unroll, lib), state_limit=args.state_limit)
    axs = axioms_for(lib.datatype) if args.axiom in (None, "all") else \
        [parse_axiom(lib.datatype, a) for a in args.axiom.split(",")]
    uni = location_universe(lib, len(h))
    rows = []
    for ex in exs:
        ae = AbstractExecution.from_execution(lib.datatype, ex)
        failed = [ax.title for ax in axs if check_axiom(ae, ax) is not None]
        desc = ", ".join(render_inv(g) for g in ae.invs)
        blocked = sorted(ex.blocked)
        rows.append({"invocations": desc, "incomplete": blocked, "violates": failed})
        if args.trace:
            rows[-1]["trace"] = store_trace(ex.chi, uni)
    if args.format == "json":
        print(json.dumps({"history": str(h), "policy": policy.name, "executions": rows}, indent=2))
    else:
        print(f"history {h or '(empty)'} under {policy.name}: {len(rows)} distinct abstract execution(s)")
        for r in rows:
            tail = f"  [incomplete slots {r['incomplete']}]" if r["incomplete"] else ""
            bad = f"  violates {', '.join(r['violates'])}" if r["violates"] else ""
            print(f"  {r['invocations'] or '(no completed invocations)'}{tail}{bad}")
            if args.trace:
                print("\n".join(show_trace(r["trace"])))
    return EXIT_NONE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="replicheck", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="look for a violation of one axiom under one policy")
    c.add_argument("library", help="path to an .rdsl file or a bundled benchmark name")
    c.add_argument("--axiom")
    c.add_argument("--policy", default="ec")
    c.add_argument("--k", type=int, default=2, help="maximum number of invocations")
    c.add_argument("--exact", action="store_true", help="only try exactly k invocations")
    c.add_argument("--unroll", help="loop unroll bound: N or method=N,...")
    c.add_argument("--timeout", type=float, default=300.0, help="seconds per solver query")
    c.add_argument("--format", choices=("human", "json"), default="human")
    c.add_argument("--solver")
    c.add_argument("--out", help="write the witness JSON here")
    c.add_argument("--replay", help="validate a witness JSON instead of solving")
    c.add_argument("--emit-smt", help="keep the last SMT-LIB2 script at this path")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("search", help="weakest policy without bounded violations")
    s.add_argument("library")
    s.add_argument("--axiom", default="all")
    s.add_argument("--k-min", type=int, default=2)
    s.add_argument("--k-max", type=int, default=6)
    s.add_argument("--timeout", type=float, default=300.0)
    s.add_argument("--budget", type=float, default=3600.0)
    s.add_argument("--unroll")
    s.add_argument("--format", choices=("human", "json"), default="human")
    s.add_argument("--solver")
    s.add_argument("--quiet", action="store_true", help="per-axiom progress to stderr")
    s.set_defaults(func=cmd_search)

    m = sub.add_parser("simulate", help="enumerate the abstract executions of one history")
    m.add_argument("library")
    m.add_argument("--history", default="")
    m.add_argument("--policy", default="ec")
    m.add_argument("--axiom", default="all")
    m.add_argument("--unroll")
    m.add_argument("--state-limit", type=int, default=2_000_000)
    m.add_argument("--format", choices=("human", "json"), default="human")
    m.add_argument("--trace", action="store_true",
                   help="also dump one store state (events, vis, so, ar, rf) per outcome")
    m.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DslError, AxiomError, SolverError, ValueError, FileNotFoundError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
