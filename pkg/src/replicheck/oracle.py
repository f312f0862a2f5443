"""Exhaustive-enumeration oracle: all histories of a given size, all executions."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Optional

from .axioms import AbstractExecution, AxiomId, axioms_for, check
from .frontend import ast as A
from .frontend.universe import location_universe
from .policies import Policy
from .store import Execution, History, Machine, Program, explore


def compositions(k: int) -> Iterator[tuple]:
    """Ordered session sizes summing to ``k`` (each at least 1)."""
    if k == 0:
        yield ()
        return
    for first in range(1, k + 1):
        for rest in compositions(k - first):
            yield (first,) + rest


def histories(lib: A.LibraryDef, k: int) -> Iterator[History]:
    """Every history with ``k`` invocations, in the same shape the encoder
    ranges over: sessions numbered by first invocation, producer arguments
    pairwise distinct in ``1..k``, other arguments BOT."""
    from . import values

    methods = list(lib.methods)
    prod = lib.producer
    for sizes in compositions(k):
        for ms in product(methods, repeat=k):
            n_prod = sum(m == prod for m in ms)
            for args in permutations(range(1, k + 1), n_prod):
                it = iter(args)
                flat = [(m, next(it) if m == prod else values.BOT) for m in ms]
                sessions, pos = [], 0
                for size in sizes:
                    sessions.append(flat[pos:pos + size])
                    pos += size
                yield History.of(sessions)


@dataclass
class OracleResult:
    k: int
    policy: Policy
    histories: int = 0
    executions: int = 0
    violations: dict = field(default_factory=dict)  # axiom name -> (History, Execution, Counterexample)

    def violated(self, ax: AxiomId) -> bool:
        return ax.name in self.violations


def run_oracle(lib: A.LibraryDef, k: int, policy: Policy, axioms=None, bounds: dict | int = 1,
               exhaustive: bool = False, state_limit: Optional[int] = None) -> OracleResult:
    """Explore every history of size ``k`` and record the first violation per axiom."""
    axioms = list(axioms or axioms_for(lib.datatype))
    prog = Program(lib, location_universe(lib, k), bounds)
    res = OracleResult(k, policy)
    for h in histories(lib, k):
        res.histories += 1
        pending = [ax for ax in axioms if ax.name not in res.violations]
        if not pending:
            break
        for ex in explore(Machine(prog, h, policy), exhaustive, state_limit):
            res.executions += 1
            ae = AbstractExecution.from_execution(lib.datatype, ex)
            for ax in pending:
                if ax.name in res.violations:
                    continue
                cex = check(ae, ax)
                if cex is not None:
                    res.violations[ax.name] = (h, ex, cex)
            if all(ax.name in res.violations for ax in pending):
                break
    return res


def outcomes(lib: A.LibraryDef, history: History, policy: Policy, bounds: dict | int = 1,
             exhaustive: bool = False, state_limit: Optional[int] = None) -> list:
    """Distinct abstract executions (as sorted (slot, ret) tuples) of one history."""
    prog = Program(lib, location_universe(lib, len(history)), bounds)
    seen = {}
    for ex in explore(Machine(prog, history, policy), exhaustive, state_limit):
        key = tuple(sorted(ex.rets.items()))
        seen.setdefault(key, ex)
    return [seen[key] for key in sorted(seen, key=repr)]
