from functools import lru_cache

import pytest

from replicheck import load_benchmark
from replicheck.driver import find_solver, SolverError

# criterion id -> list of (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def record(cid, ok, detail):
    ACCEPTANCE.setdefault(cid, []).append((bool(ok), detail))
    print(f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {detail}")

TINY = """\
library tiny datatype stack
global X init 0
method push(a) { X = a; return; }
method pop(a) {
  v = X;
  if (v == 0) { return EMPTY; }
  c = CAS(X, v, 0);
  if (c == TRUE) { return v; }
  return EMPTY;
}
"""

TINY_QUEUE = """\
library tinyq datatype queue
global H init 0
global T init 0
method enqueue(a) { t = T; d = CAS(T, t, a); return; }
method dequeue(a) {
  t = T;
  h = H;
  if (t == h) { return EMPTY; }
  c = CAS(H, h, t);
  if (c == FALSE) { return EMPTY; }
  return t;
}
"""


@lru_cache(maxsize=None)
def bench(name):
    return load_benchmark(name)


def _solver_ok():
    try:
        find_solver(None)
        return True
    except SolverError:
        return False


needs_solver = pytest.mark.skipif(not _solver_ok(), reason="no SMT solver on PATH")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[cid]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {detail}")
