import pytest

from replicheck import BENCHMARKS
from replicheck.axioms import axioms_for
from replicheck.driver import check
from replicheck.oracle import compositions, histories, run_oracle
from replicheck.policies import Policy

from conftest import bench, needs_solver

FIVE = ("ec", "mw", "mr", "mw+mr", "cc")


def test_history_counts():
    assert [len(list(compositions(k))) for k in range(1, 5)] == [1, 2, 4, 8]
    # stack, k = 2: 2 shapes x (push,push: 2 arg orders | push,pop: 2 | pop,push: 2 | pop,pop: 1)
    assert len(list(histories(bench("treiber"), 2))) == 14


@needs_solver
@pytest.mark.slow
@pytest.mark.parametrize("name", BENCHMARKS)
@pytest.mark.parametrize("pol", FIVE)
def test_solver_agrees_with_enumeration_small(name, pol):
    lib, p = bench(name), Policy.parse(pol)
    for k in (1, 2):
        o = run_oracle(lib, k, p)
        for ax in axioms_for(lib.datatype):
            r = check(lib, ax, p, k, exact=True, timeout=120)
            assert r.status != "unknown"
            assert (r.status == "violation") == o.violated(ax), (k, ax.title, r.status)
