import pytest

from replicheck import BENCHMARKS
from replicheck.frontend import DslError, location_universe, parse_library, pretty, unroll_library
from replicheck.store import Program
from replicheck.store.interp import euclid_div
from replicheck import values

from conftest import TINY, bench

# event atoms per method at unroll bound 1
EVENT_COUNTS = {
    "treiber": {"push": 4, "pop": 4},
    "exchanger": {"exchange": 9},
    "elimination_stack": {"push": 7, "pop": 7},
    "ms_2lock_queue": {"enqueue": 7, "dequeue": 8},
    "ms_lockfree_queue": {"enqueue": 6, "dequeue": 6},
    "hw_queue": {"enqueue": 10, "dequeue": 13},
}


@pytest.mark.parametrize("name", BENCHMARKS)
def test_benchmarks_parse_and_roundtrip(name):
    lib = bench(name)
    assert lib.name == name
    assert parse_library(pretty(lib)) == lib


@pytest.mark.parametrize("name", BENCHMARKS)
def test_unrolled_event_counts(name):
    got = {m: len(u.events) for m, u in unroll_library(bench(name)).items()}
    assert got == EVENT_COUNTS[name]


def test_unroll_bound_grows_loops():
    lib = bench("treiber")
    one = unroll_library(lib, 1)["push"]
    two = unroll_library(lib, {"push": 2, "pop": 1})["push"]
    assert len(two.events) > len(one.events)
    labels = [a.label_str for a in two.events]
    assert len(labels) == len(set(labels))


@pytest.mark.parametrize("src, fragment", [
    ("library x datatype stack\nglobal X init 0\nmethod push(a) { X = ; }", "3:"),
    ("library x datatype deque\n", "datatype"),
    ("library x datatype stack\nmethod push(a) { y = Z; return; }\nmethod pop(a) { return EMPTY; }", "Z"),
])
def test_parse_errors_carry_context(src, fragment):
    with pytest.raises(DslError) as err:
        parse_library(src)
    assert fragment in str(err.value)


def test_tiny_program_runs():
    lib = parse_library(TINY)
    prog = Program(lib, location_universe(lib, 2), 1)
    req = prog.next_step("pop", values.BOT, 1, ())
    assert req.kind == "read"
    fin = prog.next_step("pop", values.BOT, 1, (0,))
    assert fin.ret == values.EMPTY


@pytest.mark.parametrize("a, b, q", [(7, 2, 3), (-7, 2, -4), (7, -2, -3), (-7, -2, 4)])
def test_euclidean_division(a, b, q):
    assert euclid_div(a, b) == q
    assert 0 <= a - b * q < abs(b)


def test_division_by_zero_is_zero_with_a_warning():
    with pytest.warns(RuntimeWarning, match="division by zero"):
        assert euclid_div(5, 0) == 0


def test_argument_is_read_only():
    with pytest.raises(DslError, match="cannot be reassigned"):
        parse_library("library x datatype stack\nmethod push(a) { a = 1; return; }\n"
                      "method pop(a) { return EMPTY; }")


def test_location_universe_size():
    lib = bench("treiber")
    for k in (1, 2, 5):
        uni = location_universe(lib, k)
        # Top + k rows x {Val, Next}; the poison location is not counted
        assert len(uni) == 1 + 2 * k
