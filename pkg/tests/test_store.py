import pytest
from hypothesis import given, settings, strategies as st

from replicheck import policies as P
from replicheck.frontend import location_universe, parse_library
from replicheck.oracle import histories
from replicheck.policies import Policy
from replicheck.store import History, Machine, Program, Step, StepError, check_invariants, explore, replay

from conftest import TINY, TINY_QUEUE, bench

FIVE = [Policy.parse(p) for p in ("ec", "mw", "mr", "mw+mr", "cc")]


def machine(lib, h, p, bounds=1):
    return Machine(Program(lib, location_universe(lib, len(h)), bounds), h, p)


def outcome_set(lib, h, p, exhaustive=False):
    return {(tuple(sorted(ex.rets.items())), ex.blocked)
            for ex in explore(machine(lib, h, p), exhaustive)}


# brute force over every visible set is only affordable for very small runs
@pytest.mark.parametrize("src, kmax", [(TINY, 3), (TINY_QUEUE, 2)], ids=["tiny-stack", "tiny-queue"])
@pytest.mark.parametrize("policy", FIVE + [Policy.parse("wfr"), Policy.parse("ryw")], ids=str)
def test_reduced_enumeration_matches_exhaustive(src, kmax, policy):
    lib = parse_library(src)
    for k in range(1, kmax + 1):
        for h in histories(lib, k):
            assert outcome_set(lib, h, policy) == outcome_set(lib, h, policy, exhaustive=True), str(h)


def test_terminal_states_are_well_formed():
    lib = bench("treiber")
    h = History.of([[("push", 1), ("pop", -3)], [("pop", -3)]])
    for p in FIVE:
        for ex in explore(machine(lib, h, p)):
            assert check_invariants(ex.chi) == []
            assert P.holds(p, ex.chi)


def test_bounded_loop_leaves_incomplete_last_invocation():
    lib = bench("treiber")
    h = History.of([[("push", 1)], [("push", 2)]])
    blocked = [ex.blocked for ex in explore(machine(lib, h, P.EC))]
    assert frozenset() in blocked
    assert any(b for b in blocked)


def test_replay_roundtrip_and_rejections():
    lib = bench("treiber")
    h = History.of([[("push", 1)], [("pop", -3)]])
    m = machine(lib, h, P.CC)
    ex = next(iter(explore(m)))
    assert replay(m, ex.steps).rets == ex.rets
    bad = list(ex.steps)
    bad[0] = Step(bad[0].session, (99,), bad[0].ar_index)
    with pytest.raises(StepError):
        replay(m, bad)
    with pytest.raises(StepError):
        replay(m, ex.steps[:-1])


def test_replay_enforces_policy():
    lib = parse_library(TINY)
    h = History.of([[("push", 1), ("pop", -3)]])
    ec = machine(lib, h, P.EC)
    # under EC the pop may ignore the session's own push
    runs = [ex for ex in explore(ec) if ex.rets[2] == -2]
    assert runs
    with pytest.raises(StepError):
        replay(machine(lib, h, Policy.parse("ryw")), runs[0].steps)


_SMALL = [(name, h) for name in ("treiber", "exchanger", "ms_lockfree_queue")
          for k in (2, 3) for h in histories(bench(name), k)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(_SMALL))
def test_monotonic_writes_alone_is_unobservable(case):
    """MW on its own never changes the reachable outcomes: every write it
    would force into view is either on another location or already
    arbitration-ordered before the write being read."""
    name, h = case
    lib = bench(name)
    assert outcome_set(lib, h, P.EC) == outcome_set(lib, h, Policy.parse("mw"))


def test_push_pop_outcomes_depend_on_policy():
    lib = bench("treiber")
    h = History.of([[("push", 1)], [("pop", -3)]])
    pop_rets = lambda p: {dict(r)[2] for r, b in outcome_set(lib, h, p) if not b}  # noqa: E731
    assert pop_rets(P.EC) == {0, 1, -2}
    assert pop_rets(Policy.parse("mw+mr")) == {1, -2}


def test_lone_push_has_one_outcome():
    lib = bench("treiber")
    h = History.of([[("push", 1)]])
    for p in FIVE:
        assert outcome_set(lib, h, p) == {(((1, None),), frozenset())}
