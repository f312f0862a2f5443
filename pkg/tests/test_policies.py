from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from replicheck import policies as P
from replicheck.policies import CC, EC, Policy
from replicheck.store import Event, StoreState

from strategies import policies, store_states, valid_states


def test_parse_and_names():
    assert Policy.parse("ec") == EC
    assert Policy.parse("MR + mw").name == "MW+MR"
    assert Policy.parse("rmw") == Policy.parse("ryw")
    assert Policy.parse("cv").atoms == frozenset({"MW", "MR", "WFR", "CV"})
    assert Policy.parse("cv+ryw") == CC
    with pytest.raises(ValueError):
        Policy.parse("linearizable")


def test_lattice_shape():
    pts = P.lattice()
    assert len(pts) == 18
    assert pts[0] == EC and pts[-1] == CC
    assert {q.name for q in P.next_stronger(EC)} == {"MW", "MR", "WFR", "RYW"}
    assert P.next_stronger(Policy.parse("mw+mr+wfr")) == [Policy.parse("cv"), Policy.parse("mw+mr+wfr+ryw")]
    assert P.next_stronger(CC) == []
    # every point except CC has a successor, and successors are strict upper bounds
    for p in pts:
        assert all(p < q for q in P.next_stronger(p))


def test_minimal_drops_dominated():
    got = P.minimal([Policy.parse("mw+mr"), Policy.parse("mw"), Policy.parse("ryw"), CC])
    assert got == [Policy.parse("mw"), Policy.parse("ryw")]


def _two_sessions():
    # s1: w0 ; w1      s2: r2 sees only w1
    evs = [Event(0, 1, "W", 0, wval=1), Event(1, 1, "W", 1, wval=2), Event(2, 2, "R", 1, rval=2)]
    return StoreState.build(evs, vis=[(1, 2)], so=[(0, 1)], ar={0: [0], 1: [1]})


def test_atoms_on_a_hand_built_state():
    chi = _two_sessions()
    assert P.violated_atoms(Policy.parse("mw+mr+ryw"), chi) == ["MW", "RYW"]
    assert P.holds(Policy.parse("mr"), chi)
    assert not P.holds(CC, chi)


def test_minimal_visibility_examples():
    chi = _two_sessions()
    # MW: seeing w1 forces seeing its session predecessor w0
    assert P.minimal_visibility(Policy.parse("mw"), chi, 3, 0b010) == 0b011
    assert P.minimal_visibility(EC, chi, 3, 0b010) == 0b010
    # RYW for session 2 forces its own earlier read
    assert P.minimal_visibility(Policy.parse("ryw"), chi, 2, 0) == 0b100


@settings(max_examples=300, deadline=None)
@given(store_states())
def test_policy_monotonicity(chi):
    sat = {p: P.holds(p, chi) for p in P.lattice()}
    for p, q in combinations(P.lattice(), 2):
        if p <= q and sat[q]:
            assert sat[p], (p, q)
        if q <= p and sat[p]:
            assert sat[q], (q, p)


@settings(max_examples=200, deadline=None)
@given(st.data(), policies)
def test_minimal_visibility_is_least(data, p):
    chi = data.draw(valid_states(p))
    assert P.holds(p, chi)
    n = len(chi)
    s = data.draw(st.integers(1, 3))
    seed = data.draw(st.integers(0, (1 << n) - 1)) if n else 0
    m = P.minimal_visibility(p, chi, s, seed)
    assert m & seed == seed

    def ok(mask):
        return P.holds(p, chi.with_event(Event(n, s, "R", 0, 0), mask, None, None))

    assert ok(m)
    for mask in range(1 << n):
        if mask & seed == seed and ok(mask):
            assert mask & m == m
