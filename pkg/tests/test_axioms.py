import re

import pytest
from hypothesis import given, strategies as st

from replicheck import values
from replicheck.axioms import AbstractExecution, AxiomError, AxiomId, Inv, axioms_for, check, hb_gamma, parse_axiom


def ae(datatype, text):
    """``"push(1) pop:1 | pop:EMPTY"``: sessions split by ``|``, slots numbered in order."""
    invs, slot = [], 0
    for s, row in enumerate(text.split("|"), start=1):
        for tok in row.split():
            slot += 1
            m = re.fullmatch(r"(\w+)(?:\((\d+)\))?(?::(\w+))?", tok)
            meth, arg, ret = m.groups()
            arg = int(arg) if arg else values.BOT
            ret = values.BOT if ret is None else values.RESERVED.get(ret, None)
            if ret is None:
                ret = int(m.group(3))
            invs.append(Inv(slot, s, meth, arg, ret))
    return AbstractExecution(datatype, invs)


def violated(datatype, text):
    x = ae(datatype, text)
    return {ax.name for ax in axioms_for(datatype) if check(x, ax) is not None}


@pytest.mark.parametrize("text, expected", [
    ("push(1) push(2) pop:2 pop:1 pop:EMPTY", set()),
    ("push(1) | pop:0", {"addrem"}),
    ("push(1) | pop:1 | pop:1", {"injective"}),
    ("push(1) pop:EMPTY", {"empty-so", "empty-hb"}),
    ("push(1) push(2) | pop:2 pop:EMPTY", {"empty-hb"}),
    ("push(1) push(2) pop:1", {"lifo1"}),
    ("push(1) push(2) pop:1 pop:2", {"lifo2"}),
    ("push(1) | pop:EMPTY", set()),
])
def test_stack_axioms(text, expected):
    assert violated("stack", text) == expected


@pytest.mark.parametrize("text, expected", [
    ("enqueue(1) enqueue(2) dequeue:1 dequeue:2 dequeue:EMPTY", set()),
    ("enqueue(1) enqueue(2) dequeue:2", {"fifo1"}),
    ("enqueue(1) enqueue(2) dequeue:2 dequeue:1", {"fifo2"}),
    ("enqueue(1) | dequeue:7", {"addrem"}),
])
def test_queue_axioms(text, expected):
    assert violated("queue", text) == expected


@pytest.mark.parametrize("text, expected", [
    ("exchange(1):2 | exchange(2):1", set()),
    ("exchange(1):BOT | exchange(2):BOT", set()),
    ("exchange(1):0", {"addrem"}),
    ("exchange(1):2 | exchange(2):BOT", {"exchange"}),
    ("exchange(1):2 | exchange(2):1 | exchange(3):2", {"injective", "exchange"}),
])
def test_exchanger_axioms(text, expected):
    assert violated("exchanger", text) == expected


def test_hb_gamma_is_transitive_over_match_and_session():
    x = ae("stack", "push(1) push(2) | pop:2 pop:EMPTY")
    hb = hb_gamma(x)
    assert (1, 4) in hb and (2, 3) in hb and (4, 1) not in hb


def test_counterexample_description():
    x = ae("stack", "push(1) | pop:0")
    cex = check(x, AxiomId("stack", "addrem"))
    assert cex.binding == {"g": 2}
    assert cex.describe(x) == "g=pop:0"


@pytest.mark.parametrize("datatype, name", [("exchanger", "lifo1"), ("exchanger", "empty-so"),
                                            ("stack", "fifo2"), ("queue", "exchange")])
def test_inapplicable_axioms_are_errors(datatype, name):
    with pytest.raises(AxiomError, match="-NA-"):
        AxiomId(datatype, name)


def test_parse_axiom_spellings():
    assert parse_axiom("stack", "LIFO-1").name == "lifo1"
    assert parse_axiom("stack", "Empty[HB]").name == "empty-hb"
    assert parse_axiom("queue", "fifo_2").name == "fifo2"


@st.composite
def single_session(draw):
    n = draw(st.integers(0, 6))
    pushed, invs = [], []
    for slot in range(1, n + 1):
        if draw(st.booleans()):
            arg = len(pushed) + 1
            pushed.append(arg)
            invs.append(Inv(slot, 1, "push", arg, values.BOT))
        else:
            ret = draw(st.sampled_from([values.EMPTY, 0] + pushed))
            invs.append(Inv(slot, 1, "pop", values.BOT, ret))
    return AbstractExecution("stack", invs)


@given(single_session())
def test_empty_variants_agree_on_one_session(x):
    so_v = check(x, AxiomId("stack", "empty-so")) is None
    hb_v = check(x, AxiomId("stack", "empty-hb")) is None
    assert so_v == hb_v
