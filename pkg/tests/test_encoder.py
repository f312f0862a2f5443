import re
from itertools import combinations
from pathlib import Path

import pytest

from replicheck.axioms import AxiomId, axioms_for
from replicheck.driver import solve
from replicheck.encoder import GROUPS, SYMBOLS, encode
from replicheck.policies import Policy, lattice

from conftest import bench, needs_solver

DECL = re.compile(r"\((?:declare-const|declare-fun|define-fun) (\S+)")


def declared(text):
    return DECL.findall(text)


@pytest.mark.parametrize("policy", lattice(), ids=str)
def test_every_symbol_follows_the_naming_scheme(policy):
    enc = encode(bench("treiber"), 3, policy, AxiomId("stack", "lifo2"))
    pats = [re.compile(p) for p in SYMBOLS]
    for name in declared(enc.text):
        hits = [p.pattern for p in pats if p.fullmatch(name)]
        assert len(hits) == 1, (name, hits)


def test_script_shape():
    enc = encode(bench("exchanger"), 2, Policy.parse("mw+mr"), AxiomId("exchanger", "exchange"))
    assert "(set-logic" not in enc.text
    assert enc.text.count("(check-sat)") == 1
    assert set(enc.counts) == set(GROUPS)
    assert all(enc.counts[g] > 0 for g in ("implementation", "store", "policy", "spec-negation"))
    names = set(declared(enc.text))
    assert {"meth_1", "sess_2", "done_2", "vis_e1_e2", "rfinit_e1"} <= names


def test_policy_group_grows_with_policy():
    lib, ax = bench("treiber"), AxiomId("stack", "addrem")
    sizes = [encode(lib, 3, Policy.parse(p), ax).counts["policy"] for p in ("ec", "mw", "mw+mr", "mw+mr+wfr")]
    assert sizes[0] == 0
    assert sizes == sorted(sizes)


def test_hb_gamma_stages():
    ax = AxiomId("stack", "empty-hb")
    for k, stages in ((2, 0), (3, 1), (5, 2)):
        text = encode(bench("treiber"), k, Policy.parse("ec"), ax).text
        got = {int(m) for m in re.findall(r"declare-const hbg(\d+)_", text)}
        assert got == set(range(stages + 1))


@needs_solver
@pytest.mark.parametrize("ax", axioms_for("stack"), ids=str)
def test_solver_accepts_scripts(ax):
    res = solve(encode(bench("treiber"), 2, Policy.parse("cc"), ax).text, timeout=60)
    assert res.status in ("sat", "unsat")


GOLDEN = Path(__file__).parent / "golden" / "treiber_addrem_ec_k2.smt2"


def test_script_is_deterministic_and_matches_golden():
    make = lambda: encode(bench("treiber"), 2, Policy.parse("ec"), AxiomId("stack", "addrem")).text  # noqa: E731
    text = make()
    assert text == make()
    assert "forall" not in text and "exists" not in text
    assert text == GOLDEN.read_text()


def _assertions(enc, group):
    body = enc.text.split(f"; ==== group: {group} ====")[1].split("; ==== group:")[0]
    return {line for line in body.splitlines() if line.startswith("(assert")}


def test_policy_clauses_grow_along_the_session_lattice():
    lib, ax = bench("treiber"), AxiomId("stack", "addrem")
    session_points = [p for p in lattice() if not p.atoms & {"CV", "CC"}]
    clauses = {p: _assertions(encode(lib, 2, p, ax), "policy") for p in session_points}
    for p, q in combinations(session_points, 2):
        if p <= q:
            assert clauses[p] <= clauses[q], (p, q)
