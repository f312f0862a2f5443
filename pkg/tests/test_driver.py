import dataclasses
import json
from pathlib import Path

import jsonschema
import pytest

from replicheck import values
from replicheck.axioms import AxiomId
from replicheck.driver import ValidationError, Witness, check, decode, parse_model, parse_sexprs, validate
from replicheck.frontend import location_universe
from replicheck.policies import Policy, holds, lattice
from replicheck.store import Machine, Program, replay

from conftest import bench, needs_solver

SCHEMA = json.loads((Path(__file__).parents[1] / "witness.schema.json").read_text())


def test_sexpr_and_model_parsing():
    assert parse_sexprs("(a (b c) |x y|) ; note\n d") == [["a", ["b", "c"], "x y"], "d"]
    reply = """(
      (define-fun ret_1 () Int (- 3))
      (define-fun done_1 () Bool true)
      (define-fun |arg_1| () Int 2)
      (define-fun f ((x Int)) Int x)
    )"""
    assert parse_model(reply) == {"ret_1": -3, "done_1": True, "arg_1": 2}
    assert parse_model("(model (define-fun a () Bool false))") == {"a": False}


def meaningful_values(w, enc, model):
    """Model entries that determine the witness: event values and returns."""
    names = []
    for e in enc.events:
        if not model.get(f"act_{e.name}"):
            continue
        names.append(f"loc_{e.name}")
        if model.get(f"rd_{e.name}"):
            names.append(f"rval_{e.name}")
        if model.get(f"wr_{e.name}"):
            names.append(f"wval_{e.name}")
    names += [f"ret_{i}" for i in w.rets]
    return names


CASES = [("treiber", "addrem", "ec", 2), ("exchanger", "exchange", "ec", 2),
         ("ms_2lock_queue", "injective", "mr", 3)]


@needs_solver
@pytest.mark.parametrize("name, ax, pol, k", CASES)
def test_witness_roundtrip_and_fault_injection(name, ax, pol, k):
    lib = bench(name)
    res = check(lib, AxiomId(lib.datatype, ax), Policy.parse(pol), k, timeout=120)
    assert res.status == "violation" and res.witness.validated
    data = res.witness.to_json()
    jsonschema.validate(data, SCHEMA)

    again = Witness.from_json(json.loads(json.dumps(data)))
    assert validate(lib, again).binding == res.witness.counterexample.binding

    names = meaningful_values(res.witness, res.encoding, res.model)
    assert names
    for n in names:
        bad = dict(res.model)
        bad[n] = bad[n] + 1 if n.startswith("loc_") else (values.EMPTY if bad[n] != values.EMPTY else 7)
        with pytest.raises(ValidationError):
            validate(lib, decode(res.encoding, bad))


@needs_solver
def test_tampered_json_is_rejected():
    lib = bench("treiber")
    res = check(lib, AxiomId("stack", "addrem"), Policy.parse("ec"), 2)
    data = res.witness.to_json()
    reads = [e for e in data["events"] if e["kind"] != "W"]
    reads[-1]["rval"] = 12345
    with pytest.raises(ValidationError):
        validate(lib, Witness.from_json(data))


@needs_solver
def test_no_violation_under_causal_consistency():
    lib = bench("treiber")
    res = check(lib, AxiomId("stack", "addrem"), Policy.parse("cc"), 3)
    assert res.status == "none" and [s for _, s, _ in res.per_k] == ["unsat"] * 3


@needs_solver
def test_witness_validates_under_every_weaker_policy():
    lib = bench("treiber")
    mwmr = Policy.parse("mw+mr")
    res = check(lib, AxiomId("stack", "addrem"), mwmr, 4, exact=True, timeout=300)
    assert res.status == "violation"
    w = res.witness
    weaker = [q for q in lattice() if q <= mwmr]
    assert len(weaker) == 4
    for q in weaker:
        validate(lib, dataclasses.replace(w, policy=q, counterexample=None, validated=False))

    # no MW+MR+WFR violation exists up to k=4, so this final state must break WFR
    m = Machine(Program(lib, location_universe(lib, w.k), w.bounds), w.history, mwmr)
    chi = replay(m, w.schedule).chi
    assert holds(mwmr, chi) and not holds(Policy.parse("wfr"), chi)
