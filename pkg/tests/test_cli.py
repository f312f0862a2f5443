import json

import pytest

from replicheck.cli import main, parse_history
from replicheck.store import History

from conftest import bench, needs_solver


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@needs_solver
def test_check_violation_then_replay(capsys, tmp_path):
    out_file = tmp_path / "w.json"
    code, out, _ = run(capsys, "check", "treiber", "--axiom", "addrem", "--policy", "ec", "--k", "2",
                       "--out", str(out_file))
    assert code == 1
    assert "VIOLATION of AddRem" in out and "reads-from:" in out
    assert json.loads(out_file.read_text())["validated"] is True
    code, out, _ = run(capsys, "check", "treiber", "--replay", str(out_file))
    assert code == 1 and "witness replays" in out


@needs_solver
def test_check_clean_json(capsys):
    code, out, _ = run(capsys, "check", "treiber", "--axiom", "lifo1", "--policy", "mw+mr", "--k", "3",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["status"] == "none"


@needs_solver
def test_check_timeout_is_unknown(capsys):
    code, _, _ = run(capsys, "check", "hw_queue", "--axiom", "fifo2", "--policy", "ec", "--k", "4",
                     "--exact", "--timeout", "0.01")
    assert code == 2


def test_inapplicable_axiom_is_an_error(capsys):
    code, _, err = run(capsys, "check", "exchanger", "--axiom", "lifo1")
    assert code == 3 and "-NA-" in err


def test_usage_errors_exit_3(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "treiber", "--no-such-flag"])
    assert exc.value.code == 3
    code, _, err = run(capsys, "check", "no_such_library.rdsl", "--axiom", "addrem")
    assert code == 3 and "no such library" in err


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "treiber", "--history", "s1:push(1);s2:pop", "--policy", "ec")
    assert code == 0
    assert "pop:0  violates AddRem" in out
    code, out, _ = run(capsys, "simulate", "treiber", "--history", "s1:push(1);s2:pop", "--policy", "cc",
                       "--format", "json")
    rows = json.loads(out)["executions"]
    assert rows and not any(r["violates"] for r in rows)


def test_simulate_trace(capsys):
    code, out, _ = run(capsys, "simulate", "treiber", "--history", "s1:push(1);s2:pop", "--trace",
                       "--format", "json")
    assert code == 0
    bad = [r for r in json.loads(out)["executions"] if "AddRem" in r["violates"]]
    tr = bad[0]["trace"]
    acts = {e["id"]: e["action"] for e in tr["events"]}
    val_read = next(i for i, a in acts.items() if "R(L1.Val,0)" in a)
    # the pop sees the Top update but not the write of the value
    writer = next(i for i, a in acts.items() if "W(L1.Val,1)" in a)
    assert [writer, val_read] not in tr["vis"]
    assert tr["rf"][str(val_read)] is None


def test_history_syntax():
    lib = bench("treiber")
    h = parse_history("a:push(1); b:pop; a:pop()", lib)
    assert h == History.of([[("push", 1), ("pop", -3)], [("pop", -3)]])
    with pytest.raises(ValueError):
        parse_history("a:push", lib)
    with pytest.raises(ValueError):
        parse_history("a:peek", lib)


@needs_solver
def test_search_row(capsys):
    code, out, _ = run(capsys, "search", "exchanger", "--axiom", "injective", "--k-max", "2")
    assert code == 0
    assert out.strip().splitlines()[-1] == "exchanger | Injective: EC"


def test_search_without_budget_is_unknown(capsys):
    code, out, _ = run(capsys, "search", "treiber", "--axiom", "addrem", "--budget", "0")
    assert code == 0 and "AddRem: unknown" in out
