import json

import pytest

from invspan.cli import main
from invspan.replay import GOLDEN_DIR


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_optimal(capsys):
    code, out, _ = run(capsys, "solve", str(GOLDEN_DIR / "case_1.1.json"))
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "optimal" and doc["span"] == "1"


def test_solve_infeasible(capsys):
    code, out, _ = run(capsys, "solve", str(GOLDEN_DIR / "case_1.2.2.json"))
    assert code == 2
    assert json.loads(out)["status"] == "infeasible"


def test_solve_trace_and_certificate(capsys):
    code, out, _ = run(capsys, "solve", "--trace", "--certificate", str(GOLDEN_DIR / "case_1.1.json"))
    doc = json.loads(out)
    assert code == 0
    assert doc["trace"]["steps"][0]["case"] == "1.1"
    assert doc["certificate"]["value"] == "1"


def test_multi_needs_flag(capsys):
    path = str(GOLDEN_DIR / "two_costs.json")
    code, _, err = run(capsys, "solve", path)
    assert code == 1 and "--multi" in err
    code, out, _ = run(capsys, "solve", "--multi", path)
    doc = json.loads(out)
    assert code == 0 and (doc["delta"], doc["Delta"]) == ("1", "0")


def test_malformed_weights(tmp_path, capsys):
    run(capsys, "gen", "--seed", "3", "--n", "3", "-o", str(tmp_path / "i.json"))
    doc = json.loads((tmp_path / "i.json").read_text())
    doc["weights"]["e1"] = "heavy"
    (tmp_path / "bad.json").write_text(json.dumps(doc))
    code, _, err = run(capsys, "solve", str(tmp_path / "bad.json"))
    assert code == 1 and "weights" in err


def test_gen_is_deterministic(capsys):
    _, a, _ = run(capsys, "gen", "--seed", "1", "--n", "4")
    _, b, _ = run(capsys, "gen", "--seed", "1", "--n", "4")
    assert a == b


def test_gen_unbounded_has_no_finite_bounds(capsys):
    _, out, _ = run(capsys, "gen", "--seed", "2", "--bound-style", "unbounded")
    doc = json.loads(out)
    assert "lower" not in doc and "upper" not in doc


def test_gen_rejects_bad_denoms(capsys):
    with pytest.raises(SystemExit):
        main(["gen", "--weight-denoms", "0,x"])


def test_verify_golden_directory(capsys):
    code, out, _ = run(capsys, "verify", "--reduced", "--feasibility", str(GOLDEN_DIR))
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert len(doc["files"]) == len(list(GOLDEN_DIR.glob("*.json")))


def test_verify_solution_and_tampering(tmp_path, capsys):
    inst = tmp_path / "i.json"
    run(capsys, "gen", "--seed", "4", "--n", "4", "--bound-style", "box", "-o", str(inst))
    code, out, _ = run(capsys, "solve", str(inst))
    sol = json.loads(out)
    (tmp_path / "s.json").write_text(out)
    code, _, _ = run(capsys, "verify", str(inst), "--solution", str(tmp_path / "s.json"))
    assert code == 0
    if sol["status"] == "optimal":
        sol["span"] = str(int(sol["span"].split("/")[0]) + 7)
    else:
        sol["status"] = "optimal"
    (tmp_path / "t.json").write_text(json.dumps(sol))
    code, out, _ = run(capsys, "verify", str(inst), "--solution", str(tmp_path / "t.json"))
    assert code == 3
    assert not json.loads(out)["ok"]


def test_verify_random_batch(tmp_path, capsys):
    for seed in range(10):
        run(capsys, "gen", "--seed", str(seed), "--n", "4", "-o", str(tmp_path / f"{seed}.json"))
    code, out, _ = run(capsys, "verify", "--full", "--reduced", "--feasibility", str(tmp_path))
    assert code == 0, out


def test_minmax(capsys):
    code, out, _ = run(capsys, "minmax", str(GOLDEN_DIR / "case_1.1.json"))
    assert code == 0 and json.loads(out)["value"] == "1"
    code, _, err = run(capsys, "minmax", str(GOLDEN_DIR / "case_1.2.1.json"))
    assert code == 1 and "bounds" in err
