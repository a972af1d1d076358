import io as _io
import json

import pytest

from ainftycat.cli import run


def call(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_validate_pt():
    code, out, _ = call("validate", "examples/pt.json")
    assert code == 0 and "valid" in out and "INVALID" not in out


def test_hh_dual0_json():
    code, out, _ = call("hh", "examples/dual0.json", "--degree", "2", "--length", "3", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["dim"] >= 1
    reps = [c["representative"] for c in rep["result"]["classes"]]
    assert [[2, ["X", "X", "X"], ["X|X:x", "X|X:x"], "X|X:e", "1"]] in reps


def test_e1():
    code, out, _ = call("e1", "--betti-m", "0:1,2:3", "--betti-bd", "0:1", "--p", "0", "--q", "2")
    assert code == 0 and out.strip() == "3"


def test_sh2_bound():
    code, out, _ = call("sh2-bound", "--betti-m", "2:3", "--betti-bd", "0:1")
    assert code == 0 and out.strip() == "4"


def test_bad_input_exit_1(tmp_path):
    assert call("validate", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert call("validate", str(bad))[0] == 1
    assert call("hh", "pt")[0] == 1  # --degree missing
    assert call("frobnicate", "pt")[0] == 1
    assert call("hom", "pt", "--source", "Q", "--target", "X")[0] == 1
    assert call("hh", "dual_t", "--degree", "2")[0] == 1
    assert call("iso-laurent", "rankjump", "--source", "X", "--target", "Y", "--window", "2,1")[0] == 1


def test_budget_exit_2():
    code, out, _ = call("quasi-iso", "sph_2", "--source", "S+S", "--target", "S", "--budget", "1")
    assert code == 2 and "within budget" in out
    code, _, err = call("generate", "pt", "--generators", "X", "--target", "X[5]", "--depth", "3", "--budget", "2")
    assert code == 2 and "budget" in err


def test_negative_results_exit_0():
    code, out, _ = call("quasi-iso", "pt", "--source", "X", "--target", "X[1]", "--json")
    assert code == 0 and json.loads(out)["result"]["found"] is False
    code, out, _ = call("mc-solve", "curved", "--json")
    assert code == 0 and json.loads(out)["result"]["X"]["status"] == "obstructed"


@pytest.mark.parametrize("argv", [
    ["h0", "a2"],
    ["hom", "a2", "--source", "X", "--target", "Cone(a)"],
    ["cone", "a2", "--source", "X", "--target", "Y", "--class", "0"],
    ["twist", "sph_2", "--sphere", "S", "--object", "S", "--compare", "S[-1]"],
    ["karoubi", "dual0", "--object", "X+X", "--target", "X", "--limit", "2"],
    ["generate", "a2", "--generators", "X,Y", "--target", "Cone(a)", "--depth", "1"],
    ["deform-validate", "dual_t"],
    ["mc-solve", "solvable"],
    ["egl", "rankjump"],
    ["gen-fibre", "rankjump", "--source", "Z", "--target", "Z"],
    ["iso-laurent", "rankjump", "--source", "X", "--target", "Y"],
    ["defclass", "dual_t"],
    ["reparam", "dual_t", "--series", "1:2"],
])
def test_commands_deterministic(argv):
    a = call(*argv, "--json")
    b = call(*argv, "--json")
    assert a[0] == 0 and a == b
    json.loads(a[1])
    assert call(*argv)[0] == 0


def test_seed_env(monkeypatch):
    monkeypatch.setenv("AINFTY_SEED", "17")
    assert json.loads(call("h0", "pt", "--json")[1])["seed"] == 17
    assert json.loads(call("h0", "pt", "--json", "--seed", "3")[1])["seed"] == 3
    monkeypatch.setenv("AINFTY_SEED", "x")
    assert call("h0", "pt")[0] == 1


def test_trunc_override():
    code, out, _ = call("mc-solve", "solvable", "--trunc", "3", "--json")
    assert code == 0
    assert json.loads(out)["result"]["X"]["parameter_dims"] == [0, 0]


def test_reparam_outputs_instance():
    code, out, _ = call("reparam", "dual_t", "--series", "1:2", "--json")
    res = json.loads(out)["result"]
    assert res["class_after"] == ["2"] and res["instance"]["format"] == "ainfty-v1"


def test_iso_laurent_window():
    code, out, _ = call("iso-laurent", "rankjump", "--source", "X", "--target", "Y", "--window", "0,0", "--json")
    assert code == 0 and json.loads(out)["result"]["found"] is False
