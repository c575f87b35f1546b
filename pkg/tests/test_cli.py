import json

import pytest
from click.testing import CliRunner

from lovx.cli import main, strip_timestamp


def run(*args):
    return CliRunner().invoke(main, list(args))


def report(*args):
    r = run(*args)
    assert r.exit_code == 0, r.output
    return json.loads(r.stdout)


def test_oracle_maxcut_k3():
    rep = report("oracle", "--problem", "maxcut", "--graph", "k3")
    assert rep["schema"] == "lovx/1" and rep["value"] == 2 and rep["witness_check"]


def test_solve_frustration_neg_k3():
    rep = report("solve", "--problem", "frustration", "--graph", "neg_k3", "--seed", "7")
    assert rep["value"] == 1 and rep["seed"] == 7 and rep["witness_check"]


def test_solve_other_algorithms():
    for algo in ("dinkelbach", "ipsd-gen"):
        rep = report("solve", "--problem", "mincut", "--graph", "p4", "--algo", algo)
        assert rep["value"] == 1
    rep = report("solve", "--problem", "frustration", "--graph", "neg_k3",
                 "--algo", "recursive-frustration")
    assert rep["value"] == 1


def test_solve_verify_certifies():
    r = run("solve", "--problem", "maxcut", "--graph", "c5", "--verify")
    assert r.exit_code in (0, 2)
    rep = json.loads(r.stdout)
    assert rep["value"] <= 4


def test_eigen_cut_p3():
    rep = report("eigen", "--pair", "cut", "--graph", "p3")
    assert rep["eigenvalues"] == [0, 1, 2]


def test_eval_point():
    rep = report("eval", "--problem", "maxcut", "--graph", "k3", "--x", "1,-1,-1")
    assert rep["ratio"] == 2


def test_literal_edge_list_and_params():
    rep = report("oracle", "--problem", "mincut", "--graph", "1 2\n2 3", "--base", "1")
    assert rep["value"] == 1
    rep = report("oracle", "--problem", "maxkcut", "--graph", "k3", "--param", "k=3")
    assert rep["value"] == 3


def test_tsv_output():
    r = run("oracle", "--problem", "maxcut", "--graph", "k3", "--output", "tsv")
    assert r.exit_code == 0 and "value\t2" in r.stdout


@pytest.mark.parametrize("args", [
    ("oracle", "--problem", "maxcut", "--graph", "0 0"),
    ("oracle", "--problem", "maxcut"),
    ("oracle", "--problem", "maxcut", "--graph", "k3", "--param", "novalue"),
    ("eval", "--problem", "maxcut", "--graph", "k3", "--x", "1,2"),
])
def test_config_errors_exit_1(args):
    assert run(*args).exit_code == 1


def test_check_all_passes():
    r = run("check")
    assert r.exit_code == 0, r.output
    rep = json.loads(r.stdout)
    assert rep["pass"] and len(rep["suites"]) == 4


def test_check_setfn_file(tmp_path):
    good = tmp_path / "cut.json"
    good.write_text(json.dumps({"n": 3, "values": {"100": 1, "010": 2, "001": 1, "110": 1,
                                                   "011": 1, "101": 2},
                                "claims": ["submodular"]}))
    assert run("check", "--setfn", str(good)).exit_code == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "values": {"10": 1, "01": 1, "11": 5},
                               "claims": ["submodular"]}))
    r = run("check", "--setfn", str(bad))
    assert r.exit_code == 2
    rep = json.loads(r.stdout)
    sub = [s for s in rep["suites"] if s["name"] == "submodular"][0]
    assert not sub["pass"] and sub["counterexample"]["witness"] is not None
    nz = tmp_path / "nz.json"
    nz.write_text(json.dumps({"n": 1, "values": {"0": 3, "1": 1}}))
    assert run("check", "--setfn", str(nz)).exit_code == 2


def test_eigen_from_files(tmp_path):
    f = tmp_path / "f.json"
    g = tmp_path / "g.json"
    f.write_text(json.dumps({"n": 2, "kind": "pair",
                             "values": {"10": 1, "01": 1, "12": 2, "21": 2, "20": 1, "02": 1}}))
    g.write_text(json.dumps({"n": 2, "kind": "pair",
                             "values": {k: 1 for k in ("10", "01", "12", "21", "20", "02",
                                                       "11", "22")}}))
    rep = report("eigen", "--pair", "file", "--setfn", str(f), "--gfn", str(g))
    assert rep["eigenvalues"]


def test_deterministic_reports():
    args = ("solve", "--problem", "cheeger", "--graph", "petersen", "--seed", "3",
            "--max-iter", "50")
    a, b = report(*args), report(*args)
    assert strip_timestamp(a) == strip_timestamp(b)
