import json

import jsonschema
import pytest

import cubicsieve.sieve_numerics as sn
from cubicsieve.cli import build_parser, rational, read_config, run
from cubicsieve.report import dumps, load_schema


def _run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_constants_example(capsys):
    code, doc = _run_json(capsys, ["constants", "--tau", "5/67", "--tol", "5e-4"])
    assert code == 0
    assert doc["result"]["c3"]["value"] == pytest.approx(-0.187, abs=0.005)
    assert doc["result"]["tau"] == "5/67"
    jsonschema.validate(doc, load_schema())


def test_census_example(capsys):
    code, doc = _run_json(capsys, ["census", "--X", "10", "--eta", "0.5", "--Ylo", "4", "--Yhi", "6"])
    assert code == 0 and doc["result"]["pairs"] == 6 and doc["result"]["primes"] == 1


def test_hb_example(capsys):
    code, doc = _run_json(capsys, ["hb-identity", "--k", "2", "--U", "20"])
    assert code == 0 and doc["result"]["max_abs_residual"] <= 1e-9


@pytest.mark.parametrize("argv", [
    ["constants", "--bogus"],
    ["constants", "--tau", "abc"],
    ["constants", "--tol", "-1"],
    ["census", "--X", "10", "--eta", "3"],
    ["census", "--X", "10", "--Ylo", "4"],
    ["frobnicate"],
    [],
])
def test_validation_exit_2(capsys, argv):
    assert run(argv) == 2


def test_rational_parsing():
    assert str(rational("5/67")) == "5/67"
    assert str(rational("0.07")) == "7/100"


def test_csv_output(capsys):
    assert run(["sigma0", "--pmax", "10", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("key,value\n")
    assert "result.value,1.1428571428571428" in out


def test_typeI_csv_table(capsys):
    assert run(["typeI", "--X", "200", "--Q", "300", "--samples", "3", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "R,dual,main,norm,observed,residual" and len(lines) == 4


def test_out_file_and_determinism(tmp_path):
    a = tmp_path / "a.json"
    assert run(["constants", "--out", str(a)]) == 0
    first = a.read_bytes()
    assert run(["constants", "--out", str(a)]) == 0
    assert a.read_bytes() == first
    doc = json.loads(a.read_text())
    assert doc["manifest"]["outputs"] == [str(a)]
    assert "wall_time" not in doc["manifest"]


def test_timing_flag(capsys):
    code, doc = _run_json(capsys, ["sigma0", "--pmax", "100", "--timing"])
    assert code == 0 and doc["manifest"]["wall_time"] >= 0


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample\npmax = 10\n")
    code, doc = _run_json(capsys, ["sigma0", "--config", str(cfg)])
    assert code == 0 and doc["result"]["p_max"] == 10
    code, doc = _run_json(capsys, ["sigma0", "--config", str(cfg), "--pmax", "100"])
    assert doc["result"]["p_max"] == 100
    cfg.write_text("nonsense = 1\n")
    assert run(["sigma0", "--config", str(cfg)]) == 2
    assert read_config(str(tmp_path / "run.cfg")) == {"nonsense": "1"}


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("CSL_THREADS", "2")
    code, doc = _run_json(capsys, ["census", "--X", "10", "--eta", "0.5", "--Ylo", "4", "--Yhi", "6"])
    assert code == 0 and doc["manifest"]["config"]["threads"] == 2


def test_dumps_float_format():
    assert dumps({"b": 0.1, "a": 1.0}) == '{\n  "a": 1.0,\n  "b": 0.10000000000000001\n}'


def test_selftest_subset(capsys):
    code, doc = _run_json(capsys, ["selftest", "--only", "9"])
    assert code == 0 and doc["result"]["passed"]
    assert [c["number"] for c in doc["result"]["criteria"]] == [9]


def test_selftest_quick_skips_census(monkeypatch):
    import cubicsieve.acceptance as acc

    called = []
    for n in list(acc.CRITERIA):
        monkeypatch.setitem(acc.CRITERIA, n, lambda n=n: called.append(n) or acc.CriterionResult(n, "x", True, 0.0))
    acc.run_all(quick=True)
    assert 7 not in called and {3, 4, 5, 6} <= set(called)


def test_tampered_F_fails_selftest(monkeypatch, capsys):
    orig = sn.F_linear
    monkeypatch.setattr(sn, "F_linear", lambda s: 1.01 * orig(s))
    code, doc = _run_json(capsys, ["selftest", "--only", "1"])
    assert code == 3
    assert doc["result"]["criteria"][0]["checks"] == {"paths_agree": False}


def test_parser_lists_all_commands():
    sub = build_parser()._subparsers._group_actions[0].choices
    assert set(sub) == {"constants", "census", "typeI", "buchstab", "hb-identity", "sigma0", "selftest", "report"}
