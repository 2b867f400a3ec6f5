import json
import subprocess
import sys

import pytest

from genrep.cli import main

Z4 = '{"kind": "zn", "n": 4}'
F2 = '{"kind": "gf", "q": 2}'
FREE1 = '{"kind": "free", "rank": 1}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture()
def cache_dir(tmp_path):
    return str(tmp_path / "cache")


def test_simples_two_rows(capsys, cache_dir):
    code, out, _ = run(capsys, "simples", "--ring", Z4, "--max-length", "1", "--eval-upto", "3",
                       "--cache-dir", cache_dir)
    assert code == 0
    doc = json.loads(out)
    assert doc["tool"] == "genrep" and doc["ring"]["size"] == 4
    assert len(doc["result"]["rows"]) == 2
    assert doc["result"]["layers"] == [1, 1]


def test_verify_moebius(capsys, cache_dir):
    code, out, _ = run(capsys, "verify", "--suite", "moebius", "--ring", F2, "--cache-dir", cache_dir)
    assert code == 0 and json.loads(out)["result"]["ok"]


def test_decompose_four_coefficients(capsys, cache_dir):
    code, out, _ = run(capsys, "decompose", "--ring", Z4, "--module", FREE1, "--cache-dir", cache_dir)
    assert code == 0
    res = json.loads(out)["result"]
    assert len(res["QAM_basis"]) == 4
    assert res["bookkeeping"]["values"] == res["bookkeeping"]["expected"]


@pytest.mark.parametrize("verb,extra", [
    ("ring-info", []), ("modules-census", ["--max-length", "2"]),
    ("dim", ["--module", FREE1]), ("shift", ["--module", FREE1, "--irr", "0"]),
    ("fd-check", ["--module", FREE1, "--d", "1"]),
])
def test_verbs_succeed(capsys, cache_dir, verb, extra):
    code, out, _ = run(capsys, verb, "--ring", Z4, "--cache-dir", cache_dir, *extra)
    assert code == 0
    assert json.loads(out)["ok"]


def test_table_format(capsys):
    code, out, _ = run(capsys, "modules-census", "--ring", Z4, "--no-cache", "--format", "table")
    assert code == 0 and "class_id" in out


def test_exit_codes(capsys, tmp_path, cache_dir):
    assert run(capsys, "simples", "--ring", str(tmp_path / "none.json"))[0] == 2
    assert run(capsys, "simples", "--ring", Z4, "--frobnicate")[0] == 2
    assert run(capsys, "simples")[0] == 2
    assert run(capsys, "dim", "--ring", Z4, "--module", '{"kind": "x"}', "--no-cache")[0] == 2
    Z49 = '{"kind": "zn", "n": 49}'
    assert run(capsys, "modules-census", "--ring", Z49, "--max-length", "2",
               "--module-cap", "100", "--no-cache")[0] == 3


def test_invariant_violation_exit(capsys, monkeypatch):
    from genrep import cli
    from genrep.errors import InvariantViolation

    def boom(R, args, cache):
        raise InvariantViolation("synthetic", {"n": 1})

    monkeypatch.setitem(cli.VERBS, "ring-info", boom)
    code, _, err = run(capsys, "ring-info", "--ring", Z4)
    assert code == 4
    assert json.loads(err)["counterexample"] == {"n": 1}


def test_rerun_byte_identical(tmp_path):
    cmd = [sys.executable, "-m", "genrep.cli", "simples", "--ring", Z4, "--max-length", "2",
           "--cache-dir", str(tmp_path / "c")]
    cold = subprocess.run(cmd, capture_output=True, check=True).stdout
    warm = subprocess.run(cmd, capture_output=True, check=True).stdout
    nocache = subprocess.run(cmd[:-2] + ["--no-cache"], capture_output=True, check=True).stdout
    assert cold == warm
    # only the effective options differ
    a, b = json.loads(cold), json.loads(nocache)
    assert a["result"] == b["result"]
