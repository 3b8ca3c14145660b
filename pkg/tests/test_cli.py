import json
import subprocess
import sys

import pytest

from ffmzv.cli import main

# frozen from a run of ffmzv itself; the value it hashes is checked against the oracle below
ZETA_21_DIGEST = "369f362be698d19735571809b4cdb4957813e73d5ee5bfdc769024d0f1138ce9"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_zeta_digest_regression(capsys):
    code, js = run_json(capsys, "zeta", "--q", "2", "--s", "2,1", "--prec", "60")
    assert code == 0
    assert js["digest"] == ZETA_21_DIGEST
    assert js["schema"] == 1 and js["command"] == "zeta"


def test_zeta_value_matches_oracle(capsys):
    import oracles as o
    _, js = run_json(capsys, "zeta", "--q", "2", "--s", "2,1", "--prec", "60")
    got = {e: int(c) for e, c in js["result"]["value"]["coeffs"]}
    assert got == o.multizeta(2, (2, 1), -61)


def test_json_independent_of_threads(capsys):
    _, a, _ = run(capsys, "zeta", "--q", "3", "--s", "2,1", "--prec", "50", "--json", "--threads", "1")
    _, b, _ = run(capsys, "zeta", "--q", "3", "--s", "2,1", "--prec", "50", "--json", "--threads", "4")
    assert a == b


def test_text_mode_prints_manifest(capsys):
    code, out, _ = run(capsys, "gamma", "--q", "3", "--n", "4")
    assert code == 0
    line = [ln for ln in out.splitlines() if ln.startswith("manifest: ")][0]
    man = json.loads(line[len("manifest: "):])
    assert man["schema"] == 1 and man["field"]["q"] == 3
    assert man["command"] == ["gamma", "--q", "3", "--n", "4"]
    assert len(man["digest"]) == 64


def test_manifest_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, out, _ = run(capsys, "pi", "--q", "3", "--manifest", str(path))
    assert code == 0 and "manifest:" not in out
    man = json.loads(path.read_text())
    assert {"schema", "digest", "field", "precision", "version", "wall_time"} <= man.keys()


def test_symbolic_stuffle(capsys):
    code, out, _ = run(capsys, "stuffle", "--s", "1", "--sprime", "2", "--symbolic")
    assert code == 0
    terms = [ln for ln in out.splitlines() if ln.strip().startswith("+ Li_")]
    assert len(terms) == 5
    assert any("(s,s'1,s'2)(z,z'1,z'2)" in t for t in terms)


@pytest.mark.parametrize("argv", [
    ["stuffle", "--q", "3", "--s", "1", "--sprime", "2", "--z", "x", "--w", "1"],
    ["verify-decomposition", "--q", "3", "--s", "2,1"],
    ["verify-frobenius", "--q", "2", "--s", "1,2"],
    ["mz-check", "--q", "3", "--s", "2", "--zeta"],
    ["kronecker", "--q", "2", "--s", "1", "--sprime", "1", "--zeta"],
    ["relations", "--q", "3", "--prec", "120", "--value", "zeta:2", "--value", "pi:2", "--ring", "A:3",
     "--expect"],
    ["product-relation", "--q", "3", "--s", "1", "--sprime", "1", "--prec", "80"],
])
def test_checks_pass_and_corrupted_fail(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 0, argv
    code, _, _ = run(capsys, *argv, "--corrupt")
    assert code == 1, argv


def test_wrong_weight_exits_one(capsys):
    assert run(capsys, "mz-check", "--q", "3", "--s", "2", "--zeta", "--wrong-weight")[0] == 1


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "zeta", "--s", "0,1")[0] == 2
    assert run(capsys, "zeta", "--s", "2", "--prec", "-5")[0] == 2
    assert run(capsys, "zeta", "--q", "6", "--s", "2")[0] == 2
    assert run(capsys, "cmpl", "--q", "2", "--s", "1", "--z", "x^2")[0] == 2  # outside the domain
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "zeta")[0] == 2


def test_reconstruct(capsys):
    code, js = run_json(capsys, "reconstruct", "--q", "3", "--prec", "120", "--value", "zeta:2",
                        "--over", "pi:2", "--D", "3")
    assert code == 0 and js["result"]["result"] == "2/(2*x+x^3)"  # -1/D_1
    code, _ = run_json(capsys, "reconstruct", "--q", "3", "--prec", "80", "--value", "zeta:1", "--D", "3")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["powersum", "--q", "3", "--s", "2", "--d", "2"],
    ["cmpl", "--q", "3", "--s", "2,1", "--z", "x;1"],
    ["omega", "--q", "2"],
    ["bigD", "--q", "2", "--i", "2"],
    ["littleL", "--q", "2", "--i", "2"],
    ["at-poly", "--q", "3", "--n", "4"],
    ["decompose", "--q", "3", "--s", "4,5"],
    ["relations", "--q", "2", "--prec", "80", "--value", "zeta:1", "--value", "zeta:2", "--ring", "Fp"],
])
def test_other_commands(capsys, argv):
    code, js = run_json(capsys, *argv)
    assert code == 0 and js["result"]


def test_field_with_modulus(capsys):
    code, js = run_json(capsys, "zeta", "--q", "4", "--modulus", "1,1,1", "--s", "1", "--prec", "20")
    assert code == 0


def test_selftest_and_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ffmzv", "selftest"], capture_output=True, text=True,
                          timeout=600)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "FAIL" not in proc.stdout
