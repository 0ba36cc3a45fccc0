"""Command line surface: output formats, determinism, exit codes."""

import json

import pytest

from ellop.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_indicial_known_roots(capsys):
    code, out, _ = run(capsys, "indicial", "--n", "2", "--b2", "-6")
    assert code == 0
    assert json.loads(out) == {"n": 2, "roots": ["-2", "3"]}


def test_indicial_rational_coefficient(capsys):
    code, out, _ = run(capsys, "indicial", "--n", "2", "--b2=-3/4")
    assert code == 0
    assert json.loads(out)["roots"] == ["-1/2", "3/2"]


def test_homog_check(capsys):
    code, out, _ = run(capsys, "homog-check", "--n", "3", "--indices=-1,1,3")
    assert code == 0
    assert json.loads(out)["integrable"] is True
    code, out, _ = run(capsys, "homog-check", "--n", "3", "--indices", "0,1,3")
    assert json.loads(out)["integrable"] is False


def test_constraints_known_condition(capsys):
    code, out, _ = run(capsys, "constraints", "--q", "2", "--r", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 3
    assert [c["poly"] for c in doc["conditions"]] == ["3*c + e^2"]


def test_locus_csv(capsys):
    code, out, _ = run(capsys, "locus", "--r", "2", "--q-max", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("r,q,branch,classification")
    assert len(lines) == 3
    assert all(line.split(",")[3] == "one-parameter-family"
               for line in lines[1:])


def test_locus_rejects_invalid_r(capsys):
    code, _, err = run(capsys, "locus", "--r", "3")
    assert code == 2
    assert "does not occur" in err


def test_reconstruct(capsys):
    code, out, _ = run(capsys, "reconstruct", "--r", "2", "--quantity", "c/e2")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "(-3)/(q^2 + 2*q + 1)"


def test_jtable(capsys):
    code, out, _ = run(capsys, "jtable", "--r", "1", "--count", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "q,j"
    assert len(lines) == 3


def test_commute_found_and_not_found(capsys):
    code, out, _ = run(capsys, "commute", "--operator", "second:a=-2",
                       "--order", "3")
    assert code == 0
    assert json.loads(out)["found"] is True
    code, out, _ = run(capsys, "commute", "--operator", "second:a=-5/2",
                       "--order", "3")
    assert code == 0
    assert json.loads(out)["found"] is False


def test_commute_rejects_numeric_operator(capsys):
    code, _, err = run(capsys, "commute", "--operator", "second:a=-2.5",
                       "--order", "3")
    assert code == 2
    assert "exact" in err


def test_cm2_residuals(capsys):
    code, out, _ = run(capsys, "cm2-residuals",
                       "--points", "0.3+0.2j;0.8+0.2j", "--mults", "1,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["max_abs"] < 1e-10


def test_cm3_solve(capsys):
    code, out, _ = run(capsys, "cm3-crit",
                       "--points", "0.21+0.11j;0.62-0.07j",
                       "--momenta", "0.4;-0.4", "--c", "1.0", "--solve")
    assert code == 0
    doc = json.loads(out)
    assert doc["success"] is True
    assert doc["residual_norm"] < 1e-10


def test_monodromy_json(capsys):
    code, out, _ = run(capsys, "monodromy", "--operator", "second:a=-2",
                       "--lambda", "1.5")
    assert code == 0
    doc = json.loads(out)
    assert doc["deviation"] < 1e-8
    assert abs(complex(*doc["determinant"]) - 1) < 1e-8


def test_outputs_are_deterministic(capsys):
    first = run(capsys, "monodromy", "--operator", "second:a=-2",
                "--lambda", "2.0")
    second = run(capsys, "monodromy", "--operator", "second:a=-2",
                 "--lambda", "2.0")
    assert first == second
    a = run(capsys, "locus", "--r", "5")
    b = run(capsys, "locus", "--r", "5")
    assert a == b


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "indicial")[0] == 2                       # missing --n
    assert run(capsys, "constraints", "--q", "3", "--r", "3")[0] == 2
    assert run(capsys, "monodromy", "--operator", "junk:x=1",
               "--lambda", "1")[0] == 2


def test_verify_paper_passes(capsys):
    code, out, _ = run(capsys, "verify-paper")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "11/11 criteria passed"
    assert sum(1 for ln in lines if ln.startswith("PASS")) == 11
    assert not any(ln.startswith("FAIL") for ln in lines)
