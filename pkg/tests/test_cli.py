from __future__ import annotations

import json
import subprocess
import sys

import pytest

from sympoly.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main, parse_cost
from sympoly.system import ConstraintSystem


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_vsasm3(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "vsasm", "--n", "3")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert json.loads(lines[0]) == {"n": 3, "entries": [[0, 1, 0], [1, -1, 1], [0, 1, 0]]}
    assert json.loads(lines[-1]) == {"count": 1}


@pytest.mark.parametrize("cls, n, count", [("asm", 4, 42), ("vsasm", 4, 0), ("HTSASM", 4, 10), ("qtsasm", 6, 0)])
def test_count(capsys, cls, n, count):
    code, out, _ = run(capsys, "count", "--class", cls, "--n", str(n))
    assert code == EXIT_OK and out.strip() == str(count)


def test_enumerate_output_independent_of_jobs(capsys):
    a = run(capsys, "enumerate", "--class", "dsasm", "--n", "4")
    b = run(capsys, "enumerate", "--class", "dsasm", "--n", "4", "--jobs", "2")
    assert a == b


def test_cap_exceeded(capsys):
    code, _, err = run(capsys, "count", "--class", "asm", "--n", "30")
    assert code == EXIT_USAGE and "cap" in err


def test_cap_override_warns(capsys):
    code, out, err = run(capsys, "count", "--class", "asm", "--n", "3", "--max-n", "9")
    assert code == EXIT_OK and out.strip() == "7" and "warning" in err


def test_unknown_class(capsys):
    with pytest.raises(SystemExit) as e:
        main(["count", "--class", "xyz", "--n", "3"])
    assert e.value.code == EXIT_USAGE


@pytest.mark.parametrize("fmt", ["ine", "json"])
def test_hrep_formats_round_trip(capsys, fmt):
    from sympoly.hrep import build_core
    from sympoly.asm import SymmetryClass

    code, out, _ = run(capsys, "hrep", "--class", "htsasm", "--n", "4", "--format", fmt)
    assert code == EXIT_OK
    parsed = ConstraintSystem.from_ine(out) if fmt == "ine" else ConstraintSystem.from_json(out)
    assert parsed == build_core(SymmetryClass.HTSASM, 4)


def test_hrep_cuts(capsys):
    code, out, _ = run(capsys, "hrep", "--class", "qtsasm", "--n", "4", "--cuts", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == EXIT_OK and sum(r["tag"].startswith("qtsasm:cut:") for r in rows) == 61


def test_hrep_cuts_wrong_class(capsys):
    code, _, _ = run(capsys, "hrep", "--class", "asm", "--n", "3", "--cuts")
    assert code == EXIT_USAGE


def test_hrep_full_even_vsasm_is_infeasible(capsys):
    from sympoly.lp import LPSolver

    _, out, _ = run(capsys, "hrep", "--class", "vsasm", "--n", "4", "--kind", "full", "--format", "json")
    assert not LPSolver(ConstraintSystem.from_json(out)).feasible


def test_solve(capsys, tmp_path):
    f = tmp_path / "cost.txt"
    f.write_text("3\n1 0 0\n0 1 0\n0 0 1\n")
    code, out, _ = run(capsys, "solve", "--class", "asm", "--cost", str(f))
    assert code == EXIT_OK
    assert json.loads(out) == {"class": "ASM", "n": 3, "value": "-1/1", "matrix": [[0, 1, 0], [1, -1, 1], [0, 1, 0]]}


def test_solve_json_cost(capsys, tmp_path):
    f = tmp_path / "cost.json"
    f.write_text(json.dumps({"entries": [[1, 2, 3], [4, 5, 6], [7, 8, 9]]}))
    code, out, _ = run(capsys, "solve", "--class", "vsasm", "--cost", str(f))
    assert code == EXIT_OK and json.loads(out)["value"] == "15/1"


def test_solve_empty_class(capsys, tmp_path):
    f = tmp_path / "cost.json"
    f.write_text(json.dumps([[0] * 4] * 4))
    code, out, _ = run(capsys, "solve", "--class", "vsasm", "--cost", str(f))
    assert code == EXIT_MISMATCH and "error" in json.loads(out)


@pytest.mark.parametrize("text", ["3\n1 0\n", "[[1, 2], [3]]", "{bad json", "2\n1 x\n0 0\n"])
def test_solve_malformed_cost(capsys, tmp_path, text):
    f = tmp_path / "cost"
    f.write_text(text)
    code, _, _ = run(capsys, "solve", "--class", "asm", "--cost", str(f))
    assert code == EXIT_USAGE


def test_solve_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--class", "asm", "--cost", str(tmp_path / "nope"))
    assert code == EXIT_USAGE and "cannot read" in err


def test_parse_cost_forms():
    assert parse_cost("2\n1 2\n3 4\n") == parse_cost("[[1, 2], [3, 4]]") == [[1, 2], [3, 4]]


def test_verify_dim(capsys):
    code, out, _ = run(capsys, "verify-dim", "--class", "dasasm", "--n", "5")
    assert code == EXIT_OK and json.loads(out)["status"] == "match"


def test_verify_facets(capsys):
    code, out, _ = run(capsys, "verify-facets", "--class", "dsasm", "--n", "3")
    assert code == EXIT_OK and json.loads(out) == {"claim": "facets DSASM n=3", "predicted": "5", "computed": "5", "status": "match"}


def test_verify_facets_report_only(capsys):
    code, out, _ = run(capsys, "verify-facets", "--class", "asm", "--n", "3", "--report-only")
    assert code == EXIT_OK and json.loads(out)["status"] == "report"


def test_verify_hull(capsys):
    code, out, _ = run(capsys, "verify-hull", "--class", "dsasm", "--n", "3", "--trials", "10")
    assert code == EXIT_OK and json.loads(out)["computed"] == "10/10"


def test_cuts_summary(capsys):
    code, out, _ = run(capsys, "cuts", "--n", "4")
    assert code == EXIT_OK and json.loads(out) == {"n": 4, "valid_signs": 249, "cuts": 61}


def test_cuts_separate(capsys, tmp_path):
    f = tmp_path / "y.json"
    f.write_text('["1/2", "0", "0", "1/2"]')
    code, out, _ = run(capsys, "cuts", "--n", "4", "--separate", str(f))
    v = json.loads(out)["violated"]
    assert code == EXIT_OK and v["coeffs"] == {"0": "1/1"} and v["rhs"] == "0/1"


def test_cuts_separate_wrong_length(capsys, tmp_path):
    f = tmp_path / "y.txt"
    f.write_text("0 0")
    code, _, _ = run(capsys, "cuts", "--n", "4", "--separate", str(f))
    assert code == EXIT_USAGE


def test_check(capsys, tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("3\n1 0 0\n0 1 0\n0 0 1\n")
    assert run(capsys, "check", "--class", "asm", str(f))[:2] == (EXIT_OK, "member\n")
    assert run(capsys, "check", "--class", "qtsasm", str(f))[:2] == (EXIT_MISMATCH, "not a member\n")


def test_check_malformed(capsys, tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("3\n1 0\n")
    assert run(capsys, "check", "--class", "asm", str(f))[0] == EXIT_USAGE


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "sympoly", "count", "--class", "asm", "--n", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "7\n"
