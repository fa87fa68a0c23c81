import contextlib
import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings

from conftest import polynomials
from fsing.cli import main, parse_primes
from fsing.groebner import Ideal, ideal_equal
from fsing.polynomial import PolyRing

QUARTIC = "x^4+y^4-z^4"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_iterate_golden(capsys):
    code, out, _ = run(capsys, "semilinear", "iterate", "--q", "3", "--A", "[0,1;1,x]", "--r", "2")
    assert code == 0
    assert out.strip() == "[1, x^3; x, x^4+1]"


def test_gb_golden(capsys):
    code, out, _ = run(capsys, "gb", "--p", "7", "--order", "lex", "--vars", "x,y", "--ideal", "x^2-y,x*y-1")
    assert code == 0
    assert out.splitlines() == ["basis: x + 6*y^2, y^3 + 6", "order: lex", "buchberger_criterion: True"]


def test_colon_and_member(capsys):
    _, out, _ = run(capsys, "colon", "--p", "3", "--vars", "x,y", "--ideal", "x^3,y^3", "--by", "x,y")
    assert out.strip() == "colon: x^2*y^2, x^3, y^3"
    _, out, _ = run(capsys, "member", "--p", "5", "--ideal", "x^2,y", "--f", "x")
    assert "member: False" in out


def test_bracket_power(capsys):
    _, out, _ = run(capsys, "bracket-power", "--p", "3", "--vars", "x,y", "--ideal", "x+y,y")
    assert "basis: x^3, y^3" in out


def test_lc_verdict_text(capsys):
    code, out, _ = run(capsys, "lc", "verdict", "--p", "5", "--f", QUARTIC)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "verdict: NOT_SIMPLE"
    assert "frobenius matrix: [[3, 0, 0], [0, 3, 0], [0, 0, 2]]" in lines
    assert "socle line z^2 / x*y: c = 2, ann = (z^2, x, y)" in lines


def test_lc_dual_check(capsys):
    _, out, _ = run(capsys, "lc", "dual-check", "--p", "5", "--f", QUARTIC)
    assert out.splitlines()[-1] == "all_pass: True"


def test_semilinear_stable_and_fixed(capsys):
    _, out, _ = run(capsys, "semilinear", "stable", "--q", "3", "--A", "[0,1;1,1]", "--r", "4", "--format", "json",
                    "--no-timing")
    levels = json.loads(out)["results"]["levels"]
    assert [lv["simple"] for lv in levels] == [True, True, True, False]
    assert levels[3]["stable_lines"] == 4
    _, out, _ = run(capsys, "semilinear", "fixed-basis", "--q", "3", "--A", "[0,1;1,1]")
    assert "extension_degree: 8" in out


def test_json_envelope_is_deterministic(capsys):
    argv = ["lc", "verdict", "--p", "5", "--f", QUARTIC, "--format", "json", "--no-timing"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    doc = json.loads(first)
    assert (doc["tool"], doc["schema_version"], doc["command"]) == ("fsing", 1, "lc verdict")
    assert doc["results"]["verdict"] == "NOT_SIMPLE"
    assert doc["hypotheses"]["hara_large_p_assumed"] is True
    assert "timing" not in doc


def test_json_has_timing_by_default(capsys):
    _, out, _ = run(capsys, "fedder", "--p", "7", "--ideal", "x^3+y^3+z^3", "--format", "json")
    assert "timing" in json.loads(out)


def test_job_file(tmp_path, capsys):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"command": "lc verdict", "p": 5, "f": QUARTIC, "no_socle": True}))
    code, out, _ = run(capsys, "--job", str(job), "--format", "json", "--no-timing")
    assert code == 0
    doc = json.loads(out)
    assert doc["job"]["no_socle"] is True
    assert doc["results"]["socle_lines"] == []


def test_job_file_without_command(tmp_path, capsys):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"p": 5}))
    code, _, err = run(capsys, "--job", str(job))
    assert code == 2 and "command" in err


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--primes", "3..13", "lc", "verdict", "--f", "x^5+y^5-z^5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["p"]) for r in rows] == [3, 5, 7, 11, 13]
    assert [r["verdict"] for r in rows] == ["SIMPLE", "INCONCLUSIVE", "SIMPLE", "NOT_SIMPLE", "SIMPLE"]
    assert [r["p_mod_d"] for r in rows] == ["3", "0", "2", "1", "3"]


def test_sweep_fedder_with_workers(capsys):
    code, out, _ = run(capsys, "sweep", "--primes", "13,5,7,11", "--workers", "2", "fedder", "--ideal", "x^3+y^3+z^3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["p"], r["p_mod_d"], r["f_pure"]) for r in rows] == [
        ("5", "2", "False"), ("7", "1", "True"), ("11", "2", "False"), ("13", "1", "True")]


def test_parse_primes():
    assert parse_primes("3..13") == [3, 5, 7, 11, 13]
    assert parse_primes("7,3,7") == [3, 7]


def test_parse_error_exit_and_caret(capsys):
    code, _, err = run(capsys, "member", "--p", "5", "--ideal", "x", "--f", "x+*y")
    assert code == 2
    assert "column 3" in err
    assert err.splitlines()[-1] == "    ^"


def test_unknown_variable(capsys):
    code, _, err = run(capsys, "member", "--p", "5", "--ideal", "x", "--f", "w")
    assert code == 2 and "unknown variable 'w'" in err


def test_polynomial_entry_over_field_is_a_usage_error(capsys):
    code, _, err = run(capsys, "semilinear", "fixed", "--q", "3", "--A", "[0,1;1,x]")
    assert code == 2 and "only constants" in err


@pytest.mark.parametrize("argv", [
    ["fedder", "--p", "6", "--ideal", "x"],
    ["gb", "--p", "5", "--max-basis", "2", "--ideal", "x^3*y - z^2 + 1,y^3*z - x^2 + 2,z^3*x - y^2 + 3"],
    ["lc", "verdict", "--p", "5", "--f", "x*z^3+y^4"],
    ["--job", "/nonexistent/job.json"],
])
def test_runtime_errors_exit_one(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert err.startswith("fsing: error: ")


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "fsing.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout


R5 = PolyRing(5, ["x", "y", "z"])


@settings(max_examples=30, deadline=None)
@given(polynomials(R5, max_deg=3, max_terms=4), polynomials(R5, max_deg=2, max_terms=3))
def test_gb_output_round_trips(f, g):
    gens = [h for h in (f, g) if not h.is_zero()]
    if not gens:
        return
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["gb", "--p", "5", "--ideal", ", ".join(map(str, gens)), "--format", "json", "--no-timing"])
    assert code == 0
    basis = [R5.parse(t) for t in json.loads(buf.getvalue())["results"]["basis"]]
    assert ideal_equal(Ideal(R5, basis), Ideal(R5, gens))


def test_gb_text_reparses(capsys):
    _, out, _ = run(capsys, "gb", "--p", "5", "--ideal", "x^2*y - z, y*z^2 + x", "--format", "json", "--no-timing")
    basis = json.loads(out)["results"]["basis"]
    for g in basis:
        assert str(R5.parse(g)) == g
