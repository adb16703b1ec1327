import io
import json
import subprocess
import sys

import pytest

from tetrarefl.cli import main
from tetrarefl.verifier import DATA_DIR, VerificationReport


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_verify_tre_sample():
    code, text = run("verify", "tre", "--backend", "sample", "--samples", "500", "--seed", "7")
    assert code == 0 and "PASS" in text and "500 instances" in text


def test_verify_tre_super_exhaustive():
    code, text = run("verify", "tre-super", "--backend", "exhaustive", "--bound", "4")
    assert code == 0 and "50000 instances" in text


def test_verify_unknown_equation(capsys):
    code, _ = run("verify", "no-such-eq")
    assert code == 2
    err = capsys.readouterr().err
    assert "te-super-1" in err and "tre" in err


def test_verify_with_rebinding_and_lambda():
    assert run("verify", "te", "--map", "R=3dr-vec")[0] == 0
    assert run("verify", "te", "--map", "R=3dr-electrical", "--lambda", "symbolic")[0] == 0
    assert run("verify", "tre-1para", "--lambda", "2/3", "--samples", "20")[0] == 0
    assert run("verify", "te", "--map", "R=3dm")[0] == 2
    assert run("verify", "te", "--map", "R")[0] == 2
    assert run("verify", "te", "--lambda", "0.5")[0] == 2


def test_verify_failure_exit_code():
    code, text = run("boundarize", "3dr", "--match", "3dj-electrical", "--lambda", "1",
                     "--backend", "sample", "--samples", "5")
    assert code == 1 and "input:" in text


def test_boundarize_point():
    code, text = run("boundarize", "3dr", "--point", "1,1,1,1")
    assert code == 0 and text.strip() == "1/5, 5/3, 9/5, 1/3"
    code, text = run("boundarize", "super-T", "--point", "0,0,3,0")
    assert text.strip() == "1, 0, 2, 1"


def test_boundarize_match():
    code, text = run("boundarize", "3dr", "--match", "3dj", "--backend", "symbolic")
    assert code == 0 and "proved" in text
    code, _ = run("boundarize", "super-T", "--match", "3dx", "--backend", "exhaustive", "--bound", "8")
    assert code == 0
    assert run("boundarize", "3dr")[0] == 0
    assert run("boundarize", "3dj")[0] == 2
    assert run("boundarize", "3dr", "--match", "3dx")[0] == 2


def test_eval_examples():
    assert run("eval", "R[3,4,6]", "--map", "R=3dr", "--state", "1,1,1,1,1,1")[1].strip() == \
        "1, 1, 1/2, 2, 1, 1/2"
    assert run("eval", "", "--state", "5")[1].strip() == "5"
    assert run("eval", "N[3,4,6]", "--map", "N=3dn", "--state", "1,0,0,3,0,0")[1].strip() == \
        "1, 0, 1, 2, 0, 1"
    text = run("eval", "R[1,2,3]", "--map", "R=3dr-vec", "--state", "1:2,1:1,1:1")[1]
    assert text.strip() == "1/2:4/3, 2:3/2, 1/2:2/3"


def test_eval_errors(capsys):
    assert run("eval", "R[1,2,3] ?", "--map", "R=3dr", "--state", "1,1,1")[0] == 2
    assert "^" in capsys.readouterr().err
    assert run("eval", "R[1,2,3]", "--state", "1,1,1")[0] == 2
    assert run("eval", "R[1,2,3]", "--map", "R=3dr", "--state", "1,1")[0] == 2
    assert run("eval", "N[1,2,3]", "--map", "N=3dn", "--state", "2,0,0")[0] == 2


def test_trace_commands(tmp_path):
    code, text = run("trace", "A", "--samples", "20", "--seed", "1")
    assert code == 0 and text.count("pass") == 27
    code, _ = run("trace", "B", "--bound", "2")
    assert code == 0
    lines = (DATA_DIR / "appendix_a.txt").read_text().splitlines()
    data = [i for i, l in enumerate(lines) if l.strip() and not l.startswith("#")]
    lines[data[11]] = lines[data[11]].replace("R[2,3,4]", "R[2,4,3]", 1)
    path = tmp_path / "a.txt"
    path.write_text("\n".join(lines) + "\n")
    code, text = run("trace", "A", "--samples", "5", "--file", str(path))
    assert code == 1
    assert f"line 12 differs from line 1 (file line {data[11] + 1})" in text
    assert "line  12  fail" in text and "line  11  pass" in text


def test_trace_rejects_bad_backend():
    assert run("trace", "A", "--backend", "exhaustive")[0] == 2
    assert run("trace", "A", "--backend", "symbolic")[0] == 2
    assert run("trace", "C")[0] == 2


def test_list():
    code, text = run("list")
    assert code == 0 and "3dr-electrical" in text and "r20-super" in text and "<-> 3dx" in text


@pytest.mark.parametrize("argv", [
    ("verify", "te", "--backend", "sample", "--samples", "30", "--seed", "3"),
    ("verify", "te-super-1"),
    ("boundarize", "3dr", "--point", "1,2,3,4"),
    ("eval", "R[1,2,3]", "--map", "R=3dr", "--state", "1,2,3"),
    ("trace", "B", "--samples", "10"),
    ("verify", "tre", "--map", "J=3dj-crystal"),
])
def test_structured_output_round_trips_and_is_stable(argv):
    first = run(*argv, "--format", "structured")[1]
    second = run(*argv, "--format", "structured")[1]
    if first.startswith("{"):
        assert first == second
        report = VerificationReport.from_json(first)
        assert report.to_json() + "\n" == first


def test_timing_flag():
    text = run("verify", "te", "--format", "structured", "--timing")[1]
    assert isinstance(json.loads(text)["elapsed_ms"], int)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tetrarefl.cli", "boundarize", "3dr", "--point", "1,1,1,1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "1/5, 5/3, 9/5, 1/3"
