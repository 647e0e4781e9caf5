import json

import pytest

from automata_grader.cli import main

from conftest import SAMPLES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_run_dfa(capsys):
    code, out, _ = run(capsys, "run", SAMPLES / "dfa/stage3.lisp", "--word", "0 1 1 1")
    assert code == 0 and out == "E2\n"


def test_run_pda_and_tm(capsys):
    assert run(capsys, "run", SAMPLES / "pda/stage2.lisp", "--word", "")[1] == "nil\n"
    assert run(capsys, "run", SAMPLES / "pda/stage2.lisp", "--word", "0 1", "--depth", "10")[1] == "t\n"
    code, out, _ = run(capsys, "run", SAMPLES / "tm/stage3.lisp", "--word", "1 0 1 1 1 0 1 0")
    assert out == "Accepted\n'(0 1 0 0 0 1 0 1)\n"


def test_run_by_name(capsys):
    code, out, _ = run(capsys, "run", SAMPLES / "dfa/assignment.lisp", "--name", "instructor-dfa",
                       "--word", "1")
    assert out == "ODD\n"


def test_run_letter_outside_alphabet(capsys):
    code, _, err = run(capsys, "run", SAMPLES / "dfa/stage3.lisp", "--word", "0 7")
    assert code == 1 and "not in the alphabet" in err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", SAMPLES / "tm/stage1.lisp")
    assert code == 1
    assert "Blank tape symbol nil missing from tape-alphabet." in out
    code, out, _ = run(capsys, "validate", SAMPLES / "tm/stage3.lisp")
    assert code == 0 and out == "OK student-tm (tm)\n"


def test_equiv_paths(capsys):
    code, out, _ = run(capsys, "equiv", SAMPLES / "dfa/stage3.lisp", SAMPLES / "dfa/assignment.lisp",
                       "--exact-dfa")
    assert code == 1 and "'(1 1 1)" in out and "decision" in out
    code, out, _ = run(capsys, "equiv", SAMPLES / "dfa/stage3.lisp", SAMPLES / "dfa/assignment.lisp")
    assert code == 1 and "testing" in out
    code, out, _ = run(capsys, "equiv", SAMPLES / "dfa/stage2.lisp", SAMPLES / "dfa/assignment.lisp")
    assert code == 1 and "Alphabet mismatch" in out
    code, out, _ = run(capsys, "equiv", SAMPLES / "tm/stage3.lisp", SAMPLES / "tm/assignment.lisp",
                       "--tests", "100", "--seed", "4")
    assert code == 0 and out.startswith("Equivalent")


def test_grade_writes_json(capsys, tmp_path):
    out_file = tmp_path / "results.json"
    code, out, _ = run(capsys, "grade", "--assignment", SAMPLES / "pda/assignment.lisp",
                       "--submission", SAMPLES / "pda/stage3-epsilon.lisp", "--out", out_file)
    assert code == 0
    assert out.splitlines()[0] == "student-pda is correct."
    data = json.loads(out_file.read_text())
    assert data["tests"][-1]["output"] == "student-pda is correct."


def test_grade_failure_is_not_a_process_error(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    argv = ["grade", "--assignment", SAMPLES / "dfa/assignment.lisp",
            "--submission", SAMPLES / "dfa/stage2.lisp", "--out", out_file]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.startswith("Incorrect alphabet provided.")
    assert run(capsys, *argv, "--strict")[0] == 1


def test_grade_is_byte_identical(capsys, tmp_path):
    outputs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        _, out, _ = run(capsys, "grade", "--assignment", SAMPLES / "tm/assignment.lisp",
                        "--submission", SAMPLES / "tm/stage2.lisp", "--out", path, "--seed", "99")
        outputs.append((out, path.read_bytes()))
    assert outputs[0] == outputs[1]


def test_empty_inputs(capsys, tmp_path):
    empty = tmp_path / "empty.lisp"
    empty.write_text("")
    for argv in (["validate", empty], ["run", empty, "--word", "0"],
                 ["equiv", empty, SAMPLES / "dfa/assignment.lisp"],
                 ["grade", "--assignment", empty, "--submission", empty, "--out", tmp_path / "x"]):
        code, _, err = run(capsys, *argv)
        assert code == 1 and err
    code, out, _ = run(capsys, "grade", "--assignment", SAMPLES / "dfa/assignment.lisp",
                       "--submission", empty, "--out", tmp_path / "y.json")
    assert code == 0 and "No gen-dfa form" in out


def test_missing_file_is_io_error(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "nope.lisp")[0] == 3


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    assert run(capsys, "run", SAMPLES / "dfa/stage3.lisp", "--word", "(0")[0] == 2
    assert run(capsys, "run", SAMPLES / "pda/stage2.lisp", "--word", "0", "--depth", "0")[0] == 2
