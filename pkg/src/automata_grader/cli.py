"""Command line entry point: validate, run, equiv and grade."""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import equiv
from .equiv import TestConfig
from .execute import LetterNotInAlphabet, RunBounds, run_dfa, run_pda, run_tm, tm_output
from .grade import AssignmentError, grade_submission, parse_assignment, render_gradescope_json
from .model import build_all, display_name
from .sexpr import SExprError, format_letter, parse_sexprs, parse_word, print_word, print_words

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise CliError(f"{path}: not an ASCII file ({exc.reason} at byte {exc.start})", EXIT_FAIL)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_IO)


def _load(path: str):
    text = _read(path)
    try:
        forms = parse_sexprs(text)
    except SExprError as exc:
        raise CliError(f"{path}: {exc}", EXIT_FAIL)
    results = [r for r in build_all(forms) if r.kind is not None]
    if not results:
        raise CliError(f"{path}: no gen-dfa, gen-pda or gen-tm forms found", EXIT_FAIL)
    return results


def _pick(path: str, name: str | None):
    results = _load(path)
    if name is not None:
        wanted = name.upper()
        results = [r for r in results if r.name == wanted]
        if not results:
            raise CliError(f"{path}: no machine named {name}", EXIT_FAIL)
    chosen = results[0]
    if not chosen.ok:
        lines = [f"{path}: {display_name(chosen.name or chosen.kind)} is not valid:"]
        lines += [f"  {e.message}" for e in chosen.errors]
        raise CliError("\n".join(lines), EXIT_FAIL)
    return chosen.machine


def cmd_validate(args) -> int:
    status = EXIT_OK
    for r in _load(args.file):
        label = display_name(r.name) if r.name else f"<unnamed gen-{r.kind}>"
        if r.ok:
            print(f"OK {label} ({r.kind})")
        else:
            status = EXIT_FAIL
            print(f"INVALID {label} ({r.kind})")
            for e in r.errors:
                print(f"  {e.message}")
    return status


def cmd_run(args) -> int:
    m = _pick(args.file, args.name)
    try:
        word = parse_word(args.word)
    except (SExprError, TypeError) as exc:
        raise CliError(f"--word: {exc}", EXIT_USAGE)
    try:
        if m.kind == "dfa":
            print(format_letter(run_dfa(m, word)))
        elif m.kind == "pda":
            print("t" if run_pda(m, word, args.depth).accepted else "nil")
        else:
            config = run_tm(m, word, args.steps)
            print(config.status)
            print(print_word(tm_output(m, word, args.steps)))
    except LetterNotInAlphabet as exc:
        raise CliError(str(exc), EXIT_FAIL)
    return EXIT_OK


def _describe(verdict: equiv.EquivVerdict, output=False) -> str:
    if verdict.outcome == equiv.ALPHABET_MISMATCH:
        return f"Alphabet mismatch: {format_letter(verdict.symbol)} is in only one alphabet."
    if verdict.equivalent:
        return f"Equivalent (by {verdict.by.lower()})."
    what = "Outputs differ" if output else "Not equivalent"
    return f"{what} (by {verdict.by.lower()}) on: {print_words(verdict.witnesses)}"


def cmd_equiv(args) -> int:
    student = _pick(args.student, None)
    reference = _pick(args.reference, None)
    if student.kind != reference.kind:
        raise CliError(f"cannot compare a {student.kind} with a {reference.kind}", EXIT_FAIL)
    try:
        cfg = TestConfig(num_tests=args.tests, max_word_len=args.max_len,
                         exhaustive_len=min(args.exhaustive_len, args.max_len), seed=args.seed,
                         bounds=RunBounds(args.depth, args.steps))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE)
    if args.exact_dfa and student.kind != "dfa":
        raise CliError("--exact-dfa needs two DFAs", EXIT_USAGE)
    if student.kind == "tm":
        verdict = equiv.test_equiv_tm_output(student, reference, cfg)
        if not verdict.equivalent:
            print(_describe(verdict, output=verdict.outcome == equiv.NOT_EQUIVALENT))
            return EXIT_FAIL
    if args.exact_dfa:
        verdict = equiv.decide_dfa_verdict(student, reference)
    else:
        verdict = equiv.test_equiv_lang(student, reference, cfg)
    print(_describe(verdict))
    return EXIT_OK if verdict.equivalent else EXIT_FAIL


def cmd_grade(args) -> int:
    assignment_text = _read(args.assignment)
    submission_text = _read(args.submission)
    if not assignment_text.strip():
        raise CliError(f"{args.assignment}: empty assignment file", EXIT_FAIL)
    try:
        a = parse_assignment(assignment_text)
    except AssignmentError as exc:
        raise CliError(f"{args.assignment}: {exc}", EXIT_FAIL)
    if args.seed is not None:
        try:
            a.cfg = dataclasses.replace(a.cfg, seed=args.seed)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE)
    report = grade_submission(a, submission_text)
    try:
        Path(args.out).write_text(render_gradescope_json(report) + "\n", encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{args.out}: {exc.strerror or exc}", EXIT_IO)
    print(report.summary)
    print(f"Score: {_fmt(report.overall_score)}/{_fmt(report.max_score)}")
    if args.strict and report.overall_score < report.max_score:
        return EXIT_FAIL
    return EXIT_OK


def _fmt(x) -> str:
    return str(int(x)) if x.denominator == 1 else str(float(x))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="automata-grader",
        description="Validate, run, compare and grade DFA/PDA/TM definitions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check every gen-x form in a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run a machine on one word")
    p.add_argument("file")
    p.add_argument("--name", help="machine name (default: first machine in the file)")
    p.add_argument("--word", required=True,
                   help='whitespace-separated letters, e.g. "0 1 1"; "" is the empty word')
    p.add_argument("--depth", type=int, default=1000, help="PDA execution-tree depth bound")
    p.add_argument("--steps", type=int, default=1000, help="TM step bound")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("equiv", help="compare a machine against a reference")
    p.add_argument("student")
    p.add_argument("reference")
    p.add_argument("--tests", type=int, default=1000)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--exhaustive-len", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=1000)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--exact-dfa", action="store_true",
                   help="decide DFA equivalence exactly instead of testing")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("grade", help="grade a submission and write Gradescope JSON")
    p.add_argument("--assignment", required=True)
    p.add_argument("--submission", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--strict", action="store_true", help="exit 1 unless the score is full")
    p.set_defaults(func=cmd_grade)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "depth", 1) < 1 or getattr(args, "steps", 1) < 1:
        print("error: --depth and --steps must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
