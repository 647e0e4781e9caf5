"""Grade a submission against an assignment and render Gradescope results JSON."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import equiv
from .equiv import TestConfig
from .execute import LetterNotInAlphabet, RunBounds, accepts, tm_output
from .model import InvalidMachine, Machine, build_all, build_machine, display_name, machine_kind
from .properties import PropertyError, PropertySpec, check_property, parse_property, \
    property_options, validate_property
from .sexpr import (
    NIL,
    T,
    Integer,
    Keyword,
    SExpr,
    SExprError,
    SList,
    Symbol,
    parse_sexprs,
    print_sexpr,
    print_word,
    print_words,
    word_from_sexpr,
)

ALPHABET_FEEDBACK = "Incorrect alphabet provided."
MISCLASSIFIED_FEEDBACK = "Transition function error. The following words are misclassified:"
OUTPUT_FEEDBACK = "Incorrect output produced when running submitted TM on the following words :"
CORRECT_FEEDBACK = "{name} is correct."

STUDENT_ALIASES = ("STUDENT",)
REFERENCE_ALIASES = ("REFERENCE", "INSTRUCTOR")


class AssignmentError(ValueError):
    pass


@dataclass(frozen=True)
class Points:
    validity: Fraction = Fraction(0)
    alphabet: Fraction = Fraction(0)
    equivalence: Fraction = Fraction(100)
    check: Fraction = Fraction(0)     # default for each unit check
    property: Fraction = Fraction(0)  # default for each property


@dataclass(frozen=True)
class UnitCheck:
    word: tuple
    expected: object  # bool for accept checks, a tuple for output checks
    kind: str = "accept"  # "accept" | "output"
    subject: str = "student"  # "student" | "reference"
    points: Fraction | None = None

    def describe(self) -> str:
        if self.kind == "accept":
            return f"accept {print_word(self.word)}"
        return f"output {print_word(self.word)}"


@dataclass
class Assignment:
    kind: str
    reference: Machine
    cfg: TestConfig = field(default_factory=TestConfig)
    checks: list[UnitCheck] = field(default_factory=list)
    properties: list[tuple[PropertySpec, Fraction | None]] = field(default_factory=list)
    points: Points = field(default_factory=Points)
    use_dfa_decision: bool = True
    student_name: str | None = None

    def student_names(self) -> set:
        names = set(STUDENT_ALIASES)
        names.add(self.student_name or f"STUDENT-{self.kind.upper()}")
        return names

    def machines(self, student: Machine | None = None) -> dict:
        """Name table for properties: the reference always, the student when given."""
        table = {name: self.reference for name in REFERENCE_ALIASES}
        table[self.reference.name] = self.reference
        target = student if student is not None else self.reference
        for name in self.student_names():
            table[name] = target
        if student is not None:
            table[student.name] = student
        return table


@dataclass
class GradeItem:
    name: str
    score: Fraction
    max_score: Fraction
    passed: bool
    feedback: str = ""
    witnesses: tuple = ()


@dataclass
class GradeReport:
    items: list[GradeItem] = field(default_factory=list)

    @property
    def overall_score(self) -> Fraction:
        return sum((i.score for i in self.items), Fraction(0))

    @property
    def max_score(self) -> Fraction:
        return sum((i.max_score for i in self.items), Fraction(0))

    @property
    def summary(self) -> str:
        return self.items[-1].feedback if self.items else ""

    def item(self, name: str) -> GradeItem:
        for i in self.items:
            if i.name == name:
                return i
        raise KeyError(name)


# Assignment files

def _int(expr: SExpr, label: str) -> int:
    if not isinstance(expr, Integer):
        raise AssignmentError(f"{label} must be an integer, got {print_sexpr(expr)}")
    return expr.value


def _points_value(expr: SExpr, label: str) -> Fraction:
    value = _int(expr, label)
    if value < 0:
        raise AssignmentError(f"{label} must be nonnegative")
    return Fraction(value)


def _bool(expr: SExpr, label: str) -> bool:
    if expr == T:
        return True
    if expr == NIL:
        return False
    raise AssignmentError(f"{label} must be t or nil, got {print_sexpr(expr)}")


def _plist(items, label: str) -> dict:
    if len(items) % 2:
        raise AssignmentError(f"{label}: odd number of keyword arguments")
    out = {}
    for key, value in zip(items[::2], items[1::2]):
        if not isinstance(key, Keyword):
            raise AssignmentError(f"{label}: expected a keyword, got {print_sexpr(key)}")
        out[print_sexpr(key)] = value
    return out


def _head(form: SExpr):
    if isinstance(form, SList) and len(form) and isinstance(form[0], Symbol):
        return form[0].name
    return None


_POINT_KEYS = {":validity", ":alphabet", ":equivalence", ":check", ":property"}
_OPTION_KEYS = {":kind", ":points", ":pda-depth", ":tm-steps", ":tests", ":max-word-len",
                ":exhaustive-len", ":seed", ":max-reported", ":student-name",
                ":use-dfa-decision"}


def _read_options(form: SExpr):
    opts = _plist(form.elements[1:], "assignment")
    unknown = set(opts) - _OPTION_KEYS
    if unknown:
        raise AssignmentError(f"unknown assignment options: {' '.join(sorted(unknown))}")
    return opts


def _read_points(expr: SExpr | None) -> Points:
    if expr is None:
        return Points()
    if not isinstance(expr, SList):
        raise AssignmentError(":points must be a list like (:equivalence 10 :check 1)")
    values = _plist(expr.elements, ":points")
    unknown = set(values) - _POINT_KEYS
    if unknown:
        raise AssignmentError(f"unknown point categories: {' '.join(sorted(unknown))}")
    return Points(**{k[1:]: _points_value(v, k) for k, v in values.items()})


def _read_check(form: SExpr, reference: Machine) -> UnitCheck:
    head = _head(form)
    if len(form) < 3:
        raise AssignmentError(f"malformed check: {print_sexpr(form)}")
    try:
        word = word_from_sexpr(form[1])
    except TypeError as exc:
        raise AssignmentError(f"invalid check word in {print_sexpr(form)}: {exc}") from None
    bad = [a for a in word if a not in reference.alphabet]
    if bad:
        raise AssignmentError(f"invalid check word {print_word(word)}: letters outside the alphabet")
    opts = _plist(form.elements[3:], head.lower())
    points = _points_value(opts[":points"], ":points") if ":points" in opts else None
    subject = "student"
    if ":subject" in opts:
        subject = print_sexpr(opts[":subject"]).lower()
        if subject not in ("student", "reference"):
            raise AssignmentError(f":subject must be student or reference, got {subject}")
    if head == "CHECK-ACCEPT":
        return UnitCheck(word, _bool(form[2], "check-accept expectation"), "accept", subject, points)
    if reference.kind != "tm":
        raise AssignmentError("check-output only applies to TM assignments")
    try:
        expected = word_from_sexpr(form[2])
    except TypeError as exc:
        raise AssignmentError(f"invalid expected output in {print_sexpr(form)}: {exc}") from None
    return UnitCheck(word, expected, "output", subject, points)


def run_check(check: UnitCheck, machine: Machine, cfg: TestConfig):
    """(passed, observed) for a unit check against ``machine``."""
    if check.kind == "accept":
        observed = accepts(machine, check.word, cfg.bounds)
    else:
        observed = tm_output(machine, check.word, cfg.bounds.tm_steps)
    return observed == check.expected, observed


def parse_assignment(text: str) -> Assignment:
    try:
        forms = parse_sexprs(text)
    except SExprError as exc:
        raise AssignmentError(f"cannot read assignment: {exc}") from None
    option_forms = [f for f in forms if _head(f) == "ASSIGNMENT"]
    machine_forms = [f for f in forms if machine_kind(f) is not None]
    check_forms = [f for f in forms if _head(f) in ("CHECK-ACCEPT", "CHECK-OUTPUT")]
    property_forms = [f for f in forms if _head(f) == "PROPERTY"]
    other = [f for f in forms
             if f not in option_forms + machine_forms + check_forms + property_forms]
    if other:
        raise AssignmentError(f"unrecognized form in assignment: {print_sexpr(other[0])[:60]}")
    if len(option_forms) > 1:
        raise AssignmentError("more than one (assignment ...) form")
    if not machine_forms:
        raise AssignmentError("missing reference machine: no gen-dfa, gen-pda or gen-tm form")
    if len(machine_forms) > 1:
        raise AssignmentError("an assignment holds exactly one reference machine")

    opts = _read_options(option_forms[0]) if option_forms else {}
    ref_form = machine_forms[0]
    kind = machine_kind(ref_form)
    if ":kind" in opts:
        declared = print_sexpr(opts[":kind"]).lower()
        if declared not in ("dfa", "pda", "tm"):
            raise AssignmentError(f":kind must be dfa, pda or tm, got {declared}")
        if declared != kind:
            raise AssignmentError(f"assignment kind {declared} does not match the gen-{kind} reference")
    try:
        reference = build_machine(ref_form)
    except InvalidMachine as exc:
        raise AssignmentError("reference machine is invalid:\n" + str(exc)) from None

    bounds = RunBounds(
        pda_depth=_int(opts[":pda-depth"], ":pda-depth") if ":pda-depth" in opts else 1000,
        tm_steps=_int(opts[":tm-steps"], ":tm-steps") if ":tm-steps" in opts else 1000,
    )
    max_len = _int(opts[":max-word-len"], ":max-word-len") if ":max-word-len" in opts else 8
    exhaustive = (_int(opts[":exhaustive-len"], ":exhaustive-len")
                  if ":exhaustive-len" in opts else min(4, max_len))
    try:
        cfg = TestConfig(
            num_tests=_int(opts[":tests"], ":tests") if ":tests" in opts else 1000,
            max_word_len=max_len,
            exhaustive_len=exhaustive,
            seed=_int(opts[":seed"], ":seed") if ":seed" in opts else 0,
            bounds=bounds,
            max_reported=_int(opts[":max-reported"], ":max-reported")
            if ":max-reported" in opts else 3,
        )
    except ValueError as exc:
        raise AssignmentError(str(exc)) from None

    student_name = None
    if ":student-name" in opts:
        if not isinstance(opts[":student-name"], Symbol):
            raise AssignmentError(":student-name must be a symbol")
        student_name = opts[":student-name"].name
    use_decision = _bool(opts[":use-dfa-decision"], ":use-dfa-decision") \
        if ":use-dfa-decision" in opts else kind == "dfa"

    a = Assignment(kind, reference, cfg, points=_read_points(opts.get(":points")),
                   use_dfa_decision=use_decision, student_name=student_name)
    for form in check_forms:
        check = _read_check(form, reference)
        try:
            ok, observed = run_check(check, reference, cfg)
        except LetterNotInAlphabet as exc:
            raise AssignmentError(f"check {check.describe()}: {exc}") from None
        if not ok:
            raise AssignmentError(
                f"check {check.describe()} fails on the reference machine: got {_show(observed)}")
        a.checks.append(check)
    for form in property_forms:
        try:
            spec = parse_property(form, reference.alphabet)
            validate_property(spec, a.machines())
        except PropertyError as exc:
            raise AssignmentError(str(exc)) from None
        opts_p = property_options(form)
        points = _points_value(opts_p[":points"], ":points") if ":points" in opts_p else None
        a.properties.append((spec, points))
    return a


def _show(value) -> str:
    if isinstance(value, bool):
        return "t" if value else "nil"
    return print_word(value)


# Grading

def _select(results, a: Assignment):
    candidates = [r for r in results if r.kind == a.kind]
    if not candidates:
        return None
    if a.student_name is not None:
        for r in candidates:
            if r.name == a.student_name:
                return r
    return candidates[0]


def _equivalence(student: Machine, a: Assignment):
    """(passed, feedback, witnesses)."""
    cfg = a.cfg
    if a.kind == "tm":
        verdict = equiv.test_equiv_tm_output(student, a.reference, cfg)
        if not verdict.equivalent:
            return False, OUTPUT_FEEDBACK + "\n" + print_words(verdict.witnesses), verdict.witnesses
    if a.kind == "dfa" and a.use_dfa_decision:
        verdict = equiv.decide_dfa_verdict(student, a.reference)
        if not verdict.equivalent:
            # Pad the shortest witness with differential-testing witnesses for richer feedback.
            extra = equiv.test_equiv_lang(student, a.reference, cfg).witnesses
            witnesses = list(verdict.witnesses)
            witnesses += [w for w in extra if w not in witnesses]
            verdict = dataclasses.replace(verdict, witnesses=tuple(witnesses[:cfg.max_reported]))
    else:
        verdict = equiv.test_equiv_lang(student, a.reference, cfg)
    if verdict.equivalent:
        return True, "Equivalent to the reference solution.", ()
    return False, MISCLASSIFIED_FEEDBACK + "\n" + print_words(verdict.witnesses), verdict.witnesses


def grade_submission(a: Assignment, submission_text: str) -> GradeReport:
    report = GradeReport()
    items = report.items
    pts = a.points
    label = f"gen-{a.kind}"
    default_name = a.student_name or f"STUDENT-{a.kind.upper()}"

    student = None
    extras = []
    try:
        results = build_all(parse_sexprs(submission_text))
    except SExprError as exc:
        results = None
        feedback = f"Could not read the submission: {exc}"
    if results is not None:
        chosen = _select(results, a)
        if chosen is None:
            feedback = f"No {label} form found in the submission."
        elif chosen.errors:
            feedback = "\n".join(e.message for e in chosen.errors)
            default_name = chosen.name or default_name
        else:
            student = chosen.machine
            feedback = f"Valid {a.kind.upper()}."
        extras = [r for r in results if r is not chosen]
    name = display_name(student.name if student is not None else default_name)
    items.append(GradeItem("validity", pts.validity if student else Fraction(0), pts.validity,
                           student is not None, feedback))

    alphabet_ok = False
    if student is not None:
        alphabet_ok = equiv.alphabet_equal(student.alphabet, a.reference.alphabet)
        items.append(GradeItem("alphabet", pts.alphabet if alphabet_ok else Fraction(0),
                               pts.alphabet, alphabet_ok,
                               "Alphabet matches." if alphabet_ok else ALPHABET_FEEDBACK))
    else:
        items.append(_skipped("alphabet", pts.alphabet, label))

    def gated(item_name, max_score, run):
        if not alphabet_ok:
            reason = label if student is None else "alphabet"
            items.append(_skipped(item_name, max_score, reason))
            return
        passed, feedback, witnesses = run()
        items.append(GradeItem(item_name, max_score if passed else Fraction(0), max_score,
                               passed, feedback, tuple(witnesses)))

    gated("equivalence", pts.equivalence, lambda: _equivalence(student, a))

    for n, check in enumerate(c for c in a.checks if c.subject == "student"):
        max_score = check.points if check.points is not None else pts.check

        def run_one(check=check):
            try:
                ok, observed = run_check(check, student, a.cfg)
            except LetterNotInAlphabet as exc:
                return False, f"Check {check.describe()} could not run: {exc}.", (check.word,)
            if ok:
                return True, f"Check {check.describe()} passed.", ()
            return (False, f"Check {check.describe()} failed: expected {_show(check.expected)}, "
                    f"got {_show(observed)}.", (check.word,))

        gated(f"check {n + 1}: {check.describe()}", max_score, run_one)

    for spec, points in a.properties:
        max_score = points if points is not None else pts.property

        def run_prop(spec=spec):
            result = check_property(spec, a.machines(student), a.cfg)
            if result.passed:
                return True, f"Property {spec.name.lower()} holds on all tested words.", ()
            why = f" ({result.reason})" if result.reason else ""
            return (False, f"Property {spec.name.lower()} fails on "
                    f"{print_word(result.counterexample)}{why}.", (result.counterexample,))

        gated(f"property {spec.name.lower()}", max_score, run_prop)

    if extras:
        names = " ".join(display_name(r.name) if r.name else (r.kind or "form") for r in extras)
        items.append(GradeItem("extra forms", Fraction(0), Fraction(0), True,
                               f"Ignored extra forms in the submission: {names}."))

    failed = [i for i in items if not i.passed]
    summary = CORRECT_FEEDBACK.format(name=name) if not failed else failed[0].feedback
    items.append(GradeItem("summary", Fraction(0), Fraction(0), not failed, summary))
    return report


def _skipped(item_name: str, max_score: Fraction, reason: str) -> GradeItem:
    if reason == "alphabet":
        why = "Not run: the alphabet does not match."
    else:
        why = f"Not run: the submission has no valid {reason} form."
    return GradeItem(item_name, Fraction(0), max_score, False, why)


def _number(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else float(x)


def render_gradescope_json(report: GradeReport) -> str:
    payload = {
        "score": _number(report.overall_score),
        "tests": [
            {"name": i.name, "score": _number(i.score), "max_score": _number(i.max_score),
             "output": i.feedback}
            for i in report.items
        ],
    }
    return json.dumps(payload)
