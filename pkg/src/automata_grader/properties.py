"""A small declarative property language over machines and words.

Surface syntax::

    (property <name> (w) <formula>)

    formula  := (accepts <machine> <word>) | (not <formula>)
              | (implies <formula> <formula>) | (out= <word> <word>)
    word     := w | '(letters...) | (concat <word>...) | (output <tm> <word>)

``!``, ``=>``, ``==``, ``append``/``app`` and ``accept-dfa``/``accept-pda``/
``accept-tm`` are accepted as synonyms, and ``*name*`` refers to ``name``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .equiv import TestConfig, gen_words
from .execute import LetterNotInAlphabet, accepts, tm_output
from .model import Tm
from .sexpr import EPSILON, NIL, Integer, Keyword, SExpr, SList, Symbol, print_sexpr, to_letter


class PropertyError(ValueError):
    pass


class UnknownMachineName(PropertyError):
    pass


class KindMismatch(PropertyError):
    pass


# Word expressions

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lit:
    word: tuple


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Output:
    machine: str
    arg: "WordExpr"


WordExpr = Union[Var, Lit, Concat, Output]


# Formulas

@dataclass(frozen=True)
class Accepts:
    machine: str
    arg: WordExpr


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Implies:
    premise: "Formula"
    conclusion: "Formula"


@dataclass(frozen=True)
class OutEq:
    left: WordExpr
    right: WordExpr


Formula = Union[Accepts, Not, Implies, OutEq]


@dataclass(frozen=True)
class PropertySpec:
    name: str
    var: str
    formula: Formula
    alphabet: tuple = ()  # generator alphabet; the reference machine's


@dataclass(frozen=True)
class PropertyResult:
    passed: bool
    counterexample: tuple | None = None
    reason: str = ""


_FORMULA_HEADS = {
    "ACCEPTS": "accepts", "ACCEPT-DFA": "accepts", "ACCEPT-PDA": "accepts", "ACCEPT-TM": "accepts",
    "NOT": "not", "!": "not",
    "IMPLIES": "implies", "=>": "implies",
    "OUT=": "out=", "==": "out=",
}
_WORD_HEADS = {"CONCAT": "concat", "APPEND": "concat", "APP": "concat", "OUTPUT": "output"}


def machine_ref(expr: SExpr) -> str:
    if not isinstance(expr, Symbol):
        raise PropertyError(f"expected a machine name, got {print_sexpr(expr)}")
    name = expr.name
    if len(name) > 2 and name.startswith("*") and name.endswith("*"):
        name = name[1:-1]
    return name


def _head(expr: SExpr):
    if isinstance(expr, SList) and len(expr) and isinstance(expr[0], Symbol):
        return expr[0].name
    return None


def parse_word_expr(expr: SExpr, var: str) -> WordExpr:
    if isinstance(expr, Symbol) and expr.name == var:
        return Var(var)
    if expr == EPSILON or expr == NIL:
        return Lit(())
    head = _WORD_HEADS.get(_head(expr))
    if head == "concat":
        return Concat(tuple(parse_word_expr(e, var) for e in expr.elements[1:]))
    if head == "output":
        if len(expr) != 3:
            raise PropertyError(f"(output <tm> <word>) takes two arguments: {print_sexpr(expr)}")
        return Output(machine_ref(expr[1]), parse_word_expr(expr[2], var))
    if isinstance(expr, SList) and all(isinstance(e, (Integer, Symbol)) for e in expr):
        return Lit(tuple(to_letter(e) for e in expr))
    raise PropertyError(f"not a word expression: {print_sexpr(expr)}")


def parse_formula(expr: SExpr, var: str) -> Formula:
    head = _FORMULA_HEADS.get(_head(expr))
    args = expr.elements[1:] if head else ()
    arity = {"accepts": 2, "not": 1, "implies": 2, "out=": 2}.get(head)
    if head is None or len(args) != arity:
        raise PropertyError(f"not a formula: {print_sexpr(expr)}")
    if head == "accepts":
        # The usual order is (accept-x machine word); also allow (accept-x word machine) too.
        m, w = args
        if not isinstance(m, Symbol) or (isinstance(m, Symbol) and m.name == var):
            m, w = w, m
        return Accepts(machine_ref(m), parse_word_expr(w, var))
    if head == "not":
        return Not(parse_formula(args[0], var))
    if head == "implies":
        return Implies(parse_formula(args[0], var), parse_formula(args[1], var))
    return OutEq(parse_word_expr(args[0], var), parse_word_expr(args[1], var))


def parse_property(form: SExpr, alphabet=()) -> PropertySpec:
    if _head(form) != "PROPERTY" or len(form) < 4:
        raise PropertyError(f"expected (property <name> (w) <formula>), got {print_sexpr(form)}")
    name, params = form[1], form[2]
    if not isinstance(name, Symbol):
        raise PropertyError(f"property name must be a symbol, got {print_sexpr(name)}")
    if not isinstance(params, SList) or not len(params) or not isinstance(params[0], Symbol):
        raise PropertyError(f"property {name.name} needs a word variable list like (w)")
    # Optional trailing keyword options (e.g. :points, :proofs?) sit between the params and body.
    rest = list(form.elements[3:])
    while len(rest) > 1 and isinstance(rest[0], Keyword):
        rest = rest[2:]
    if len(rest) != 1:
        raise PropertyError(f"property {name.name} must have exactly one formula")
    var = params[0].name
    return PropertySpec(name.name, var, parse_formula(rest[0], var), tuple(alphabet))


def property_options(form: SExpr) -> dict:
    """Keyword options of a property form, e.g. {':points': Integer(2)}."""
    out = {}
    rest = list(form.elements[3:])
    while len(rest) > 1 and isinstance(rest[0], Keyword):
        out[print_sexpr(rest[0])] = rest[1]
        rest = rest[2:]
    return out


def _walk(node):
    yield node
    for child in getattr(node, "__dict__", {}).values():
        if isinstance(child, tuple):
            for c in child:
                if not isinstance(c, (int, str)):
                    yield from _walk(c)
        elif not isinstance(child, (int, str)):
            yield from _walk(child)


def validate_property(p: PropertySpec, machines: dict):
    for node in _walk(p.formula):
        if isinstance(node, (Accepts, Output)):
            if node.machine not in machines:
                raise UnknownMachineName(f"property {p.name}: unknown machine {node.machine}")
            if isinstance(node, Output) and not isinstance(machines[node.machine], Tm):
                raise KindMismatch(
                    f"property {p.name}: output applied to {machines[node.machine].kind} "
                    f"{node.machine}")
        if isinstance(node, Lit) and p.alphabet:
            bad = [a for a in node.word if a not in p.alphabet]
            if bad:
                raise PropertyError(f"property {p.name}: literal letters {bad} not in the alphabet")


def eval_word(e: WordExpr, w: tuple, machines: dict, cfg: TestConfig) -> tuple:
    if isinstance(e, Var):
        return w
    if isinstance(e, Lit):
        return e.word
    if isinstance(e, Concat):
        return tuple(x for part in e.parts for x in eval_word(part, w, machines, cfg))
    return tm_output(machines[e.machine], eval_word(e.arg, w, machines, cfg), cfg.bounds.tm_steps)


def eval_formula(f: Formula, w: tuple, machines: dict, cfg: TestConfig) -> bool:
    if isinstance(f, Accepts):
        return accepts(machines[f.machine], eval_word(f.arg, w, machines, cfg), cfg.bounds)
    if isinstance(f, Not):
        return not eval_formula(f.arg, w, machines, cfg)
    if isinstance(f, Implies):
        return (not eval_formula(f.premise, w, machines, cfg)) or eval_formula(
            f.conclusion, w, machines, cfg)
    return eval_word(f.left, w, machines, cfg) == eval_word(f.right, w, machines, cfg)


def check_property(p: PropertySpec, machines: dict, cfg: TestConfig | None = None,
                   alphabet=None) -> PropertyResult:
    """Evaluate ``p`` on every generated word; report the first word that falsifies it."""
    cfg = cfg or TestConfig()
    alphabet = tuple(alphabet) if alphabet is not None else p.alphabet
    if not alphabet:
        raise PropertyError(f"property {p.name} has no generator alphabet")
    validate_property(p, machines)
    for w in gen_words(alphabet, cfg):
        try:
            ok = eval_formula(p.formula, w, machines, cfg)
        except LetterNotInAlphabet as exc:
            return PropertyResult(False, w, f"letter {exc.letter} is outside a machine's alphabet")
        if not ok:
            return PropertyResult(False, w)
    return PropertyResult(True)
