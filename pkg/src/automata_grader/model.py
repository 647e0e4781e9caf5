"""Validated DFA/PDA/TM models built from ``gen-dfa``/``gen-pda``/``gen-tm`` forms.

Letters and states are plain Python values (``int`` or upper-case ``str``).
In PDA transition keys and values the empty word is ``None``.  The TM
blank is the symbol ``"NIL"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .sexpr import (
    EPSILON,
    NIL,
    DottedPair,
    Integer,
    Keyword,
    SExpr,
    SList,
    Symbol,
    letter_key,
    print_sexpr,
)

BLANK = "NIL"

# Error codes
MISSING_COMPONENT = "MissingComponent"
UNKNOWN_COMPONENT = "UnknownComponent"
DUPLICATE_NAME = "DuplicateName"
BAD_START_STATE = "BadStartState"
BAD_ACCEPT_STATES = "BadAcceptStates"
BAD_TRANSITION_DOMAIN = "BadTransitionDomain"
BAD_TRANSITION_CODOMAIN = "BadTransitionCodomain"
MISSING_START_TRANSITION = "MissingStartTransition"
BLANK_MISSING_FROM_TAPE = "BlankMissingFromTape"
BLANK_IN_INPUT_ALPHABET = "BlankInInputAlphabet"
INPUT_NOT_SUBSET_OF_TAPE = "InputNotSubsetOfTape"
ACCEPT_EQUALS_REJECT = "AcceptEqualsReject"
ACCEPT_REJECT_IN_DOMAIN = "AcceptRejectInDomain"
DUPLICATE_SYMBOLS = "DuplicateSymbols"
DUPLICATE_TRANSITION_KEY = "DuplicateTransitionKey"

# Stable message prefixes, one per error code.
MESSAGE_PREFIX = {
    MISSING_COMPONENT: "Missing component",
    UNKNOWN_COMPONENT: "Unknown component",
    DUPLICATE_NAME: "Name already defined",
    BAD_START_STATE: "Start state is not one of the given states",
    BAD_ACCEPT_STATES: "Accept states are not a subset of the given states",
    BAD_TRANSITION_DOMAIN: "Transition function is not a function with domain",
    BAD_TRANSITION_CODOMAIN: "Transition function is not a function with co-domain",
    MISSING_START_TRANSITION: "Starting transition from",
    BLANK_MISSING_FROM_TAPE: "Blank tape symbol nil missing from tape-alphabet.",
    BLANK_IN_INPUT_ALPHABET: "Blank tape symbol nil must not appear in the input alphabet.",
    INPUT_NOT_SUBSET_OF_TAPE: "Input alphabet has to be a subset of the tape alphabet.",
    ACCEPT_EQUALS_REJECT: "Accept state and reject state must be different.",
    ACCEPT_REJECT_IN_DOMAIN: "Transition function has transitions out of a halting state",
    DUPLICATE_SYMBOLS: "Duplicate elements in",
    DUPLICATE_TRANSITION_KEY: "Transition function defines a key more than once",
}

KIND_HEADS = {"GEN-DFA": "dfa", "GEN-PDA": "pda", "GEN-TM": "tm"}

SCHEMAS = {
    "dfa": (":name", ":states", ":alphabet", ":start", ":accept", ":transition-fun"),
    "pda": (":name", ":states", ":alphabet", ":stack-alphabet", ":start-state",
            ":accept-states", ":transition-fun"),
    "tm": (":name", ":states", ":alphabet", ":tape-alphabet", ":start-state",
           ":accept-state", ":reject-state", ":transition-fun"),
}


@dataclass(frozen=True)
class ValidationError:
    code: str
    message: str
    detail: SExpr | None = None


class InvalidMachine(ValueError):
    def __init__(self, errors: list[ValidationError], name=None):
        super().__init__("\n".join(e.message for e in errors))
        self.errors = list(errors)
        self.name = name


@dataclass(frozen=True, eq=False)
class Dfa:
    name: str
    states: tuple
    alphabet: tuple
    transitions: dict
    start: object
    accepts: frozenset
    kind = "dfa"


@dataclass(frozen=True, eq=False)
class Pda:
    name: str
    states: tuple
    alphabet: tuple
    stack_alphabet: tuple
    transitions: dict  # (state, letter|None, top|None) -> tuple of (state, push|None)
    start: object
    accepts: frozenset
    kind = "pda"


@dataclass(frozen=True, eq=False)
class Tm:
    name: str
    states: tuple
    alphabet: tuple
    tape_alphabet: tuple
    transitions: dict  # (state, symbol) -> (state, symbol, "L"|"R")
    start: object
    accept: object
    reject: object
    kind = "tm"


Machine = Union[Dfa, Pda, Tm]


def display_name(name) -> str:
    """Machine names are shown in lower case in feedback (``student-dfa is correct.``)."""
    return str(name).lower()


def _show(value) -> str:
    if value is None:
        return ":e"
    return str(value)


def _show_tuple(values) -> str:
    return "(" + " ".join(_show(v) for v in values) + ")"


class _Builder:
    def __init__(self, form: SExpr, kind: str):
        self.form = form
        self.kind = kind
        self.errors: list[ValidationError] = []
        self.components: dict[str, SExpr] = {}
        self.name = None

    def error(self, code: str, message: str, detail: SExpr | None = None):
        self.errors.append(ValidationError(code, message, detail))

    def read_components(self):
        items = list(self.form.elements[1:])
        schema = SCHEMAS[self.kind]
        i = 0
        while i < len(items):
            key = items[i]
            if not isinstance(key, Keyword):
                self.error(UNKNOWN_COMPONENT,
                           f"Unknown component {print_sexpr(key)}: expected a keyword.", key)
                i += 1
                continue
            label = print_sexpr(key)
            if i + 1 >= len(items):
                self.error(MISSING_COMPONENT, f"Missing component value for {label}.", key)
                break
            if label not in schema:
                self.error(UNKNOWN_COMPONENT, f"Unknown component {label}.", key)
            elif label in self.components:
                self.error(DUPLICATE_SYMBOLS,
                           f"Duplicate elements in component list: {label} given twice.", key)
            else:
                self.components[label] = items[i + 1]
            i += 2
        for label in schema:
            if label not in self.components:
                self.error(MISSING_COMPONENT, f"Missing component {label}.")
        name = self.components.get(":name")
        if name is not None:
            if isinstance(name, Symbol):
                self.name = name.name
            else:
                self.error(UNKNOWN_COMPONENT,
                           f"Unknown component value: :name must be a symbol, got {print_sexpr(name)}.",
                           name)

    def atom(self, expr: SExpr, what: str):
        if isinstance(expr, Integer):
            return expr.value
        if isinstance(expr, Symbol):
            return expr.name
        raise _Bad(expr, what)

    def atom_set(self, label: str, allow_empty: bool = True) -> tuple | None:
        expr = self.components.get(label)
        if expr is None:
            return None
        if expr == NIL:
            expr = SList(())
        if not isinstance(expr, SList):
            self.error(UNKNOWN_COMPONENT, f"Unknown component value: {label} must be a list.", expr)
            return None
        values = []
        for e in expr:
            if e == EPSILON:
                self.error(UNKNOWN_COMPONENT,
                           f"Unknown component value: :e may not appear in {label}.", e)
                continue
            try:
                values.append(self.atom(e, label))
            except _Bad:
                self.error(UNKNOWN_COMPONENT,
                           f"Unknown component value: {label} element {print_sexpr(e)} is not an atom.",
                           e)
        dups = sorted({v for v in values if values.count(v) > 1}, key=letter_key)
        if dups:
            self.error(DUPLICATE_SYMBOLS,
                       f"Duplicate elements in {label}: {_show_tuple(dups)}.", expr)
        if not values and not allow_empty:
            self.error(UNKNOWN_COMPONENT, f"Unknown component value: {label} must not be empty.",
                       expr)
        return tuple(dict.fromkeys(values))

    def single(self, label: str):
        expr = self.components.get(label)
        if expr is None:
            return None
        try:
            return self.atom(expr, label)
        except _Bad:
            self.error(UNKNOWN_COMPONENT,
                       f"Unknown component value: {label} must be an atom, got {print_sexpr(expr)}.",
                       expr)
            return None

    def check_start(self, label: str, start, states):
        if start is not None and states is not None and start not in states:
            self.error(BAD_START_STATE,
                       f"Start state is not one of the given states: {_show(start)}.",
                       self.components[label])

    def check_accepts(self, label: str, accepts, states):
        if accepts is None or states is None:
            return
        bad = [q for q in accepts if q not in states]
        if bad:
            self.error(BAD_ACCEPT_STATES,
                       f"Accept states are not a subset of the given states: {_show_tuple(bad)}.",
                       self.components[label])

    def entries(self):
        """Yield (key, value, entry) for each ``(key . value)`` entry of :transition-fun."""
        expr = self.components.get(":transition-fun")
        if expr is None:
            return
        if expr == NIL:
            return
        if not isinstance(expr, SList):
            self.error(BAD_TRANSITION_DOMAIN,
                       f"{MESSAGE_PREFIX[BAD_TRANSITION_DOMAIN]} {self.domain_text()}: "
                       "the transition function must be a list of (key . value) entries.", expr)
            return
        for entry in expr:
            if not isinstance(entry, DottedPair):
                self.error(BAD_TRANSITION_DOMAIN,
                           f"{MESSAGE_PREFIX[BAD_TRANSITION_DOMAIN]} {self.domain_text()}: "
                           f"entry {print_sexpr(entry)} is not of the form (key . value).", entry)
                continue
            yield entry.head, entry.tail, entry

    def domain_text(self) -> str:
        return {
            "dfa": "Q x Sigma",
            "pda": "Q x (Sigma + :e) x (Gamma + :e)",
            "tm": "Q x Gamma",
        }[self.kind]

    def codomain_text(self) -> str:
        return {
            "dfa": "Q",
            "pda": "P(Q x (Gamma + :e))",
            "tm": "Q x Gamma x {L, R}",
        }[self.kind]

    def domain_error(self, bad_keys, missing_keys=()):
        parts = []
        if bad_keys:
            parts.append("keys outside the domain: " + " ".join(bad_keys))
        if missing_keys:
            parts.append("missing keys: " + " ".join(missing_keys))
        self.error(BAD_TRANSITION_DOMAIN,
                   f"{MESSAGE_PREFIX[BAD_TRANSITION_DOMAIN]} {self.domain_text()}. "
                   + "; ".join(parts) + ".",
                   self.components.get(":transition-fun"))

    def codomain_error(self, bad_values):
        self.error(BAD_TRANSITION_CODOMAIN,
                   f"{MESSAGE_PREFIX[BAD_TRANSITION_CODOMAIN]} {self.codomain_text()}. "
                   "Bad values: " + " ".join(bad_values) + ".",
                   self.components.get(":transition-fun"))

    def duplicate_error(self, keys):
        self.error(DUPLICATE_TRANSITION_KEY,
                   f"{MESSAGE_PREFIX[DUPLICATE_TRANSITION_KEY]}: " + " ".join(keys) + ".",
                   self.components.get(":transition-fun"))

    def fail(self):
        raise InvalidMachine(self.errors, self.name)


class _Bad(Exception):
    def __init__(self, expr, what):
        self.expr = expr
        self.what = what


def _key_atoms(builder: _Builder, expr: SExpr, arity: int, eps_ok=()):
    """Read a key list of ``arity`` atoms; positions in eps_ok may be ``:e`` (read as None)."""
    if not isinstance(expr, SList) or len(expr) != arity:
        raise _Bad(expr, "key")
    out = []
    for i, e in enumerate(expr):
        if i in eps_ok and e == EPSILON:
            out.append(None)
        else:
            out.append(builder.atom(e, "key"))
    return tuple(out)


def _head_symbol(form: SExpr) -> str | None:
    if isinstance(form, SList) and len(form) and isinstance(form[0], Symbol):
        return form[0].name
    return None


def machine_kind(form: SExpr) -> str | None:
    """'dfa', 'pda', 'tm' for a gen-x form, else None."""
    return KIND_HEADS.get(_head_symbol(form))


def _require_head(form: SExpr, kind: str):
    if machine_kind(form) != kind:
        head = "gen-" + kind
        raise InvalidMachine([ValidationError(
            UNKNOWN_COMPONENT, f"Unknown component: expected a ({head} ...) form.", form)])


def build_dfa(form: SExpr) -> Dfa:
    _require_head(form, "dfa")
    b = _Builder(form, "dfa")
    b.read_components()
    states = b.atom_set(":states", allow_empty=False)
    alphabet = b.atom_set(":alphabet")
    start = b.single(":start")
    accepts = b.atom_set(":accept")
    b.check_start(":start", start, states)
    b.check_accepts(":accept", accepts, states)

    delta = {}
    bad_keys, bad_values, dup_keys = [], [], []
    for key_expr, value_expr, entry in b.entries():
        try:
            key = _key_atoms(b, key_expr, 2)
        except _Bad:
            bad_keys.append(print_sexpr(key_expr))
            continue
        if key in delta:
            dup_keys.append(_show_tuple(key))
            continue
        try:
            value = b.atom(value_expr, "value")
        except _Bad:
            value = None
            bad_values.append(print_sexpr(value_expr))
        delta[key] = value
        if states is not None and alphabet is not None:
            if key[0] not in states or key[1] not in alphabet:
                bad_keys.append(_show_tuple(key))
        if value is not None and states is not None and value not in states:
            bad_values.append(_show(value))
    if dup_keys:
        b.duplicate_error(dup_keys)
    missing = []
    if states is not None and alphabet is not None and ":transition-fun" in b.components:
        missing = [_show_tuple((q, a)) for q in states for a in alphabet if (q, a) not in delta]
    if bad_keys or missing:
        b.domain_error(bad_keys, missing)
    if bad_values:
        b.codomain_error(bad_values)
    if b.errors:
        b.fail()
    return Dfa(b.name, states, alphabet, delta, start, frozenset(accepts))


def build_pda(form: SExpr) -> Pda:
    _require_head(form, "pda")
    b = _Builder(form, "pda")
    b.read_components()
    states = b.atom_set(":states", allow_empty=False)
    alphabet = b.atom_set(":alphabet")
    stack_alphabet = b.atom_set(":stack-alphabet")
    start = b.single(":start-state")
    accepts = b.atom_set(":accept-states")
    b.check_start(":start-state", start, states)
    b.check_accepts(":accept-states", accepts, states)

    delta = {}
    bad_keys, bad_values, dup_keys = [], [], []
    for key_expr, value_expr, entry in b.entries():
        try:
            key = _key_atoms(b, key_expr, 3, eps_ok=(1, 2))
        except _Bad:
            bad_keys.append(print_sexpr(key_expr))
            continue
        if key in delta:
            dup_keys.append(_show_tuple(key))
            continue
        if None not in (states, alphabet, stack_alphabet):
            q, a, s = key
            if q not in states or (a is not None and a not in alphabet) or (
                    s is not None and s not in stack_alphabet):
                bad_keys.append(_show_tuple(key))
        values = []
        if value_expr == NIL:
            value_expr = SList(())
        if not isinstance(value_expr, SList):
            bad_values.append(print_sexpr(value_expr))
        else:
            for v in value_expr:
                try:
                    pair = _key_atoms(b, v, 2, eps_ok=(1,))
                except _Bad:
                    bad_values.append(print_sexpr(v))
                    continue
                if None not in (states, stack_alphabet) and (
                        pair[0] not in states
                        or (pair[1] is not None and pair[1] not in stack_alphabet)):
                    bad_values.append(_show_tuple(pair))
                if pair not in values:
                    values.append(pair)
        delta[key] = tuple(values)
    if dup_keys:
        b.duplicate_error(dup_keys)
    if bad_keys:
        b.domain_error(bad_keys)
    if bad_values:
        b.codomain_error(bad_values)
    if start is not None and ":transition-fun" in b.components and (start, None, None) not in delta:
        b.error(MISSING_START_TRANSITION,
                f"Starting transition from ({_show(start)} :e :e) missing from the transition function.",
                b.components.get(":transition-fun"))
    if b.errors:
        b.fail()
    return Pda(b.name, states, alphabet, stack_alphabet, delta, start, frozenset(accepts))


def build_tm(form: SExpr) -> Tm:
    _require_head(form, "tm")
    b = _Builder(form, "tm")
    b.read_components()
    states = b.atom_set(":states", allow_empty=False)
    alphabet = b.atom_set(":alphabet")
    tape = b.atom_set(":tape-alphabet")
    start = b.single(":start-state")
    accept = b.single(":accept-state")
    reject = b.single(":reject-state")
    b.check_start(":start-state", start, states)
    if states is not None:
        for label, q in ((":accept-state", accept), (":reject-state", reject)):
            if q is not None and q not in states:
                b.error(BAD_ACCEPT_STATES,
                        f"Accept states are not a subset of the given states: {label} {_show(q)}.",
                        b.components[label])
    if accept is not None and accept == reject:
        b.error(ACCEPT_EQUALS_REJECT, MESSAGE_PREFIX[ACCEPT_EQUALS_REJECT],
                b.components[":reject-state"])
    if tape is not None and BLANK not in tape:
        b.error(BLANK_MISSING_FROM_TAPE, MESSAGE_PREFIX[BLANK_MISSING_FROM_TAPE],
                b.components[":tape-alphabet"])
    if alphabet is not None and BLANK in alphabet:
        b.error(BLANK_IN_INPUT_ALPHABET, MESSAGE_PREFIX[BLANK_IN_INPUT_ALPHABET],
                b.components[":alphabet"])
    if alphabet is not None and tape is not None:
        outside = [a for a in alphabet if a not in tape and a != BLANK]
        if outside:
            b.error(INPUT_NOT_SUBSET_OF_TAPE,
                    f"{MESSAGE_PREFIX[INPUT_NOT_SUBSET_OF_TAPE]} Missing: {_show_tuple(outside)}.",
                    b.components[":tape-alphabet"])
    # A missing blank is reported once above, not again for every transition that reads it.
    symbols = None if tape is None else set(tape) | {BLANK}

    delta = {}
    bad_keys, bad_values, dup_keys, halting = [], [], [], []
    for key_expr, value_expr, entry in b.entries():
        try:
            key = _key_atoms(b, key_expr, 2)
        except _Bad:
            bad_keys.append(print_sexpr(key_expr))
            continue
        if key in delta:
            dup_keys.append(_show_tuple(key))
            continue
        if states is not None and symbols is not None:
            if key[0] not in states or key[1] not in symbols:
                bad_keys.append(_show_tuple(key))
        if key[0] is not None and key[0] in (accept, reject):
            halting.append(_show_tuple(key))
        try:
            value = _key_atoms(b, value_expr, 3)
        except _Bad:
            bad_values.append(print_sexpr(value_expr))
            continue
        if value[2] not in ("L", "R") or (
                states is not None and symbols is not None
                and (value[0] not in states or value[1] not in symbols)):
            bad_values.append(_show_tuple(value))
        delta[key] = value
    if dup_keys:
        b.duplicate_error(dup_keys)
    if bad_keys:
        b.domain_error(bad_keys)
    if bad_values:
        b.codomain_error(bad_values)
    if halting:
        b.error(ACCEPT_REJECT_IN_DOMAIN,
                f"{MESSAGE_PREFIX[ACCEPT_REJECT_IN_DOMAIN]}: " + " ".join(halting) + ".",
                b.components.get(":transition-fun"))
    if b.errors:
        b.fail()
    return Tm(b.name, states, alphabet, tape, delta, start, accept, reject)


BUILDERS = {"dfa": build_dfa, "pda": build_pda, "tm": build_tm}


def build_machine(form: SExpr) -> Machine:
    kind = machine_kind(form)
    if kind is None:
        head = print_sexpr(form[0]) if isinstance(form, SList) and len(form) else print_sexpr(form)
        raise InvalidMachine([ValidationError(
            UNKNOWN_COMPONENT, f"Unknown component: {head} is not a gen-dfa, gen-pda or gen-tm form.",
            form)])
    return BUILDERS[kind](form)


@dataclass
class BuildResult:
    kind: str | None
    name: str | None
    form: SExpr
    machine: Machine | None = None
    errors: list[ValidationError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.machine is not None and not self.errors


def build_all(forms) -> list[BuildResult]:
    """Build every form of a file; a repeated ``:name`` is a DuplicateName error."""
    results = []
    seen = set()
    for form in forms:
        kind = machine_kind(form)
        try:
            machine = build_machine(form)
            result = BuildResult(kind, machine.name, form, machine)
        except InvalidMachine as exc:
            result = BuildResult(kind, exc.name, form, None, exc.errors)
        if result.name is not None:
            if result.name in seen:
                result.errors.append(ValidationError(
                    DUPLICATE_NAME,
                    f"Name already defined: {display_name(result.name)}.",
                    form))
                result.machine = None
            seen.add(result.name)
        results.append(result)
    return results
