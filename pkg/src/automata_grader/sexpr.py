"""Reader and printer for the S-expression surface syntax.

Atoms are integers, symbols (upper-cased on read) and ``:keywords``.
Lists are ``( e* )`` and dotted pairs ``( e . e )``.  A leading quote
``'x`` reads as ``x``.  Line comments start with ``;``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

MAX_DEPTH = 1024


class SExprError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnbalancedParens(SExprError):
    pass


class IllegalToken(SExprError):
    pass


class DanglingDot(SExprError):
    pass


class NestingTooDeep(SExprError):
    pass


@dataclass(frozen=True)
class Symbol:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", self.name.upper())


@dataclass(frozen=True)
class Integer:
    value: int


@dataclass(frozen=True)
class Keyword:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", self.name.upper())


@dataclass(frozen=True)
class SList:
    elements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


@dataclass(frozen=True)
class DottedPair:
    head: "SExpr"
    tail: "SExpr"


SExpr = Union[Symbol, Integer, Keyword, SList, DottedPair]

NIL = Symbol("NIL")
T = Symbol("T")
EPSILON = Keyword("E")

_INT_RE = re.compile(r"[+-]?\d+\Z")
# Anything that looks like a float or ratio is rejected rather than read as a symbol.
_NUMERIC_RE = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+/\d+|\d+[eE][+-]?\d+)\Z")
_SYMBOL_CHARS = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    "-+*/<>=!?_#$%&^~.@[]{}"
)
_DELIMITERS = set("()';") | set(" \t\r\n\f\v")


def _atom(token: str, pos: int) -> SExpr:
    if _INT_RE.match(token):
        return Integer(int(token))
    if _NUMERIC_RE.match(token):
        raise IllegalToken(f"numeric atom {token!r} is not an integer", pos)
    if token.startswith(":"):
        name = token[1:]
        if not name or ":" in name or not set(name) <= _SYMBOL_CHARS:
            raise IllegalToken(f"bad keyword {token!r}", pos)
        return Keyword(name)
    if not set(token) <= _SYMBOL_CHARS:
        raise IllegalToken(f"bad symbol {token!r}", pos)
    return Symbol(token)


def _tokenize(text: str):
    """Yield (kind, value, position) with kind in {'(', ')', "'", '.', 'atom'}."""
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if ord(c) > 127:
            raise IllegalToken(f"non-ASCII character {c!r}", i)
        if c.isspace():
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()'":
            yield c, c, i
            i += 1
        else:
            start = i
            while i < n and text[i] not in _DELIMITERS:
                if ord(text[i]) > 127:
                    raise IllegalToken(f"non-ASCII character {text[i]!r}", i)
                i += 1
            token = text[start:i]
            if token == ".":
                yield ".", ".", start
            else:
                yield "atom", _atom(token, start), start


class _Frame:
    __slots__ = ("open_pos", "items", "dot_pos", "tail", "has_tail")

    def __init__(self, open_pos: int):
        self.open_pos = open_pos
        self.items: list = []
        self.dot_pos = None
        self.tail = None
        self.has_tail = False

    def add(self, expr, pos: int):
        if self.dot_pos is None:
            self.items.append(expr)
        elif self.has_tail:
            raise DanglingDot("more than one form after '.'", pos)
        else:
            self.tail, self.has_tail = expr, True

    def close(self) -> SExpr:
        if self.dot_pos is None:
            return SList(self.items)
        if not self.has_tail:
            raise DanglingDot("'.' with nothing after it", self.dot_pos)
        tail = self.tail
        for head in reversed(self.items):
            tail = DottedPair(head, tail)
        return tail


def parse_sexprs(text: str) -> list[SExpr]:
    forms: list[SExpr] = []
    stack: list[_Frame] = []
    quote_pos = None

    def emit(expr, pos):
        if stack:
            stack[-1].add(expr, pos)
        else:
            forms.append(expr)

    for kind, value, pos in _tokenize(text):
        if kind == "'":
            quote_pos = pos
            continue
        if kind == "(":
            if len(stack) >= MAX_DEPTH:
                raise NestingTooDeep(f"nesting deeper than {MAX_DEPTH}", pos)
            stack.append(_Frame(pos))
            quote_pos = None
            continue
        if quote_pos is not None and kind != "atom":
            raise IllegalToken("quote with nothing after it", quote_pos)
        quote_pos = None
        if kind == "atom":
            emit(value, pos)
        elif kind == ".":
            if not stack:
                raise DanglingDot("'.' outside of a list", pos)
            frame = stack[-1]
            if frame.dot_pos is not None:
                raise DanglingDot("second '.' in a list", pos)
            if not frame.items:
                raise DanglingDot("'.' with nothing before it", pos)
            frame.dot_pos = pos
        else:
            if not stack:
                raise UnbalancedParens("unexpected ')'", pos)
            emit(stack.pop().close(), pos)
    if stack:
        raise UnbalancedParens("missing ')'", stack[-1].open_pos)
    if quote_pos is not None:
        raise IllegalToken("quote with nothing after it", quote_pos)
    return forms


def parse_sexpr(text: str) -> SExpr:
    """Parse exactly one form."""
    forms = parse_sexprs(text)
    if len(forms) != 1:
        raise SExprError(f"expected one form, found {len(forms)}", 0)
    return forms[0]


def print_sexpr(expr: SExpr) -> str:
    if isinstance(expr, Symbol):
        return expr.name
    if isinstance(expr, Integer):
        return str(expr.value)
    if isinstance(expr, Keyword):
        return ":" + expr.name.lower()
    if isinstance(expr, SList):
        return "(" + " ".join(print_sexpr(e) for e in expr.elements) + ")"
    if isinstance(expr, DottedPair):
        return f"({print_sexpr(expr.head)} . {print_sexpr(expr.tail)})"
    raise TypeError(f"not an S-expression: {expr!r}")


# Letters inside machines and words are plain Python values: int for
# integer atoms, str (upper-case name) for symbols.

def to_letter(expr: SExpr):
    if isinstance(expr, Integer):
        return expr.value
    if isinstance(expr, Symbol):
        return expr.name
    raise TypeError(f"not a letter: {print_sexpr(expr)}")


def from_letter(letter) -> SExpr:
    if isinstance(letter, int):
        return Integer(letter)
    return Symbol(letter)


def letter_key(letter):
    """Canonical order on letters: integers by value, then symbols by name."""
    return (0, letter, "") if isinstance(letter, int) else (1, 0, letter)


def format_letter(letter) -> str:
    return str(letter)


def print_word(word) -> str:
    """Render a word the way feedback shows it: ``'(0 1)`` or ``:e``."""
    if len(word) == 0:
        return ":e"
    return "'(" + " ".join(format_letter(x) for x in word) + ")"


def print_words(words) -> str:
    return "(" + " ".join(print_word(w) for w in words) + ")"


def word_from_sexpr(expr: SExpr) -> tuple:
    """Read a word literal: a list of atoms, or ``:e`` / ``nil`` / ``()`` for the empty word."""
    if expr == EPSILON or expr == NIL:
        return ()
    if isinstance(expr, SList):
        return tuple(to_letter(e) for e in expr.elements)
    raise TypeError(f"not a word: {print_sexpr(expr)}")


def parse_word(text: str) -> tuple:
    """Whitespace-separated atoms; empty text is the empty word."""
    forms = parse_sexprs(text)
    if len(forms) == 1 and (forms[0] == EPSILON or isinstance(forms[0], SList)):
        return word_from_sexpr(forms[0])
    return tuple(to_letter(f) for f in forms)
