"""Word generation, differential equivalence testing and exact DFA equivalence."""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field

from .execute import RunBounds, accepts, run_dfa, tm_output
from .model import Dfa, Tm
from .sexpr import letter_key

EQUIVALENT = "Equivalent"
NOT_EQUIVALENT = "NotEquivalent"
ALPHABET_MISMATCH = "AlphabetMismatch"

BY_DECISION = "Decision"
BY_TESTING = "Testing"


class EmptyAlphabet(ValueError):
    pass


class AlphabetMismatch(ValueError):
    def __init__(self, symbol):
        super().__init__(f"alphabets differ on {symbol}")
        self.symbol = symbol


@dataclass(frozen=True)
class TestConfig:
    __test__ = False  # not a pytest class

    num_tests: int = 1000
    max_word_len: int = 8
    exhaustive_len: int = 4
    seed: int = 0
    bounds: RunBounds = field(default_factory=RunBounds)
    max_reported: int = 3

    def __post_init__(self):
        if self.num_tests < 1 or self.max_word_len < 1 or self.max_reported < 1:
            raise ValueError("num_tests, max_word_len and max_reported must be positive")
        if not 0 <= self.exhaustive_len <= self.max_word_len:
            raise ValueError("need 0 <= exhaustive_len <= max_word_len")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class EquivVerdict:
    outcome: str
    by: str | None = None
    witnesses: tuple = ()
    symbol: object = None  # alphabet mismatch witness

    @property
    def equivalent(self) -> bool:
        return self.outcome == EQUIVALENT


def canonical_alphabet(alphabet) -> list:
    return sorted(set(alphabet), key=letter_key)


def gen_words(alphabet, cfg: TestConfig) -> list[tuple]:
    """All words up to ``exhaustive_len`` in length-lexicographic order, then seeded random words.

    The exhaustive prefix is always emitted in full, even when it is longer
    than ``num_tests``.
    """
    letters = canonical_alphabet(alphabet)
    if not letters:
        raise EmptyAlphabet("cannot generate words over an empty alphabet")
    words = []
    for n in range(cfg.exhaustive_len + 1):
        words.extend(itertools.product(letters, repeat=n))
    rng = random.Random(cfg.seed)
    while len(words) < cfg.num_tests:
        n = rng.randint(0, cfg.max_word_len)
        words.append(tuple(rng.choice(letters) for _ in range(n)))
    return words


def alphabet_difference(a, b):
    """Least symbol in exactly one of the two alphabets, or None if they are equal."""
    diff = set(a) ^ set(b)
    if not diff:
        return None
    return min(diff, key=letter_key)


def alphabet_equal(a, b) -> bool:
    return alphabet_difference(a, b) is None


def _differential(words, observe, cfg: TestConfig) -> list:
    witnesses = []
    for w in words:
        if w in witnesses:
            continue
        if observe(w):
            witnesses.append(w)
            if len(witnesses) >= cfg.max_reported:
                break
    return witnesses


def _check_kinds(student, reference):
    if student.kind != reference.kind:
        raise TypeError(f"cannot compare a {student.kind} with a {reference.kind}")


def test_equiv_lang(student, reference, cfg: TestConfig | None = None) -> EquivVerdict:
    """Compare acceptance on generated words over the reference alphabet."""
    cfg = cfg or TestConfig()
    _check_kinds(student, reference)
    symbol = alphabet_difference(reference.alphabet, student.alphabet)
    if symbol is not None:
        return EquivVerdict(ALPHABET_MISMATCH, symbol=symbol)

    def differs(w):
        return accepts(student, w, cfg.bounds) != accepts(reference, w, cfg.bounds)

    witnesses = _differential(gen_words(reference.alphabet, cfg), differs, cfg)
    if witnesses:
        assert all(differs(w) for w in witnesses)
        return EquivVerdict(NOT_EQUIVALENT, BY_TESTING, tuple(witnesses))
    return EquivVerdict(EQUIVALENT, BY_TESTING)


def test_equiv_tm_output(student: Tm, reference: Tm, cfg: TestConfig | None = None) -> EquivVerdict:
    """Compare TM outputs (blank-trimmed tape left of the head) on generated words."""
    cfg = cfg or TestConfig()
    _check_kinds(student, reference)
    if not isinstance(reference, Tm):
        raise TypeError("output comparison needs Turing machines")
    symbol = alphabet_difference(reference.alphabet, student.alphabet)
    if symbol is not None:
        return EquivVerdict(ALPHABET_MISMATCH, symbol=symbol)
    steps = cfg.bounds.tm_steps

    def differs(w):
        return tm_output(student, w, steps) != tm_output(reference, w, steps)

    witnesses = _differential(gen_words(reference.alphabet, cfg), differs, cfg)
    if witnesses:
        assert all(differs(w) for w in witnesses)
        return EquivVerdict(NOT_EQUIVALENT, BY_TESTING, tuple(witnesses))
    return EquivVerdict(EQUIVALENT, BY_TESTING)


# Library functions, not pytest tests.
test_equiv_lang.__test__ = False
test_equiv_tm_output.__test__ = False


# Hopcroft-Karp style equivalence: breadth-first over pairs of states, merging
# the two states of every visited pair in a union-find structure.  A pair
# whose states are already merged needs no further exploration.  Acceptance
# is compared when a pair is first merged, so the first mismatch found lies
# at the smallest depth and its word is a shortest witness.

class _UnionFind:
    def __init__(self):
        self.parent = {}
        self.rank = {}

    def find(self, x):
        parent = self.parent
        if x not in parent:
            parent[x] = x
            self.rank[x] = 0
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True


def dfa_equiv_decide(a: Dfa, b: Dfa):
    """None if ``a`` and ``b`` accept the same language, else a shortest word they disagree on."""
    symbol = alphabet_difference(a.alphabet, b.alphabet)
    if symbol is not None:
        raise AlphabetMismatch(symbol)
    letters = canonical_alphabet(a.alphabet)
    uf = _UnionFind()
    start = (("a", a.start), ("b", b.start))

    def disagree(pair):
        return (pair[0][1] in a.accepts) != (pair[1][1] in b.accepts)

    # Parent pointers rebuild the witness word without storing a word per pair.
    came_from = {start: None}
    uf.union(*start)
    if disagree(start):
        return ()
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        (_, p), (_, q) = pair
        for c in letters:
            nxt = (("a", a.transitions[(p, c)]), ("b", b.transitions[(q, c)]))
            if not uf.union(*nxt):
                continue
            came_from[nxt] = (pair, c)
            if disagree(nxt):
                return _rebuild(came_from, nxt)
            queue.append(nxt)
    return None


def _rebuild(came_from, pair) -> tuple:
    word = []
    while came_from[pair] is not None:
        pair, c = came_from[pair]
        word.append(c)
    return tuple(reversed(word))


def decide_dfa_verdict(student: Dfa, reference: Dfa) -> EquivVerdict:
    symbol = alphabet_difference(reference.alphabet, student.alphabet)
    if symbol is not None:
        return EquivVerdict(ALPHABET_MISMATCH, symbol=symbol)
    witness = dfa_equiv_decide(student, reference)
    if witness is None:
        return EquivVerdict(EQUIVALENT, BY_DECISION)
    assert (run_dfa(student, witness) in student.accepts) != (
        run_dfa(reference, witness) in reference.accepts)
    return EquivVerdict(NOT_EQUIVALENT, BY_DECISION, (witness,))
