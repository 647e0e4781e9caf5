"""Bounded interpreters for DFAs, PDAs and TMs."""
from __future__ import annotations

from dataclasses import dataclass

from .model import BLANK, Dfa, Pda, Tm

ACCEPTED = "Accepted"
REJECTED = "Rejected"
OUT_OF_FUEL = "OutOfFuel"


class LetterNotInAlphabet(ValueError):
    def __init__(self, letter, index: int):
        super().__init__(f"letter {letter} at index {index} is not in the alphabet")
        self.letter = letter
        self.index = index


@dataclass(frozen=True)
class RunBounds:
    pda_depth: int = 1000
    tm_steps: int = 1000

    def __post_init__(self):
        if self.pda_depth < 1 or self.tm_steps < 1:
            raise ValueError("run bounds must be >= 1")


def _check_word(alphabet, word):
    letters = set(alphabet)
    for i, a in enumerate(word):
        if a not in letters:
            raise LetterNotInAlphabet(a, i)


# DFA

def run_dfa(m: Dfa, word, state=None):
    """State reached from ``state`` (default: the start state) after reading ``word``."""
    _check_word(m.alphabet, word)
    q = m.start if state is None else state
    delta = m.transitions
    for a in word:
        q = delta[(q, a)]
    return q


def accept_dfa(m: Dfa, word) -> bool:
    return run_dfa(m, word) in m.accepts


# PDA

@dataclass(frozen=True)
class PdaExecTuple:
    state: object
    stack: tuple      # top first
    remaining: tuple  # unconsumed suffix of the input


@dataclass(frozen=True)
class PdaResult:
    accepted: bool
    exhausted: bool = False  # only meaningful when not accepted
    depth: int = 0           # depth at which acceptance happened, or the last depth explored

    def __bool__(self):
        return self.accepted


def pda_children(m: Pda, t: PdaExecTuple):
    """All children of an execution tuple, one per matching key and target."""
    c = t.remaining[0] if t.remaining else None
    top = t.stack[0] if t.stack else None
    keys = [(t.state, None, None)]
    if top is not None:
        keys.append((t.state, None, top))
    if c is not None:
        keys.append((t.state, c, None))
        if top is not None:
            keys.append((t.state, c, top))
    for key in keys:
        targets = m.transitions.get(key)
        if not targets:
            continue
        _, letter, pop = key
        rest = t.remaining[1:] if letter is not None else t.remaining
        base = t.stack[1:] if pop is not None else t.stack
        for q, push in targets:
            stack = base if push is None else (push,) + base
            yield PdaExecTuple(q, stack, rest)


def run_pda(m: Pda, word, depth: int = 1000) -> PdaResult:
    """Breadth-first search of the execution tree, down to ``depth`` edges from the root.

    A tuple that was already generated at a shallower depth is not expanded
    again: its subtree is the same, only deeper.
    """
    if depth < 1:
        raise ValueError("depth bound must be >= 1")
    _check_word(m.alphabet, word)
    root = PdaExecTuple(m.start, (), tuple(word))
    if root.state in m.accepts and not root.remaining:
        return PdaResult(True, depth=0)
    frontier = [root]
    seen = {root}
    level = 0
    while frontier:
        if level >= depth:
            # Active leaves remain below the bound.
            if any(True for t in frontier for _ in pda_children(m, t)):
                return PdaResult(False, exhausted=False, depth=level)
            return PdaResult(False, exhausted=True, depth=level)
        level += 1
        nxt = []
        for t in frontier:
            for child in pda_children(m, t):
                if child.state in m.accepts and not child.remaining:
                    return PdaResult(True, depth=level)
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
        frontier = nxt
    return PdaResult(False, exhausted=True, depth=level - 1)


def accept_pda(m: Pda, word, depth: int = 1000) -> bool:
    return run_pda(m, word, depth).accepted


# TM

@dataclass(frozen=True)
class TmConfiguration:
    state: object
    left: tuple   # nearest-head first
    right: tuple  # head is over right[0]; empty means blank
    status: str | None = None
    steps: int = 0


def run_tm(m: Tm, word, steps: int = 1000) -> TmConfiguration:
    if steps < 1:
        raise ValueError("step bound must be >= 1")
    _check_word(m.alphabet, word)
    # Both halves are kept as Python lists with the cell nearest the head at the end.
    left: list = []
    right = list(reversed(word))
    q = m.start
    halts = {m.accept: ACCEPTED, m.reject: REJECTED}
    taken = 0
    status = halts.get(q)
    while status is None and taken < steps:
        taken += 1
        s = right[-1] if right else BLANK
        action = m.transitions.get((q, s))
        if action is None:
            q = m.reject
            status = REJECTED
            break
        q, written, move = action
        if right:
            right[-1] = written
        else:
            right.append(written)
        if move == "R":
            left.append(right.pop())
        else:
            right.append(left.pop() if left else BLANK)
        status = halts.get(q)
    if status is None:
        status = OUT_OF_FUEL
    return TmConfiguration(q, tuple(reversed(left)), tuple(reversed(right)), status, taken)


def left_of_head(config: TmConfiguration) -> tuple:
    return tuple(reversed(config.left))


def remove_final_nils(symbols) -> tuple:
    symbols = tuple(symbols)
    end = len(symbols)
    while end and symbols[end - 1] == BLANK:
        end -= 1
    return symbols[:end]


def tm_output(m: Tm, word, steps: int = 1000) -> tuple:
    return remove_final_nils(left_of_head(run_tm(m, word, steps)))


def accept_tm(m: Tm, word, steps: int = 1000) -> bool:
    return run_tm(m, word, steps).status == ACCEPTED


def accepts(m, word, bounds: RunBounds | None = None) -> bool:
    """Acceptance for any machine kind under the given bounds."""
    bounds = bounds or RunBounds()
    if isinstance(m, Dfa):
        return accept_dfa(m, word)
    if isinstance(m, Pda):
        return accept_pda(m, word, bounds.pda_depth)
    if isinstance(m, Tm):
        return accept_tm(m, word, bounds.tm_steps)
    raise TypeError(f"not a machine: {m!r}")
