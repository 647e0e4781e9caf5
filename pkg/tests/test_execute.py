import pytest
from hypothesis import given, settings, strategies as st

from automata_grader.execute import (
    ACCEPTED,
    OUT_OF_FUEL,
    REJECTED,
    LetterNotInAlphabet,
    RunBounds,
    TmConfiguration,
    accept_dfa,
    accept_pda,
    accept_tm,
    left_of_head,
    remove_final_nils,
    run_dfa,
    run_pda,
    run_tm,
    tm_output,
)
from automata_grader.model import BLANK, Tm

from conftest import load_machine
from strategies import dfas, pdas, tms, words


def naive_pda_accepts(m, word, depth):
    """Depth-first walk of the whole execution tree, no sharing or pruning."""
    def walk(state, stack, rest, d):
        if state in m.accepts and not rest:
            return True
        if d == depth:
            return False
        for (q, a, s), targets in m.transitions.items():
            if q != state:
                continue
            if a is not None and (not rest or rest[0] != a):
                continue
            if s is not None and (not stack or stack[0] != s):
                continue
            new_rest = rest[1:] if a is not None else rest
            base = stack[1:] if s is not None else stack
            for q2, push in targets:
                new_stack = base if push is None else (push,) + base
                if walk(q2, new_stack, new_rest, d + 1):
                    return True
        return False

    return walk(m.start, (), tuple(word), 0)


# DFA

def test_broken_student_dfa_ends_in_e2():
    m = load_machine("dfa/stage3.lisp")
    assert run_dfa(m, (0, 1, 1, 1)) == "E2"


def test_empty_word_stays_in_start(instructor_dfa):
    assert run_dfa(instructor_dfa, ()) == "EVEN"
    assert not accept_dfa(instructor_dfa, ())


def test_instructor_dfa_traces(instructor_dfa):
    assert run_dfa(instructor_dfa, (1,)) == "ODD"
    assert accept_dfa(instructor_dfa, (1, 1, 1))


def test_final_student_dfa_accepts_listed_words():
    m = load_machine("dfa/stage4.lisp")
    assert accept_dfa(m, (0, 1, 1, 1))
    assert accept_dfa(m, (1, 1, 1, 0))
    assert accept_dfa(m, (1, 1, 1))


def test_letter_outside_alphabet(instructor_dfa):
    with pytest.raises(LetterNotInAlphabet) as info:
        run_dfa(instructor_dfa, (0, 2))
    assert info.value.letter == 2 and info.value.index == 1


# PDA

def test_pda_without_epsilon_fix_rejects_empty_word():
    m = load_machine("pda/stage2.lisp")
    result = run_pda(m, (), 1000)
    assert not result.accepted
    assert result.exhausted


@pytest.mark.parametrize("path", ["pda/stage3-accept-states.lisp", "pda/stage3-epsilon.lisp"])
def test_fixed_pdas_accept_empty_word(path):
    assert accept_pda(load_machine(path), (), 1000)


def test_final_pda_accepts_000111():
    m = load_machine("pda/stage3-epsilon.lisp")
    assert run_pda(m, (0, 0, 0, 1, 1, 1), 1000).accepted


# Frozen from naive_pda_accepts at depth 1000.
@pytest.mark.parametrize("word,expected", [((0, 1, 1), False), ((0, 1), True), ((1, 0), False)])
def test_instructor_pda_against_tree_walk(instructor_pda, word, expected):
    assert naive_pda_accepts(instructor_pda, word, 1000) is expected
    assert accept_pda(instructor_pda, word, 1000) is expected


def test_pda_bound_cut_off():
    m = load_machine("pda/stage3-epsilon.lisp")
    # 0 0 0 1 1 1 needs 8 edges: one push of z, six letters, one pop of z.
    assert not run_pda(m, (0, 0, 0, 1, 1, 1), 7).accepted
    assert not run_pda(m, (0, 0, 0, 1, 1, 1), 7).exhausted
    assert run_pda(m, (0, 0, 0, 1, 1, 1), 8).accepted


def test_pda_depth_must_be_positive(instructor_pda):
    with pytest.raises(ValueError):
        run_pda(instructor_pda, (), 0)


@settings(max_examples=300, deadline=None)
@given(pdas(), words, st.integers(1, 7))
def test_pda_matches_tree_walk(m, w, n):
    assert accept_pda(m, w, n) == naive_pda_accepts(m, w, n)


@settings(max_examples=1000, deadline=None)
@given(pdas(), words, st.integers(1, 10), st.integers(0, 10))
def test_pda_bound_monotonicity(m, w, n, extra):
    small = run_pda(m, w, n)
    big = run_pda(m, w, n + extra)
    if small.accepted:
        assert big.accepted
    if not small.accepted and small.exhausted:
        assert not big.accepted


# TM

def test_corrected_tm_flips(instructor_tm):
    m = load_machine("tm/stage3.lisp")
    config = run_tm(m, (1, 0, 1, 1, 1, 0, 1, 0))
    assert config.status == ACCEPTED
    assert remove_final_nils(left_of_head(config)) == (0, 1, 0, 0, 0, 1, 0, 1)


def test_corrected_tm_hand_traces():
    m = load_machine("tm/stage3.lisp")
    # blank -> R to q3, blank -> L to q1: nothing but blanks left of the head.
    assert tm_output(m, ()) == ()
    assert tm_output(m, (0,)) == (1,)
    assert accept_tm(m, (0, 1, 1))
    config = run_tm(m, (1, 0))
    assert (0, 1) == remove_final_nils(left_of_head(config))


def test_buggy_tm_output_on_zero():
    m = load_machine("tm/stage2.lisp")
    assert tm_output(m, (0,)) != (1,)


def test_empty_delta_rejects_after_one_step():
    m = Tm("E", ("A", "Y", "N"), (0,), (0, BLANK), {}, "A", "Y", "N")
    config = run_tm(m, ())
    assert config.status == REJECTED and config.state == "N" and config.steps == 1
    assert not accept_tm(m, ())


def test_looping_tm_runs_out_of_fuel():
    m = Tm("Loop", ("A", "Y", "N"), (0,), (0, BLANK),
           {("A", 0): ("A", 0, "R"), ("A", BLANK): ("A", BLANK, "R")}, "A", "Y", "N")
    config = run_tm(m, (0,), 100)
    assert config.status == OUT_OF_FUEL and config.steps == 100
    assert not accept_tm(m, (0,), 100)


def test_move_left_off_the_tape_reads_blank():
    m = Tm("L", ("A", "Y", "N"), (0, 1), (0, 1, BLANK), {("A", 0): ("Y", 1, "L")}, "A", "Y", "N")
    config = run_tm(m, (0,))
    assert config.left == () and config.right == (BLANK, 1)


def test_left_of_head_reverses():
    assert left_of_head(TmConfiguration("Q", (1, 0), ())) == (0, 1)
    assert left_of_head(TmConfiguration("Q", (), ())) == ()


@pytest.mark.parametrize("given_,expected", [
    ((0, 1, BLANK, BLANK), (0, 1)),
    ((0, BLANK, 1, BLANK), (0, BLANK, 1)),
    ((BLANK,), ()),
])
def test_remove_final_nils(given_, expected):
    assert remove_final_nils(given_) == expected


def test_run_bounds_validate():
    with pytest.raises(ValueError):
        RunBounds(pda_depth=0)
    assert RunBounds() == RunBounds(1000, 1000)


@settings(max_examples=1000, deadline=None)
@given(tms(), words, st.integers(1, 40), st.integers(0, 40))
def test_tm_halt_monotonicity(m, w, k, extra):
    first = run_tm(m, w, k)
    if first.status != OUT_OF_FUEL:
        assert run_tm(m, w, k + extra) == first


@settings(max_examples=1000)
@given(dfas(), words, words)
def test_dfa_compositionality(m, u, v):
    assert run_dfa(m, u + v) == run_dfa(m, v, state=run_dfa(m, u))


@settings(max_examples=1000)
@given(st.lists(st.sampled_from((0, 1, BLANK)), max_size=12))
def test_remove_final_nils_idempotent(s):
    once = remove_final_nils(s)
    assert remove_final_nils(once) == once
    assert not once or once[-1] != BLANK


def _logical_tape(config):
    cells = left_of_head(config) + config.right
    start, end = 0, len(cells)
    while start < end and cells[start] == BLANK:
        start += 1
    while end > start and cells[end - 1] == BLANK:
        end -= 1
    return cells[start:end]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from("LR"), min_size=1, max_size=6), words, st.integers(1, 30))
def test_identity_writes_conserve_the_tape(moves, w, steps):
    # A machine that cycles through ``moves`` rewriting each cell with itself.
    n = len(moves)
    states = tuple(f"M{i}" for i in range(n)) + ("ACC", "REJ")
    tape = (0, 1, BLANK)
    delta = {(f"M{i}", s): (f"M{(i + 1) % n}", s, d) for i, d in enumerate(moves) for s in tape}
    m = Tm("Id", states, (0, 1), tape, delta, "M0", "ACC", "REJ")
    config = run_tm(m, w, steps)
    assert config.status == OUT_OF_FUEL
    assert _logical_tape(config) == _logical_tape(TmConfiguration("M0", (), tuple(w)))


def test_left_then_right_restores_configuration():
    states = ("A", "B", "C", "ACC", "REJ")
    tape = (0, 1, BLANK)
    delta = {}
    for s in tape:
        delta[("A", s)] = ("B", s, "R")
        delta[("B", s)] = ("C", s, "L")
        delta[("C", s)] = ("A", s, "R")
    m = Tm("LR", states, (0, 1), tape, delta, "A", "ACC", "REJ")
    after_r = run_tm(m, (0, 1, 1), 1)
    after_rlr = run_tm(m, (0, 1, 1), 3)
    assert (after_r.left, after_r.right) == (after_rlr.left, after_rlr.right)
