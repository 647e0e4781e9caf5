import itertools

import pytest

from automata_grader import model
from automata_grader.model import InvalidMachine, build_all, build_dfa, build_pda, build_tm
from automata_grader.sexpr import SList, parse_sexpr, parse_sexprs

from conftest import load_form, sample_text


def codes(exc_info):
    return [e.code for e in exc_info.value.errors]


def messages(exc_info):
    return [e.message for e in exc_info.value.errors]


INSTRUCTOR_DFA = """
(gen-dfa :name instructor-dfa :states (even odd) :alphabet (0 1) :start even :accept (odd)
 :transition-fun (((even 0) . even) ((even 1) . odd) ((odd 0) . odd) ((odd 1) . even)))
"""


def test_student_dfa_with_wrong_alphabet_has_domain_error():
    with pytest.raises(InvalidMachine) as info:
        build_dfa(load_form("dfa/stage1.lisp"))
    assert codes(info) == [model.BAD_TRANSITION_DOMAIN]
    assert messages(info)[0].startswith(
        "Transition function is not a function with domain Q x Sigma")


def test_instructor_dfa():
    m = build_dfa(parse_sexpr(INSTRUCTOR_DFA))
    assert len(m.states) == 2
    assert len(m.transitions) == 4
    assert m.start == "EVEN" and m.accepts == {"ODD"}
    assert m.name == "INSTRUCTOR-DFA"


def test_missing_start():
    form = parse_sexpr(INSTRUCTOR_DFA.replace(":start even", ""))
    with pytest.raises(InvalidMachine) as info:
        build_dfa(form)
    assert model.MISSING_COMPONENT in codes(info)


def test_keyword_order_does_not_matter():
    form = parse_sexpr(INSTRUCTOR_DFA)
    head, rest = form[0], list(form.elements[1:])
    pairs = [rest[i:i + 2] for i in range(0, len(rest), 2)]
    base = build_dfa(form)
    for perm in itertools.islice(itertools.permutations(pairs), 0, 720, 37):
        m = build_dfa(SList([head] + [x for p in perm for x in p]))
        assert (m.states, m.alphabet, m.transitions, m.start, m.accepts) == (
            base.states, base.alphabet, base.transitions, base.start, base.accepts)


def test_dfa_partial_transition_function_is_a_domain_error():
    form = parse_sexpr(INSTRUCTOR_DFA.replace("((odd 1) . even)", ""))
    with pytest.raises(InvalidMachine) as info:
        build_dfa(form)
    assert codes(info) == [model.BAD_TRANSITION_DOMAIN]
    assert "(ODD 1)" in messages(info)[0]


def test_dfa_bad_codomain_start_and_accepts_accumulate():
    text = (INSTRUCTOR_DFA.replace("((odd 1) . even)", "((odd 1) . nowhere)")
            .replace(":start even", ":start zero").replace(":accept (odd)", ":accept (odd top)"))
    with pytest.raises(InvalidMachine) as info:
        build_dfa(parse_sexpr(text))
    assert set(codes(info)) == {model.BAD_TRANSITION_CODOMAIN, model.BAD_START_STATE,
                                model.BAD_ACCEPT_STATES}


def test_duplicate_transition_key_rejected():
    text = INSTRUCTOR_DFA.replace("((odd 1) . even)", "((odd 1) . even) ((odd 1) . odd)")
    with pytest.raises(InvalidMachine) as info:
        build_dfa(parse_sexpr(text))
    assert codes(info) == [model.DUPLICATE_TRANSITION_KEY]


def test_duplicate_states_rejected():
    text = INSTRUCTOR_DFA.replace("(even odd)", "(even odd even)")
    with pytest.raises(InvalidMachine) as info:
        build_dfa(parse_sexpr(text))
    assert codes(info) == [model.DUPLICATE_SYMBOLS]


def test_unknown_component():
    text = INSTRUCTOR_DFA.replace(":start even", ":start even :colour blue")
    with pytest.raises(InvalidMachine) as info:
        build_dfa(parse_sexpr(text))
    assert codes(info) == [model.UNKNOWN_COMPONENT]


def test_build_is_deterministic():
    form = load_form("dfa/stage1.lisp")
    errs = []
    for _ in range(2):
        with pytest.raises(InvalidMachine) as info:
            build_dfa(form)
        errs.append(info.value.errors)
    assert errs[0] == errs[1]


def test_pda_missing_start_transition_message():
    with pytest.raises(InvalidMachine) as info:
        build_pda(load_form("pda/stage1.lisp"))
    assert messages(info) == [
        "Starting transition from (Q1 :e :e) missing from the transition function."]
    assert codes(info) == [model.MISSING_START_TRANSITION]


def test_corrected_pda_is_valid():
    m = build_pda(load_form("pda/stage2.lisp"))
    assert m.start == "Q0"
    assert m.transitions[("Q0", None, None)] == (("Q1", "Z"),)
    assert m.transitions[("Q2", None, "Z")] == (("Q3", None),)
    # Absent keys mean the empty transition set.
    assert ("Q3", 0, None) not in m.transitions


def test_pda_codomain_undeclared_state():
    text = sample_text("pda/stage2.lisp").replace("((q1 0  :e) . ((q1 0)))", "((q1 0  :e) . ((q9 0)))")
    with pytest.raises(InvalidMachine) as info:
        build_pda(parse_sexprs(text)[0])
    assert codes(info) == [model.BAD_TRANSITION_CODOMAIN]


def test_pda_epsilon_in_alphabet_rejected():
    text = sample_text("pda/stage2.lisp").replace(":alphabet (0 1)", ":alphabet (0 1 :e)")
    with pytest.raises(InvalidMachine):
        build_pda(parse_sexprs(text)[0])


def test_pda_empty_accept_set_allowed():
    text = sample_text("pda/stage2.lisp").replace(":accept-states (q3)", ":accept-states ()")
    m = build_pda(parse_sexprs(text)[0])
    assert m.accepts == frozenset()


def test_tm_blank_missing():
    with pytest.raises(InvalidMachine) as info:
        build_tm(load_form("tm/stage1.lisp"))
    assert messages(info) == ["Blank tape symbol nil missing from tape-alphabet."]


def test_tm_corrected_tape_alphabet_valid():
    m = build_tm(load_form("tm/stage2.lisp"))
    assert "NIL" in m.tape_alphabet
    assert m.transitions[("Q0", 0)] == ("Q0", 1, "L")


def test_tm_accept_equals_reject():
    text = sample_text("tm/stage3.lisp").replace(":reject-state q2", ":reject-state q1")
    with pytest.raises(InvalidMachine) as info:
        build_tm(parse_sexprs(text)[0])
    assert model.ACCEPT_EQUALS_REJECT in codes(info)


def test_tm_model_specific_checks():
    text = (sample_text("tm/stage3.lisp")
            .replace(":alphabet (0 1)", ":alphabet (0 1 2 nil)"))
    with pytest.raises(InvalidMachine) as info:
        build_tm(parse_sexprs(text)[0])
    assert set(codes(info)) == {model.BLANK_IN_INPUT_ALPHABET, model.INPUT_NOT_SUBSET_OF_TAPE}


def test_tm_transitions_out_of_halting_states_rejected():
    text = sample_text("tm/stage3.lisp").replace(
        "((q3 nil) . (q1 nil L))", "((q3 nil) . (q1 nil L)) ((q1 0) . (q1 0 R))")
    with pytest.raises(InvalidMachine) as info:
        build_tm(parse_sexprs(text)[0])
    assert codes(info) == [model.ACCEPT_REJECT_IN_DOMAIN]


def test_tm_bad_direction():
    text = sample_text("tm/stage3.lisp").replace("(q0 0 R)", "(q0 0 S)")
    with pytest.raises(InvalidMachine) as info:
        build_tm(parse_sexprs(text)[0])
    assert codes(info) == [model.BAD_TRANSITION_CODOMAIN]


def test_independent_defects_accumulate():
    # Four separate defects: unknown start, accept outside Q, bad key, duplicate state.
    text = """(gen-dfa :name d :states (a b b) :alphabet (0) :start c :accept (z)
              :transition-fun (((a 0) . a) ((b 0) . b) ((a 5) . a)))"""
    with pytest.raises(InvalidMachine) as info:
        build_dfa(parse_sexpr(text))
    assert len(info.value.errors) >= 4


def test_duplicate_names_in_one_file():
    text = INSTRUCTOR_DFA + INSTRUCTOR_DFA
    results = build_all(parse_sexprs(text))
    assert results[0].ok
    assert not results[1].ok
    assert [e.code for e in results[1].errors] == [model.DUPLICATE_NAME]


def test_wrong_head():
    with pytest.raises(InvalidMachine):
        build_pda(parse_sexpr(INSTRUCTOR_DFA))
