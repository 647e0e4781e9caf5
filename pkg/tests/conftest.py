from pathlib import Path

import pytest

from automata_grader.model import build_machine
from automata_grader.sexpr import parse_sexprs

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def sample_text(rel: str) -> str:
    return (SAMPLES / rel).read_text()


def load_machine(rel: str, index: int = 0):
    forms = [f for f in parse_sexprs(sample_text(rel)) if f[0].name.startswith("GEN-")]
    return build_machine(forms[index])


def load_form(rel: str):
    return [f for f in parse_sexprs(sample_text(rel)) if f[0].name.startswith("GEN-")][0]


@pytest.fixture
def instructor_dfa():
    return load_machine("dfa/assignment.lisp")


@pytest.fixture
def instructor_pda():
    return load_machine("pda/assignment.lisp")


@pytest.fixture
def instructor_tm():
    return load_machine("tm/assignment.lisp")
