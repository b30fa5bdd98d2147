import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from nonrigid.derivation import Derivation  # noqa: E402
from nonrigid.parser import parse_expression  # noqa: E402
from nonrigid.ring import Poly, VarTable  # noqa: E402

TABLE = VarTable(["t"], ["x1", "x2", "x3"])


def polys(table: VarTable = TABLE, max_terms: int = 4, max_exp: int = 3) -> st.SearchStrategy[Poly]:
    width = len(table.symbols)
    exps = st.tuples(*[st.integers(0, max_exp)] * width)
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda terms: Poly(table, terms))


def derivations(table: VarTable = TABLE, max_terms: int = 3) -> st.SearchStrategy[Derivation]:
    return st.tuples(*[polys(table, max_terms, 2)] * table.n).map(lambda ims: Derivation(table, ims))


def make(images: dict, constants=(), variables=None) -> Derivation:
    variables = variables or list(images)
    table = VarTable(constants, variables)
    return Derivation(table, tuple(parse_expression(images[x], table) for x in variables))


@pytest.fixture
def weitzenboeck() -> Derivation:
    return make({"x1": "0", "x2": "x1", "x3": "x2"})


@pytest.fixture
def quasi_translation() -> Derivation:
    return make({"x1": "(x1 - x2)^2", "x2": "(x1 - x2)^2"})


@pytest.fixture
def rank_one() -> Derivation:
    return make({"x1": "2*x1 - 4*x2", "x2": "x1 - 2*x2"})


ACCEPTANCE_RESULTS: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        title, ok = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {title}")
