from __future__ import annotations

import pytest
from hypothesis import strategies as st

from cogweave import bundled_path
from cogweave.script_io import LinkKey, OntologyNode, OntologyPart, parse_cpl, parse_ontology_parts

SCRIPT_NAMES = ("cook_an_egg", "drive_a_car", "book_a_holiday")


def load_script(name: str):
    return parse_cpl(bundled_path(f"{name}.cpl").read_text(encoding="utf-8"))


def smart_home_parts():
    return parse_ontology_parts(bundled_path("smart_home.ont").read_text(encoding="utf-8"))


def path_part(labels: str, key: str, ordinal: int) -> OntologyPart:
    """Single-path part from 'A>B>C'."""
    node = None
    for label in reversed(labels.split(">")):
        node = OntologyNode(label, (node,) if node else ())
    return OntologyPart(LinkKey(ordinal, key), node)


@pytest.fixture
def egg():
    return load_script("cook_an_egg")


@pytest.fixture
def car():
    return load_script("drive_a_car")


@pytest.fixture
def holiday():
    return load_script("book_a_holiday")


@pytest.fixture
def smart_home():
    return smart_home_parts()


# --- hypothesis strategies -------------------------------------------------

ALPHABET = tuple("ABCDEFGHIJKL")


@st.composite
def ontology_trees(draw, depth: int = 5, alphabet=ALPHABET, root_alphabet=("A", "B", "C")):
    def node(level: int, pool) -> OntologyNode:
        label = draw(st.sampled_from(pool))
        if level >= depth:
            return OntologyNode(label)
        width = draw(st.integers(0, 3 if level == 1 else 2))
        return OntologyNode(label, tuple(node(level + 1, alphabet) for _ in range(width)))

    return node(1, root_alphabet)


@st.composite
def part_sequences(draw, max_parts: int = 6):
    trees = draw(st.lists(ontology_trees(), min_size=1, max_size=max_parts))
    return [OntologyPart(LinkKey(i + 1, f"Link_{i + 1}"), t) for i, t in enumerate(trees)]


@st.composite
def cpl_texts(draw, max_triples: int = 10, max_symbols: int = 12):
    n_symbols = draw(st.integers(3, max_symbols))
    symbols = ALPHABET[:n_symbols]
    triples = draw(
        st.lists(
            st.permutations(symbols).map(lambda p: tuple(p[:3])),
            min_size=1,
            max_size=max_triples,
            unique=True,
        )
    )
    lines = ["cpl v1", "name random"]
    lines += [f"symbol {s} Concept {s}" for s in symbols]
    lines += [f"step {o} {e} {s}" for o, e, s in triples]
    return "\n".join(lines) + "\n"


# --- acceptance summary ----------------------------------------------------

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid] = "PASS" if report.passed else "FAIL"
    elif "test_acceptance.py" in report.nodeid and report.failed:
        _acceptance[report.nodeid] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        terminalreporter.write_line(f"{outcome}  {nodeid.split('::')[-1]}")
