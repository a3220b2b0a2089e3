from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from hypervis.trees import Tree, validate_tree  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[str, str]] = {}


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = ("PASS" if ok else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {detail}")


def to_tree(g: nx.Graph) -> Tree:
    return validate_tree(g.number_of_nodes(), list(g.edges()))


@st.composite
def trees(draw, min_size=1, max_size=10):
    size = draw(st.integers(min_size, max_size))
    if size == 1:
        return validate_tree(1, [])
    if size == 2:
        return validate_tree(2, [(0, 1)])
    seq = draw(st.lists(st.integers(0, size - 1), min_size=size - 2, max_size=size - 2))
    return to_tree(nx.from_prufer_sequence(seq))


def eighths(lo=-16, hi=16):
    return st.integers(lo, hi).map(lambda i: Fraction(i, 8))


@pytest.fixture
def frac():
    return Fraction
