import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from totalrep import LabeledForest  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@st.composite
def forests(draw, max_nodes=6, k=None, max_k=3):
    k = draw(st.integers(1, max_k)) if k is None else k
    n = draw(st.integers(1, max_nodes))
    parent = [-1]
    for i in range(1, n):
        parent.append(draw(st.integers(-1, i - 1)))
    labels = draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    return LabeledForest(k, tuple(parent), tuple(labels))


@st.composite
def forest_pairs(draw, max_nodes=6, max_k=3):
    k = draw(st.integers(1, max_k))
    return draw(forests(max_nodes, k)), draw(forests(max_nodes, k))


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)


CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(number, ok, detail):
        CRITERIA[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        ok, detail = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
