import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from orientlab.graph import Graph  # noqa: E402

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.rsplit("::", 1)[1]
        _ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        number = name.split("_")[2]
        terminalreporter.write_line(f"criterion {number}: {_ACCEPTANCE[name]} ({name})")


@st.composite
def connected_graphs(draw, max_n=8, max_extra=6):
    """A random spanning tree plus a few extra edges."""
    n = draw(st.integers(2, max_n))
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    for _ in range(draw(st.integers(0, max_extra))):
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(0, n - 1))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, sorted(edges))


@st.composite
def random_trees(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    parents = [0] + [draw(st.integers(1, v)) for v in range(1, n)]
    return parents


@pytest.fixture(scope="session")
def built():
    """Memoised construction lookup shared across test modules."""
    from orientlab.constructions import build

    cache = {}

    def get(cid):
        if cid not in cache:
            cache[cid] = build(cid)
        return cache[cid]

    return get
