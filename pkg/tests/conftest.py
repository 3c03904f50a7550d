from itertools import combinations

from hypothesis import strategies as st

from orematch.hypergraph import Hypergraph


@st.composite
def small_3graphs(draw, min_n=3, max_n=8):
    """Random 3-graph with at most max_n vertices."""
    n = draw(st.integers(min_n, max_n))
    triples = list(combinations(range(n), 3))
    chosen = draw(st.lists(st.sampled_from(triples), max_size=len(triples), unique=True))
    return Hypergraph(n, 3, chosen)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        status, title, elapsed, note = mod.RESULTS[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d} ({elapsed:6.1f}s) {title}: {note}")
