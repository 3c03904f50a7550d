from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orematch.constructions import ConstructionParams, full_star, h_nkls, h_star
from orematch.hypergraph import Hypergraph, Matching, complete
from orematch.solver import has_perfect_matching, max_matching, max_uuw_matching, max_w_covering_matching

from conftest import small_3graphs
from oracles import brute_has_pm, brute_max_matching


def _all_matchings(edges):
    edges = [tuple(e) for e in edges]
    yield ()
    for size in range(1, len(edges) + 1):
        found = False
        for combo in combinations(edges, size):
            vs = [v for e in combo for v in e]
            if len(vs) == len(set(vs)):
                found = True
                yield combo
        if not found:
            return


@settings(max_examples=300, deadline=None)
@given(small_3graphs(max_n=9))
def test_max_matching_agrees_with_brute_force(H):
    r = max_matching(H)
    assert r.optimal
    r.matching.validate(H)
    assert r.size == brute_max_matching(H.n, H.edges)


@settings(max_examples=200, deadline=None)
@given(small_3graphs(max_n=9))
def test_perfect_matching_agrees_with_brute_force(H):
    m = has_perfect_matching(H)
    assert (m is not None) == brute_has_pm(H.n, H.edges)
    if m is not None:
        m.validate(H)
        assert m.is_perfect()


@settings(max_examples=150, deadline=None)
@given(small_3graphs(min_n=4, max_n=8), st.data())
def test_restricted_matchings_against_enumeration(H, data):
    W = data.draw(st.sets(st.integers(0, H.n - 1), max_size=3))
    uuw = [e for e in H.edges if len(set(e) & W) == 1]
    best_uuw = max(len(m) for m in _all_matchings(uuw))
    assert max_uuw_matching(H, W).size == best_uuw

    covering = [m for m in _all_matchings(H.edges) if W <= {v for e in m for v in e}]
    r = max_w_covering_matching(H, W)
    if not covering:
        assert r is None
    else:
        assert r is not None and r.size == max(len(m) for m in covering)
        assert W <= r.matching.vertices()


@pytest.mark.parametrize("n", [6, 9, 12, 15, 18])
def test_hstar_has_no_perfect_matching(n):
    H, _ = h_star(n)
    r = max_matching(H)
    assert r.optimal and r.size == n // 3 - 1
    assert has_perfect_matching(H) is None


def test_complete_graphs_have_perfect_matchings():
    for n in (3, 6, 9, 12):
        m = has_perfect_matching(complete(n))
        assert m is not None and m.is_perfect()
    assert has_perfect_matching(complete(7)) is None


def test_full_star_max_matching_is_one():
    assert max_matching(full_star(9)).size == 1


def test_hnkls_has_no_s_matching():
    # H^l_{n,k,s} has no matching of size s; complementary check that s-1 fits
    for n, s, l in [(9, 2, 1), (9, 3, 2), (12, 3, 3), (10, 3, 1), (12, 4, 2)]:
        H, _ = h_nkls(ConstructionParams(n, 3, s, l))
        assert max_matching(H).size == s - 1


def test_uuw_on_hstar_with_w_the_small_side():
    # every UUW edge uses two of the 5 T vertices, so floor(5/2) = 2 edges fit
    H, P = h_star(9)
    r = max_uuw_matching(H, P["S"])
    assert r.size == 2


def test_target_stops_early():
    H = complete(9)
    r = max_matching(H, target=1)
    assert r.size >= 1
    assert max_matching(H, target=3).optimal


def test_node_budget_reports_non_optimal_or_times_out():
    rng = np.random.default_rng(4)
    triples = list(combinations(range(18), 3))
    H = Hypergraph(18, 3, [t for t in triples if rng.random() < 0.5])
    r = max_matching(H, node_budget=3)
    r.matching.validate(H)
    assert not r.optimal
    H2, _ = h_star(18)
    with pytest.raises(TimeoutError):
        has_perfect_matching(H2, node_budget=5)


def test_quick_refusals():
    assert has_perfect_matching(complete(8)) is None
    H = Hypergraph(6, 3, [(0, 1, 2), (1, 2, 3), (2, 3, 4)])
    assert has_perfect_matching(H) is None  # vertex 5 is isolated
    assert max_w_covering_matching(H, [5]) is None


def test_empty_graph():
    r = max_matching(Hypergraph(6, 3))
    assert r.size == 0 and r.optimal
    assert isinstance(r.matching, Matching)
