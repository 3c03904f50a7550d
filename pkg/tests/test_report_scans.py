import json
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orematch.constructions import h_star
from orematch.hypergraph import HypergraphError, from_bits
from orematch.report import (
    ScanReport,
    dumps_structured,
    hypergraph_witness,
    load_report,
    report_emit,
    revalidate_witness,
    table_rows,
)
from orematch.scans import (
    _Census6,
    classify,
    conjecture_threshold,
    crossover_report,
    is_subgraph_of_hstar,
    scan_conjecture,
    scan_theorem1,
    scan_theorem6,
    theorem1_threshold,
    theorem6_threshold,
)
from orematch.solver import has_perfect_matching

from oracles import brute_has_pm, sigma2_reference

TRIPLES6 = list(combinations(range(6), 3))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, (1 << 20) - 1))
def test_census_statistics_match_scalar_code(mask):
    stats = _Census6().stats(np.array([mask], dtype=np.uint32))
    H = from_bits(6, 3, mask, TRIPLES6)
    sig = sigma2_reference(6, H.edges, "adjacent")
    assert bool(stats["no_isolated"][0]) == (not H.isolated_vertices())
    if sig is not None:
        assert int(stats["sigma"][0]) == sig
    assert bool(stats["has_pm"][0]) == brute_has_pm(6, H.edges)
    assert bool(stats["embeds"][0]) == any(
        all(len(set(e) & set(S)) <= 1 for e in H.edges) for S in combinations(range(6), 3)
    )


def test_thresholds():
    assert theorem1_threshold(6) == 10
    assert theorem1_threshold(9) == 32
    assert theorem6_threshold(6, Fraction(1, 10)) == Fraction(24) - Fraction(36, 10)
    assert conjecture_threshold("conj2", 9, 2) == 2 * (28 - 21)
    assert conjecture_threshold("conj3", 9, 3) == 4 * 8
    assert conjecture_threshold("conj4", 9, 2) == 2 * 8
    assert conjecture_threshold("conj4", 30, 9) == 2 * 300
    with pytest.raises(HypergraphError):
        conjecture_threshold("conj9", 9, 2)


def test_hstar_classification():
    H, P = h_star(6)
    assert classify(H, "theorem6") == "embeds"
    assert classify(H, "theorem1") == "neither"
    assert is_subgraph_of_hstar(H) == P["S"]


def test_theorem1_n6_exhaustive():
    r = scan_theorem1(6)
    t = r.totals
    assert t["scanned"] == 1 << 20
    assert t["violating"] == 0
    assert t["filtered"] > 0
    assert t["boundary_no_pm"] >= 1  # h_star(6) sits on the boundary
    probe = r.probes[0]
    assert probe["sigma2_adjacent"] == 10 and not probe["has_pm"] and probe["embeds_hstar"]
    assert probe["at_theorem1_boundary"] and not probe["passes_filter"]


def test_theorem6_n6_exhaustive_and_deterministic():
    a = scan_theorem6(6, Fraction(1, 10))
    b = scan_theorem6(6, Fraction(1, 10))
    assert dumps_structured(a) == dumps_structured(b)
    assert a.totals["scanned"] == 1 << 20
    assert a.probes[0]["classification"] == "embeds"


def test_sampled_scan_independent_of_worker_count():
    a = scan_theorem1(9, seed=3, samples=40, workers=1)
    b = scan_theorem1(9, seed=3, samples=40, workers=2)
    assert a.totals == b.totals
    assert a.witnesses == b.witnesses
    c = scan_theorem1(9, seed=4, samples=40, workers=1)
    assert dumps_structured(a) == dumps_structured(scan_theorem1(9, seed=3, samples=40))
    assert c.params["seed"] == 4


def test_zero_samples_gives_empty_report():
    r = scan_theorem1(9, samples=0)
    assert r.totals["scanned"] == 0 and r.witnesses == []
    r = scan_conjecture("conj3", 9, 2, samples=0, hill_steps=0)
    assert r.totals["scanned"] == 0 and r.witnesses == []


def test_scan_argument_checks():
    with pytest.raises(HypergraphError):
        scan_theorem1(7)
    with pytest.raises(HypergraphError):
        scan_conjecture("conj3", 9, 4)
    with pytest.raises(HypergraphError):
        scan_conjecture("nope", 9, 2)


def test_conj2_n6_failures_are_genuine():
    r = scan_conjecture("conj2", 6, 2)
    t = r.totals
    assert t["violating"] == t["only_if_failures"] + t["if_failures"]
    for w in r.witnesses:
        assert revalidate_witness(w)
        assert w["sigma2_adjacent"] > conjecture_threshold("conj2", 6, 2)
        if w["classification"] == "only-if-failure":
            assert not w["has_pm"] and not w["embeds_hstar"]


@pytest.mark.parametrize("c,s", [("conj3", 2), ("conj4", 2)])
def test_conjecture_sampled_scan_small(c, s):
    r = scan_conjecture(c, 9, s, samples=30, hill_steps=30)
    r.check_totals()
    assert r.totals["scanned"] == 30
    assert r.totals["hill_steps"] == 30
    for w in r.witnesses:
        assert revalidate_witness(w)


def test_witness_revalidation_detects_tampering():
    H, _ = h_star(9)
    w = hypergraph_witness(H, tag="x")
    assert w["max_matching"] == 2 and w["embeds_hstar"] and not w["has_pm"]
    assert revalidate_witness(w)
    w["max_matching"] = 3
    assert not revalidate_witness(w)


def test_report_round_trip_and_table(tmp_path):
    H, _ = h_star(6)
    r = ScanReport("demo", {"n": 6}, {"scanned": 2, "filtered": 1, "violating": 1},
                   [hypergraph_witness(H, mask=5)], elapsed=1.25)
    path = report_emit(r, tmp_path / "r.json")
    doc = json.loads(path.read_text())
    assert "elapsed" not in doc
    back = load_report(path)
    assert back.witnesses == r.witnesses and back.totals == r.totals
    assert "elapsed" in json.loads(dumps_structured(r, timing=True))

    report_emit(r, tmp_path / "r.tsv", "table")
    lines = (tmp_path / "r.tsv").read_text().splitlines()
    header, rows = table_rows(r)
    assert lines[0].split("\t") == header
    assert len(lines) == 2
    with pytest.raises(ValueError):
        report_emit(r, tmp_path / "r.x", "xml")


def test_load_rejects_unknown_version(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"format_version": "other/9"}))
    with pytest.raises(ValueError):
        load_report(p)


def test_inconsistent_totals_rejected():
    with pytest.raises(ValueError):
        ScanReport("x", {}, {"scanned": 1, "filtered": 2, "violating": 0}).check_totals()


def test_crossover_report_100():
    r = crossover_report(100)
    assert len(r.witnesses) == 32
    assert r.totals["violating"] == 0
    assert all(w["agrees"] for w in r.witnesses)
