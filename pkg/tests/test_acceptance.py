"""Acceptance suite: one test per criterion, each with its tolerance and time limit.

A PASS/FAIL line per criterion is printed in the pytest terminal summary
(see conftest.py).  Run directly with ``python3 tests/test_acceptance.py``.
"""

import functools
import json
import logging
import time
from collections import Counter
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from orematch.augment import proof_guided_pm
from orematch.constructions import (
    ConstructionParams,
    crossover_k,
    crossover_s,
    family_for,
    full_star,
    h_nkls,
    h_star,
    hstar_params,
    sigma2_prime_closed,
)
from orematch.hypergraph import Hypergraph, complete
from orematch.lemmas import verify_lemma1_333, verify_lemma2, verify_lemma3
from orematch.report import dumps_structured
from orematch.scans import scan_theorem1, scan_theorem6
from orematch.solver import has_perfect_matching, max_matching

from oracles import brute_has_pm, brute_max_matching, hstar_edges

log = logging.getLogger("acceptance")

RESULTS: dict[int, tuple[str, str, float, str]] = {}


def criterion(number: int, title: str, limit: float):
    """Record PASS/FAIL and wall time; fail when the time limit is exceeded."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                note = fn(*args, **kwargs) or ""
                elapsed = time.perf_counter() - t0
                assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit:.0f}s"
            except BaseException as exc:
                RESULTS[number] = ("FAIL", title, time.perf_counter() - t0, str(exc).splitlines()[0][:120] if str(exc) else type(exc).__name__)
                raise
            RESULTS[number] = ("PASS", title, elapsed, note)

        return run

    return wrap


@criterion(1, "closed forms equal direct sigma2' computation", 10)
def test_c01_formula_agreement():
    checked = 0
    for n in range(6, 31, 3):
        H, _ = h_star(n)
        assert sigma2_prime_closed("hstar", hstar_params(n)) == H.sigma2("adjacent"), n
        checked += 1
    for n in range(6, 31):
        for s in range(2, n // 3 + 1):
            for l in (1, 2, 3):
                p = ConstructionParams(n, 3, s, l)
                H, _ = h_nkls(p)
                assert sigma2_prime_closed(family_for(p), p) == H.sigma2("adjacent"), (n, s, l)
                checked += 1
    return f"{checked} graphs"


@criterion(2, "h_star(n) has max matching n/3 - 1 and no perfect matching", 30)
def test_c02_hstar_extremality():
    for n in (6, 9, 12, 15):
        H, _ = h_star(n)
        assert set(H.edges) == set(hstar_edges(n))
        r = max_matching(H)
        assert r.optimal and r.size == n // 3 - 1, n
        r.matching.validate(H)
        assert has_perfect_matching(H) is None, n
    return "n = 6, 9, 12, 15"


@criterion(3, "Lemma 2 maximum is 6(n-1) with the empty-G1 tight case", 120)
def test_c03_lemma2():
    for n in (4, 5, 6):
        v = verify_lemma2(n)
        assert v.maximum == 6 * (n - 1) and not v.violations, (n, v.maximum)
        assert v.extra["empty_g1_tight"]
        tight = next(c for c in v.witnesses if not c["G1"])
        full = len(list(combinations(range(n), 2)))
        assert len(tight["G2"]) == len(tight["G3"]) == full
    return "max 18, 24, 30"


@criterion(4, "Lemma 3 maximum is 3(n+1) with the triple-star tight case", 300)
def test_c04_lemma3():
    for n in (5, 6):
        v = verify_lemma3(n)
        assert v.maximum == 3 * (n + 1) and not v.violations, (n, v.maximum)
        assert v.extra["triple_star_tight"]
    return "max 18, 21"


@criterion(5, "every 19-edge 3x3x3 family has 3 disjoint edges; 18 is tight", 300)
def test_c05_lemma1():
    v = verify_lemma1_333()
    assert v.searched == 2_220_075
    assert v.extra["families_without_3_disjoint"] == 0
    assert v.extra["tight_family_certified"]
    assert v.maximum == v.bound == 18
    return f"{v.searched} families"


@criterion(6, "sigma2'(H2) >= sigma2'(H3) iff s <= (2n+4)/9, n <= 200", 5)
def test_c06_crossover_s():
    rows = 0
    for n in range(9, 201):
        c = crossover_s(n)
        assert c.threshold == Fraction(2 * n + 4, 9)
        assert not c.exceptions, (n, c.exceptions[:1])
        rows += len(c.rows)
    return f"{rows} (n, s) pairs, 0 exceptions"


@criterion(7, "H1 vs H^(k-1) sign flips between k = 6 and k = 7 at n = 3000k", 5)
def test_c07_crossover_k():
    for k in range(3, 11):
        c = crossover_k(k, 3000 * k)
        if k <= 6:
            assert c.sigma_h1 < c.sigma_hk1, k
        else:
            assert c.sigma_h1 > c.sigma_hk1, k
    return "k = 3..10"


def _c08_instances():
    rng = np.random.default_rng(np.random.SeedSequence(8))
    for _ in range(10_000):
        n = int(rng.integers(3, 8))
        triples = list(combinations(range(n), 3))
        p = rng.random()
        yield Hypergraph(n, 3, [t for t in triples if rng.random() < p])
    for n in range(3, 8):
        yield complete(n)
        yield full_star(n)
    yield h_star(6)[0]
    for n in (6, 7):
        for l in (1, 2, 3):
            yield h_nkls(ConstructionParams(n, 3, 2, l))[0]


@criterion(8, "solver agrees with brute force on 10^4 random + constructions, n <= 7", 600)
def test_c08_solver_oracle():
    total = disagreements = 0
    for H in _c08_instances():
        total += 1
        r = max_matching(H)
        r.matching.validate(H)
        pm = has_perfect_matching(H) is not None
        if not r.optimal or r.size != brute_max_matching(H.n, H.edges) or pm != brute_has_pm(H.n, H.edges):
            disagreements += 1
    assert disagreements == 0
    return f"{total} instances, 0 disagreements"


@criterion(9, "exhaustive n = 6 theorem scans, deterministic, h_star(6) classified", 600)
def test_c09_theorem_scans():
    notes = []
    for scan, args in ((scan_theorem1, ()), (scan_theorem6, (Fraction(1, 10),))):
        first = scan(6, *args, seed=0, workers=8)
        second = scan(6, *args, seed=0, workers=8)
        assert dumps_structured(first) == dumps_structured(second)
        assert first.params["mode"] == "exhaustive" and first.totals["scanned"] == 1 << 20
        probe = first.probes[0]
        assert probe["sigma2_adjacent"] == 10 and probe["at_theorem1_boundary"]
        assert not probe["has_pm"] and probe["embeds_hstar"]
        t = first.totals
        notes.append(f"{first.experiment}: filtered {t['filtered']}, violating {t['violating']}")
    assert scan_theorem6(6, Fraction(1, 10), workers=8).probes[0]["classification"] == "embeds"
    return "; ".join(notes)


@criterion(10, "proof-guided heuristic: every claim valid, every stall adjudicated", 600)
def test_c10_proof_guided(tmp_path_factory):
    logfile = tmp_path_factory.mktemp("acceptance") / "c10_adjudications.jsonl"
    counts: Counter = Counter()
    with open(logfile, "w") as fh:
        index = 0
        for trial in range(1000):
            n = 9 if trial % 2 == 0 else 12
            triples = list(combinations(range(n), 3))
            while True:
                rng = np.random.default_rng(np.random.SeedSequence([10, index]))
                index += 1
                p = rng.uniform(0.1, 0.9)
                H = Hypergraph(n, 3, [t for t in triples if rng.random() < p])
                if not H.isolated_vertices():
                    break
            out = proof_guided_pm(H)
            if out.found_perfect:
                out.matching.validate(H)
                assert out.matching.is_perfect(), f"unsound claim on trial {trial}"
                counts["perfect"] += 1
                continue
            exact = has_perfect_matching(H)
            if out.status == "structural-exit":
                assert exact is None, f"structural exit on a graph with a perfect matching, trial {trial}"
            verdict = "missed-pm" if exact is not None else "no-pm"
            counts[f"{out.status}/{verdict}"] += 1
            record = {"trial": trial, "n": n, "status": out.status, "stage": out.stage,
                      "matching_size": out.matching.size, "exact_has_pm": exact is not None,
                      "edges": [list(e) for e in H.edges]}
            fh.write(json.dumps(record) + "\n")
            log.info("trial %d n=%d %s at %s: exact solver says %s", trial, n, out.status, out.stage, verdict)
    assert sum(counts.values()) == 1000
    return ", ".join(f"{k} {v}" for k, v in sorted(counts.items())) + f" (log {logfile})"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
