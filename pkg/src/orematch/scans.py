"""Desk-scale scans of the degree-sum theorems and the matching conjectures.

n = 6 is scanned exhaustively: each of the 2^20 labeled 3-graphs is a 20-bit
mask over the lexicographic triples of range(6), and all statistics are
vectorized over mask ranges.  Larger n is sampled (seeded per sample index,
so results do not depend on the worker count) and, for conjectures, also
explored by hill climbing from the extremal constructions.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations
from math import comb, floor
from typing import Any, Optional

import numpy as np

from .constructions import ConstructionParams, find_sparse_set, h_nkls, h_star
from .hypergraph import Hypergraph, HypergraphError, bits, from_bits, mask_of
from .report import ScanReport, hypergraph_witness
from .solver import has_perfect_matching, max_matching

EXHAUSTIVE_N = 6
CONJECTURES = ("conj2", "conj3", "conj4")
_UNDEFINED = 1 << 20


def is_subgraph_of_hstar(H: Hypergraph) -> Optional[frozenset[int]]:
    """A set S of size n/3 + 1 meeting every edge in at most one vertex, or None."""
    if H.k != 3:
        raise HypergraphError("H* embedding is defined for 3-graphs")
    if H.n % 3:
        raise HypergraphError(f"n={H.n} is not divisible by 3")
    S = find_sparse_set(H, H.n // 3 + 1)
    if S is not None:
        # n/3 disjoint edges cover at most n/3 vertices of S, so no perfect matching
        assert has_perfect_matching(H) is None
    return S


def theorem1_threshold(n: int) -> Fraction:
    """sigma2'(H*) = 2n^2/3 - 8n/3 + 2."""
    return Fraction(2 * n * n - 8 * n + 6, 3)


def theorem6_threshold(n: int, eps: Fraction) -> Fraction:
    return Fraction(2 * n * n, 3) - Fraction(eps) * n * n


def conjecture_threshold(c: str, n: int, s: int) -> int:
    if c == "conj2":
        return 2 * (comb(n - 1, 2) - comb(n - s, 2))
    if c == "conj3":
        return (2 * s - 2) * (n - 1)
    if c == "conj4":
        if 9 * s <= 2 * n + 4:
            return (2 * s - 2) * (n - 1)
        return 2 * comb(3 * s - 2, 2)
    raise HypergraphError(f"unknown conjecture {c!r}")


def _strict_cut(threshold: Fraction) -> int:
    """Smallest integer strictly above ``threshold``."""
    return floor(threshold) + 1


# ------------------------------------------------------------ n = 6 census


class _Census6:
    """Lookup masks for vectorized statistics on 20-bit triple masks."""

    def __init__(self):
        n = EXHAUSTIVE_N
        self.triples = list(combinations(range(n), 3))
        self.vert = np.array([mask_of(i for i, t in enumerate(self.triples) if v in t) for v in range(n)], dtype=np.uint32)
        self.pairs = list(combinations(range(n), 2))
        self.pair = np.array(
            [mask_of(i for i, t in enumerate(self.triples) if u in t and v in t) for u, v in self.pairs],
            dtype=np.uint32,
        )
        index = {t: i for i, t in enumerate(self.triples)}
        pms = set()
        for t in self.triples:
            rest = tuple(v for v in range(n) if v not in t)
            pms.add(mask_of((index[t], index[rest])))
        self.pms = np.array(sorted(pms), dtype=np.uint32)
        # sets S of size 3 (= n/3 + 1 = n - 2s + 1 for s = 2); forbidden = triples with >= 2 in S
        self.forbidden = np.array(
            [mask_of(i for i, t in enumerate(self.triples) if len(set(t) & set(S)) >= 2) for S in combinations(range(n), 3)],
            dtype=np.uint32,
        )

    def stats(self, x: np.ndarray) -> dict[str, np.ndarray]:
        deg = np.stack([np.bitwise_count(x & m).astype(np.int32) for m in self.vert])
        no_isolated = (deg > 0).all(axis=0)
        sig = np.full(x.shape, _UNDEFINED, dtype=np.int32)
        for (u, v), pm in zip(self.pairs, self.pair):
            adj = (x & pm) != 0
            np.minimum(sig, np.where(adj, deg[u] + deg[v], _UNDEFINED), out=sig)
        has_pm = np.zeros(x.shape, dtype=bool)
        for pm in self.pms:
            has_pm |= (x & pm) == pm
        embeds = np.zeros(x.shape, dtype=bool)
        for f in self.forbidden:
            embeds |= (x & f) == 0
        return {"no_isolated": no_isolated, "sigma": sig, "has_pm": has_pm, "embeds": embeds}


def _census_shard(experiment: str, lo: int, hi: int, cut: int) -> dict[str, Any]:
    """Count one mask range [lo, hi) of the n = 6 space for ``experiment``."""
    tables = _Census6()
    totals = {"scanned": 0, "filtered": 0, "violating": 0}
    extra: dict[str, int] = {}
    violators: list[int] = []
    chunk = 1 << 16
    for start in range(lo, hi, chunk):
        x = np.arange(start, min(start + chunk, hi), dtype=np.uint32)
        st = tables.stats(x)
        defined = st["sigma"] != _UNDEFINED
        passes = defined & (st["sigma"] >= cut)
        if experiment != "conj4":
            passes &= st["no_isolated"]
        pm = st["has_pm"]
        totals["scanned"] += x.size
        totals["filtered"] += int(passes.sum())
        if experiment == "theorem1":
            bad = passes & ~pm
            boundary = st["no_isolated"] & (st["sigma"] == cut - 1) & ~pm
            _add(extra, "boundary_no_pm", int(boundary.sum()))
            _add(extra, "boundary_no_pm_embeds", int((boundary & st["embeds"]).sum()))
        elif experiment == "theorem6":
            bad = passes & ~pm & ~st["embeds"]
            _add(extra, "filtered_embeds", int((passes & st["embeds"]).sum()))
            _add(extra, "filtered_has_pm", int((passes & pm).sum()))
        elif experiment == "conj2":
            # at n = 6, s = 2 a matching of size s is a perfect matching
            only_if_fail = passes & ~pm & ~st["embeds"]
            if_fail = passes & pm & st["embeds"]
            bad = only_if_fail | if_fail
            _add(extra, "only_if_failures", int(only_if_fail.sum()))
            _add(extra, "if_failures", int(if_fail.sum()))
        else:
            bad = passes & ~pm
        totals["violating"] += int(bad.sum())
        violators.extend(int(v) for v in x[bad])
    totals.update(extra)
    return {"totals": totals, "violators": violators}


def _add(d: dict[str, int], key: str, value: int) -> None:
    d[key] = d.get(key, 0) + value


def _exhaustive6(experiment: str, cut: int, workers: int) -> tuple[dict[str, int], list[int]]:
    space = 1 << 20
    nshards = max(workers, 1) * 4
    edges = np.linspace(0, space, nshards + 1).astype(int).tolist()
    jobs = [(experiment, lo, hi, cut) for lo, hi in zip(edges, edges[1:]) if hi > lo]
    if workers <= 1:
        parts = [_census_shard(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_census_shard, *zip(*jobs)))
    totals: dict[str, int] = {}
    for p in parts:
        for key, value in p["totals"].items():
            _add(totals, key, value)
    violators = sorted(v for p in parts for v in p["violators"])
    return totals, violators


def _hstar6_probe(cut: int, experiment: str) -> dict[str, Any]:
    H, _ = h_star(EXHAUSTIVE_N)
    sig = H.sigma2("adjacent")
    S = is_subgraph_of_hstar(H)
    return {
        "name": "h_star(6)",
        "mask": H.to_bits(list(combinations(range(EXHAUSTIVE_N), 3))),
        "sigma2_adjacent": sig,
        "threshold_cut": cut,
        "at_theorem1_boundary": sig == theorem1_threshold(EXHAUSTIVE_N),
        "passes_filter": sig is not None and sig >= cut and not H.isolated_vertices(),
        "has_pm": has_perfect_matching(H) is not None,
        "embeds_hstar": S is not None,
        "embedding": sorted(S) if S is not None else None,
        "classification": classify(H, experiment),
    }


def classify(H: Hypergraph, experiment: str) -> str:
    """Which conclusion of the theorem holds for H: "has-pm", "embeds" (theorem6 only) or "neither"."""
    if has_perfect_matching(H) is not None:
        return "has-pm"
    if experiment == "theorem6" and is_subgraph_of_hstar(H) is not None:
        return "embeds"
    return "neither"


# ------------------------------------------------------------ sampling


def _sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _random_graph(rng: np.random.Generator, n: int, p: float, universe: list[tuple[int, ...]]) -> Hypergraph:
    keep = rng.random(len(universe)) < p
    return Hypergraph(n, 3, [t for t, b in zip(universe, keep) if b])


def _mutate(rng: np.random.Generator, base: Hypergraph, universe: list[tuple[int, ...]], max_flips: int = 3) -> Hypergraph:
    flips = rng.choice(len(universe), size=int(rng.integers(1, max_flips + 1)), replace=False)
    toggled = {universe[i] for i in flips}
    kept = [e for e in base.edges if e not in toggled]
    added = [e for e in toggled if e not in base]
    return Hypergraph(base.n, base.k, kept + added)


def _theorem_sample_shard(experiment, n, cut, seed, lo, hi, p, node_budget):
    universe = list(combinations(range(n), 3))
    base, _ = h_star(n)
    out = {"scanned": 0, "filtered": 0, "violating": 0, "undecided": 0, "filtered_embeds": 0, "filtered_has_pm": 0}
    witnesses = []
    for i in range(lo, hi):
        rng = _sample_rng(seed, i)
        H = _random_graph(rng, n, p, universe) if i % 2 == 0 else _mutate(rng, base, universe)
        out["scanned"] += 1
        sig = H.sigma2("adjacent")
        if H.isolated_vertices() or sig is None or sig < cut:
            continue
        out["filtered"] += 1
        try:
            pm = has_perfect_matching(H, node_budget=node_budget)
        except TimeoutError:
            out["undecided"] += 1
            continue
        if pm is not None:
            out["filtered_has_pm"] += 1
            continue
        if experiment == "theorem6" and find_sparse_set(H, n // 3 + 1) is not None:
            out["filtered_embeds"] += 1
            continue
        out["violating"] += 1
        witnesses.append((i, H))
    return out, witnesses


def _run_jobs(fn, jobs, workers):
    if workers <= 1:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _shards(total: int, workers: int) -> list[tuple[int, int]]:
    if total <= 0:
        return []
    cuts = np.linspace(0, total, max(workers, 1) + 1).astype(int).tolist()
    return [(lo, hi) for lo, hi in zip(cuts, cuts[1:]) if hi > lo]


def _check_theorem_n(n: int) -> None:
    if n % 3:
        raise HypergraphError(f"n={n} is not divisible by 3")
    if n < 6:
        raise HypergraphError(f"n={n} is below the smallest scanned order 6")


def _theorem_scan(
    experiment: str,
    n: int,
    threshold: Fraction,
    seed: int,
    samples: int,
    workers: int,
    p: float,
    node_budget: Optional[int],
    params: dict[str, Any],
) -> ScanReport:
    _check_theorem_n(n)
    t0 = time.perf_counter()
    cut = _strict_cut(threshold)
    params = dict(params, n=n, threshold=str(threshold), cut=cut)
    if n == EXHAUSTIVE_N:
        totals, violators = _exhaustive6(experiment, cut, workers)
        universe = list(combinations(range(n), 3))
        witnesses = [
            hypergraph_witness(from_bits(n, 3, v, universe), mask=v, classification="violator")
            for v in violators
        ]
        report = ScanReport(experiment, dict(params, mode="exhaustive"), totals, witnesses,
                            [_hstar6_probe(cut, experiment)], workers)
    else:
        jobs = [(experiment, n, cut, seed, lo, hi, p, node_budget) for lo, hi in _shards(samples, workers)]
        parts = _run_jobs(_theorem_sample_shard, jobs, workers)
        totals = {"scanned": 0, "filtered": 0, "violating": 0, "undecided": 0, "filtered_embeds": 0, "filtered_has_pm": 0}
        found = []
        for out, ws in parts:
            for key, value in out.items():
                totals[key] += value
            found.extend(ws)
        witnesses = [hypergraph_witness(H, sample=i, classification="violator") for i, H in sorted(found, key=lambda x: x[0])]
        params.update(mode="sampled", seed=seed, samples=samples, p=p, budget_nodes=node_budget)
        report = ScanReport(experiment, params, totals, witnesses, [], workers)
    report.elapsed = time.perf_counter() - t0
    report.check_totals()
    return report


def scan_theorem1(
    n: int,
    seed: int = 0,
    samples: int = 10_000,
    workers: int = 1,
    p: float = 0.85,
    node_budget: Optional[int] = None,
) -> ScanReport:
    """No-isolated-vertex 3-graphs with sigma2' above sigma2'(H*) but no perfect matching.

    Violators are findings: the theorem is asymptotic.  The n = 6 report
    also counts the boundary census (sigma2' equal to the threshold, no
    perfect matching) and probes h_star(6).
    """
    return _theorem_scan("theorem1", n, theorem1_threshold(n), seed, samples, workers, p, node_budget, {})


def scan_theorem6(
    n: int,
    eps: Fraction = Fraction(1, 10),
    seed: int = 0,
    samples: int = 10_000,
    workers: int = 1,
    p: float = 0.85,
    node_budget: Optional[int] = None,
) -> ScanReport:
    """Filtered instances (sigma2' > 2n^2/3 - eps n^2) that neither embed in H* nor have a perfect matching."""
    eps = Fraction(eps)
    return _theorem_scan("theorem6", n, theorem6_threshold(n, eps), seed, samples, workers, p, node_budget, {"eps": str(eps)})


# ------------------------------------------------------------ conjectures


def _conj_hypothesis(c: str, H: Hypergraph, cut: int) -> bool:
    sig = H.sigma2("adjacent")
    if sig is None or sig < cut:
        return False
    return c == "conj4" or not H.isolated_vertices()


def _has_s_matching(H: Hypergraph, s: int, node_budget: Optional[int]) -> Optional[bool]:
    r = max_matching(H, node_budget=node_budget, target=s)
    if r.size >= s:
        return True
    return False if r.optimal else None


def _conj_evaluate(c: str, H: Hypergraph, s: int, node_budget: Optional[int]) -> Optional[str]:
    """None if the conclusion holds, "undecided" on budget exhaustion, else the failure kind."""
    has = _has_s_matching(H, s, node_budget)
    if has is None:
        return "undecided"
    if c == "conj2":
        embeds = find_sparse_set(H, H.n - 2 * s + 1) is not None
        if not has and not embeds:
            return "only-if-failure"
        if has and embeds:
            return "if-failure"
        return None
    return None if has else "violator"


def _conj_base(c: str, n: int, s: int) -> Hypergraph:
    l = 3 if c == "conj4" and 9 * s > 2 * n + 4 else 2
    return h_nkls(ConstructionParams(n, 3, s, l))[0]


def _conj_sample_shard(c, n, s, cut, seed, lo, hi, p, node_budget):
    universe = list(combinations(range(n), 3))
    base = _conj_base(c, n, s)
    totals = {"scanned": 0, "filtered": 0, "violating": 0, "undecided": 0}
    found = []
    for i in range(lo, hi):
        rng = _sample_rng(seed, i)
        H = _random_graph(rng, n, p, universe) if i % 2 == 0 else _mutate(rng, base, universe)
        totals["scanned"] += 1
        if not _conj_hypothesis(c, H, cut):
            continue
        totals["filtered"] += 1
        verdict = _conj_evaluate(c, H, s, node_budget)
        if verdict == "undecided":
            totals["undecided"] += 1
        elif verdict is not None:
            totals["violating"] += 1
            found.append((i, verdict, H))
    return totals, found


def _hill_climb(c, n, s, cut, seed, steps, node_budget):
    """Random toggles from the extremal construction, keeping max matching < s and not lowering sigma2'."""
    rng = _sample_rng(seed, -1 % (1 << 32))
    universe = list(combinations(range(n), 3))
    H = _conj_base(c, n, s)
    needs_cover = c != "conj4"
    score = H.sigma2("adjacent")
    totals = {"hill_steps": 0, "hill_accepted": 0, "hill_best_sigma": score if score is not None else -1}
    found = []
    for step in range(steps):
        totals["hill_steps"] += 1
        cand = _mutate(rng, H, universe, max_flips=1)
        sig = cand.sigma2("adjacent")
        if sig is None or (score is not None and sig < score):
            continue
        if needs_cover and cand.isolated_vertices():
            continue
        if _has_s_matching(cand, s, node_budget) is not False:
            continue
        H, score = cand, sig
        totals["hill_accepted"] += 1
        totals["hill_best_sigma"] = max(totals["hill_best_sigma"], sig)
        if _conj_hypothesis(c, H, cut):
            verdict = _conj_evaluate(c, H, s, node_budget)
            if verdict not in (None, "undecided"):
                found.append((step, verdict, H))
    return totals, found


def scan_conjecture(
    c: str,
    n: int,
    s: int,
    samples: int = 1_000,
    seed: int = 0,
    workers: int = 1,
    p: float = 0.85,
    node_budget: Optional[int] = None,
    hill_steps: Optional[int] = None,
) -> ScanReport:
    """Look for 3-graphs meeting a conjecture's sigma2' hypothesis but not its conclusion.

    n = 6 is exhaustive; otherwise ``samples`` seeded samples plus
    ``hill_steps`` hill-climbing steps (default: same as ``samples``).
    conj2 failures are split into the two directions of the equivalence.
    """
    if c not in CONJECTURES:
        raise HypergraphError(f"unknown conjecture {c!r}")
    if not 2 <= s <= n // 3:
        raise HypergraphError(f"need 2 <= s <= n/3, got s={s}, n={n}")
    t0 = time.perf_counter()
    cut = conjecture_threshold(c, n, s) + 1
    params: dict[str, Any] = {"n": n, "s": s, "threshold": cut - 1, "cut": cut}
    if c == "conj4":
        params["branch"] = "H2" if 9 * s <= 2 * n + 4 else "H3"
    if n == EXHAUSTIVE_N:
        totals, violators = _exhaustive6(c, cut, workers)
        universe = list(combinations(range(n), 3))
        witnesses = []
        for v in violators:
            H = from_bits(n, 3, v, universe)
            witnesses.append(hypergraph_witness(H, mask=v, classification=_conj_evaluate(c, H, s, None)))
        report = ScanReport(c, dict(params, mode="exhaustive"), totals, witnesses, [], workers)
    else:
        steps = samples if hill_steps is None else hill_steps
        jobs = [(c, n, s, cut, seed, lo, hi, p, node_budget) for lo, hi in _shards(samples, workers)]
        parts = _run_jobs(_conj_sample_shard, jobs, workers)
        totals = {"scanned": 0, "filtered": 0, "violating": 0, "undecided": 0}
        found = []
        for t, f in parts:
            for key, value in t.items():
                totals[key] += value
            found.extend(("sample", i, verdict, H) for i, verdict, H in f)
        hill_totals, hill_found = _hill_climb(c, n, s, cut, seed, steps, node_budget)
        totals.update(hill_totals)
        totals["hill_violating"] = len(hill_found)
        found.extend(("hill", i, verdict, H) for i, verdict, H in hill_found)
        witnesses = [hypergraph_witness(H, origin=origin, index=i, classification=verdict) for origin, i, verdict, H in found]
        params.update(mode="sampled+hill", seed=seed, samples=samples, hill_steps=steps, p=p, budget_nodes=node_budget)
        report = ScanReport(c, params, totals, witnesses, [], workers)
    report.elapsed = time.perf_counter() - t0
    report.check_totals()
    return report


def crossover_report(n: int) -> ScanReport:
    from .constructions import crossover_s

    cs = crossover_s(n)
    rows = [
        {"s": r.s, "sigma_h1": r.sigma_h1, "sigma_h2": r.sigma_h2, "sigma_h3": r.sigma_h3,
         "h2_ge_h3": r.h2_ge_h3, "s_le_threshold": r.predicted, "agrees": r.agrees, "h2_gt_h1": r.h2_gt_h1}
        for r in cs.rows
    ]
    totals = {"scanned": len(rows), "filtered": len(rows), "violating": len(cs.exceptions),
              "h1_exceptions": len(cs.h1_exceptions)}
    return ScanReport("crossover_s", {"n": n, "threshold": str(cs.threshold)}, totals, rows)
