"""Exhaustive checks of the three small extremal lemmas and the W/U split.

Graph families are encoded as bitmasks over the lexicographic list of the
C(n, 2) pairs of ``range(n)``; the fixed 3-set A is {0, 1, 2}.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
from typing import Any, Optional

import numpy as np

from .hypergraph import Hypergraph, HypergraphError, VertexPartition, bits, mask_of


@dataclass(frozen=True)
class ProofParams:
    """Constants eps < eta < gamma < gamma' < rho < tau, all in (0, 1)."""

    epsilon: Fraction = Fraction(1, 100)
    eta: Fraction = Fraction(1, 50)
    gamma: Fraction = Fraction(1, 25)
    gamma_prime: Fraction = Fraction(1, 20)
    rho: Fraction = Fraction(1, 10)
    tau: Fraction = Fraction(1, 5)

    def __post_init__(self):
        chain = [Fraction(x) for x in (self.epsilon, self.eta, self.gamma, self.gamma_prime, self.rho, self.tau)]
        for name, value in zip(("epsilon", "eta", "gamma", "gamma_prime", "rho", "tau"), chain):
            object.__setattr__(self, name, value)
        if not (0 < chain[0] and all(a < b for a, b in zip(chain, chain[1:])) and chain[-1] < 1):
            raise HypergraphError("need 0 < eps < eta < gamma < gamma' < rho < tau < 1")


@dataclass
class LemmaVerdict:
    lemma: str
    params: dict[str, Any]
    maximum: int
    bound: int
    violations: list[Any] = field(default_factory=list)
    witnesses: list[Any] = field(default_factory=list)
    mode: str = "smart-exhaustive"
    searched: int = 0
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations and self.maximum <= self.bound

    @property
    def tight(self) -> bool:
        return self.maximum == self.bound


def w_threshold(n: int, eps: Fraction) -> Fraction:
    """n^2/3 - eps*n^2/2."""
    eps = Fraction(eps)
    return Fraction(n * n, 3) - eps * n * n / 2


def w_partition(H: Hypergraph, eps: Fraction) -> VertexPartition:
    """W = vertices of degree at most n^2/3 - eps*n^2/2, U = the rest."""
    if H.k != 3:
        raise HypergraphError("the W/U split is defined for 3-graphs")
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise HypergraphError(f"eps={eps} must lie in (0, 1)")
    t = w_threshold(H.n, eps)
    W = frozenset(v for v in range(H.n) if H.degrees[v] <= t)
    return VertexPartition({"U": frozenset(range(H.n)) - W, "W": W}, H.n)


def cross_disjoint_free(Ga: Hypergraph, Gb: Hypergraph) -> bool:
    """True iff no edge of Ga is vertex-disjoint from an edge of Gb (2-graphs)."""
    if Ga.k != 2 or Gb.k != 2:
        raise HypergraphError("cross_disjoint_free compares 2-graphs")
    if Ga.n != Gb.n:
        raise HypergraphError("graphs live on different vertex sets")
    return not any(a & b == 0 for a in Ga.edge_masks for b in Gb.edge_masks)


# ---------------------------------------------------------------- Lemma 2 / 3

A_SET = (0, 1, 2)


class _PairTables:
    """Per-n lookup tables shared by the Lemma 2 and Lemma 3 enumerations."""

    def __init__(self, n: int):
        self.n = n
        self.pairs = list(combinations(range(n), 2))
        self.m = len(self.pairs)
        self.weight = [sum(1 for v in p if v in A_SET) for p in self.pairs]
        # meets[i]: pairs sharing a vertex with pair i (i included)
        self.meets = [
            mask_of(j for j, q in enumerate(self.pairs) if set(p) & set(q)) for p in self.pairs
        ]
        self.full = (1 << self.m) - 1

    def allowed(self, g: int) -> int:
        """Pairs meeting every pair of g (all pairs when g is empty)."""
        out = self.full
        for i in bits(g):
            out &= self.meets[i]
        return out

    def wt(self, g: int) -> int:
        return sum(self.weight[i] for i in bits(g))

    def graph(self, g: int) -> Hypergraph:
        return Hypergraph(self.n, 2, [self.pairs[i] for i in bits(g)])

    def edges(self, g: int) -> list[tuple[int, int]]:
        return [self.pairs[i] for i in bits(g)]


def _lemma2_shard(n: int, lo: int, hi: int) -> tuple[int, list[int], int]:
    t = _PairTables(n)
    best, arg = -1, []
    for g1 in range(lo, hi):
        total = t.wt(g1) + 2 * t.wt(t.allowed(g1))
        if total > best:
            best, arg = total, [g1]
        elif total == best:
            arg.append(g1)
    return best, arg, hi - lo


def _lemma3_shard(n: int, lo: int, hi: int) -> tuple[int, list[tuple[int, int]], int]:
    t = _PairTables(n)
    best, arg, visited = -1, [], 0
    for g1 in range(lo, hi):
        a1 = t.allowed(g1)
        w1 = t.wt(g1)
        g2 = a1
        while True:
            visited += 1
            g3 = a1 & t.allowed(g2)
            total = w1 + t.wt(g2) + t.wt(g3)
            if total > best:
                best, arg = total, [(g1, g2)]
            elif total == best:
                arg.append((g1, g2))
            if g2 == 0:
                break
            g2 = (g2 - 1) & a1
    return best, arg, visited


def _run_shards(fn, n: int, space: int, workers: int):
    bounds = np.linspace(0, space, max(workers, 1) + 1).astype(int).tolist()
    jobs = [(n, lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    if workers <= 1:
        parts = [fn(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, *zip(*jobs)))
    best = max(p[0] for p in parts)
    arg = sorted(x for p in parts if p[0] == best for x in p[1])
    return best, arg, sum(p[2] for p in parts)


def verify_lemma2(n: int, workers: int = 1) -> LemmaVerdict:
    """Max of sum_i sum_{v in A} deg_{G_i}(v) when no G1 edge avoids a G2 or G3 edge.

    Every G1 is enumerated; G2 = G3 = all pairs meeting every G1 edge is then
    optimal because the constraint binds G2 and G3 separately.
    """
    if n < 4:
        raise HypergraphError(f"Lemma 2 needs n >= 4, got {n}")
    t = _PairTables(n)
    best, arg, searched = _run_shards(_lemma2_shard, n, 1 << t.m, workers)
    bound = 6 * (n - 1)
    verdict = LemmaVerdict("lemma2", {"n": n, "A": list(A_SET)}, best, bound, searched=searched)
    if best > bound:
        verdict.violations = [_lemma2_config(t, g) for g in arg]
    verdict.witnesses = [_lemma2_config(t, g) for g in arg]
    verdict.extra["tight_configurations"] = len(arg)
    verdict.extra["empty_g1_tight"] = 0 in arg
    return verdict


def _lemma2_config(t: _PairTables, g1: int) -> dict[str, Any]:
    a = t.allowed(g1)
    return {"G1": t.edges(g1), "G2": t.edges(a), "G3": t.edges(a)}


def verify_lemma3(n: int, workers: int = 1) -> LemmaVerdict:
    """Lemma 3 variant: the constraint holds between every two of G1, G2, G3.

    Enumerates all compatible (G1, G2) pairs; G3 is then every pair meeting
    all edges of G1 and G2.
    """
    if n < 5:
        raise HypergraphError(f"Lemma 3 needs n >= 5, got {n}")
    t = _PairTables(n)
    best, arg, searched = _run_shards(_lemma3_shard, n, 1 << t.m, workers)
    bound = 3 * (n + 1)
    verdict = LemmaVerdict("lemma3", {"n": n, "A": list(A_SET)}, best, bound, searched=searched)
    configs = [
        {"G1": t.edges(g1), "G2": t.edges(g2), "G3": t.edges(t.allowed(g1) & t.allowed(g2))}
        for g1, g2 in arg
    ]
    if best > bound:
        verdict.violations = configs
    verdict.witnesses = configs
    star = mask_of(i for i, p in enumerate(t.pairs) if 0 in p)
    verdict.extra["tight_configurations"] = len(arg)
    verdict.extra["triple_star_tight"] = (star, star) in arg and t.allowed(star) & t.allowed(star) == star
    return verdict


# ---------------------------------------------------------------- Lemma 1

PARTS_333 = ((0, 1, 2), (3, 4, 5), (6, 7, 8))
TRANSVERSALS_333 = [(a, b, c) for a in PARTS_333[0] for b in PARTS_333[1] for c in PARTS_333[2]]


def perfect_matchings_333() -> list[int]:
    """The 36 perfect matchings of the complete balanced 3-partite 3-graph, as 27-bit masks."""
    index = {e: i for i, e in enumerate(TRANSVERSALS_333)}
    X, Y, Z = PARTS_333
    out = []
    for py in permutations(Y):
        for pz in permutations(Z):
            out.append(mask_of(index[(X[i], py[i], pz[i])] for i in range(3)))
    return sorted(out)


def tight_family_333() -> list[tuple[int, int, int]]:
    """The 18 transversals whose first-part vertex lies in {0, 1}."""
    return [e for e in TRANSVERSALS_333 if e[0] in (0, 1)]


def _has_three_disjoint(edges: list[tuple[int, int, int]]) -> bool:
    masks = [mask_of(e) for e in edges]
    return any(a & b == 0 and a & c == 0 and b & c == 0 for a, b, c in combinations(masks, 3))


def _lemma1_shard(lo: int, hi: int, size: int) -> tuple[int, int, list[int]]:
    """Scan 27-bit masks in [lo, hi); count those of popcount ``size`` and those lacking a PM."""
    pms = np.array(perfect_matchings_333(), dtype=np.uint32)
    checked, failures = 0, []
    chunk = 1 << 22
    for start in range(lo, hi, chunk):
        x = np.arange(start, min(start + chunk, hi), dtype=np.uint32)
        fam = x[np.bitwise_count(x) == size]
        checked += fam.size
        covered = np.zeros(fam.size, dtype=bool)
        for pm in pms:
            covered |= (fam & pm) == pm
        failures.extend(int(f) for f in fam[~covered])
    return checked, len(failures), failures[:16]


def verify_lemma1_333(workers: int = 1, family_size: int = 19) -> LemmaVerdict:
    """Every 19-edge family of the 27 transversals of 3x3x3 holds 3 disjoint edges.

    Three disjoint transversals cover all nine vertices, so a family holds
    three disjoint edges iff it contains one of the 36 perfect matchings.
    """
    space = 1 << 27
    step = space // 64
    jobs = [(lo, lo + step, family_size) for lo in range(0, space, step)]
    if workers <= 1:
        parts = [_lemma1_shard(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_lemma1_shard, *zip(*jobs)))
    checked = sum(p[0] for p in parts)
    failures = [f for p in parts for f in p[2]]
    n_fail = sum(p[1] for p in parts)
    tight = tight_family_333()
    tight_ok = len(tight) == 18 and not _has_three_disjoint(tight)
    verdict = LemmaVerdict(
        "lemma1_333",
        {"n": 3, "k": 3, "s": 3, "family_size": family_size},
        maximum=18 if (n_fail == 0 and tight_ok) else family_size,
        bound=18,
        mode="exhaustive",
        searched=checked,
    )
    verdict.violations = [[TRANSVERSALS_333[i] for i in bits(f)] for f in failures]
    verdict.witnesses = [tight] if tight_ok else []
    verdict.extra["families_without_3_disjoint"] = n_fail
    verdict.extra["expected_families"] = comb(27, family_size)
    verdict.extra["tight_family_certified"] = tight_ok
    return verdict
