"""Extremal hypergraph families and exact closed forms for their sigma2'.

Every generator labels the small side S as 0..|S|-1 and the T side as the
remaining vertices, and returns the S/T partition with the hypergraph.
All closed forms use Python integers (exact, unbounded).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Optional

from .hypergraph import Hypergraph, HypergraphError, VertexPartition

FAMILIES = ("hstar", "H1", "H2", "H3", "Hk", "Hk-1", "generic")


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters (n, k, s, l) of the family member H^l_{n,k,s}.

    T has s*l - 1 vertices and S the other n - s*l + 1; edges are the k-sets
    with at least l vertices in T.
    """

    n: int
    k: int
    s: int
    l: int

    def __post_init__(self):
        n, k, s, l = self.n, self.k, self.s, self.l
        if k < 2 or n < k:
            raise HypergraphError(f"need n >= k >= 2, got n={n}, k={k}")
        if not 1 <= l <= k:
            raise HypergraphError(f"need 1 <= l <= k, got l={l}")
        if not 2 <= s or s * k > n:
            raise HypergraphError(f"need 2 <= s <= n/k, got s={s} (n={n}, k={k})")
        if s * l - 1 > n:
            raise HypergraphError("T would exceed the vertex set")

    @property
    def t_size(self) -> int:
        return self.s * self.l - 1

    @property
    def s_size(self) -> int:
        return self.n - self.t_size


def hstar_params(n: int) -> ConstructionParams:
    _require_div3(n)
    return ConstructionParams(n, 3, n // 3, 2)


def _require_div3(n: int) -> None:
    if n % 3 or n < 6:
        raise HypergraphError(f"H* needs n divisible by 3 and n >= 6, got {n}")


def _partition(n: int, s_size: int) -> VertexPartition:
    return VertexPartition({"S": frozenset(range(s_size)), "T": frozenset(range(s_size, n))}, n)


def edge_predicate(p: ConstructionParams) -> Callable[[tuple[int, ...]], bool]:
    """Membership rule of H^l_{n,k,s}: at least l vertices in T."""
    first_t = p.s_size
    return lambda e: sum(1 for v in e if v >= first_t) >= p.l


def h_nkls(p: ConstructionParams) -> tuple[Hypergraph, VertexPartition]:
    keep = edge_predicate(p)
    edges = [e for e in combinations(range(p.n), p.k) if keep(e)]
    return Hypergraph(p.n, p.k, edges), _partition(p.n, p.s_size)


def h_star(n: int) -> tuple[Hypergraph, VertexPartition]:
    """H*: |S| = n/3 + 1, |T| = 2n/3 - 1, all triples with two or more T vertices."""
    return h_nkls(hstar_params(n))


def full_star(n: int) -> Hypergraph:
    """All triples through vertex 0."""
    if n < 3:
        raise HypergraphError(f"full star needs n >= 3, got {n}")
    return Hypergraph(n, 3, [(0, a, b) for a, b in combinations(range(1, n), 2)])


def direct_degree(p: ConstructionParams, v: int) -> int:
    """Degree of v in H^l_{n,k,s}, counted by enumerating (k-1)-sets (no materialization)."""
    keep = edge_predicate(p)
    others = [u for u in range(p.n) if u != v]
    return sum(1 for rest in combinations(others, p.k - 1) if keep(tuple(sorted(rest + (v,)))))


def degree_closed(p: ConstructionParams) -> tuple[int, int]:
    """(degree of an S-vertex, degree of a T-vertex) in H^l_{n,k,s}."""
    t, s_side, k, l = p.t_size, p.s_size, p.k, p.l
    deg_s = sum(comb(t, j) * comb(s_side - 1, k - 1 - j) for j in range(l, k))
    deg_t = sum(comb(t - 1, j) * comb(s_side, k - 1 - j) for j in range(max(l - 1, 0), k))
    return deg_s, deg_t


def min_degree_closed(p: ConstructionParams) -> int:
    deg_s, deg_t = degree_closed(p)
    if p.t_size == 0:
        return deg_s
    return min(deg_s, deg_t)


def sigma2_prime_closed(family: str, p: ConstructionParams) -> int:
    """Closed-form sigma2' for a named family member.

    ``family`` is one of :data:`FAMILIES`; ``p.l`` (and ``p.k`` for the
    3-graph forms) must agree with it.
    """
    n, k, s, l = p.n, p.k, p.s, p.l
    if family == "hstar":
        if (k, l) != (3, 2) or 3 * s != n:
            raise HypergraphError("hstar needs k=3, l=2, s=n/3")
        # 2n^2/3 - 8n/3 + 2, integral because 3 | n
        return (2 * n * n - 8 * n + 6) // 3
    if family in ("H1", "H2", "H3") and k != 3:
        raise HypergraphError(f"{family} closed form is for 3-graphs")
    if family == "H1":
        _expect_l(family, l, 1)
        return 2 * (comb(n - 1, 2) - comb(n - s, 2))
    if family == "H2":
        _expect_l(family, l, 2)
        return (2 * s - 2) * (n - 1)
    if family == "H3":
        _expect_l(family, l, 3)
        return 2 * comb(3 * s - 2, 2)
    if family == "Hk":
        _expect_l(family, l, k)
        return 2 * comb(s * k - 2, k - 1)
    if family == "Hk-1":
        _expect_l(family, l, k - 1)
        m = s * (k - 1) - 2
        return 2 * comb(m, k - 1) + (n - s * (k - 1) + 2) * comb(m, k - 2)
    if family == "generic":
        if l > k - 2:
            raise HypergraphError("generic form needs l <= k-2 (all pairs adjacent)")
        return 2 * min_degree_closed(p)
    raise HypergraphError(f"unknown family {family!r}")


def _expect_l(family: str, got: int, want: int) -> None:
    if got != want:
        raise HypergraphError(f"{family} needs l={want}, got l={got}")


def family_for(p: ConstructionParams) -> str:
    """Most specific closed-form family that applies to p."""
    if p.k == 3:
        return {1: "H1", 2: "H2", 3: "H3"}[p.l]
    if p.l == p.k:
        return "Hk"
    if p.l == p.k - 1:
        return "Hk-1"
    return "generic"


def dirac_m1(n: int) -> int:
    """C(n-1, 2) - C(2n/3, 2) + 1."""
    if n % 3:
        raise HypergraphError(f"n={n} is not divisible by 3")
    return comb(n - 1, 2) - comb(2 * n // 3, 2) + 1


@dataclass(frozen=True)
class CrossoverRow:
    s: int
    sigma_h2: int
    sigma_h3: int
    h2_ge_h3: bool
    predicted: bool  # s <= (2n+4)/9
    sigma_h1: int = 0

    @property
    def h2_gt_h1(self) -> bool:
        return self.sigma_h2 > self.sigma_h1

    @property
    def agrees(self) -> bool:
        return self.h2_ge_h3 == self.predicted


@dataclass(frozen=True)
class CrossoverS:
    n: int
    threshold: Fraction
    rows: tuple[CrossoverRow, ...]

    @property
    def exceptions(self) -> list[CrossoverRow]:
        return [r for r in self.rows if not r.agrees]

    @property
    def h1_exceptions(self) -> list[CrossoverRow]:
        """Rows where H^2 does not beat H^1 (none expected, but recorded if found)."""
        return [r for r in self.rows if not r.h2_gt_h1]


def crossover_s(n: int) -> CrossoverS:
    """Compare sigma2'(H^2_{n,3,s}) with H^3 (and with H^1) for s = 2..n/3."""
    if n < 9:
        raise HypergraphError(f"crossover_s needs n >= 9, got {n}")
    rows = []
    for s in range(2, n // 3 + 1):
        h2 = (2 * s - 2) * (n - 1)
        h3 = 2 * comb(3 * s - 2, 2)
        h1 = 2 * (comb(n - 1, 2) - comb(n - s, 2))
        rows.append(CrossoverRow(s, h2, h3, h2 >= h3, 9 * s <= 2 * n + 4, h1))
    return CrossoverS(n, Fraction(2 * n + 4, 9), tuple(rows))


@dataclass(frozen=True)
class CrossoverK:
    k: int
    n: int
    sigma_h1: int
    sigma_hk1: int

    @property
    def sign(self) -> int:
        return (self.sigma_h1 > self.sigma_hk1) - (self.sigma_h1 < self.sigma_hk1)

    @property
    def expected_sign(self) -> int:
        """-1 (H^1 below H^{k-1}) for k <= 6, +1 for k >= 7."""
        return -1 if self.k <= 6 else 1

    @property
    def agrees(self) -> bool:
        return self.sign == self.expected_sign


def crossover_k(k: int, n: int) -> CrossoverK:
    """sigma2' of H^1_{n,k,n/k} versus H^{k-1}_{n,k,n/k}."""
    if k < 3:
        raise HypergraphError(f"crossover_k needs k >= 3, got {k}")
    if n % k:
        raise HypergraphError(f"n={n} is not divisible by k={k}")
    s = n // k
    p1 = ConstructionParams(n, k, s, 1)
    pk1 = ConstructionParams(n, k, s, k - 1)
    h1 = sigma2_prime_closed("H1" if k == 3 else "generic", p1)
    hk1 = sigma2_prime_closed("H2" if k == 3 else "Hk-1", pk1)
    return CrossoverK(k, n, h1, hk1)


def crossover_k_onset(k: int, n_max: int) -> Optional[int]:
    """Smallest multiple n of k (n >= 2k) from which the expected sign holds up to n_max."""
    onset = None
    for n in range(2 * k, n_max + 1, k):
        if crossover_k(k, n).agrees:
            if onset is None:
                onset = n
        else:
            onset = None
    return onset


def find_sparse_set(H: Hypergraph, size: int) -> Optional[frozenset[int]]:
    """A vertex set S of the given size such that no edge holds two vertices of S.

    H embeds (same labels) into H^2_{n,3,s} with |S| = n - 2s + 1 exactly
    when such an S exists; size n/3 + 1 is the H* case.  Candidates are
    tried in lexicographic order.
    """
    if not 0 <= size <= H.n:
        raise HypergraphError(f"set size {size} outside [0, {H.n}]")
    pair_mask = [0] * H.n
    for e in H.edges:
        for u, v in combinations(e, 2):
            pair_mask[u] |= 1 << v
            pair_mask[v] |= 1 << u

    # independent sets of the 2-shadow, grown in increasing vertex order
    def grow(start: int, chosen: list[int], forbidden: int) -> Optional[list[int]]:
        if len(chosen) == size:
            return chosen
        for v in range(start, H.n - (size - len(chosen)) + 1):
            if not forbidden >> v & 1:
                found = grow(v + 1, chosen + [v], forbidden | pair_mask[v])
                if found is not None:
                    return found
        return None

    found = grow(0, [], 0)
    return None if found is None else frozenset(found)
