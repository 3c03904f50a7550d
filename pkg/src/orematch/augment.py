"""Matching-improvement rules and a heuristic built from them.

The rules are the local exchanges that drive the perfect-matching argument
for 3-graphs with large adjacent degree sums:

* ``swap_cover_w``: trade one UUW edge for two so an uncovered W-vertex gets covered;
* ``augment_via_pair``: trade two matching edges plus three free vertices for
  three edges (a perfect matching of the 3-partite "bridge");
* ``augment_via_link``: trade one matching edge for two edges that each use a
  free pair from the links of different vertices of the edge.

Each returns a :class:`Replacement` or None.  ``proof_guided_pm`` chains them.
None of this is complete; the exact solver is the arbiter.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from .constructions import find_sparse_set
from .hypergraph import Edge, Hypergraph, HypergraphError, Matching
from .lemmas import ProofParams, w_partition


@dataclass(frozen=True)
class Replacement:
    removed: tuple[Edge, ...]
    added: tuple[Edge, ...]

    def apply(self, H: Hypergraph, M: Matching) -> Matching:
        drop = set(self.removed)
        kept = [e for e in M.edges if e not in drop]
        if len(kept) != len(M.edges) - len(drop):
            raise HypergraphError("replacement removes an edge not in the matching")
        return Matching.of(H, kept + list(self.added))


def _sorted(e: Iterable[int]) -> Edge:
    return tuple(sorted(e))


def _check_in_matching(M: Matching, *edges: Sequence[int]) -> None:
    for e in edges:
        if _sorted(e) not in M.edges:
            raise HypergraphError(f"{tuple(e)} is not an edge of the matching")


def _free_vertices(H: Hypergraph, M: Matching) -> list[int]:
    used = M.vertices()
    return [v for v in range(H.n) if v not in used]


def augment_via_pair(
    H: Hypergraph, M: Matching, e1: Sequence[int], e2: Sequence[int], free: Sequence[int]
) -> Optional[Replacement]:
    """Perfect matching of the 3-partite bridge on parts e1, e2, free (or None)."""
    e1, e2 = _sorted(e1), _sorted(e2)
    _check_in_matching(M, e1, e2)
    if e1 == e2:
        raise HypergraphError("e1 and e2 must be distinct")
    free = _sorted(free)
    if len(free) != 3 or len(set(free)) != 3:
        raise HypergraphError("free must be three distinct vertices")
    if M.vertices() & set(free):
        raise HypergraphError("free vertices must avoid the matching")
    for p2 in permutations(e2):
        for p3 in permutations(free):
            trio = [_sorted((e1[i], p2[i], p3[i])) for i in range(3)]
            if all(t in H for t in trio):
                return Replacement((e1, e2), tuple(sorted(trio)))
    return None


def bridge_edges(H: Hypergraph, e1: Sequence[int], e2: Sequence[int], free: Sequence[int]) -> list[Edge]:
    return [
        _sorted((a, b, c)) for a in e1 for b in e2 for c in free if _sorted((a, b, c)) in H
    ]


def augment_via_link(
    H: Hypergraph,
    M: Matching,
    e: Sequence[int],
    U3: Iterable[int],
    w_tag: Optional[int] = None,
    W: Iterable[int] = (),
) -> Optional[Replacement]:
    """Replace e = {v1, v2, v3} by {v_i, x, y}, {v_j, z, w} with xy, zw disjoint free pairs.

    The vertex of e left out must not lie in W (or equal ``w_tag``).
    """
    e = _sorted(e)
    _check_in_matching(M, e)
    U3 = frozenset(U3)
    if U3 != frozenset(_free_vertices(H, M)):
        raise HypergraphError("U3 must be exactly the vertices outside the matching")
    protected = set(W) & set(e)
    if w_tag is not None:
        if w_tag not in e:
            raise HypergraphError(f"w_tag {w_tag} is not a vertex of {e}")
        protected.add(w_tag)
    if len(protected) == 3:
        raise HypergraphError("every vertex of e is in W; any replacement would uncover a W-vertex")
    links = [sorted(H.link(v, U3).pairs) for v in e]
    for i, j in permutations(range(3), 2):
        left_out = e[3 - i - j]
        if left_out in protected:
            continue
        for x, y in links[i]:
            for z, w in links[j]:
                if len({x, y, z, w}) == 4:
                    added = (_sorted((e[i], x, y)), _sorted((e[j], z, w)))
                    return Replacement((e,), tuple(sorted(added)))
    return None


def swap_cover_w(
    H: Hypergraph, M: Matching, W: Iterable[int], v0: int, u0: int
) -> Optional[Replacement]:
    """Cover the free W-vertex v0 by trading one UUW edge {u1, u2, v1} for two.

    New edges are {u0, v1, x} (x a free U-vertex or u2) and {v0, u1, u4}
    (u4 a free U-vertex), searched in matching order, then lexicographically.
    """
    W = frozenset(W)
    used = M.vertices()
    for e in M.edges:
        if sum(1 for v in e if v in W) != 1:
            raise HypergraphError(f"matching edge {e} is not of type UUW")
    if v0 not in W:
        raise HypergraphError(f"v0={v0} is not in W")
    if v0 in used:
        raise HypergraphError(f"v0={v0} is already covered")
    if u0 in W or u0 in used:
        raise HypergraphError(f"u0={u0} must be an uncovered U-vertex")
    if not H.adjacent(v0, u0):
        raise HypergraphError(f"u0={u0} is not adjacent to v0={v0}")
    free_u = [u for u in range(H.n) if u not in W and u not in used and u != u0]
    for e in M.edges:
        (v1,) = [v for v in e if v in W]
        pair = [v for v in e if v not in W]
        for u1, u2 in (pair, pair[::-1]):
            for x in sorted(free_u + [u2]):
                if _sorted((u0, v1, x)) not in H:
                    continue
                for u4 in free_u:
                    if u4 != x and _sorted((v0, u1, u4)) in H:
                        added = (_sorted((u0, v1, x)), _sorted((v0, u1, u4)))
                        return Replacement((e,), tuple(sorted(added)))
    return None


@dataclass
class LinkBoundReport:
    free: Edge
    U3_size: int
    pair_sums: dict[tuple[Edge, Edge], int] = field(default_factory=dict)
    edge_sums: dict[Edge, int] = field(default_factory=dict)
    edge_bounds: dict[Edge, Optional[int]] = field(default_factory=dict)
    exceedances: list[dict] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """Every exceedance came with a successful augmentation."""
        return all(x["augmentation"] is not None for x in self.exceedances)


def link_bound_check(
    H: Hypergraph, M: Matching, free: Sequence[int], W: Iterable[int] = ()
) -> LinkBoundReport:
    """Link-count sums of three free vertices against the bounds 18, 6(|U3|-1), 3(|U3|+1).

    Edges of M meeting W use 6(|U3|-1) (needs |U3| >= 4), the others
    3(|U3|+1) (needs |U3| >= 5); smaller U3 leaves that bound unset.
    """
    free = _sorted(free)
    if len(free) != 3 or len(set(free)) != 3:
        raise HypergraphError("free must be three distinct vertices")
    used = M.vertices()
    if used & set(free):
        raise HypergraphError("free vertices must avoid the matching")
    W = frozenset(W)
    U3 = frozenset(_free_vertices(H, M))
    report = LinkBoundReport(free, len(U3))
    for e1, e2 in combinations(M.edges, 2):
        total = sum(len(H.link(u, e1, e2)) for u in free)
        report.pair_sums[(e1, e2)] = total
        if total > 18:
            report.exceedances.append(
                {"kind": "pair", "edges": [e1, e2], "sum": total, "bound": 18,
                 "augmentation": augment_via_pair(H, M, e1, e2, free)}
            )
    for e in M.edges:
        total = sum(len(H.link(u, e, U3 - {u})) for u in free)
        w_in = [v for v in e if v in W]
        if w_in:
            bound = 6 * (len(U3) - 1) if len(U3) >= 4 else None
        else:
            bound = 3 * (len(U3) + 1) if len(U3) >= 5 else None
        report.edge_sums[e] = total
        report.edge_bounds[e] = bound
        if bound is not None and total > bound:
            aug = None
            if len(w_in) <= 1:
                aug = augment_via_link(H, M, e, U3, w_tag=w_in[0] if w_in else None, W=W)
            report.exceedances.append(
                {"kind": "M1" if w_in else "M2", "edges": [e], "sum": total, "bound": bound,
                 "augmentation": aug}
            )
    return report


@dataclass
class ProofOutcome:
    status: str  # "perfect" | "stalled" | "structural-exit"
    matching: Matching
    stage: str
    W: frozenset[int]
    rules_fired: Counter = field(default_factory=Counter)
    exhausted: tuple[str, ...] = ()
    embedding: Optional[frozenset[int]] = None

    @property
    def found_perfect(self) -> bool:
        return self.status == "perfect"


def _first_free_edge(H: Hypergraph, free: set[int], through: Optional[int] = None, ok=None) -> Optional[Edge]:
    ids = H.incident(through) if through is not None else range(len(H.edges))
    for i in ids:
        e = H.edges[i]
        if all(v in free for v in e) and (ok is None or ok(e)):
            return e
    return None


def proof_guided_pm(H: Hypergraph, p: ProofParams = ProofParams()) -> ProofOutcome:
    """Try to build a perfect matching by covering W first, then augmenting.

    Step 1 covers each W-vertex with a UUW edge, falling back to
    ``swap_cover_w`` and then to any free edge through it.  Step 2 grows the
    matching with free edges, ``augment_via_pair`` and ``augment_via_link``
    (never uncovering W) until it is perfect or no rule fires.  A stall is
    reported as a structural exit when H embeds in H*.
    """
    if H.k != 3:
        raise HypergraphError("proof_guided_pm works on 3-graphs")
    if H.n % 3:
        raise HypergraphError(f"n={H.n} is not divisible by 3")
    if H.isolated_vertices():
        raise HypergraphError("H has an isolated vertex")
    W = w_partition(H, p.epsilon)["W"]
    fired: Counter = Counter()
    M = Matching((), H.n, H.k)

    def is_uuw(e: Edge) -> bool:
        return sum(1 for v in e if v in W) == 1

    def cover_one() -> Optional[Matching]:
        free = set(_free_vertices(H, M))
        for w in sorted(W - M.vertices()):
            e = _first_free_edge(H, free, w, is_uuw)
            if e is not None:
                fired["uuw-edge"] += 1
                return Matching.of(H, M.edges + (e,))
            if all(is_uuw(f) for f in M.edges):
                for u0 in sorted(free - W):
                    if H.adjacent(w, u0):
                        r = swap_cover_w(H, M, W, w, u0)
                        if r is not None:
                            fired["swap-cover-w"] += 1
                            return r.apply(H, M)
            e = _first_free_edge(H, free, w)
            if e is not None:
                fired["fallback-cover"] += 1
                return Matching.of(H, M.edges + (e,))
        return None

    def grow() -> Optional[Matching]:
        free = set(_free_vertices(H, M))
        e = _first_free_edge(H, free)
        if e is not None:
            fired["free-edge"] += 1
            return Matching.of(H, M.edges + (e,))
        r = _try_pairs(H, M, sorted(free))
        if r is not None:
            fired["pair"] += 1
            return r.apply(H, M)
        r = _try_links(H, M, free, W)
        if r is not None:
            fired["link"] += 1
            return r.apply(H, M)
        return None

    target = H.n // 3
    # step 1: cover W; growth rules never uncover a W-vertex, so they may
    # be used to unblock the covering
    while not W <= M.vertices():
        nxt = cover_one()
        if nxt is None and len(M) < target:
            nxt = grow()
        if nxt is None:
            return _stall(H, M, "step1", W, fired, ("uuw-edge", "swap-cover-w", "fallback-cover", "free-edge", "pair", "link"))
        M = nxt
    # step 2: grow the W-covering matching
    while len(M) < target:
        nxt = grow()
        if nxt is None:
            return _stall(H, M, "step2", W, fired, ("free-edge", "pair", "link"))
        M = nxt
    return ProofOutcome("perfect", M, "step2", W, fired)


def _try_pairs(H: Hypergraph, M: Matching, free: list[int]) -> Optional[Replacement]:
    for e1, e2 in combinations(M.edges, 2):
        for trio in combinations(free, 3):
            r = augment_via_pair(H, M, e1, e2, trio)
            if r is not None:
                return r
    return None


def _try_links(H: Hypergraph, M: Matching, free: set[int], W: frozenset[int]) -> Optional[Replacement]:
    for e in M.edges:
        if all(v in W for v in e):
            continue
        r = augment_via_link(H, M, e, free, W=W)
        if r is not None:
            return r
    return None


def _stall(H, M, stage, W, fired, exhausted) -> ProofOutcome:
    S = find_sparse_set(H, H.n // 3 + 1)
    status = "structural-exit" if S is not None else "stalled"
    return ProofOutcome(status, M, stage, W, fired, exhausted, S)
