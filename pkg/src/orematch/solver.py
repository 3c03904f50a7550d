"""Exact maximum matchings in k-uniform hypergraphs.

Depth-first branch and bound over vertex masks.  At each node the lowest
still-undecided vertex v is branched on: every edge through v that fits in
the remaining vertices (lexicographic order), then "leave v uncovered"
(forbidden when v must be covered).  A node is pruned when

    len(current) + min(remaining // k, ub[remaining]) <= best

where ub is a transposition table of upper bounds learned from fully
explored subtrees: once the subtree under ``remaining`` finishes, no
matching of that sub-hypergraph can exceed ``best - len(current)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .hypergraph import Hypergraph, Matching, mask_of


@dataclass(frozen=True)
class SolveResult:
    matching: Matching
    optimal: bool
    nodes_explored: int
    elapsed: float

    @property
    def size(self) -> int:
        return len(self.matching)


_UNKNOWN = 1 << 30


class _BudgetExceeded(Exception):
    pass


class _Search:
    def __init__(
        self,
        H: Hypergraph,
        edge_ids: Sequence[int],
        must_cover: int,
        node_budget: Optional[int],
        time_budget: Optional[float],
        target: Optional[int],
    ):
        self.H = H
        self.k = H.k
        self.masks = H.edge_masks
        self.must = must_cover
        by_vertex: list[list[int]] = [[] for _ in range(H.n)]
        for i in sorted(set(edge_ids)):
            by_vertex[H.edges[i][0]].append(i)
        # branching vertex is always the lowest undecided one, so only edges
        # whose smallest vertex is v can cover it
        self.by_low = [tuple(ids) for ids in by_vertex]
        self.node_budget = node_budget
        self.deadline = None if time_budget is None else time.monotonic() + time_budget
        self.target = target
        self.nodes = 0
        self.best: list[int] = []
        self.best_size = -1
        self.ub: dict[int, int] = {}
        self.current: list[int] = []

    def run(self, start: int) -> bool:
        try:
            self._dfs(start)
        except _BudgetExceeded:
            return False
        return True

    def _dfs(self, remaining: int) -> None:
        if self.target is not None and self.best_size >= self.target:
            return
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _BudgetExceeded
        if self.deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _BudgetExceeded
        depth = len(self.current)
        if remaining == 0 or (remaining & self.must) == 0 and not self._any_edge(remaining):
            if depth > self.best_size:
                self.best_size = depth
                self.best = list(self.current)
            return
        known = self.ub.get(remaining, _UNKNOWN)
        if known < 0:
            return
        if depth + min(remaining.bit_count() // self.k, known) <= self.best_size:
            return
        low = remaining & -remaining
        v = low.bit_length() - 1
        masks = self.masks
        for i in self.by_low[v]:
            m = masks[i]
            if m & remaining == m:
                self.current.append(i)
                self._dfs(remaining ^ m)
                self.current.pop()
                if depth + remaining.bit_count() // self.k <= self.best_size:
                    break
        else:
            if not self.must & low:
                self._dfs(remaining ^ low)
        if self.target is not None and self.best_size >= self.target:
            return
        # a negative value marks a subtree with no feasible completion
        learned = max(self.best_size - depth, -1)
        if learned < known:
            self.ub[remaining] = learned

    def _any_edge(self, remaining: int) -> bool:
        masks = self.masks
        r = remaining
        while r:
            low = r & -r
            for i in self.by_low[low.bit_length() - 1]:
                if masks[i] & remaining == masks[i]:
                    return True
            r ^= low
        return False


def _solve(
    H: Hypergraph,
    edge_ids: Optional[Iterable[int]] = None,
    vertices: Optional[int] = None,
    must_cover: int = 0,
    node_budget: Optional[int] = None,
    time_budget: Optional[float] = None,
    target: Optional[int] = None,
) -> tuple[Optional[Matching], bool, int, float]:
    t0 = time.perf_counter()
    ids = range(len(H.edges)) if edge_ids is None else edge_ids
    start = (1 << H.n) - 1 if vertices is None else vertices
    search = _Search(H, list(ids), must_cover & start, node_budget, time_budget, target)
    complete = search.run(start)
    elapsed = time.perf_counter() - t0
    if search.best_size < 0:
        return None, complete, search.nodes, elapsed
    m = Matching(tuple(H.edges[i] for i in sorted(search.best, key=lambda i: H.edges[i])), H.n, H.k)
    return m, complete, search.nodes, elapsed


def max_matching(
    H: Hypergraph,
    node_budget: Optional[int] = None,
    time_budget: Optional[float] = None,
    target: Optional[int] = None,
) -> SolveResult:
    """Maximum matching of H.

    With ``target`` set, the search stops as soon as a matching of that size
    is found (the result is then optimal only if the target equals the true
    maximum, which callers check with ``size >= target``).
    """
    m, complete, nodes, elapsed = _solve(H, node_budget=node_budget, time_budget=time_budget, target=target)
    if m is None:  # budget ran out before the first leaf
        m = Matching((), H.n, H.k)
    optimal = complete and (target is None or m.size < target or m.size == H.n // H.k)
    return SolveResult(m, optimal, nodes, elapsed)


def has_perfect_matching(
    H: Hypergraph, node_budget: Optional[int] = None, time_budget: Optional[float] = None
) -> Optional[Matching]:
    """A perfect matching of H, or None when none exists.

    Raises ``TimeoutError`` if a budget runs out before the question is settled.
    """
    if H.n % H.k or H.isolated_vertices():
        return None
    full = (1 << H.n) - 1
    m, complete, _, _ = _solve(H, must_cover=full, node_budget=node_budget, time_budget=time_budget, target=H.n // H.k)
    if m is not None:
        return m
    if not complete:
        raise TimeoutError("perfect matching search exceeded its budget")
    return None


def max_uuw_matching(H: Hypergraph, W: Iterable[int], node_budget: Optional[int] = None) -> SolveResult:
    """Largest matching whose edges each hold exactly one vertex of W."""
    wmask = mask_of(W)
    ids = [i for i, m in enumerate(H.edge_masks) if (m & wmask).bit_count() == 1]
    m, complete, nodes, elapsed = _solve(H, edge_ids=ids, node_budget=node_budget)
    if m is None:
        m = Matching((), H.n, H.k)
    return SolveResult(m, complete, nodes, elapsed)


def max_w_covering_matching(
    H: Hypergraph, W: Iterable[int], node_budget: Optional[int] = None
) -> Optional[SolveResult]:
    """Largest matching among those covering every vertex of W (None if none does)."""
    wmask = mask_of(W)
    m, complete, nodes, elapsed = _solve(H, must_cover=wmask, node_budget=node_budget)
    if m is None:
        if not complete:
            raise TimeoutError("W-covering search exceeded its budget")
        return None
    return SolveResult(m, complete, nodes, elapsed)
