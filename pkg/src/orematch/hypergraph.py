"""Immutable k-uniform hypergraphs on vertices 0..n-1.

Every edge is kept as a strictly increasing tuple and, alongside, as an
integer bitmask (bit v set iff v is in the edge).  Python ints are
unbounded, so the same representation serves n <= 64 and larger n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

Edge = tuple[int, ...]


class HypergraphError(ValueError):
    """Malformed hypergraph input or violated operation precondition."""


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> list[int]:
    """Vertices whose bit is set, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Hypergraph:
    """A k-uniform hypergraph with cached incidence structure.

    Build instances through :func:`build` (or the constructor, which does the
    same normalization).  Instances are never mutated after construction.
    """

    __slots__ = ("n", "k", "edges", "edge_masks", "_edge_index", "_incidence", "_degrees")

    def __init__(self, n: int, k: int, edges: Iterable[Sequence[int]] = ()):
        if k < 2:
            raise HypergraphError(f"uniformity k={k} must be at least 2")
        if k > n:
            raise HypergraphError(f"uniformity k={k} exceeds vertex count n={n}")
        normalized = set()
        for raw in edges:
            e = tuple(sorted(int(v) for v in raw))
            if len(e) != k:
                raise HypergraphError(f"edge {tuple(raw)} has {len(e)} vertices, expected {k}")
            if len(set(e)) != k:
                raise HypergraphError(f"edge {tuple(raw)} repeats a vertex")
            if e[0] < 0 or e[-1] >= n:
                raise HypergraphError(f"edge {tuple(raw)} has a label outside [0, {n})")
            normalized.add(e)
        self.n = n
        self.k = k
        self.edges: tuple[Edge, ...] = tuple(sorted(normalized))
        self.edge_masks: tuple[int, ...] = tuple(mask_of(e) for e in self.edges)
        self._edge_index = {e: i for i, e in enumerate(self.edges)}
        incidence: list[list[int]] = [[] for _ in range(n)]
        for i, e in enumerate(self.edges):
            for v in e:
                incidence[v].append(i)
        self._incidence = tuple(tuple(ids) for ids in incidence)
        self._degrees = tuple(len(ids) for ids in incidence)

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, k={self.k}, |E|={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.k, self.edges) == (other.n, other.k, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self._edge_index

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def degrees(self) -> tuple[int, ...]:
        return self._degrees

    def incident(self, v: int) -> tuple[int, ...]:
        """Indices (into ``edges``) of the edges containing v, ascending."""
        self._check_vertex(v)
        return self._incidence[v]

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise HypergraphError(f"vertex {v} outside [0, {self.n})")

    def degree(self, S: Iterable[int] = ()) -> int:
        """Number of edges containing every vertex of S (|E| for empty S)."""
        S = sorted(set(S))
        for v in S:
            self._check_vertex(v)
        if len(S) > self.k:
            raise HypergraphError(f"|S|={len(S)} exceeds k={self.k}")
        if not S:
            return len(self.edges)
        if len(S) == 1:
            return self._degrees[S[0]]
        want = mask_of(S)
        pivot = min(S, key=lambda v: self._degrees[v])
        masks = self.edge_masks
        return sum(1 for i in self._incidence[pivot] if masks[i] & want == want)

    def neighborhood(self, u: int, v: int) -> frozenset[int]:
        """N(u, v): vertices w with {u, v, w} an edge (3-graphs)."""
        self._check_pair(u, v)
        if self.k != 3:
            raise HypergraphError("neighborhood of a pair is defined for 3-graphs")
        out = set()
        for i in self._incidence[u]:
            e = self.edges[i]
            if v in e:
                out.update(w for w in e if w != u and w != v)
        return frozenset(out)

    def _check_pair(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise HypergraphError("pair operations require two distinct vertices")

    def adjacent(self, u: int, v: int) -> bool:
        self._check_pair(u, v)
        want = (1 << u) | (1 << v)
        masks = self.edge_masks
        return any(masks[i] & want == want for i in self._incidence[u])

    def adjacent_pairs(self) -> frozenset[tuple[int, int]]:
        pairs = set()
        for e in self.edges:
            pairs.update(combinations(e, 2))
        return frozenset(pairs)

    def link(self, v: int, A: Iterable[int], B: Optional[Iterable[int]] = None) -> "LinkGraph":
        """L_v(A) (pairs inside A) or, with B given, L_v(A, B) (one end in each)."""
        if self.k != 3:
            raise HypergraphError("links are defined for 3-graphs")
        self._check_vertex(v)
        A = frozenset(A)
        for x in A:
            self._check_vertex(x)
        if v in A:
            raise HypergraphError(f"center {v} lies inside the link scope A")
        if B is None:
            pairs = set()
            for i in self._incidence[v]:
                rest = tuple(w for w in self.edges[i] if w != v)
                if rest[0] in A and rest[1] in A:
                    pairs.add(rest)
            return LinkGraph(v, frozenset(pairs), (A,))
        B = frozenset(B)
        for x in B:
            self._check_vertex(x)
        if v in B:
            raise HypergraphError(f"center {v} lies inside the link scope B")
        if A & B:
            raise HypergraphError("link scopes A and B must be disjoint")
        pairs = set()
        for i in self._incidence[v]:
            a, b = (w for w in self.edges[i] if w != v)
            if a in A and b in B:
                pairs.add((a, b))
            elif b in A and a in B:
                pairs.add((b, a))
        return LinkGraph(v, frozenset(pairs), (A, B))

    def sigma2(self, variant: str = "adjacent") -> Optional[int]:
        """Minimum deg(u)+deg(v) over distinct pairs of the requested class.

        ``variant`` is ``"all"``, ``"adjacent"`` or ``"nonadjacent"``.  Returns
        None when that class of pairs is empty.
        """
        if variant not in ("all", "adjacent", "nonadjacent"):
            raise HypergraphError(f"unknown sigma2 variant {variant!r}")
        d = self._degrees
        if variant == "all":
            if self.n < 2:
                return None
            low = sorted(d)[:2]
            return low[0] + low[1]
        adj = self.adjacent_pairs()
        if variant == "adjacent":
            return min((d[u] + d[v] for u, v in adj), default=None)
        return min(
            (d[u] + d[v] for u, v in combinations(range(self.n), 2) if (u, v) not in adj),
            default=None,
        )

    def min_degree(self) -> int:
        return min(self._degrees)

    def isolated_vertices(self) -> frozenset[int]:
        return frozenset(v for v, dv in enumerate(self._degrees) if dv == 0)

    def induced(self, X: Iterable[int]) -> tuple["Hypergraph", dict[int, int]]:
        """Sub-hypergraph on X, relabeled to 0..|X|-1 in increasing order.

        Returns the hypergraph and the map old label -> new label.
        """
        X = sorted(set(X))
        for v in X:
            self._check_vertex(v)
        relabel = {v: i for i, v in enumerate(X)}
        xmask = mask_of(X)
        kept = [
            tuple(relabel[v] for v in e)
            for e, m in zip(self.edges, self.edge_masks)
            if m & xmask == m
        ]
        if len(X) < self.k:
            if kept:
                raise AssertionError("edges cannot fit into fewer than k vertices")
            return _edgeless_small(len(X), self.k), relabel
        return Hypergraph(len(X), self.k, kept), relabel

    def with_edges(self, extra: Iterable[Sequence[int]] = (), removed: Iterable[Sequence[int]] = ()) -> "Hypergraph":
        drop = {tuple(sorted(e)) for e in removed}
        return Hypergraph(self.n, self.k, [e for e in self.edges if e not in drop] + [tuple(e) for e in extra])

    def to_bits(self, universe: Sequence[Edge]) -> int:
        """Edge set as a bitmask over a fixed ordering of all k-subsets."""
        pos = {e: i for i, e in enumerate(universe)}
        return mask_of(pos[e] for e in self.edges)


class _SmallEdgeless(Hypergraph):
    """Edgeless k-graph on fewer than k vertices (result of a tiny induced call)."""

    __slots__ = ()

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.edges = ()
        self.edge_masks = ()
        self._edge_index = {}
        self._incidence = tuple(() for _ in range(n))
        self._degrees = tuple(0 for _ in range(n))


def _edgeless_small(n: int, k: int) -> Hypergraph:
    return _SmallEdgeless(n, k)


def build(n: int, k: int, edges: Iterable[Sequence[int]] = ()) -> Hypergraph:
    return Hypergraph(n, k, edges)


def complete(n: int, k: int = 3) -> Hypergraph:
    return Hypergraph(n, k, combinations(range(n), k))


def from_bits(n: int, k: int, mask: int, universe: Optional[Sequence[Edge]] = None) -> Hypergraph:
    """Inverse of :meth:`Hypergraph.to_bits` (default universe: lexicographic k-subsets)."""
    if universe is None:
        universe = list(combinations(range(n), k))
    return Hypergraph(n, k, [universe[i] for i in bits(mask)])


@dataclass(frozen=True)
class Matching:
    """Pairwise vertex-disjoint edges of a host hypergraph."""

    edges: tuple[Edge, ...]
    n: int
    k: int

    @classmethod
    def of(cls, H: Hypergraph, edges: Iterable[Sequence[int]]) -> "Matching":
        es = tuple(tuple(sorted(e)) for e in edges)
        used = 0
        for e in es:
            if e not in H:
                raise HypergraphError(f"{e} is not an edge of the host")
            m = mask_of(e)
            if used & m:
                raise HypergraphError(f"{e} overlaps an earlier matching edge")
            used |= m
        return cls(es, H.n, H.k)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def mask(self) -> int:
        return mask_of(v for e in self.edges for v in e)

    def vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in e)

    def covers(self, v: int) -> bool:
        return bool(self.mask >> v & 1)

    def is_perfect(self) -> bool:
        return self.k * len(self.edges) == self.n

    def validate(self, H: Hypergraph) -> None:
        if (H.n, H.k) != (self.n, self.k):
            raise HypergraphError("matching belongs to a different host shape")
        Matching.of(H, self.edges)


@dataclass(frozen=True)
class LinkGraph:
    center: int
    pairs: frozenset[tuple[int, int]]
    scope: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def degree(self, x: int) -> int:
        return sum(1 for p in self.pairs if x in p)


@dataclass(frozen=True)
class VertexPartition:
    """Labeled, pairwise disjoint vertex blocks (their union need not be V)."""

    blocks: Mapping[str, frozenset[int]] = field(default_factory=dict)
    n: Optional[int] = None

    def __post_init__(self):
        frozen = {label: frozenset(vs) for label, vs in self.blocks.items()}
        object.__setattr__(self, "blocks", frozen)
        seen: set[int] = set()
        for label, vs in frozen.items():
            if seen & vs:
                raise HypergraphError(f"block {label!r} overlaps an earlier block")
            seen |= vs
            if self.n is not None and any(not 0 <= v < self.n for v in vs):
                raise HypergraphError(f"block {label!r} has a vertex outside [0, {self.n})")

    def __getitem__(self, label: str) -> frozenset[int]:
        return self.blocks[label]

    def block_of(self, v: int) -> str:
        for label, vs in self.blocks.items():
            if v in vs:
                return label
        raise HypergraphError(f"vertex {v} is in no block")


def edge_type(e: Iterable[int], P: VertexPartition) -> str:
    """Block labels of e's vertices, sorted and concatenated (e.g. ``"UUW"``)."""
    return "".join(sorted(P.block_of(v) for v in e))
