"""Plain-text edge-list files.

Format: lines starting with '#' are comments; the first other line is
"n k"; every following non-comment line holds k space-separated 0-based
vertex labels.  Duplicate edges are dropped with a warning.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, TextIO, Union

from .hypergraph import Hypergraph, HypergraphError

log = logging.getLogger(__name__)

PathLike = Union[str, Path]


class EdgeListError(HypergraphError):
    """Malformed edge-list content."""


def parse_hypergraph(lines: Iterable[str], source: str = "<string>") -> Hypergraph:
    header = None
    edges: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            fields = [int(tok) for tok in line.split()]
        except ValueError:
            raise EdgeListError(f"{source}:{lineno}: non-integer token in {line!r}") from None
        if header is None:
            if len(fields) != 2:
                raise EdgeListError(f"{source}:{lineno}: header must be 'n k', got {line!r}")
            header = fields
            n, k = header
            if k < 2 or n < k:
                raise EdgeListError(f"{source}:{lineno}: need n >= k >= 2, got n={n} k={k}")
            continue
        n, k = header
        if len(fields) != k:
            raise EdgeListError(f"{source}:{lineno}: expected {k} labels, got {len(fields)}")
        if any(not 0 <= v < n for v in fields):
            raise EdgeListError(f"{source}:{lineno}: label outside [0, {n})")
        if len(set(fields)) != k:
            raise EdgeListError(f"{source}:{lineno}: repeated vertex in {line!r}")
        e = tuple(sorted(fields))
        if e in seen:
            log.warning("%s:%d: duplicate edge %s dropped", source, lineno, e)
            continue
        seen.add(e)
        edges.append(e)
    if header is None:
        raise EdgeListError(f"{source}: missing 'n k' header")
    return Hypergraph(header[0], header[1], edges)


def read_hypergraph(path: PathLike) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh, str(path))


def dump_hypergraph(H: Hypergraph, fh: TextIO, comment: str = "") -> None:
    for line in comment.splitlines():
        fh.write(f"# {line}\n")
    fh.write(f"{H.n} {H.k}\n")
    for e in H.edges:
        fh.write(" ".join(map(str, e)) + "\n")


def write_hypergraph(H: Hypergraph, path: PathLike, comment: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        dump_hypergraph(H, fh, comment)
