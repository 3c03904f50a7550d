"""Scan reports: JSON documents and tab-separated witness tables."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .constructions import find_sparse_set
from .hypergraph import Hypergraph
from .solver import has_perfect_matching, max_matching

FORMAT_VERSION = "orematch-report/1"


@dataclass
class ScanReport:
    experiment: str
    params: dict[str, Any]
    totals: dict[str, int] = field(default_factory=dict)
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    probes: list[dict[str, Any]] = field(default_factory=list)
    workers: int = 1
    elapsed: Optional[float] = None
    format_version: str = FORMAT_VERSION

    def check_totals(self) -> None:
        t = self.totals
        if not t.get("violating", 0) <= t.get("filtered", 0) <= t.get("scanned", 0):
            raise ValueError(f"inconsistent totals {t}")


def hypergraph_witness(H: Hypergraph, **extra: Any) -> dict[str, Any]:
    """Serialized hypergraph with the statistics that reload checks recompute."""
    pm = has_perfect_matching(H)
    w = {
        "n": H.n,
        "k": H.k,
        "edges": [list(e) for e in H.edges],
        "num_edges": len(H.edges),
        "sigma2_adjacent": H.sigma2("adjacent"),
        "sigma2_all": H.sigma2("all"),
        "isolated": len(H.isolated_vertices()),
        "max_matching": max_matching(H).size,
        "has_pm": pm is not None,
    }
    if H.k == 3 and H.n % 3 == 0:
        S = find_sparse_set(H, H.n // 3 + 1)
        w["embeds_hstar"] = S is not None
    w.update(extra)
    return w


_RECOMPUTED = ("num_edges", "sigma2_adjacent", "sigma2_all", "isolated", "max_matching", "has_pm", "embeds_hstar")


def revalidate_witness(w: dict[str, Any]) -> bool:
    """Recompute a hypergraph witness's statistics and compare with the stored ones."""
    if "edges" not in w:
        return True
    H = Hypergraph(w["n"], w["k"], w["edges"])
    fresh = hypergraph_witness(H)
    return all(fresh.get(key) == w.get(key) for key in _RECOMPUTED if key in w)


def to_document(r: ScanReport, timing: bool = False) -> dict[str, Any]:
    doc = asdict(r)
    if not timing:
        doc.pop("elapsed")
    return doc


def dumps_structured(r: ScanReport, timing: bool = False) -> str:
    return json.dumps(to_document(r, timing), indent=2, sort_keys=True) + "\n"


def _cell(value: Any) -> str:
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    if value is None:
        return ""
    return str(value)


def table_rows(r: ScanReport) -> tuple[list[str], list[list[str]]]:
    """Header and one row per witness (column order of first appearance)."""
    header: list[str] = []
    for w in r.witnesses:
        for key in w:
            if key not in header:
                header.append(key)
    rows = [[_cell(w.get(key)) for key in header] for w in r.witnesses]
    return header, rows


def report_emit(r: ScanReport, path: Union[str, Path], fmt: str = "structured", timing: bool = False) -> Path:
    """Write ``r`` as JSON (``structured``) or a tab-separated table (``table``)."""
    path = Path(path)
    if fmt == "structured":
        path.write_text(dumps_structured(r, timing), encoding="utf-8")
    elif fmt == "table":
        header, rows = table_rows(r)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
            if header:
                writer.writerow(header)
            writer.writerows(rows)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path


def load_report(path: Union[str, Path]) -> ScanReport:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported report version {doc.get('format_version')!r}")
    return ScanReport(**doc)
