"""Command-line entry point: ``orematch <subcommand> ...``.

Exit codes: 0 completed, 1 usage error, 2 I/O error.  Scan findings never
change the exit code.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import constructions as con
from .edgelist import EdgeListError, dump_hypergraph, read_hypergraph, write_hypergraph
from .hypergraph import HypergraphError
from .lemmas import verify_lemma1_333, verify_lemma2, verify_lemma3, w_partition
from .report import ScanReport, dumps_structured, report_emit, table_rows
from .scans import crossover_report, scan_conjecture, scan_theorem1, scan_theorem6
from .solver import has_perfect_matching, max_matching, max_uuw_matching, max_w_covering_matching

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _vertex_list(text: str) -> list[int]:
    text = text.strip()
    return [int(tok) for tok in text.split(",")] if text else []


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orematch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="write an extremal hypergraph as an edge list")
    p.add_argument("family", choices=["hstar", "hnkls", "full-star", "complete"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--s", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("-o", "--out", type=Path)

    p = sub.add_parser("stats", help="degree table and sigma2 variants of an edge-list file")
    p.add_argument("path", type=Path)
    p.add_argument("--eps", type=Fraction, help="also print the W/U split for this eps")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("match", help="exact matching problems")
    p.add_argument("mode", choices=["max", "perfect", "cover-w", "uuw"])
    p.add_argument("path", type=Path)
    p.add_argument("--W", type=_vertex_list, default=None, help="comma-separated W vertices")
    p.add_argument("--eps", type=Fraction, help="derive W from the degree threshold")
    p.add_argument("--budget-nodes", type=int)

    p = sub.add_parser("verify-lemma", help="exhaustive lemma checks")
    p.add_argument("lemma", choices=["1", "2", "3"])
    p.add_argument("--n", type=int)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("scan", help="theorem and conjecture scans")
    p.add_argument("experiment", choices=["theorem1", "theorem6", "conj2", "conj3", "conj4"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--eps", type=Fraction, default=Fraction(1, 10))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--hill-steps", type=int)
    p.add_argument("--p", type=float, default=0.85, help="edge probability for sampled instances")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["structured", "table"], default="structured")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    p = sub.add_parser("crossover", help="closed-form crossover tables")
    p.add_argument("which", choices=["s", "k"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["structured", "table"], default="table")
    return parser


def _emit(report: ScanReport, out: Optional[Path], fmt: str, timing: bool = False) -> None:
    if out is not None:
        report_emit(report, out, fmt, timing)
        return
    if fmt == "structured":
        sys.stdout.write(dumps_structured(report, timing))
    else:
        header, rows = table_rows(report)
        for row in [header] + rows:
            print("\t".join(row))


def _cmd_construct(a) -> None:
    if a.family == "hstar":
        H, _ = con.h_star(a.n)
    elif a.family == "full-star":
        H = con.full_star(a.n)
    elif a.family == "complete":
        from .hypergraph import complete

        H = complete(a.n, a.k)
    else:
        if a.s is None or a.l is None:
            raise UsageError("hnkls needs --s and --l")
        H, _ = con.h_nkls(con.ConstructionParams(a.n, a.k, a.s, a.l))
    comment = f"{a.family} n={a.n} k={a.k}" + (f" s={a.s} l={a.l}" if a.family == "hnkls" else "")
    if a.out is None:
        dump_hypergraph(H, sys.stdout, comment)
    else:
        write_hypergraph(H, a.out, comment)


def _cmd_stats(a) -> None:
    H = read_hypergraph(a.path)
    doc = {
        "n": H.n,
        "k": H.k,
        "edges": len(H.edges),
        "degrees": list(H.degrees),
        "isolated": sorted(H.isolated_vertices()),
        "sigma2_all": H.sigma2("all"),
        "sigma2_adjacent": H.sigma2("adjacent"),
        "sigma2_nonadjacent": H.sigma2("nonadjacent"),
    }
    if a.eps is not None:
        P = w_partition(H, a.eps)
        doc["W"] = sorted(P["W"])
        doc["U"] = sorted(P["U"])
    if a.format == "json":
        print(json.dumps(doc, indent=2))
        return
    for key, value in doc.items():
        if key == "degrees":
            continue
        print(f"{key}\t{'undefined' if value is None else value}")
    print("vertex\tdegree")
    for v, d in enumerate(H.degrees):
        print(f"{v}\t{d}")


def _cmd_match(a) -> None:
    H = read_hypergraph(a.path)
    W = a.W
    if W is None and a.eps is not None:
        W = sorted(w_partition(H, a.eps)["W"])
    if a.mode in ("cover-w", "uuw") and W is None:
        raise UsageError(f"{a.mode} needs --W or --eps")
    if a.mode == "max":
        r = max_matching(H, node_budget=a.budget_nodes)
        _print_matching(r.matching.edges, optimal=r.optimal, nodes=r.nodes_explored)
    elif a.mode == "perfect":
        m = has_perfect_matching(H, node_budget=a.budget_nodes)
        if m is None:
            print("perfect matching: absent")
        else:
            _print_matching(m.edges, optimal=True)
    elif a.mode == "uuw":
        r = max_uuw_matching(H, W, node_budget=a.budget_nodes)
        _print_matching(r.matching.edges, optimal=r.optimal, nodes=r.nodes_explored)
    else:
        r = max_w_covering_matching(H, W, node_budget=a.budget_nodes)
        if r is None:
            print("W-covering matching: absent")
        else:
            _print_matching(r.matching.edges, optimal=r.optimal, nodes=r.nodes_explored)


def _print_matching(edges, optimal: bool, nodes: Optional[int] = None) -> None:
    print(f"size\t{len(edges)}")
    print(f"optimal\t{optimal}")
    if nodes is not None:
        print(f"nodes\t{nodes}")
    for e in edges:
        print(" ".join(map(str, e)))


def _cmd_verify(a) -> None:
    if a.lemma == "1":
        v = verify_lemma1_333(workers=a.workers)
    elif a.n is None:
        raise UsageError("lemmas 2 and 3 need --n")
    elif a.lemma == "2":
        v = verify_lemma2(a.n, workers=a.workers)
    else:
        v = verify_lemma3(a.n, workers=a.workers)
    print(f"lemma\t{v.lemma}")
    print(f"params\t{json.dumps(v.params)}")
    print(f"searched\t{v.searched}")
    print(f"maximum\t{v.maximum}")
    print(f"bound\t{v.bound}")
    print(f"violations\t{len(v.violations)}")
    print(f"tight\t{v.tight}")
    for key, value in v.extra.items():
        print(f"{key}\t{value}")


def _cmd_scan(a) -> None:
    common = dict(seed=a.seed, samples=a.samples, workers=a.workers, p=a.p, node_budget=a.budget_nodes)
    if a.experiment == "theorem1":
        r = scan_theorem1(a.n, **common)
    elif a.experiment == "theorem6":
        r = scan_theorem6(a.n, a.eps, **common)
    else:
        if a.s is None:
            raise UsageError("conjecture scans need --s")
        r = scan_conjecture(a.experiment, a.n, a.s, hill_steps=a.hill_steps, **common)
    _emit(r, a.out, a.format, a.timing)


def _cmd_crossover(a) -> None:
    if a.which == "s":
        _emit(crossover_report(a.n), a.out, a.format)
        return
    c = con.crossover_k(a.k, a.n)
    row = {"k": c.k, "n": c.n, "sigma_h1": c.sigma_h1, "sigma_hk1": c.sigma_hk1,
           "sign": c.sign, "expected_sign": c.expected_sign, "agrees": c.agrees}
    r = ScanReport("crossover_k", {"k": a.k, "n": a.n}, {"scanned": 1, "filtered": 1, "violating": int(not c.agrees)}, [row])
    _emit(r, a.out, a.format)


COMMANDS = {
    "construct": _cmd_construct,
    "stats": _cmd_stats,
    "match": _cmd_match,
    "verify-lemma": _cmd_verify,
    "scan": _cmd_scan,
    "crossover": _cmd_crossover,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except EdgeListError as exc:
        print(f"orematch: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, HypergraphError, ValueError) as exc:
        print(f"orematch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"orematch: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
