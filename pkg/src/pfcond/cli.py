"""Command-line front end.

    pfcond pf MATRIX_FILE
    pfcond verify IDENTITY [--n N] [--k K] [--trials T] [--seed S] [--entry-bound B] [--jobs J]
    pfcond verify --replay REPORT_FILE
    pfcond count (GRAPH_FILE | --grid M N | --aztec N) [--method oracle|pfaffian|condense|all] [--format text|json]
    pfcond bench --family grid|aztec --max-size S

Exit codes: 0 success, 1 identity violation, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import campaign
from .identities import HypothesisError
from .graph import GraphError, PlaneGraph, aztec, grid, parse_graph
from .matching import ORACLE_MAX_VERTICES, OracleSizeError, condense_count_detailed, count_components, matching_sum
from .matrix import MatrixError, det_exact, format_scalar, parse_matrix
from .pfaffian import pf_eliminate

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
BENCH_COLUMNS = ("family", "size", "method", "wall_time_ns", "count")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


# --- pf ------------------------------------------------------------------------------


def cmd_pf(args) -> int:
    try:
        A = parse_matrix(_read(args.file), skew=True)
    except (OSError, MatrixError, ValueError, TypeError) as exc:
        return _fail(f"cannot read a skew matrix from {args.file}: {exc}")
    p = pf_eliminate(A)
    d = det_exact(A)
    print(f"Pf = {format_scalar(p)}, det = {format_scalar(d)}")
    if p * p != d:
        print(f"Cayley check FAILED: Pf^2 = {format_scalar(p * p)}")
        return EXIT_VIOLATION
    print("Cayley check: Pf^2 = det")
    return EXIT_OK


# --- verify ----------------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.replay:
        try:
            rep = campaign.replay(_read(args.replay))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            return _fail(f"cannot replay {args.replay}: {exc}")
        ok = campaign._is_zero(rep.residual)
        print(f"replay {rep.identity}: trial {rep.trial} (root seed {rep.root_seed}, trial seed {rep.trial_seed})")
        print(f"residual {campaign._residual_text(rep.residual)}")
        print("PASS" if ok else "FAIL")
        return EXIT_OK if ok else EXIT_VIOLATION
    if args.identity is None:
        return _fail("an identity name or --replay is required")
    cfg = campaign.VerifyConfig(args.identity, args.n, args.k, args.trials, args.seed, args.entry_bound)
    try:
        result = campaign.run_campaign(cfg, jobs=args.jobs)
    except (campaign.UsageError, HypothesisError) as exc:
        return _fail(str(exc))
    print(result.summary())
    if result.failure is None:
        return EXIT_OK
    text = result.failure.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"counterexample written to {args.out}")
    else:
        print("counterexample:")
        print(text)
    return EXIT_VIOLATION


# --- count ------------------------------------------------------------------------------


def _graph_source(args) -> PlaneGraph:
    if args.grid:
        m, n = args.grid
        return grid(m, n)
    if args.aztec is not None:
        return aztec(args.aztec)
    if args.file is None:
        raise GraphError("give a graph file, --grid M N or --aztec N")
    return parse_graph(_read(args.file))


def count_methods(G: PlaneGraph, method: str) -> dict[str, object]:
    out = {}
    if method in ("oracle", "all"):
        if method == "all" and G.n_vertices > ORACLE_MAX_VERTICES:
            print(f"note: oracle skipped above {ORACLE_MAX_VERTICES} vertices", file=sys.stderr)
        else:
            out["oracle"] = matching_sum(G)
    if method in ("pfaffian", "all"):
        out["pfaffian"] = count_components(G)
    if method in ("condense", "all"):
        res = condense_count_detailed(G)
        out["condense"] = res.value
        if res.fallbacks:
            print(f"note: condensation fell back to the Pfaffian count {res.fallbacks} time(s)", file=sys.stderr)
    return out


def cmd_count(args) -> int:
    try:
        G = _graph_source(args)
        counts = count_methods(G, args.method)
    except OracleSizeError as exc:
        return _fail(str(exc))
    except (OSError, GraphError, ValueError) as exc:
        return _fail(str(exc))
    if args.format == "json":
        print(json.dumps({k: format_scalar(v) for k, v in counts.items()}, sort_keys=True))
    else:
        for name, value in counts.items():
            print(f"{name}: {format_scalar(value)}")
    if len(set(counts.values())) > 1:
        print("methods DISAGREE", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# --- bench ----------------------------------------------------------------------------------


def bench_sizes(family: str, max_size: int) -> list[tuple[int, PlaneGraph]]:
    if family == "grid":
        # odd square grids have no perfect matching; only even sides are benchmarked
        return [(s, grid(s, s)) for s in range(2, max_size + 1, 2)]
    return [(s, aztec(s)) for s in range(1, max_size + 1)]


def bench_rows(family: str, max_size: int):
    for size, G in bench_sizes(family, max_size):
        methods = [("pfaffian", count_components), ("condense", lambda g: condense_count_detailed(g).value)]
        if G.n_vertices <= ORACLE_MAX_VERTICES:
            methods.insert(0, ("oracle", matching_sum))
        for name, fn in methods:
            t0 = time.perf_counter_ns()
            value = fn(G)
            yield (family, size, name, time.perf_counter_ns() - t0, value)


def cmd_bench(args) -> int:
    if args.max_size < 0:
        return _fail("--max-size must be nonnegative")
    print(",".join(BENCH_COLUMNS))
    for family, size, name, ns, value in bench_rows(args.family, args.max_size):
        print(f"{family},{size},{name},{ns},{format_scalar(value)}")
        sys.stdout.flush()
    return EXIT_OK


# --- entry point ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pfcond", description="Exact Pfaffians, Pfaffian identities and plane matchings.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pf", help="Pfaffian and determinant of a skew matrix file")
    p.add_argument("file", help="matrix file ('-' for stdin)")
    p.set_defaults(func=cmd_pf)

    v = sub.add_parser("verify", help="seeded residual campaign for one identity")
    v.add_argument("identity", nargs="?", choices=sorted(campaign.CATALOGUE), metavar="IDENTITY",
                   help="one of: " + ", ".join(campaign.CATALOGUE))
    v.add_argument("--n", type=int, default=None, help="matrix order or vertex count (default: mixed)")
    v.add_argument("--k", type=int, default=None, help="mask or subset size (default: mixed)")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--entry-bound", type=int, default=campaign.DEFAULT_ENTRY_BOUND)
    v.add_argument("--jobs", type=int, default=1, help="worker processes; output does not depend on it")
    v.add_argument("--replay", metavar="FILE", help="re-run a serialised counterexample")
    v.add_argument("--out", metavar="FILE", help="write a counterexample here instead of stdout")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("count", help="count perfect matchings")
    c.add_argument("file", nargs="?", help="graph file ('-' for stdin)")
    c.add_argument("--grid", nargs=2, type=int, metavar=("M", "N"))
    c.add_argument("--aztec", type=int, metavar="N")
    c.add_argument("--method", choices=("oracle", "pfaffian", "condense", "all"), default="all")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_count)

    b = sub.add_parser("bench", help="CSV timings of the counting methods")
    b.add_argument("--family", choices=("grid", "aztec"), required=True)
    b.add_argument("--max-size", type=int, required=True)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
