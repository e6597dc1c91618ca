"""Command-line interface.

Exit codes: 0 success, 2 input error (unreadable or malformed files, bad
arguments), 3 domain error (the input is well formed but cannot be
clustered as asked).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .build import K_GRAPH, K_SIGMA, read_features, self_tuning_affinity, write_features
from .errors import DomainError, FastNcutError, InputError, ParseError, TooFewCandidates
from .metrics import evaluate
from .mmio import read_matrix_market, write_matrix_market
from .model_select import profile, select, write_profile_csv
from .n2hi import build_hierarchy, initialize
from .solver import ClusterResult, Labeling, SolverConfig, solve
from .synthetic import block_graph, two_circles

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3

log = logging.getLogger("fastncut")


def _num(x: float) -> float:
    """Round to 12 significant digits so JSON output is stable."""
    return float(f"{x:.12g}")


def read_labels(path) -> np.ndarray:
    values = []
    with open(os.fspath(path), "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(int(text))
            except ValueError:
                raise ParseError(f"not an integer label: {text!r}", line=lineno,
                                 path=os.fspath(path)) from None
    return np.asarray(values, dtype=np.int64)


def write_labels(labels, path) -> None:
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        for x in np.asarray(labels).tolist():
            fh.write(f"{x}\n")


def result_json(result: ClusterResult) -> str:
    payload = {
        "labels": [int(x) for x in result.labels],
        "objective": _num(result.objective),
        "sweeps": result.sweeps,
        "moves": [int(m) for m in result.moves],
    }
    return json.dumps(payload) + "\n"


def write_trace(result: ClusterResult, path) -> None:
    with open(os.fspath(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sweep", "objective", "moves"])
        writer.writerow([0, f"{result.initial_objective:.12g}", 0])
        for t, (obj, moves) in enumerate(zip(result.trace, result.moves), start=1):
            writer.writerow([t, f"{obj:.12g}", moves])


def cmd_build_graph(args) -> int:
    x = read_features(args.features, skip_header=args.skip_header)
    graph = self_tuning_affinity(x, k_graph=args.k, k_sigma=args.k_sigma)
    write_matrix_market(graph, args.out)
    print(f"n={graph.n} edges={graph.n_edges} density={graph.density:.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_cluster(args) -> int:
    graph = read_matrix_market(args.graph)
    if args.c < 1:
        raise InputError("--c must be at least 1")
    hierarchy = None
    if args.init == "n2hi":
        hierarchy = build_hierarchy(graph)
        init = initialize(graph, args.c, hierarchy)
    elif args.init.startswith("file:"):
        labels = read_labels(args.init[len("file:"):])
        if labels.size != graph.n:
            raise InputError(f"initial labels have {labels.size} entries, graph has {graph.n} nodes")
        init = Labeling(labels, args.c)
    else:
        raise InputError(f"unknown --init {args.init!r}; use 'n2hi' or 'file:<path>'")
    if args.hierarchy:
        if hierarchy is None:
            hierarchy = build_hierarchy(graph)
        with open(args.hierarchy, "w", encoding="utf-8") as fh:
            json.dump(hierarchy.to_dict(), fh)
            fh.write("\n")
    config = SolverConfig(max_outer=args.max_outer, rel_tol=args.tol, debug=args.check)
    result = solve(graph, init, config)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(result_json(result))
    if args.trace:
        write_trace(result, args.trace)
    print(f"objective={result.objective:.12g} sweeps={result.sweeps} "
          f"moves={result.total_moves} time={result.wall_time:.4f}s", file=sys.stderr)
    return EXIT_OK


def cmd_estimate_c(args) -> int:
    candidates = list(range(args.min, args.max + 1))
    if len(candidates) < 3:
        raise TooFewCandidates(
            f"range [{args.min}, {args.max}] has {len(candidates)} candidates; need at least 3")
    graph = read_matrix_market(args.graph)
    config = SolverConfig(max_outer=args.max_outer, rel_tol=args.tol)
    prof = profile(graph, candidates, config, workers=args.workers)
    write_profile_csv(prof, args.out)
    print(select(prof))
    return EXIT_OK


def cmd_eval(args) -> int:
    scores = evaluate(read_labels(args.pred), read_labels(args.truth))
    print(json.dumps({k: _num(v) for k, v in scores.items()}))
    return EXIT_OK


def cmd_gen_blocks(args) -> int:
    graph, truth = block_graph(args.blocks, args.size, intra_density=args.intra_density,
                               noise_density=args.noise_density, seed=args.seed)
    write_matrix_market(graph, args.out)
    if args.labels:
        write_labels(truth, args.labels)
    return EXIT_OK


def cmd_gen_circles(args) -> int:
    x, truth = two_circles(args.per_circle, args.noise, seed=args.seed)
    write_features(x, args.out)
    if args.labels:
        write_labels(truth, args.labels)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastncut",
        description="Normalized-Cut clustering by fast coordinate descent.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="self-tuning k-NN graph from CSV features")
    p.add_argument("--features", required=True)
    p.add_argument("--k", type=int, default=K_GRAPH, help="neighbors per node (default %(default)s)")
    p.add_argument("--k-sigma", type=int, default=K_SIGMA,
                   help="neighbor rank defining the local bandwidth (default %(default)s)")
    p.add_argument("--skip-header", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_graph)

    p = sub.add_parser("cluster", help="solve for a fixed number of clusters")
    p.add_argument("--graph", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--init", default="n2hi", help="'n2hi' (default) or 'file:<labels>'")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-outer", type=int, default=100)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", help="write per-sweep objective CSV")
    p.add_argument("--hierarchy", help="dump the initialization hierarchy as JSON")
    p.add_argument("--check", action="store_true",
                   help="verify aggregates after every move (slow)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("estimate-c", help="pick the number of clusters from objective gaps")
    p.add_argument("--graph", required=True)
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-outer", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_estimate_c)

    p = sub.add_parser("eval", help="ACC / NMI / ARI between two label files")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen-blocks", help="synthetic block graph with uniform noise")
    p.add_argument("--blocks", type=int, default=5)
    p.add_argument("--size", type=int, default=100)
    p.add_argument("--intra-density", type=float, default=1.0)
    p.add_argument("--noise-density", type=float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help="write ground-truth labels here")
    p.set_defaults(func=cmd_gen_blocks)

    p = sub.add_parser("gen-circles", help="two concentric circles plus uniform noise")
    p.add_argument("--per-circle", type=int, default=200)
    p.add_argument("--noise", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help="write ground-truth labels here (noise = 2)")
    p.set_defaults(func=cmd_gen_circles)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FastNcutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
