"""Command-line surface: generate, sparsify, verify, and bench.

Exit codes: 0 success, 1 verification/generation failure, 2 usage or
parse errors.  All randomness is seeded, so identical invocations write
identical files; timing fields in reports are the only exception.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import statistics
import sys
import time

from . import serialize
from .core import Tournament, gen_k_connected, gen_random
from .errors import KspanError, NotKConnected
from .flows import _SplitMaxFlow, is_strongly_connected, is_strongly_k_connected
from .pipeline import arc_bound, sparsify


def _write_graph(obj, path: str, fmt: str) -> None:
    if fmt == "dot":
        text = serialize.to_dot(obj)
    else:
        text = serialize.dumps(obj)
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    if args.k:
        t = gen_k_connected(args.n, args.k, args.seed)
    else:
        t = gen_random(args.n, args.seed)
    _write_graph(t, args.out, args.format)
    return 0


def cmd_sparsify(args) -> int:
    obj = serialize.load_path(args.infile)
    if not isinstance(obj, Tournament):
        print("sparsify expects a tournament JSON file", file=sys.stderr)
        return 2
    result = sparsify(obj, args.k, skip_validation=args.skip_validation)
    _write_graph(result.digraph, args.out, args.format)
    report = result.report.to_dict()
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    ok = report["verified"] and report["arcs"] <= report["bound"]
    return 0 if ok else 1


def _sampled_check(d, k: int, samples: int, seed: int):
    """Probabilistic spot check: flows for a random pair subsample only."""
    rng = random.Random(seed)
    n = d.n
    if n < k + 1 or not is_strongly_connected(d):
        return False, frozenset()
    net = _SplitMaxFlow(d)
    out, inn = d.out_masks, d.in_masks
    for _ in range(samples):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v or (out[u] >> v) & 1:
            continue
        if (out[u] & inn[v]).bit_count() >= k:
            continue
        if net.local_connectivity(u, v) < k:
            return False, net.min_vertex_cut(u, v)
    return True, None


def cmd_verify(args) -> int:
    d = serialize.load_path(args.infile)
    if isinstance(d, Tournament):
        d = d.as_digraph()
    if args.sample_pairs:
        ok, witness = _sampled_check(d, args.k, args.sample_pairs, args.seed)
        mode = "probabilistic"
    else:
        ok, witness = is_strongly_k_connected(d, args.k, return_witness=True)
        mode = "exhaustive"
    report = {
        "n": d.n,
        "k": args.k,
        "connected": ok,
        "mode": mode,
        "witness": sorted(witness) if witness is not None else None,
    }
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    return 0 if ok else 1


def cmd_bench(args) -> int:
    rows = []
    rng = random.Random(args.seed)
    for k in args.k_values:
        for n in args.n_values:
            if n < k + 1:
                continue
            arcs, times = [], []
            for _ in range(args.trials):
                t = gen_k_connected(n, k, rng.getrandbits(63))
                started = time.perf_counter()
                result = sparsify(t, k, skip_validation=True)
                times.append((time.perf_counter() - started) * 1e3)
                arcs.append(result.digraph.arc_count())
            times.sort()
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "trials": args.trials,
                    "mean_arcs": statistics.mean(arcs),
                    "bound": arc_bound(n, k),
                    "ratio": statistics.mean(arcs) / (k * n),
                    "p50_ms": times[len(times) // 2],
                    "p90_ms": times[min(len(times) - 1, int(0.9 * len(times)))],
                }
            )
    if args.format == "json":
        text = json.dumps(rows, sort_keys=True, indent=2) + "\n"
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
    else:
        fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="", encoding="utf-8")
        try:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else [])
            writer.writeheader()
            writer.writerows(rows)
        finally:
            if fh is not sys.stdout:
                fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kspan",
        description="Sparse strongly k-connected spanning subgraphs of tournaments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded random tournament")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, default=0, help="resample until strongly k-connected")
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sparsify", help="sparsify a tournament file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--report", default="", help="write the JSON report here instead of stdout")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--skip-validation", action="store_true")
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("verify", help="check strong k-connectivity of a graph file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--sample-pairs", type=int, default=0, help="probabilistic pair subsample")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="arc-count and runtime table over (n, k) grids")
    p.add_argument("--n-values", type=int, nargs="+", required=True)
    p.add_argument("--k-values", type=int, nargs="+", required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotKConnected as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"separating set: {sorted(exc.witness)}", file=sys.stderr)
        return 1
    except KspanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
