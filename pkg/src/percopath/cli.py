"""Command-line surface.

Subcommands: gen (emit/inspect a host graph), dfs (single exploration plus
invariant check), path, cycle, pseudo (set-machinery report), sweep (grid
Monte Carlo from a JSON config), oracle-test (order independence and
materialization equivalence). Exit code 0 = all validations passed, 1 =
validation failure, 2 = usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .cycles import find_long_cycle
from .dfs import RootPolicy, StopCondition, check_properties, export_trace, run_dfs
from .graphs import GeneratorSpec, GraphError, min_degree, save_edge_list
from .harness import ExperimentConfig, run_trials
from .oracle import PercolationOracle, materialize
from .paths import bipartite_long_path, find_long_path, path_from_set
from .pseudoclique import analyze_pseudo_clique
from .validate import validate_cycle, validate_path


def _add_host_args(sp):
    sp.add_argument("--family", default="complete",
                    choices=list(GeneratorSpec.FAMILIES))
    sp.add_argument("--k", type=int, default=100)
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--gamma", type=float, default=0.05)
    sp.add_argument("--host-seed", type=int, default=0)
    sp.add_argument("--edge-file", default="")


def _build_host(args):
    spec = GeneratorSpec(
        family=args.family, k=args.k, n=args.n, m=args.m,
        gamma=args.gamma, seed=args.host_seed, path=args.edge_file,
    )
    return spec.build()


def cmd_gen(args) -> int:
    g = _build_host(args)
    info = {
        "family": args.family,
        "n": g.n,
        "min_degree": min_degree(g),
        "host_edges": g.host_edge_count(),
    }
    print(json.dumps(info))
    if args.out:
        if g.host_edge_count() > args.max_edges:
            print(f"refusing to write {g.host_edge_count()} edges "
                  f"(> {args.max_edges})", file=sys.stderr)
            return 1
        save_edge_list(g, args.out)
    return 0


def cmd_dfs(args) -> int:
    g = _build_host(args)
    p = min(1.0, args.c / args.k)
    oracle = PercolationOracle(p, args.seed, round_tag=0, graph=g)
    policy = RootPolicy.priority(args.v0) if args.v0 else None
    stop = StopCondition.reached_size(args.stop_size) if args.stop_size else None
    record = not args.no_trace
    f, trace = run_dfs(g, oracle, policy=policy, stop=stop, record_trace=record)
    out = {
        "n": g.n,
        "p": p,
        "queries": trace.n_queries,
        "positive": trace.n_positive,
        "roots": trace.n_roots,
        "max_depth": int(f.depth.max()),
        "budget_2n_over_p": 2 * g.n / p if p > 0 else None,
        "stopped": trace.stopped,
    }
    rc = 0
    if record:
        rep = check_properties(trace, g)
        out["properties"] = {
            "structural": rep.structural_ok,
            "I": rep.p1, "II": rep.p2, "III": rep.p3, "IV": rep.p4,
        }
        rc = 0 if rep.ok else 1
    if args.trace_out:
        export_trace(trace, args.trace_out)
    print(json.dumps(out))
    return rc


def cmd_path(args) -> int:
    g = _build_host(args)
    if args.op == "from-set":
        p = min(1.0, args.c / args.k)
        oracle = PercolationOracle(p, args.seed, round_tag=0, graph=g)
        rng = np.random.default_rng(np.uint64(args.seed))
        v0 = rng.choice(g.n, size=min(g.n, max(1, int(np.ceil(np.log(args.k))))),
                        replace=False)
        res = path_from_set(g, oracle, v0, args.c, args.k)
    elif args.op == "bipartite":
        p = min(1.0, args.c / args.k)
        oracle = PercolationOracle(p, args.seed, round_tag=0, graph=g)
        res = bipartite_long_path(g, oracle, args.c, args.k)
    else:
        res = find_long_path(g, args.k, args.c, args.seed)
    ok, msg = validate_path(g, res)
    blob = res.to_json(include_sequence=not args.no_sequence)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(blob + "\n")
    else:
        print(blob)
    if not ok:
        print(f"validation failed: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_cycle(args) -> int:
    g = _build_host(args)
    res = find_long_cycle(g, args.k, args.c, args.seed)
    ok, msg = validate_cycle(g, res)
    blob = res.to_json(include_sequence=not args.no_sequence)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(blob + "\n")
    else:
        print(blob)
    if not ok:
        print(f"validation failed: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_pseudo(args) -> int:
    from .graphs import gen_pseudo_clique

    host = gen_pseudo_clique(args.k, args.gamma, seed=args.host_seed)
    rep = analyze_pseudo_clique(
        host, k=args.k, c=args.c, gamma=args.gamma, seed=args.seed,
        ell=args.ell, with_lemma51=args.lemma51, samples=args.samples,
    )
    print(rep.to_json())
    return 0


def cmd_sweep(args) -> int:
    cfg = ExperimentConfig.from_json_file(args.config)
    if args.trials:
        cfg.trials = args.trials
    if args.master_seed is not None:
        cfg.master_seed = args.master_seed
    if args.workers:
        cfg.workers = args.workers
    if args.out_csv:
        cfg.out_csv = args.out_csv
    if args.out_json:
        cfg.out_json = args.out_json
    if args.reproducible:
        cfg.reproducible = True
    records, summary = run_trials(cfg)
    print(json.dumps(summary))
    return 0 if all(r.valid for r in records) else 1


def cmd_oracle_test(args) -> int:
    rng = np.random.default_rng(args.seed)
    failures = 0
    for h in range(args.hosts):
        n = int(rng.integers(4, args.n + 1))
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.5
        ]
        from .graphs import build_explicit

        g = build_explicit(edges, n)
        seed = int(rng.integers(0, 2**63))
        baseline = None
        for _ in range(args.orders):
            o = PercolationOracle(args.p, seed, graph=g)
            order = rng.permutation(len(edges))
            alive = frozenset(
                edges[i] for i in order if o.test(*edges[i])
            )
            if baseline is None:
                baseline = alive
            elif alive != baseline:
                failures += 1
        mat = materialize(PercolationOracle(args.p, seed, graph=g), g)
        mu, mv = mat.edge_arrays()
        if frozenset(zip(mu.tolist(), mv.tolist())) != frozenset(
            (min(u, v), max(u, v)) for u, v in baseline
        ):
            failures += 1
    print(json.dumps({"hosts": args.hosts, "orders": args.orders,
                      "failures": failures}))
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="percopath",
        description="Lazy edge percolation of minimum-degree-k hosts: DFS "
                    "exploration, long path/cycle constructions, Monte Carlo "
                    "verification.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("gen", help="emit or inspect a host graph")
    _add_host_args(sp)
    sp.add_argument("--out", default="")
    sp.add_argument("--max-edges", type=int, default=10**7)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("dfs", help="single exploration + invariant check")
    _add_host_args(sp)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--v0", type=int, nargs="*", default=None)
    sp.add_argument("--stop-size", type=int, default=0)
    sp.add_argument("--trace-out", default="")
    sp.add_argument("--no-trace", action="store_true")
    sp.set_defaults(fn=cmd_dfs)

    sp = sub.add_parser("path", help="long-path construction")
    _add_host_args(sp)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--op", default="auto", choices=["auto", "from-set", "bipartite"])
    sp.add_argument("--json-out", default="")
    sp.add_argument("--no-sequence", action="store_true")
    sp.set_defaults(fn=cmd_path)

    sp = sub.add_parser("cycle", help="long-cycle construction")
    _add_host_args(sp)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json-out", default="")
    sp.add_argument("--no-sequence", action="store_true")
    sp.set_defaults(fn=cmd_cycle)

    sp = sub.add_parser("pseudo", help="pseudo-clique set-machinery report")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--gamma", type=float, default=0.05)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--host-seed", type=int, default=0)
    sp.add_argument("--ell", type=int, default=7)
    sp.add_argument("--lemma51", action="store_true")
    sp.add_argument("--samples", type=int, default=200)
    sp.set_defaults(fn=cmd_pseudo)

    sp = sub.add_parser("sweep", help="grid Monte Carlo from a JSON config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--trials", type=int, default=0)
    sp.add_argument("--master-seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=0)
    sp.add_argument("--out-csv", default="")
    sp.add_argument("--out-json", default="")
    sp.add_argument("--reproducible", action="store_true")
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("oracle-test",
                        help="order independence + materialization equivalence")
    sp.add_argument("--n", type=int, default=30)
    sp.add_argument("--hosts", type=int, default=20)
    sp.add_argument("--orders", type=int, default=5)
    sp.add_argument("--p", type=float, default=0.4)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_oracle_test)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
