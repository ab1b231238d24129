"""Acceptance suite: one test per criterion, printing a PASS/FAIL line each.

Statistical criteria run at their stated scales and tolerances; the long ones
carry the `slow` marker so day-to-day runs can deselect them, but the full
suite (including these) is the release gate.
"""

import math
import time

import numpy as np
import pytest

from percopath.bounds import brute_longest
from percopath.cycles import find_long_cycle
from percopath.dfs import check_properties, run_dfs
from percopath.graphs import (
    build_explicit,
    gen_clique_chain,
    gen_complete,
    gen_complete_bipartite,
    gen_pseudo_clique,
    gen_random_regular,
    min_degree,
)
from percopath.oracle import PercolationOracle, derive_seed, materialize
from percopath.paths import bipartite_long_path, find_long_path, path_from_set
from percopath.pseudoclique import analyze_pseudo_clique, compute_X, degree_classes
from percopath.validate import validate_cycle, validate_path


def report(num, name, ok, detail, t0):
    line = (
        f"ACCEPTANCE {num} ({name}): {'PASS' if ok else 'FAIL'} "
        f"({detail}, {time.time() - t0:.1f}s)"
    )
    print(line, flush=True)
    return ok


def test_criterion_1_dfs_property_suite():
    t0 = time.time()
    rng = np.random.default_rng(101)
    failures = 0
    total = 0
    cs = [2.0, 8.0, 32.0]
    for rep in range(200):
        c = cs[rep % 3]
        hosts = [
            gen_complete(int(rng.integers(20, 220))),
            gen_complete_bipartite(int(rng.integers(10, 250))),
            gen_clique_chain(int(rng.integers(3, 12)), int(rng.integers(2, 40))),
            gen_random_regular(
                int(rng.integers(3, 6)), 2 * int(rng.integers(10, 200)), rep
            ),
            gen_pseudo_clique(int(rng.integers(20, 380)), 0.25, rep),
        ]
        for g in hosts:
            k = min_degree(g)
            p = min(1.0, c / k)
            o = PercolationOracle(p, int(rng.integers(0, 2**62)), graph=g)
            _, trace = run_dfs(g, o, record_trace=True)
            verdict = check_properties(trace, g)
            total += 1
            if not verdict.ok:
                failures += 1
    ok = failures == 0 and total == 1000
    assert report(1, "dfs-properties", ok, f"{total - failures}/{total} traces ok", t0)


def test_criterion_2_oracle_exchangeability():
    t0 = time.time()
    rng = np.random.default_rng(202)
    bad = 0
    for h in range(100):
        n = int(rng.integers(4, 51))
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.45
        ]
        if not edges:
            edges = [(0, 1)]
        g = build_explicit(edges, n)
        seed = int(rng.integers(0, 2**62))
        p = float(rng.choice([0.2, 0.5, 0.8]))
        reference = None
        for _ in range(10):
            o = PercolationOracle(p, seed, graph=g)
            order = rng.permutation(len(edges))
            alive = frozenset(edges[i] for i in order if o.test(*edges[i]))
            if reference is None:
                reference = alive
            elif alive != reference:
                bad += 1
        mat = materialize(PercolationOracle(p, seed, graph=g), g)
        mu, mv = mat.edge_arrays()
        if frozenset(zip(mu.tolist(), mv.tolist())) != reference:
            bad += 1
    ok = bad == 0
    assert report(2, "oracle-exchangeability", ok, f"{bad} mismatches over 100 hosts", t0)


def test_criterion_3_query_budget():
    t0 = time.time()
    k, c = 2000, 20.0
    g = gen_complete(k)
    budget = 2.0 * g.n * k / c
    hits = 0
    for t in range(100):
        o = PercolationOracle(c / k, derive_seed(303, t), graph=g)
        _, trace = run_dfs(g, o, record_trace=False)
        if trace.n_queries <= budget:
            hits += 1
    ok = hits >= 99
    assert report(3, "query-budget", ok, f"{hits}/100 trials within 2nk/c", t0)


def test_criterion_4_priority_start_path():
    t0 = time.time()
    k, c = 10**4, 100.0
    g = gen_complete(k)
    size_v0 = math.ceil(math.log(k))
    hits = 0
    for t in range(100):
        seed = derive_seed(404, t)
        rng = np.random.default_rng(np.uint64(seed))
        v0 = rng.choice(g.n, size=size_v0, replace=False)
        o = PercolationOracle(c / k, seed, graph=g)
        res = path_from_set(g, o, v0, c, k)
        okv, _ = validate_path(g, res)
        if (
            okv
            and res.found
            and res.length >= 0.8 * k
            and res.diagnostics["start_in_v0"]
        ):
            hits += 1
    ok = hits >= 95
    assert report(4, "priority-start-path", ok, f"{hits}/100 paths >= 0.8k from V0", t0)


def test_criterion_5_bipartite_path():
    t0 = time.time()
    k, c = 10**4, 100.0
    g = gen_complete_bipartite(k)
    hits = 0
    for t in range(100):
        o = PercolationOracle(c / k, derive_seed(505, t), graph=g)
        res = bipartite_long_path(g, o, c, k)
        okv, _ = validate_path(g, res)
        if okv and res.length >= 1.4 * k:
            hits += 1
    ok = hits >= 90
    assert report(5, "bipartite-path", ok, f"{hits}/100 paths >= 1.4k", t0)


@pytest.mark.slow
def test_criterion_6_million_vertex_cycle():
    t0 = time.time()
    k, c = 10**6, 10**5
    g = gen_complete(k)
    target = (1 - 5 * c ** (-0.2)) * k
    hits = 0
    checked = 0
    for t in range(100):
        res = find_long_cycle(g, k=k, c=float(c), seed=derive_seed(606, t))
        okv, msg = validate_cycle(g, res)
        checked += 1
        if okv and res.found and res.length >= target:
            hits += 1
    ok = hits >= 95
    assert report(
        6, "million-vertex-cycle", ok, f"{hits}/100 cycles >= {target:.0f}", t0
    )


@pytest.mark.slow
def test_criterion_7_deep_forest_case():
    t0 = time.time()
    g = gen_clique_chain(50, 400)
    k, c = 50, 3000.0
    hits = 0
    for t in range(100):
        res = find_long_cycle(g, k=k, c=c, seed=derive_seed(707, t))
        okv, _ = validate_cycle(g, res)
        if okv and res.found and res.length >= k:
            hits += 1
    ok = hits >= 80
    assert report(7, "deep-forest-case", ok, f"{hits}/100 cycles >= k", t0)


@pytest.mark.slow
def test_criterion_8_pseudo_clique_suite():
    t0 = time.time()
    k, gamma, c = 10**4, 0.05, 6.0
    host = gen_pseudo_clique(k, gamma, seed=808)
    bound = (1 - 2 * c * math.exp(-c)) * k
    cap_delta = 4 * math.log(k)
    a_hits = 0
    delta_hits = 0
    for t in range(100):
        seed = derive_seed(808, t)
        rep = analyze_pseudo_clique(host, k=k, c=c, gamma=gamma, seed=seed)
        if rep.a_size >= bound:
            a_hits += 1
        if rep.notes["max_degree_gp"] <= cap_delta:
            delta_hits += 1
    # |X| amplification cap at c=20, k=2000
    k2, c2 = 2000, 20.0
    host2 = gen_pseudo_clique(k2, gamma, seed=809)
    cap_x = 500 * c2**4 * math.exp(-4 * c2 / 3) * k2
    x_hits = 0
    for t in range(100):
        gp = materialize(
            PercolationOracle(c2 / k2, derive_seed(809, t), round_tag=0),
            host2,
            max_host_edges=host2.host_edge_count(),
        )
        S, _ = degree_classes(gp, c2)
        X, _ = compute_X(gp, S)
        if len(X) <= cap_x:
            x_hits += 1
    ok = a_hits >= 95 and delta_hits == 100 and x_hits >= 95
    assert report(
        8,
        "pseudo-clique-suite",
        ok,
        f"|A|: {a_hits}/100, Delta: {delta_hits}/100, |X|: {x_hits}/100",
        t0,
    )


@pytest.mark.slow
def test_criterion_9_sprinkled_endgame():
    t0 = time.time()
    c = 300.0
    chain = gen_clique_chain(100, 50)
    chain_hits = 0
    for t in range(100):
        res = find_long_path(chain, k=100, c=c, seed=derive_seed(909, t))
        okv, _ = validate_path(chain, res)
        if okv and res.found and res.length >= 100:
            chain_hits += 1
    k = 10**4
    pseudo = gen_pseudo_clique(k, 0.05, seed=910)
    pseudo_hits = 0
    for t in range(100):
        res = find_long_path(pseudo, k=k, c=c, seed=derive_seed(910, t))
        okv, _ = validate_path(pseudo, res)
        if okv and res.found and res.length >= k:
            pseudo_hits += 1
    ok = chain_hits >= 90 and pseudo_hits >= 90
    assert report(
        9,
        "sprinkled-endgame",
        ok,
        f"clique-chain: {chain_hits}/100, pseudo-clique: {pseudo_hits}/100",
        t0,
    )


def test_criterion_10_exact_oracle_validity():
    t0 = time.time()
    rng = np.random.default_rng(1010)
    bad = 0
    total = 0
    for h in range(500):
        n = int(rng.integers(5, 17))
        p = [0.2, 0.5, 0.8][h % 3]
        edges = {
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.5
        }
        edges |= {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i)
                  for i in range(n)}  # spanning cycle keeps min degree >= 2
        g = build_explicit(sorted(edges), n)
        k = min_degree(g)
        c = p * k
        seed = int(rng.integers(0, 2**62))
        total += 1
        if h % 2 == 0:
            res = find_long_cycle(g, k=k, c=c, seed=seed)
            okv, msg = validate_cycle(g, res)
            gp = materialize(PercolationOracle(p, seed, round_tag=0), g)
            best = brute_longest(gp, "cycle")
            if not okv or (res.found and res.length > best):
                bad += 1
        else:
            res = find_long_path(g, k=k, c=c, seed=seed)
            okv, msg = validate_path(g, res)
            union_edges = set()
            us, vs = g.edge_arrays()
            for tag, pr in res.rounds.items():
                oo = PercolationOracle(pr, seed, round_tag=tag)
                alive = oo.alive_many(us, vs)
                union_edges |= {
                    (int(a), int(b)) for a, b in zip(us[alive], vs[alive])
                }
            gp = build_explicit(sorted(union_edges), n)
            best = brute_longest(gp, "path")
            if not okv or (res.found and res.length > best):
                bad += 1
    ok = bad == 0
    assert report(
        10, "exact-oracle-validity", ok, f"{total - bad}/{total} within brute force", t0
    )


@pytest.mark.slow
def test_criterion_11_monotone_trend():
    t0 = time.time()
    k = 10**4
    g = gen_complete(k)
    grid = [32.0, 243.0, 1024.0, 3125.0]
    means, ses = [], []
    for ci, c in enumerate(grid):
        lens = []
        for t in range(50):
            res = find_long_cycle(g, k=k, c=c, seed=derive_seed(1100 + ci, t))
            lens.append(res.length)
        lens = np.array(lens, dtype=float)
        means.append(lens.mean())
        ses.append(lens.std(ddof=1) / math.sqrt(len(lens)))
    ok = True
    for i in range(len(grid) - 1):
        allowance = 2.0 * math.hypot(ses[i], ses[i + 1])
        if means[i + 1] - means[i] < -allowance:
            ok = False
    detail = ", ".join(f"c={c:g}: {m:.0f}" for c, m in zip(grid, means))
    assert report(11, "monotone-trend", ok, detail, t0)
