import math

import numpy as np
import pytest

from percopath.graphs import build_explicit, gen_complete, gen_complete_bipartite
from percopath.oracle import (
    OracleError,
    PercolationOracle,
    derive_seed,
    materialize,
    mix64,
    split_sprinkle,
    untested_incident,
)


def all_edges(g):
    us, vs = g.edge_arrays()
    return list(zip(us.tolist(), vs.tolist()))


def test_p_one_and_zero():
    g = gen_complete(4)
    o1 = PercolationOracle(1.0, seed=1, graph=g)
    o0 = PercolationOracle(0.0, seed=1, graph=g)
    for u, v in all_edges(g):
        assert o1.test(u, v) is True
        assert o0.test(u, v) is False


def test_idempotent_test():
    g = gen_complete(5)
    o = PercolationOracle(0.5, seed=3, graph=g)
    first = o.test(0, 1)
    q = o.queries
    assert o.test(0, 1) == first
    assert o.test(1, 0) == first
    assert o.queries == q
    assert o.positive + o.negative == o.queries == o.tested_count


def test_rejects_non_host_edge():
    g = build_explicit([(0, 1)], 3)
    o = PercolationOracle(0.5, seed=1, graph=g)
    with pytest.raises(OracleError):
        o.test(0, 2)
    with pytest.raises(OracleError):
        o.test(1, 1)


def test_peek_matches_test_and_counts_separately():
    g = gen_complete(6)
    o = PercolationOracle(0.4, seed=9, graph=g)
    val = o.test(2, 3)
    assert o.peek(2, 3) == val  # already tested: no new counting
    assert o.peeks == 0
    v2 = o.peek(1, 4)
    assert o.peeks == 1
    fresh = PercolationOracle(0.4, seed=9, graph=g)
    assert fresh.test(1, 4) == v2
    assert o.queries == 1 and o.tested_count == 2


def test_outcome_is_order_independent():
    g = gen_complete(7)
    edges = all_edges(g)
    rng = np.random.default_rng(0)
    sets = []
    for _ in range(10):
        o = PercolationOracle(0.37, seed=1234, graph=g)
        order = rng.permutation(len(edges))
        alive = {edges[i] for i in order if o.test(*edges[i])}
        sets.append(alive)
    assert all(s == sets[0] for s in sets)
    mat = materialize(PercolationOracle(0.37, seed=1234, graph=g), g)
    mu, mv = mat.edge_arrays()
    assert set(zip(mu.tolist(), mv.tolist())) == sets[0]


def test_materialize_p_extremes():
    g = gen_complete(5)
    full = materialize(PercolationOracle(1.0, seed=0), g)
    assert full.host_edge_count() == g.host_edge_count()
    empty = materialize(PercolationOracle(0.0, seed=0), g)
    assert empty.host_edge_count() == 0 and empty.n == g.n


def test_materialize_guard():
    g = gen_complete_bipartite(4000)  # 16e6 host edges
    with pytest.raises(OracleError, match="guard"):
        materialize(PercolationOracle(0.5, seed=0), g, max_host_edges=10**6)


def test_untested_incident():
    g = gen_complete(4)  # K_5 is k=4
    o = PercolationOracle(0.5, seed=2, graph=g)
    assert untested_incident(o, g, 0) == 4
    o.test(0, 1)
    o.test(0, 2)
    assert untested_incident(o, g, 0) == 2
    for v in g.neighbors(0).tolist():
        o.test(0, v)
    assert untested_incident(o, g, 0) == 0


def test_unbiasedness():
    p = 0.3
    n_draws = 10**5
    us = np.arange(n_draws, dtype=np.int64)
    vs = us + 1 + np.arange(n_draws, dtype=np.int64) % 977
    o = PercolationOracle(p, seed=777)
    frac = o.alive_many(us, vs).mean()
    sigma = math.sqrt(p * (1 - p) / n_draws)
    assert abs(frac - p) < 3 * sigma


def test_round_tag_independence():
    n_draws = 10**4
    us = np.arange(n_draws, dtype=np.int64)
    vs = us + 7
    a = PercolationOracle(0.5, seed=42, round_tag=1).alive_many(us, vs)
    b = PercolationOracle(0.5, seed=42, round_tag=2).alive_many(us, vs)
    corr = np.corrcoef(a.astype(float), b.astype(float))[0, 1]
    assert abs(corr) < 3 / math.sqrt(n_draws)


def test_alive_pure_function_of_key():
    o = PercolationOracle(0.5, seed=5)
    vals = [o.alive_one(3, 11) for _ in range(5)]
    assert len(set(vals)) == 1
    assert o.alive_one(11, 3) == vals[0]
    o2 = PercolationOracle(0.5, seed=5)
    assert o2.alive_one(3, 11) == vals[0]


def test_record_batch_matches_scalar_path():
    g = gen_complete(10)
    bulk = PercolationOracle(0.5, seed=31, graph=g)
    partners = np.array([1, 2, 3, 4, 5], dtype=np.int64)
    outs = [bulk.alive_one(0, int(w)) for w in partners]
    bulk.record_batch(0, partners, n_negative=sum(1 for o in outs if not o),
                      pushed=1 if any(outs) else None)
    for w in partners.tolist():
        assert bulk.is_tested(0, w)
    assert not bulk.is_tested(0, 6)
    assert bulk.tested_incident(0) == 5
    assert bulk.tested_incident(3) == 1


def test_split_sprinkle():
    s = split_sprinkle(seed=1, c=3.0, k=3)
    assert all(abs(r.p - 1 / 3) < 1e-12 for r in s.rounds)
    assert s.union_prob() <= 3.0 / 3 + 1e-12
    with pytest.raises(OracleError):
        split_sprinkle(seed=1, c=18, k=3)  # p_i = 2


def test_sprinkle_union_rate():
    g = gen_complete(100)
    s = split_sprinkle(seed=99, c=100.0, k=100, graph=g)
    us, vs = g.edge_arrays()
    us, vs = us[:10**4], vs[:10**4]
    alive = np.zeros(len(us), dtype=bool)
    for r in s.rounds:
        alive |= r.alive_many(us, vs)
    expect = 1 - (1 - 1 / 3) ** 3
    sigma = math.sqrt(expect * (1 - expect) / len(us))
    assert abs(alive.mean() - expect) < 3 * sigma


def test_budget_identity_grid():
    for c in (1.0, 3.0, 10.0, 300.0):
        for k in (10, 100, 10**4):
            if c / (3 * k) > 1:
                continue
            s = split_sprinkle(seed=0, c=c, k=k)
            assert s.union_prob() <= c / k + 1e-12


def test_derive_seed_splits():
    a = derive_seed(123, 0)
    b = derive_seed(123, 1)
    c = derive_seed(124, 0)
    assert len({a, b, c}) == 3
    assert derive_seed(123, 0) == a
    assert mix64(0) != 0
