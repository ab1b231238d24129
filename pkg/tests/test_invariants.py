"""Statistical module invariants: desk-scale checks of the per-module
quantitative statements that are not acceptance criteria themselves."""

import math

import numpy as np
import pytest

from percopath.dfs import RootPolicy, StopCondition, run_dfs
from percopath.forest import classify, heights_all
from percopath.graphs import gen_clique_chain, gen_complete
from percopath.oracle import PercolationOracle, derive_seed
from percopath.paths import path_from_set


@pytest.mark.parametrize("c", [32.0, 100.0])
def test_nonfree_fraction_cap(c):
    # at most 4 eps^4 n vertices fail to stay free in >= 95/100 trials
    k = 2000
    g = gen_complete(k)
    eps = c ** (-0.2)
    cap = 4.0 * eps**4 * g.n
    hits = 0
    for t in range(100):
        o = PercolationOracle(c / k, derive_seed(42, t), graph=g)
        f, _ = run_dfs(g, o, record_trace=False)
        cls = classify(f, o, g, eps, k)
        if int((~cls.free).sum()) <= cap:
            hits += 1
    assert hits >= 95


def test_low_height_fraction_cap():
    # on trials with few down vertices, few vertices sit below height hk
    k, m, c = 50, 400, 3000.0
    g = gen_clique_chain(k, m)
    eps = c ** (-0.2)
    hits = {1: 0, 4: 0}
    eligible = 0
    for t in range(20):
        o = PercolationOracle(min(1.0, c / k), derive_seed(43, t), graph=g)
        f, _ = run_dfs(g, o, record_trace=False)
        cls = classify(f, o, g, eps, k)
        if int((~cls.up).sum()) > 5.0 * eps**4 * g.n:
            continue
        eligible += 1
        hs = heights_all(f)
        for h in (1, 4):
            if int((hs < h * k).sum()) <= 6.0 * h * eps**3 * g.n:
                hits[h] += 1
    assert eligible > 0
    assert hits[1] == eligible and hits[4] == eligible


def test_restart_and_shortfall_events_rare():
    # event A: the stack empties after half-log-k steps; event B: too few
    # positives among the first k/p tested edges; both rare at c=100
    k, c = 10**4, 100.0
    p = c / k
    eps = c**-0.5
    g = gen_complete(k)
    a_events = 0
    b_events = 0
    trials = 100
    for t in range(trials):
        seed = derive_seed(33, t)
        rng = np.random.default_rng(np.uint64(seed))
        v0 = rng.choice(g.n, size=math.ceil(math.log(k)), replace=False)
        o = PercolationOracle(p, seed, graph=g)
        res = path_from_set(g, o, v0, c, k)
        if res.diagnostics.get("event_a"):
            a_events += 1
        ob = PercolationOracle(p, seed, graph=g)
        _, tr = run_dfs(
            g,
            ob,
            policy=RootPolicy.priority(v0),
            stop=StopCondition.query_budget(math.ceil(k / p)),
            record_trace=False,
        )
        if tr.n_positive < (1 - eps) * k:
            b_events += 1
    assert a_events <= 5
    assert b_events <= 5
