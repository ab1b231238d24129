import math

import numpy as np
import pytest

from percopath.dfs import run_dfs
from percopath.forest import (
    ancestor_at,
    back_edge_sets,
    classification_to_csv,
    classify,
    desc_within_batch,
    height,
    heights_all,
    tree_distance,
)
from percopath.graphs import build_explicit, gen_complete
from percopath.oracle import PercolationOracle


def path_forest(n):
    """Forest that is a single path 0-1-...-n-1 (host path, p=1)."""
    g = build_explicit([(i, i + 1) for i in range(n - 1)], n)
    f, _ = run_dfs(g, PercolationOracle(1.0, seed=0, graph=g))
    return f


def random_forest(n, seed, p=0.3):
    g = gen_complete(n - 1)
    o = PercolationOracle(p, seed=seed, graph=g)
    f, _ = run_dfs(g, o)
    return f, g, o


def test_ancestor_at_basics():
    f = path_forest(5)
    assert ancestor_at(f, 3, 0) == 3
    assert ancestor_at(f, 2, 2) == 0
    assert ancestor_at(f, 0, 1) is None
    assert ancestor_at(f, 4, 4) == 0


def test_ancestor_exists_iff_within_depth():
    f, _, _ = random_forest(60, seed=5)
    for v in range(f.n):
        for i in (0, 1, int(f.depth[v]), int(f.depth[v]) + 1):
            got = ancestor_at(f, v, i)
            assert (got is not None) == (i <= f.depth[v])


def test_heights():
    f = path_forest(7)
    hs = heights_all(f)
    assert hs[0] == 6 and hs[6] == 0
    assert height(f, 0) == 6
    assert height(f, 6) == 0
    star = build_explicit([(0, i) for i in range(1, 6)], 6)
    fs, _ = run_dfs(star, PercolationOracle(1.0, seed=0, graph=star))
    # host star explored from the center: every leaf hangs under 0
    assert heights_all(fs)[0] == 1
    assert height(fs, 0) == 1


def test_tree_distance():
    f, _, _ = random_forest(40, seed=2, p=0.5)
    for u in range(0, 40, 7):
        for v in range(0, 40, 11):
            if f.root[u] != f.root[v]:
                continue
            d = tree_distance(f, u, v)
            # brute force: climb u's ancestor chain, then v's
            anc_u = {}
            x, i = u, 0
            while x >= 0:
                anc_u[x] = i
                x, i = int(f.parent[x]), i + 1
            x, j = v, 0
            while x not in anc_u:
                x, j = int(f.parent[x]), j + 1
            assert d == anc_u[x] + j


def test_desc_within_trivial_bounds():
    f, _, _ = random_forest(80, seed=3)
    zero = desc_within_batch(f, 0)
    assert (zero == 0).all()
    big = desc_within_batch(f, f.n)
    assert (big == f.subtree_size - 1).all()


def brute_desc_within(f, d):
    out = np.zeros(f.n, dtype=np.int64)
    for v in range(f.n):
        frontier = [v]
        seen = 0
        for _ in range(d):
            nxt = []
            for x in frontier:
                nxt.extend(f.children(x).tolist())
            seen += len(nxt)
            frontier = nxt
        out[v] = seen
    return out


@pytest.mark.parametrize("seed", [1, 7, 13])
def test_desc_within_matches_bruteforce(seed):
    f, _, _ = random_forest(120, seed=seed, p=0.25)
    for d in (1, 2, 5, 17, 80):
        assert (desc_within_batch(f, d) == brute_desc_within(f, d)).all()


def test_sum_descendants_equals_sum_depths():
    f, _, _ = random_forest(200, seed=11, p=0.15)
    assert (f.subtree_size - 1).sum() == f.depth.sum()


def test_classify_p0_all_free_down_skinny():
    g = gen_complete(30)
    o = PercolationOracle(0.0, seed=1, graph=g)
    f, _ = run_dfs(g, o)
    eps, k = 0.2, 30
    cls = classify(f, o, g, eps, k)
    assert (~cls.up).all()
    assert cls.skinny.all()
    # p=0: every vertex ends with tested_incident = degree (all queried
    # negative), so nothing is free
    assert (~cls.free).all()
    assert (o.tested_inc == g.degrees()).all()


def test_classify_p1_path_up_down():
    g = gen_complete(20)
    o = PercolationOracle(1.0, seed=1, graph=g)
    f, _ = run_dfs(g, o)
    eps, k = 0.25, 20  # eps*k = 5 strict descendants
    cls = classify(f, o, g, eps, k)
    # DFS path 0..20: vertex i has 20-i strict descendants
    expect_up = np.array([20 - i >= 5 for i in range(21)])
    assert (cls.up == expect_up).all()
    # top of the path has no descendants: down
    assert not cls.up[20]


def test_classify_deep_path_many_free():
    f, g, o = random_forest(400, seed=9, p=0.05)
    eps = 0.3
    k = g.n - 1
    cls = classify(f, o, g, eps, k)
    # tested edges ~ 2n/p << eps*k*n: most vertices stay free
    assert cls.free.sum() > 0.8 * g.n


def test_back_edge_sets_planted():
    # path of 40 vertices; host edge (5, 25) untested after DFS
    edges = [(i, i + 1) for i in range(39)] + [(5, 25)]
    g = build_explicit(edges, 40)
    o = PercolationOracle(1.0, seed=0, graph=g)
    f, _ = run_dfs(g, o)
    eps = 0.1
    k = 40  # window: [4, 20]
    b = back_edge_sets(f, o, g, eps, k, targets=[25])
    assert b[25].tolist() == [5]
    # after peeking the edge it is tested and leaves B(v)
    o.peek(5, 25)
    b2 = back_edge_sets(f, o, g, eps, k, targets=[25])
    assert b2[25].tolist() == []


def test_back_edge_sets_too_shallow():
    f, g, o = random_forest(50, seed=21, p=0.4)
    eps, k = 0.2, 49
    lo = math.ceil(eps * k)
    shallow = [v for v in range(g.n) if f.depth[v] < lo]
    b = back_edge_sets(f, o, g, eps, k, targets=shallow)
    assert all(len(arr) == 0 for arr in b.values())


def test_classification_csv(tmp_path):
    f, g, o = random_forest(30, seed=2)
    cls = classify(f, o, g, 0.2, 29)
    p = tmp_path / "cls.csv"
    classification_to_csv(str(p), f, cls)
    lines = p.read_text().strip().splitlines()
    assert lines[0] == "vertex,depth,height,up,skinny,free"
    assert len(lines) == g.n + 1
