
import numpy as np
import pytest

from percopath.bounds import brute_longest
from percopath.cycles import (
    ZigzagError,
    find_long_cycle,
    select_vertical_path,
    zigzag_splice,
)
from percopath.dfs import run_dfs
from percopath.forest import classify
from percopath.graphs import build_explicit, gen_clique_chain, gen_complete
from percopath.oracle import PercolationOracle, materialize
from percopath.validate import validate_cycle


def test_p1_complete_returns_full_cycle():
    k = 300
    g = gen_complete(k)
    res = find_long_cycle(g, k=k, c=float(k), seed=5)
    assert res.found and res.tag == "back-edge"
    assert res.length == g.n  # deepest back edge closes the Hamilton path
    ok, msg = validate_cycle(g, res)
    assert ok, msg


def test_p_small_fails_gracefully():
    g = gen_complete(60)
    res = find_long_cycle(g, k=60, c=0.5, seed=3)
    # c<1: subcritical; either a tiny certified cycle or a clean failure
    ok, msg = validate_cycle(g, res)
    assert ok, msg
    if res.found:
        assert res.length <= 61
    else:
        assert "stage" in res.diagnostics


def test_complete_moderate_c_hits_beta_bound():
    k, c = 2000, 1024
    good = 0
    for t in range(5):
        g = gen_complete(k)
        res = find_long_cycle(g, k=k, c=c, seed=100 + t)
        ok, msg = validate_cycle(g, res)
        assert ok, msg
        bound = (1 - 5 * c ** (-0.2)) * k
        if res.found and res.length >= bound:
            good += 1
    assert good >= 4


def test_clique_chain_degenerate_constants():
    # criterion-7 regime: (1-5eps)k <= 0, back-edge case must still reach >= k
    g = gen_clique_chain(50, 40)
    res = find_long_cycle(g, k=50, c=3000.0, seed=9)
    assert res.found
    assert res.length >= 50
    ok, msg = validate_cycle(g, res)
    assert ok, msg


def test_cycle_never_beats_bruteforce():
    for seed in range(8):
        host = gen_complete(11)
        p = [0.2, 0.5, 0.8][seed % 3]
        res = find_long_cycle(host, k=11, c=p * 11, seed=seed)
        ok, msg = validate_cycle(host, res)
        assert ok, msg
        gp = materialize(PercolationOracle(p, seed, round_tag=0, graph=host), host)
        if res.found:
            assert res.length <= max(brute_longest(gp, "cycle"), res.length * 0 + 3) or \
                res.length <= brute_longest(gp, "cycle")


def test_select_vertical_path_single_path():
    n = 90
    g = build_explicit([(i, i + 1) for i in range(n - 1)], n)
    o = PercolationOracle(1.0, seed=0, graph=g)
    f, _ = run_dfs(g, o)
    k = 20  # 4k = 80 <= depth
    cls = classify(f, o, g, 0.1, k)
    P = select_vertical_path(f, cls, np.empty(0, dtype=np.int64), 0.1, k)
    assert P is not None and len(P) == 4 * k + 1
    assert P[0] == 0 and P[-1] == 80


def test_select_vertical_path_shallow_fails():
    g = gen_complete(30)
    o = PercolationOracle(1.0, seed=0, graph=g)
    f, _ = run_dfs(g, o)
    cls = classify(f, o, g, 0.1, 30)
    P = select_vertical_path(f, cls, np.empty(0, dtype=np.int64), 0.1, 30)
    assert P is None  # depth 30 < 4k = 120


def test_select_vertical_path_respects_quota():
    n = 200
    g = build_explicit([(i, i + 1) for i in range(n - 1)], n)
    o = PercolationOracle(1.0, seed=0, graph=g)
    f, _ = run_dfs(g, o)
    k, eps = 10, 0.2  # quota = eps*k/4 = 0.5: any excluded vertex disqualifies
    cls = classify(f, o, g, eps, k)
    assert cls.skinny.all()
    # poison every possible 4k-window
    X = np.arange(0, n, 15, dtype=np.int64)
    P = select_vertical_path(f, cls, X, eps, k)
    assert P is None
    # lone excluded vertex 5: the first clean window starts at 6
    P2 = select_vertical_path(f, cls, np.array([5], dtype=np.int64), eps, k)
    assert P2 is not None and P2[0] == 6


def test_zigzag_splice_j1():
    P = list(range(100, 200))  # arbitrary vertex labels along a path
    cyc = zigzag_splice(P, [(P[60], P[10])])
    assert cyc == P[10:61]


def test_zigzag_splice_j2_planted():
    P = list(range(300))
    # chain: u3=20 < u2=90 < v2=95 < u1(implicit) < v1=160
    splices = [(160, 90), (95, 20)]
    cyc = zigzag_splice(P, splices)
    assert len(cyc) == len(set(cyc))
    assert set(cyc) <= set(P)
    # consecutive pairs are path-adjacent or splice edges
    pos = {v: i for i, v in enumerate(P)}
    sset = {frozenset(s) for s in splices}
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert abs(pos[a] - pos[b]) == 1 or frozenset((a, b)) in sset
    # covers everything between u3 and v1 except the window gaps
    assert len(cyc) == (160 - 20 + 1) - (95 - 90 - 1) - (160 - 95 - 1) + (160 - 95 - 1)


def test_zigzag_splice_j3_planted():
    P = list(range(400))
    # anchors climb: u2=200, u3=130, u4=60; windows just below each
    splices = [(260, 200), (205, 130), (134, 60)]
    cyc = zigzag_splice(P, splices)
    assert len(cyc) == len(set(cyc))
    pos = {v: i for i, v in enumerate(P)}
    sset = {frozenset(s) for s in splices}
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert abs(pos[a] - pos[b]) == 1 or frozenset((a, b)) in sset


def test_zigzag_splice_rejects_overlap():
    P = list(range(300))
    # v2 deeper than v1: segments overlap
    with pytest.raises(ZigzagError):
        zigzag_splice(P, [(160, 90), (170, 20)])
    with pytest.raises(ZigzagError):
        zigzag_splice(P, [(160, 90), (80, 95)])


def test_zigzag_construct_on_path_power_host():
    # host: vertices adjacent within distance 20; DFS at p=1 is the identity
    # path, so B(v) windows carry host edges at controlled mid distances
    from percopath.cycles import _zigzag_construct
    from percopath.validate import validate_sequence

    n, r = 1200, 20
    edges = [(i, j) for i in range(n) for j in range(i + 1, min(i + r + 1, n))]
    g = build_explicit(edges, n)
    o = PercolationOracle(1.0, seed=0, graph=g)
    f, _ = run_dfs(g, o, record_trace=False)
    k, eps = 30, 0.1
    cls = classify(f, o, g, eps, k)
    # low-degree vertices near the path ends are not free; everything else is
    assert cls.free.sum() > n - 60 and cls.skinny.all()
    P = select_vertical_path(f, cls, np.empty(0, dtype=np.int64), eps, k)
    assert P is not None
    diag = {}
    seq = _zigzag_construct(g, f, o, cls, np.zeros(n, dtype=bool), P, eps, k, diag)
    assert seq is not None, diag
    assert diag["j"] >= 2
    arr = np.array(seq, dtype=np.int64)
    from percopath.results import make_certificate

    cert = make_certificate(arr, np.roll(arr, -1), 0)
    ok, msg = validate_sequence(g, arr, cert, 0, {0: 1.0}, closed=True)
    assert ok, msg
    assert len(seq) >= 2 * k - 4 / eps * np.log(k) - eps * k / 4


def test_find_long_cycle_json_roundtrip():
    g = gen_complete(50)
    res = find_long_cycle(g, k=50, c=25.0, seed=2)
    blob = res.to_json()
    import json

    d = json.loads(blob)
    assert d["length"] == res.length
    assert d["tag"] == res.tag
