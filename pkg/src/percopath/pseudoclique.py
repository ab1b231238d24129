"""Set machinery on percolated pseudo-cliques: degree classes S/L, the W_i
sets, the X fixed-point iteration, Y, the 2-core V_2, and A = V_2 \\ (W u X
u Y), with empirical checkers for the structural inequalities."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
import json
import math

import numpy as np

from .graphs import ExplicitGraph, GraphView, min_degree
from .oracle import PercolationOracle, materialize

__all__ = [
    "degree_classes",
    "compute_W",
    "compute_X",
    "two_core",
    "compute_A",
    "check_lemma51",
    "PseudoCliqueReport",
    "analyze_pseudo_clique",
]


def degree_classes(gp: ExplicitGraph, c: float):
    """S = vertices of G_p-degree <= c/10 (small), L = the rest (large)."""
    degs = gp.degrees()
    s_mask = degs <= c / 10.0
    return np.flatnonzero(s_mask), np.flatnonzero(~s_mask)


def _simple_paths_hit(gp, v, s_mask, max_len=4):
    """Lengths i <= max_len for which a simple path from v ends at another
    small vertex."""
    hits = set()
    stack = [(v, [v])]
    while stack:
        x, path = stack.pop()
        if len(path) > 1 and s_mask[x] and x != v:
            hits.add(len(path) - 1)
        if len(path) <= max_len:
            for w in gp.neighbors(x).tolist():
                if w not in path:
                    stack.append((w, path + [w]))
    return hits


def compute_W(gp: ExplicitGraph, S):
    """W_i: small vertices joined to another small vertex by an i-edge path,
    or lying on an i-cycle (i = 1..4; i <= 2 cycles are vacuous in simple
    graphs). W is their union."""
    s_mask = np.zeros(gp.n, dtype=bool)
    s_mask[np.asarray(S, dtype=np.int64)] = True
    w_sets = {i: set() for i in (1, 2, 3, 4)}
    for v in np.flatnonzero(s_mask).tolist():
        for i in _simple_paths_hit(gp, v, s_mask):
            w_sets[i].add(v)
        nb = gp.neighbors(v).tolist()
        nbs = set(nb)
        tri = False
        quad = False
        for a_i, u in enumerate(nb):
            un = set(gp.neighbors(u).tolist())
            if un & nbs - {v, u}:
                tri = True
            for w in nb[a_i + 1 :]:
                if w == u:
                    continue
                wn = set(gp.neighbors(w).tolist())
                if (un & wn) - {v, u, w}:
                    quad = True
        if tri:
            w_sets[3].add(v)
        if quad:
            w_sets[4].add(v)
    w_all = set().union(*w_sets.values())
    return w_sets, np.array(sorted(w_all), dtype=np.int64)


def compute_X(gp: ExplicitGraph, S):
    """Fixed-point iteration X_i = {v : >= 2 G_p-neighbors in S u X_{<i}}."""
    n = gp.n
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(gp.offsets))
    base = np.zeros(n, dtype=bool)
    base[np.asarray(S, dtype=np.int64)] = True
    x_mask = np.zeros(n, dtype=bool)
    trace = []
    while True:
        pool = base | x_mask
        cnt = np.bincount(src[pool[gp.targets]], minlength=n)
        new = (cnt >= 2) & ~x_mask
        if not new.any():
            break
        x_mask |= new
        trace.append(int(new.sum()))
        if len(trace) > n:
            break
    return np.flatnonzero(x_mask), trace


def two_core(gp: ExplicitGraph) -> np.ndarray:
    """Vertices of the maximal subgraph of minimum degree 2."""
    n = gp.n
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(gp.offsets))
    alive = np.ones(n, dtype=bool)
    while True:
        deg = np.bincount(src[alive[src] & alive[gp.targets]], minlength=n)
        drop = alive & (deg <= 1)
        if not drop.any():
            return np.flatnonzero(alive)
        alive &= ~drop


@dataclass
class PseudoCliqueReport:
    k: int
    n: int
    gamma: float
    c: float
    ell: int
    s_size: int
    l_size: int
    w_sizes: dict
    w_size: int
    x_trace: list
    x_size: int
    y_size: int
    v2_size: int
    a_size: int
    lemma51: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, default=lambda o: int(o))


def compute_A(gp: ExplicitGraph, S, W, X, k: int | None = None,
              gamma: float | None = None, c: float | None = None,
              ell: int = 7):
    """Y = degree-2 vertices with a G_p-neighbor in X; A = V_2 \\ (W u X u Y)."""
    n = gp.n
    degs = gp.degrees()
    x_mask = np.zeros(n, dtype=bool)
    x_mask[np.asarray(X, dtype=np.int64)] = True
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(gp.offsets))
    has_x_nb = np.zeros(n, dtype=bool)
    hits = src[x_mask[gp.targets]]
    has_x_nb[hits] = True
    y_mask = (degs == 2) & has_x_nb
    v2 = two_core(gp)
    excluded = x_mask | y_mask
    excluded[np.asarray(W, dtype=np.int64)] = True
    a = v2[~excluded[v2]]
    report = PseudoCliqueReport(
        k=k or 0,
        n=n,
        gamma=gamma if gamma is not None else 0.0,
        c=c if c is not None else 0.0,
        ell=ell,
        s_size=len(S),
        l_size=n - len(S),
        w_sizes={},
        w_size=len(W),
        x_trace=[],
        x_size=len(X),
        y_size=int(y_mask.sum()),
        v2_size=len(v2),
        a_size=len(a),
    )
    return np.flatnonzero(y_mask), a, report


def _neighborhood_size(gp, z):
    out = set()
    for v in z:
        out.update(gp.neighbors(int(v)).tolist())
    return len(out)


def _induced_edges(gp, z_mask):
    src = np.repeat(np.arange(gp.n, dtype=np.int64), np.diff(gp.offsets))
    return int((z_mask[src] & z_mask[gp.targets]).sum()) // 2


def check_lemma51(gp: ExplicitGraph, host: GraphView, c: float, ell: int = 7,
                  samples: int = 10_000, seed: int = 0) -> dict:
    """Verdicts (a)-(f). (a)-(d) exact; (e)/(f) sampled over random
    qualifying sets Z (exhaustive for n <= 20)."""
    if ell < 7:
        raise ValueError("ell must be >= 7")
    n = host.n
    k = min_degree(host)
    gamma = n / max(k, 1) - 1.0
    degs = gp.degrees()
    S, L = degree_classes(gp, c)
    out: dict = {}

    cap_a = (1 + gamma) * k * math.exp(-2.0 * c / 3.0)
    cnt_a = int((degs <= c / 10.0 + 1).sum())
    out["a"] = {"holds": cnt_a <= cap_a, "count": cnt_a, "cap": cap_a,
                "mode": "exact"}

    s_mask = np.zeros(n, dtype=bool)
    s_mask[S] = True
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(gp.offsets))
    touching = int((s_mask[src] | s_mask[gp.targets]).sum()) // 2
    out["b"] = {
        "holds": touching <= 4 * c * len(S),
        "count": touching,
        "cap": 4 * c * len(S),
        "mode": "exact",
        "note": "S-version: counts edges meeting S directly",
    }

    delta = int(degs.max()) if n else 0
    cap_c = 4.0 * math.log(max(k, 2))
    out["c"] = {"holds": delta <= cap_c, "count": delta, "cap": cap_c,
                "mode": "exact"}

    _, w_arr = compute_W(gp, S)
    cap_d = c**4 * math.exp(-4.0 * c / 3.0) * k
    out["d"] = {"holds": len(w_arr) <= cap_d, "count": len(w_arr),
                "cap": cap_d, "mode": "exact"}

    rng = np.random.default_rng(seed)
    max_e = int(k // (2 * ell))
    holds_e, checked_e, margin_e = True, 0, math.inf
    if max_e >= 1 and len(L):
        if n <= 20:
            zs = [
                list(comb)
                for size in range(1, min(max_e, len(L)) + 1)
                for comb in combinations(L.tolist(), size)
            ]
            mode_e = "exhaustive"
        else:
            zs = []
            for _ in range(samples):
                size = int(rng.integers(1, min(max_e, len(L)) + 1))
                zs.append(rng.choice(L, size=size, replace=False).tolist())
            mode_e = "sampled"
        for z in zs:
            nb = _neighborhood_size(gp, z)
            checked_e += 1
            margin_e = min(margin_e, nb - ell * len(z))
            if nb < ell * len(z):
                holds_e = False
    else:
        mode_e = "vacuous"
    out["e"] = {"holds": holds_e, "checked": checked_e,
                "min_margin": None if margin_e is math.inf else margin_e,
                "mode": mode_e}

    lo_f, hi_f = max(1, int(math.ceil(k / (2 * ell)))), int(k // 2)
    holds_f, checked_f, margin_f = True, 0, math.inf
    if hi_f >= lo_f and hi_f <= n:
        if n <= 20:
            zs = [
                list(comb)
                for size in range(lo_f, hi_f + 1)
                for comb in combinations(range(n), size)
            ]
            mode_f = "exhaustive"
        else:
            zs = []
            for _ in range(samples):
                size = int(rng.integers(lo_f, hi_f + 1))
                zs.append(rng.choice(n, size=size, replace=False).tolist())
            mode_f = "sampled"
        for z in zs:
            z_mask = np.zeros(n, dtype=bool)
            z_mask[np.asarray(z, dtype=np.int64)] = True
            m_z = _induced_edges(gp, z_mask)
            need = c * len(z) / (3.0 * ell)
            checked_f += 1
            margin_f = min(margin_f, m_z - need)
            if m_z < need:
                holds_f = False
    else:
        mode_f = "vacuous"
    out["f"] = {"holds": holds_f, "checked": checked_f,
                "min_margin": None if margin_f is math.inf else margin_f,
                "mode": mode_f}
    return out


def analyze_pseudo_clique(
    host: GraphView,
    k: int,
    c: float,
    gamma: float,
    seed: int,
    ell: int = 7,
    with_lemma51: bool = False,
    samples: int = 200,
) -> PseudoCliqueReport:
    """Materialize G_p on a pseudo-clique host and assemble the full report."""
    p = min(1.0, c / k)
    oracle = PercolationOracle(p, seed, round_tag=0)
    gp = materialize(oracle, host, max_host_edges=max(10**7, host.host_edge_count()))
    S, L = degree_classes(gp, c)
    w_sets, w_arr = compute_W(gp, S)
    X, x_trace = compute_X(gp, S)
    _, a, report = compute_A(gp, S, w_arr, X, k=k, gamma=gamma, c=c, ell=ell)
    report.w_sizes = {i: len(w_sets[i]) for i in (1, 2, 3, 4)}
    report.x_trace = x_trace
    bound = (1.0 - 2.0 * c * math.exp(-c)) * k
    report.notes["a_lower_bound"] = bound
    report.notes["a_bound_holds"] = bool(report.a_size >= bound)
    report.notes["max_degree_gp"] = int(gp.degrees().max()) if gp.n else 0
    if with_lemma51:
        report.lemma51 = {
            key: {kk: (vv if not hasattr(vv, "item") else vv.item())
                  for kk, vv in val.items()}
            for key, val in check_lemma51(
                gp, host, c, ell=ell, samples=samples, seed=seed
            ).items()
        }
    return report
