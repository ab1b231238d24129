"""Long cycle construction on a percolated min-degree-k host.

Run DFS to completion, then either close a long untested vertical edge
revealed alive (back-edge case), or select a deep vertical path with few
excluded vertices and build the alternating zig-zag cycle through revealed
back edges (zig-zag case). All reveals are peeks on the same lazy oracle, so
certificates re-validate against fresh oracles.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .dfs import RootedForest, run_dfs
from .forest import VertexClassification, classify, heights_all
from .graphs import CompleteGraph, GraphView, PseudoCliqueGraph
from .oracle import PercolationOracle
from .results import CycleResult, make_certificate

__all__ = ["ZigzagError", "find_long_cycle", "select_vertical_path", "zigzag_splice"]

_DESK_N = 100_000  # exact two-sided long-edge counting below this size


class ZigzagError(ValueError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


def _tested_uv(oracle: PercolationOracle):
    if oracle._chunk_len:
        oracle._merge()
    keys = oracle._merged
    if oracle._extra:
        extra = np.fromiter(oracle._extra, dtype=np.uint64, count=len(oracle._extra))
        keys = np.concatenate([keys, extra])
    u = (keys >> np.uint64(32)).astype(np.int64)
    v = (keys & np.uint64(0xFFFFFFFF)).astype(np.int64)
    return u, v


def _vertical_split(f: RootedForest, us, vs):
    """Partition pairs into (ancestor, descendant) where vertical, else drop."""
    ei, eo = f.euler_in, f.euler_out
    u_anc = (ei[us] < ei[vs]) & (ei[vs] < eo[us])
    v_anc = (ei[vs] < ei[us]) & (ei[us] < eo[vs])
    vertical = u_anc | v_anc
    anc = np.where(u_anc, us, vs)[vertical]
    desc = np.where(u_anc, vs, us)[vertical]
    return anc, desc


def _long_counts_interval(g, f, oracle, d_lo):
    """Per-vertex count of long untested vertical host edges, ancestor side
    only, for hosts whose neighborhood is all of V (complete/pseudo-clique).
    Sound undercount: the descendant side is omitted."""
    n = g.n
    cnt = np.clip(f.depth - d_lo + 1, 0, None).astype(np.int64)
    da = g.deleted_arrays()
    if da is not None:
        offs, tgts = da
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(offs))
        keep = src < tgts
        anc, desc = _vertical_split(f, src[keep], tgts[keep].astype(np.int64))
        long = (f.depth[desc] - f.depth[anc]) >= d_lo
        cnt -= np.bincount(desc[long], minlength=n)
    tu, tv = _tested_uv(oracle)
    anc, desc = _vertical_split(f, tu, tv)
    long = (f.depth[desc] - f.depth[anc]) >= d_lo
    cnt -= np.bincount(desc[long], minlength=n)
    return np.clip(cnt, 0, None)


def _long_pairs_general(g, f, oracle, d_lo):
    """(anc, desc, dist) arrays of untested vertical host edges with
    distance >= d_lo; desk-scale hosts only."""
    us, vs = g.edge_arrays()
    anc, desc = _vertical_split(f, us, vs)
    dist = f.depth[desc] - f.depth[anc]
    keep = dist >= d_lo
    anc, desc, dist = anc[keep], desc[keep], dist[keep]
    if len(anc):
        from .graphs import pack_edge

        keys = pack_edge(anc, desc)
        tu, tv = _tested_uv(oracle)
        tk = np.sort(pack_edge(tu, tv)) if len(tu) else np.empty(0, dtype=np.uint64)
        if len(tk):
            pos = np.searchsorted(tk, keys)
            pos_c = np.minimum(pos, len(tk) - 1)
            untested = tk[pos_c] != keys
            anc, desc, dist = anc[untested], desc[untested], dist[untested]
    return anc, desc, dist


def _iter_candidates_interval(g, f, oracle, d_lo):
    """Lazy (dist, anc, desc) stream in distance-descending order for
    complete-like hosts; skips non-host and already-tested pairs."""
    depth = f.depth
    order = np.lexsort((np.arange(f.n), -depth))
    order = order[depth[order] >= d_lo]
    chains: dict[int, list[int]] = {}
    heap: list[tuple[int, int]] = []
    ptr = 0

    def push_until(d):
        nonlocal ptr
        while ptr < len(order) and depth[order[ptr]] >= d:
            v = int(order[ptr])
            heapq.heappush(heap, (-int(depth[v]), v))
            ptr += 1

    if len(order) == 0:
        return
    push_until(int(depth[order[0]]))
    while heap:
        neg_d, v = heap[0]
        d = -neg_d
        push_until(d)
        if heap[0] != (neg_d, v):
            continue
        heapq.heappop(heap)
        chain = chains.get(v)
        if chain is None:
            chain = [v]
            x = v
            while f.parent[x] >= 0:
                x = int(f.parent[x])
                chain.append(x)
            chains[v] = chain
        u = chain[d]
        if d - 1 >= d_lo:
            heapq.heappush(heap, (-(d - 1), v))
        if g.has_edge(u, v) and not oracle.is_tested(u, v):
            yield d, u, v


def _iter_candidates_general(g, f, oracle, d_lo):
    anc, desc, dist = _long_pairs_general(g, f, oracle, d_lo)
    order = np.lexsort((anc, f.euler_in[desc], -dist))
    for i in order.tolist():
        yield int(dist[i]), int(anc[i]), int(desc[i])


def _peek_back_edge(g, f, oracle, d_lo, cap):
    """Peek long untested vertical edges deepest-first; first alive wins."""
    if isinstance(g, (CompleteGraph, PseudoCliqueGraph)):
        gen = _iter_candidates_interval(g, f, oracle, d_lo)
    else:
        gen = _iter_candidates_general(g, f, oracle, d_lo)
    peeked = 0
    for d, u, v in gen:
        if peeked >= cap:
            return None
        peeked += 1
        if oracle.peek(u, v):
            return u, v, d
    return None


def _back_edge_result(f, oracle, u, w, seed, diag) -> CycleResult:
    seq = np.array(f.path_up(w, u), dtype=np.int64)
    cus = np.append(seq[:-1], u)
    cvs = np.append(seq[1:], w)
    cert = make_certificate(cus, cvs, oracle.round_tag)
    return CycleResult(
        cycle=seq,
        tag="back-edge",
        certificate=cert,
        seed=seed,
        rounds={oracle.round_tag: oracle.p},
        diagnostics=diag,
    )


def select_vertical_path(
    f: RootedForest,
    cls: VertexClassification,
    X,
    eps: float,
    k: int,
    heights: np.ndarray | None = None,
):
    """Vertical path of length 4k from the smallest discovery-order vertex of
    height >= 4k whose max-height descent carries <= eps*k/4 vertices of
    X u Y (Y = non-skinny). None when no vertex qualifies."""
    n = f.n
    xy = np.zeros(n, dtype=bool)
    X = np.asarray(list(X) if not isinstance(X, np.ndarray) else X, dtype=np.int64)
    if len(X):
        xy[X] = True
    xy |= ~cls.skinny
    hs = heights_all(f) if heights is None else heights
    four_k = 4 * k
    quota = eps * k / 4.0
    for v in f.discovery_order.tolist():
        if hs[v] < four_k:
            continue
        path = [v]
        bad = int(xy[v])
        cur = v
        for _ in range(four_k):
            kids = f.children(cur).tolist()
            best, bh = -1, -1
            for ch in kids:
                h = hs[ch]
                if h > bh or (h == bh and ch < best):
                    best, bh = ch, h
            cur = best
            path.append(cur)
            bad += int(xy[cur])
            if bad > quota:
                break
        if len(path) == four_k + 1 and bad <= quota:
            return path
    return None


def zigzag_splice(P: list[int], splices: list[tuple[int, int]]) -> list[int]:
    """Assemble the alternating cycle from a vertical path and splice edges
    (v_i, u_{i+1}), each v_i sitting below u_i and each u_{i+1} above u_i.

    Rejects crossing or overlapping segments with the violating index pair.
    """
    if not splices:
        raise ZigzagError("no splice edges")
    pos = {v: i for i, v in enumerate(P)}
    j = len(splices)
    try:
        vi = [pos[v] for v, _ in splices]
        ui = [pos[u] for _, u in splices]
    except KeyError as exc:
        raise ZigzagError(f"splice endpoint {exc} not on path") from exc
    # interleaving chain, top to bottom:
    # u_{j+1} < u_j < v_j < u_{j-1} < v_{j-1} < ... < u_2 < v_2 < v_1
    chain = [ui[j - 1]]
    for t in range(j - 1, 0, -1):
        chain.append(ui[t - 1])
        chain.append(vi[t])
    chain.append(vi[0])
    for a in range(len(chain) - 1):
        if chain[a] >= chain[a + 1]:
            raise ZigzagError(
                f"segments cross or overlap at chain positions {a},{a + 1}",
                pair=(a, a + 1),
            )
    if j == 1:
        return [P[q] for q in range(ui[0], vi[0] + 1)]
    seq = [P[vi[0]]]
    # upward leg: odd splices, climbing P between them
    for t in range(1, j + 1, 2):
        seq.append(P[ui[t - 1]])
        if t + 2 <= j:
            seq.extend(P[q] for q in range(ui[t - 1] - 1, vi[t + 1] - 1, -1))
        elif t == j - 1:
            seq.extend(P[q] for q in range(ui[t - 1] - 1, ui[j - 1] - 1, -1))
        # t == j (odd j): the splice itself reaches the top
    # downward leg: even splices
    if j % 2 == 1:
        seq.extend(P[q] for q in range(ui[j - 1] + 1, ui[j - 2] + 1))
    ts = range(j, 1, -2) if j % 2 == 0 else range(j - 1, 1, -2)
    for t in ts:
        seq.append(P[vi[t - 1]])
        if t > 2:
            seq.extend(P[q] for q in range(vi[t - 1] + 1, ui[t - 3] + 1))
        else:
            seq.extend(P[q] for q in range(vi[t - 1] + 1, vi[0]))
    return seq


def _zigzag_construct(g, f, oracle, cls, v0_mask, P, eps, k, diag):
    """Windows V_i below anchors u_i, peeks over B(v) restricted to P.

    The first anchor u_1 sits k above P's bottom end (the P-vertex at height
    k measured within P), leaving k of P for the windows to descend into and
    3k above for the climb.
    """
    ln_k = max(math.log(k), 1.0)
    need_z = max(1, math.ceil(ln_k))
    lo_d = max(1, math.ceil(eps * k))
    hi_d = math.floor((1.0 - 5.0 * eps) * k)
    if hi_d < lo_d:
        diag["stage"] = "empty-back-window"
        return None
    p_arr = np.array(P, dtype=np.int64)
    z_mask = cls.free[p_arr] & cls.skinny[p_arr] & ~v0_mask[p_arr]
    u1_idx = max(0, len(P) - 1 - k)
    anchors = [u1_idx]
    splices: list[tuple[int, int]] = []
    v1_idx = None
    margins: list[int] = []
    cap_j = math.ceil(4.0 / eps)
    for step in range(1, cap_j + 1):
        a = anchors[-1]
        limit = anchors[-2] if len(anchors) >= 2 else len(P)
        zs = []
        w_idx = a + 1
        while w_idx < limit and len(zs) < need_z:
            if z_mask[w_idx]:
                zs.append(w_idx)
            w_idx += 1
        if len(zs) < need_z:
            diag["stage"] = "window-exhausted"
            diag["j"] = len(splices)
            return None
        if step == 2:
            margins.append(u1_idx - zs[-1])
        found = None
        for z_idx in zs:
            q_hi = min(z_idx - lo_d, a - 1)
            q_lo = max(z_idx - hi_d, 0)
            for q in range(q_lo, q_hi + 1):
                u_cand, z_v = P[q], P[z_idx]
                if not g.has_edge(u_cand, z_v) or oracle.is_tested(u_cand, z_v):
                    continue
                if oracle.peek(u_cand, z_v):
                    found = (z_idx, q)
                    break
            if found:
                break
        if not found:
            diag["stage"] = "window-no-edge"
            diag["j"] = len(splices)
            return None
        z_idx, q = found
        splices.append((P[z_idx], P[q]))
        anchors.append(q)
        if v1_idx is None:
            v1_idx = z_idx
        if v1_idx - q >= 2 * k:
            break
    else:
        diag["stage"] = "cap-exceeded"
        diag["j"] = len(splices)
        return None
    diag["j"] = len(splices)
    diag["v2_margin"] = margins[0] if margins else None
    try:
        seq = zigzag_splice(P, splices)
    except ZigzagError as exc:
        diag["stage"] = f"splice-rejected: {exc}"
        return None
    return seq


def find_long_cycle(
    g: GraphView,
    k: int,
    c: float,
    seed: int,
    eps: float | None = None,
    oracle: PercolationOracle | None = None,
    dfs_run=None,
) -> CycleResult:
    """DFS, then back-edge closure or zig-zag assembly; soft failures carry
    the stage reached in diagnostics."""
    p = min(1.0, c / k)
    if eps is None:
        eps = c ** (-1.0 / 5.0) if c > 0 else 1.0
    if oracle is None:
        oracle = PercolationOracle(p, seed, round_tag=0, graph=g)
    if dfs_run is None:
        f, trace = run_dfs(g, oracle, record_trace=False)
    else:
        f, trace = dfs_run
    n = g.n
    diag: dict = {
        "eps": eps,
        "k": k,
        "c": c,
        "p": p,
        "n": n,
        "queries": trace.n_queries,
    }
    d_lo = max(1, math.ceil((1.0 - 5.0 * eps) * k))
    ln_k = max(math.log(k), 1.0)
    cap = max(2000, min(int(200 / p) if p > 0 else 2000, 500_000))

    interval_like = isinstance(g, (CompleteGraph, PseudoCliqueGraph))
    if interval_like:
        cnt = _long_counts_interval(g, f, oracle, d_lo)
    else:
        pairs = _long_pairs_general(g, f, oracle, d_lo)
        cnt = np.bincount(pairs[0], minlength=n) + np.bincount(
            pairs[1], minlength=n
        )
    qualifying = cnt >= eps * k
    n_qual = int(qualifying.sum())
    if interval_like and n_qual <= 2 * ln_k and n <= _DESK_N:
        # ancestor side alone was inconclusive: add the exact descendant
        # side (an O(n log n) sweep) before deciding the case split
        from .forest import desc_within_batch

        host_desc = (f.subtree_size - 1) - desc_within_batch(f, d_lo - 1)
        da = g.deleted_arrays()
        if da is not None:
            offs, tgts = da
            src = np.repeat(np.arange(n, dtype=np.int64), np.diff(offs))
            keep = src < tgts
            anc, desc = _vertical_split(f, src[keep], tgts[keep].astype(np.int64))
            long = (f.depth[desc] - f.depth[anc]) >= d_lo
            host_desc -= np.bincount(anc[long], minlength=n)
        tu, tv = _tested_uv(oracle)
        anc, desc = _vertical_split(f, tu, tv)
        long = (f.depth[desc] - f.depth[anc]) >= d_lo
        host_desc -= np.bincount(anc[long], minlength=n)
        cnt = cnt + np.clip(host_desc, 0, None)
        qualifying = cnt >= eps * k
        n_qual = int(qualifying.sum())
    diag["n_qualifying"] = n_qual
    diag["d_lo"] = d_lo

    if n_qual > 2 * ln_k:
        diag["case"] = "back-edge"
        hit = _peek_back_edge(g, f, oracle, d_lo, cap)
        if hit is not None:
            u, w, d = hit
            diag["closing_distance"] = d
            return _back_edge_result(f, oracle, u, w, seed, diag)
        diag["stage"] = "back-edge-no-alive"
    else:
        diag["case"] = "zig-zag"
        v0_mask = qualifying
        cls = classify(f, oracle, g, eps, k)
        x_mask = v0_mask | ~cls.free
        diag["n_down"] = int((~cls.up).sum())
        diag["n_non_free"] = int((~cls.free).sum())
        diag["n_non_skinny"] = int((~cls.skinny).sum())
        diag["down_cap_5eps4n"] = 5.0 * eps**4 * n
        heights = heights_all(f)
        P = select_vertical_path(
            f, cls, np.flatnonzero(x_mask), eps, k, heights=heights
        )
        if P is None:
            diag["stage"] = "no-vertical-path"
        else:
            seq = _zigzag_construct(g, f, oracle, cls, v0_mask, P, eps, k, diag)
            if seq is not None:
                arr = np.array(seq, dtype=np.int64)
                cert = make_certificate(arr, np.roll(arr, -1), oracle.round_tag)
                return CycleResult(
                    cycle=arr,
                    tag="zig-zag",
                    certificate=cert,
                    seed=seed,
                    rounds={oracle.round_tag: oracle.p},
                    diagnostics=diag,
                )

    # degenerate guard: any-distance untested vertical edge, deepest first
    hit = _peek_back_edge(g, f, oracle, 2, min(cap, 20_000))
    if hit is not None:
        u, w, d = hit
        diag["closing_distance"] = d
        diag["guard"] = True
        return _back_edge_result(f, oracle, u, w, seed, diag)
    diag.setdefault("stage", "no-alive-back-edge")
    return CycleResult(
        tag="failed",
        seed=seed,
        rounds={oracle.round_tag: oracle.p},
        diagnostics=diag,
    )
