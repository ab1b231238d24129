"""Constructive long-path procedures.

path_from_set: priority-root DFS stopped at |R u S| = (1-eps)k, returning the
live stack as a certified path that starts inside the priority set.

bipartite_long_path: full DFS keeping the deepest stack snapshot, extended
greedily through the forest below and by peeked alive edges at both ends.

find_long_path: the three-round sprinkling construction: a dense-set
shortcut, a round-1 cycle, and case-split extensions through the sets A/B,
spliced into one certified path.
"""

from __future__ import annotations

import math

import numpy as np

from .cycles import find_long_cycle
from .dfs import RootPolicy, StopCondition, run_dfs
from .forest import heights_all
from .graphs import (
    CompleteGraph,
    ExplicitGraph,
    GraphView,
    PseudoCliqueGraph,
    cached_explicit,
    induced_subgraph,
    min_degree,
)
from .oracle import PercolationOracle
from .results import PathResult, cert_concat, empty_certificate, make_certificate

__all__ = ["path_from_set", "bipartite_long_path", "find_long_path"]


def _tree_cert(seq, tag):
    seq = np.asarray(seq, dtype=np.int64)
    if len(seq) < 2:
        return empty_certificate()
    return make_certificate(seq[:-1], seq[1:], tag)


def path_from_set(
    g: GraphView,
    oracle: PercolationOracle,
    v0,
    c: float,
    k: int,
    eps: float | None = None,
) -> PathResult:
    """Priority-root DFS stopped at |R u S| = ceil((1-eps)k); the stack is the
    path. eps defaults to c^(-1/2)."""
    if eps is None:
        eps = c ** (-0.5) if c > 0 else 1.0
    v0 = np.unique(np.asarray(list(v0), dtype=np.int64))
    t = max(2, math.ceil((1.0 - eps) * k))
    seed = oracle.seed
    rounds = {oracle.round_tag: oracle.p}
    diag = {"eps": eps, "t": t, "k": k, "c": c}
    f, trace = run_dfs(
        g,
        oracle,
        policy=RootPolicy.priority(v0),
        stop=StopCondition.reached_size(t),
        record_trace=False,
    )
    ln_k = max(math.log(max(k, 2)), 1.0)
    diag["event_a"] = bool(trace.last_root_round > 0.5 * ln_k)
    if not (trace.stopped and trace.stop_reason == "reached-size"):
        diag["stage"] = "threshold-unreached"
        return PathResult(tag="failed", seed=seed, rounds=rounds, diagnostics=diag)
    stack = list(trace.stop_stack)
    diag["reached_size"] = t
    diag["stack_len"] = len(stack)
    diag["start_in_v0"] = bool(len(stack) and stack[0] in set(v0.tolist()))
    if len(stack) < 2:
        diag["stage"] = "degenerate-stack"
        return PathResult(tag="failed", seed=seed, rounds=rounds, diagnostics=diag)
    path = np.array(stack, dtype=np.int64)
    return PathResult(
        path=path,
        tag="stack-path",
        certificate=_tree_cert(path, oracle.round_tag),
        seed=seed,
        rounds=rounds,
        diagnostics=diag,
    )


def _descend_deepest(f, start, used):
    """Tree-edge extension below `start` following maximum-height children."""
    hs = heights_all(f)
    out = []
    cur = start
    while True:
        best, bh = -1, -1
        for ch in f.children(cur).tolist():
            if used[ch]:
                continue
            h = hs[ch]
            if h > bh or (h == bh and ch < best):
                best, bh = ch, h
        if best < 0:
            return out
        out.append(best)
        used[best] = True
        cur = best


def _peek_extend(g, oracles, endpoint, used, max_steps=None):
    """Greedy alive-edge extension: peek untested host edges at the moving
    endpoint, over the given oracles in order; first alive wins each step."""
    ext = []
    cert_u, cert_v, cert_t = [], [], []
    steps = 0
    max_steps = max_steps if max_steps is not None else g.n
    while steps < max_steps:
        nb = g.neighbors(endpoint)
        nb = nb[~used[nb]]
        hit = -1
        hit_tag = -1
        for o in oracles:
            if len(nb) == 0:
                break
            fresh = nb[~o.tested_many(endpoint, nb)]
            if len(fresh) == 0:
                continue
            alive = o.alive_many(endpoint, fresh)
            idx = np.flatnonzero(alive)
            upto = (int(idx[0]) + 1) if len(idx) else len(fresh)
            for w in fresh[:upto].tolist():  # reveal-and-consume the prefix
                o.peek(endpoint, int(w))
            if len(idx):
                hit = int(fresh[int(idx[0])])
                hit_tag = o.round_tag
                break
        if hit < 0:
            return ext, (cert_u, cert_v, cert_t)
        cert_u.append(endpoint)
        cert_v.append(hit)
        cert_t.append(hit_tag)
        ext.append(hit)
        used[hit] = True
        endpoint = hit
        steps += 1
    return ext, (cert_u, cert_v, cert_t)


def bipartite_long_path(
    g: GraphView, oracle: PercolationOracle, c: float, k: int
) -> PathResult:
    """DFS path extraction on a bipartite host: the deepest stack snapshot,
    plus a max-height tree descent at the bottom and peeked alive-edge
    extensions at both ends. Returns the best found (possibly length 0)."""
    seed = oracle.seed
    rounds = {oracle.round_tag: oracle.p}
    f, trace = run_dfs(g, oracle, record_trace=False)
    diag = {"k": k, "c": c, "max_stack": trace.max_stack_size}
    if trace.max_stack_top < 0:
        return PathResult(tag="failed", seed=seed, rounds=rounds, diagnostics=diag)
    top = int(trace.max_stack_top)
    seq = f.path_up(top, int(f.root[top]))[::-1]  # root .. top
    used = np.zeros(g.n, dtype=bool)
    used[np.asarray(seq, dtype=np.int64)] = True
    below = _descend_deepest(f, top, used)
    seq = seq + below
    cert = _tree_cert(seq, oracle.round_tag)
    ext_tail, (cu, cv, ct) = _peek_extend(g, [oracle], seq[-1], used)
    seq = seq + ext_tail
    ext_head, (hu, hv, ht) = _peek_extend(g, [oracle], seq[0], used)
    seq = ext_head[::-1] + seq
    if cu or hu:
        cert = cert_concat(
            cert,
            make_certificate(np.array(cu + hu), np.array(cv + hv), np.array(ct + ht)),
        )
    diag["extended"] = len(ext_tail) + len(ext_head)
    return PathResult(
        path=np.array(seq, dtype=np.int64),
        tag="bipartite",
        certificate=cert,
        seed=seed,
        rounds=rounds,
        diagnostics=diag,
    )


# ── find_long_path: three-round sprinkling ──────────────────────────────────


def _count_into(g: GraphView, mask: np.ndarray) -> np.ndarray:
    """Per-vertex count of host neighbors inside the masked set."""
    if isinstance(g, (CompleteGraph, PseudoCliqueGraph)):
        total = int(mask.sum())
        cnt = np.full(g.n, total, dtype=np.int64) - mask.astype(np.int64)
        da = g.deleted_arrays()
        if da is not None:
            offs, tgts = da
            src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(offs))
            cnt -= np.bincount(src[mask[tgts]], minlength=g.n)
        return cnt
    ex = cached_explicit(g)
    src = np.repeat(np.arange(ex.n, dtype=np.int64), np.diff(ex.offsets))
    return np.bincount(src[mask[ex.targets]], minlength=g.n)


def _peel_dense_set(g: GraphView, deg_thresh: float) -> np.ndarray:
    """Iteratively remove vertices with in-set host degree < deg_thresh."""
    alive = np.ones(g.n, dtype=bool)
    while True:
        cnt = _count_into(g, alive)
        bad = alive & (cnt < deg_thresh)
        if not bad.any():
            return alive
        alive &= ~bad
        if not alive.any():
            return alive


def _open_cycle_to_path(g, cyc_res, extra_oracles, seed, rounds, tag, diag):
    """Drop the cycle's closing edge, then extend both endpoints greedily."""
    seq = [int(v) for v in cyc_res.cycle]
    used = np.zeros(g.n, dtype=bool)
    used[np.asarray(seq, dtype=np.int64)] = True
    cert = cyc_res.certificate
    cap = 4 * len(seq) + 16
    ext_tail, (cu, cv, ct) = _peek_extend(g, extra_oracles, seq[-1], used, cap)
    seq = seq + ext_tail
    ext_head, (hu, hv, ht) = _peek_extend(g, extra_oracles, seq[0], used, cap)
    seq = ext_head[::-1] + seq
    if cu or hu:
        cert = cert_concat(
            cert,
            make_certificate(np.array(cu + hu), np.array(cv + hv), np.array(ct + ht)),
        )
    diag["opened_from_cycle"] = cyc_res.length
    diag["extended"] = len(ext_tail) + len(ext_head)
    return PathResult(
        path=np.array(seq, dtype=np.int64),
        tag=tag,
        certificate=cert,
        seed=seed,
        rounds=rounds,
        diagnostics=diag,
    )


def _subgraph_cycle_route(g, vertices, p_eff, seed, round_tag, extra_oracles,
                          rounds, tag, diag):
    """find_long_cycle on g[vertices] with probability p_eff, mapped back."""
    vs = np.unique(np.asarray(vertices, dtype=np.int64))
    identity = len(vs) == g.n
    if identity:
        sub, mapping = g, np.arange(g.n, dtype=np.int64)
    else:
        sub, mapping = induced_subgraph(g, vs)
    k_sub = min_degree(sub)
    if k_sub < 1:
        diag["stage"] = diag.get("stage", "") + ";subgraph-min-degree-0"
        return None
    c_sub = p_eff * k_sub
    oracle = PercolationOracle(
        p_eff, seed, round_tag=round_tag, graph=sub,
        relabel=None if identity else mapping,
    )
    cyc = find_long_cycle(sub, k_sub, c_sub, seed, oracle=oracle)
    diag["subcycle"] = {"n_sub": sub.n, "k_sub": k_sub, "tag": cyc.tag,
                        "length": cyc.length, "stage": cyc.diagnostics.get("stage")}
    if not cyc.found:
        return None
    if not identity:
        cyc.cycle = mapping[cyc.cycle]
        cu, cv, ct = cyc.certificate
        cyc.certificate = (mapping[cu], mapping[cv], ct)
    # extend with this round's own untested edges too (host-id oracle)
    if identity:
        own = oracle
    else:
        own = PercolationOracle(p_eff, seed, round_tag=round_tag, graph=g)
    return _open_cycle_to_path(
        g, cyc, [own] + list(extra_oracles), seed, rounds, tag, diag
    )


def _rotate_cycle_to(c_list, x):
    """C reordered to end at x (the path form keeps |C|-1 edges)."""
    i = c_list.index(x)
    return c_list[i + 1 :] + c_list[: i + 1]


def _cycle_path_cert(c_list, x, tag):
    arr = np.asarray(_rotate_cycle_to(c_list, x), dtype=np.int64)
    return make_certificate(arr[:-1], arr[1:], tag)


def _path_from_set_on_b(g, b_ids, s_hosts, o3, diag):
    """Priority-set stack path inside g[B] on sprinkle round 3, mapped back
    to host ids."""
    if len(b_ids) < 2 or len(s_hosts) == 0:
        diag["b_stage"] = "B-degenerate"
        return None
    sub, mapping = induced_subgraph(g, b_ids)
    k_b = min_degree(sub)
    if k_b < 1:
        diag["b_stage"] = "B-min-degree-0"
        return None
    inv = {int(h): i for i, h in enumerate(mapping.tolist())}
    v0_local = [inv[int(s)] for s in s_hosts if int(s) in inv]
    if not v0_local:
        return None
    o3b = PercolationOracle(o3.p, o3.seed, round_tag=o3.round_tag,
                            graph=sub, relabel=mapping)
    res = path_from_set(sub, o3b, v0_local, o3.p * k_b, k_b)
    diag["b_path"] = {"tag": res.tag, "length": res.length, "k_b": k_b,
                      "start_in_v0": res.diagnostics.get("start_in_v0")}
    if not res.found:
        return None
    res.path = mapping[res.path]
    cu, cv, ct = res.certificate
    res.certificate = (mapping[cu], mapping[cv], ct)
    return res


def _bipartite_host(g, left, right):
    """Host edges between two disjoint vertex sets as an explicit bipartite
    graph: locals [0..L) = left, [L..L+R) = right; returns (graph, mapping)."""
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    mapping = np.concatenate([left, right])
    in_right = np.zeros(g.n, dtype=bool)
    in_right[right] = True
    r_local = np.full(g.n, -1, dtype=np.int64)
    r_local[right] = np.arange(len(right)) + len(left)
    us, vs = [], []
    for i, a in enumerate(left.tolist()):
        nb = g.neighbors(a)
        nb = nb[in_right[nb]]
        if len(nb):
            us.append(np.full(len(nb), i, dtype=np.int64))
            vs.append(r_local[nb])
    n_total = len(left) + len(right)
    if us:
        sub = ExplicitGraph.from_arrays(
            np.concatenate(us), np.concatenate(vs), n_total
        )
    else:
        sub = ExplicitGraph(
            np.zeros(n_total + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
        )
    return sub, mapping


def find_long_path(
    g: GraphView, k: int, c: float, seed: int, eps: float | None = None
) -> PathResult:
    """Certified path of target length k via the dense-set shortcut or
    three-round sprinkling; falls back to the best certified path found,
    recording the deepest stage reached."""
    lk = max(math.log(max(k, 2)), 1.0)
    if eps is None:
        eps = 5.0 * (c / 3.0) ** (-0.2) if c > 0 else 5.0
    p_full = min(1.0, c / k)
    c_eff = min(c, 3.0 * k)
    p_i = c_eff / (3.0 * k)
    rounds = {0: p_full, 1: p_i, 2: p_i, 3: p_i}
    diag: dict = {"eps": eps, "k": k, "c": c, "p": p_full, "stages": []}
    best: PathResult | None = None

    def challenge(cand):
        nonlocal best
        if cand is not None and cand.found and (
            best is None or cand.length > best.length
        ):
            best = cand

    # stage 0: dense-set shortcut
    diag["stages"].append("dense-set")
    deg_thresh = (1.0 - 2.0 / lk) * k
    alive = _peel_dense_set(g, deg_thresh)
    size = int(alive.sum())
    diag["dense_set_size"] = size
    if (1.0 - 1.0 / lk) * k <= size <= (1.0 + 10.0 * eps) * k:
        res = _subgraph_cycle_route(
            g, np.flatnonzero(alive), p_full, seed, 0, [], rounds,
            "pseudo-clique-route", dict(diag),
        )
        challenge(res)
        if res is not None and res.length >= k:
            return res

    # stage 1: sprinkle round 1 -> cycle C
    diag["stages"].append("round1-cycle")
    o1 = PercolationOracle(p_i, seed, round_tag=1, graph=g)
    o2 = PercolationOracle(p_i, seed, round_tag=2, graph=g)
    o3 = PercolationOracle(p_i, seed, round_tag=3, graph=g)
    cyc = find_long_cycle(g, k, c_eff / 3.0, seed, oracle=o1)
    diag["round1"] = {"tag": cyc.tag, "length": cyc.length,
                      "stage": cyc.diagnostics.get("stage")}
    if not cyc.found:
        f1, t1 = run_dfs(
            g, PercolationOracle(p_i, seed, round_tag=1, graph=g),
            record_trace=False,
        )
        if t1.max_stack_top >= 0:
            seq = f1.path_up(int(t1.max_stack_top), int(f1.root[t1.max_stack_top]))
            seq = seq[::-1]
            challenge(
                PathResult(
                    path=np.array(seq, dtype=np.int64),
                    tag="stack-path",
                    certificate=_tree_cert(seq, 1),
                    seed=seed,
                    rounds=rounds,
                    diagnostics={**diag, "stage": "round1-cycle-failed"},
                )
            )
        if best is not None:
            return best
        return PathResult(tag="failed", seed=seed, rounds=rounds,
                          diagnostics={**diag, "stage": "round1-cycle-failed"})
    cyc.rounds = dict(rounds)
    opened = _open_cycle_to_path(
        g, cyc, [o2, o3], seed, rounds, "sprinkle-case1", dict(diag)
    )
    challenge(opened)
    if opened.length >= k:
        return opened

    c_list = [int(v) for v in cyc.cycle]
    c_mask = np.zeros(g.n, dtype=bool)
    c_mask[np.asarray(c_list, dtype=np.int64)] = True

    # stage 2: classify A (heavy attachment to C) and B
    diag["stages"].append("classify-AB")
    into_c = _count_into(g, c_mask)
    a_mask = (~c_mask) & (into_c >= (1.0 - 20.0 * eps) * k)
    b_mask = (~c_mask) & (~a_mask)
    n_a = int(a_mask.sum())
    diag["A"], diag["B"], diag["C"] = n_a, int(b_mask.sum()), len(c_list)
    if n_a + len(c_list) < k - 5 * lk:
        diag["ac_small_contrapositive"] = True

    if n_a <= 10.0 * eps * k:
        res = _case_small_a(
            g, k, eps, seed, rounds, c_list, c_mask, a_mask, b_mask, o2, o3, diag
        )
    else:
        res = _case_large_a(
            g, k, eps, seed, rounds, c_list, c_mask, a_mask, o2, o3, diag
        )
    challenge(res)
    if best is not None:
        return best
    return PathResult(tag="failed", seed=seed, rounds=rounds,
                      diagnostics={**diag, "stage": "all-stages-exhausted"})


def _case_small_a(g, k, eps, seed, rounds, c_list, c_mask, a_mask, b_mask,
                  o2, o3, diag):
    lk = max(math.log(max(k, 2)), 1.0)
    n = g.n
    b_ids = np.flatnonzero(b_mask)
    c_arr = np.asarray(c_list, dtype=np.int64)
    c_pos = np.full(n, -1, dtype=np.int64)
    c_pos[c_arr] = np.arange(len(c_arr))
    # host edges joining C and B, ordered by (B vertex, C position)
    cb_b, cb_c = [], []
    if len(b_ids):
        if isinstance(g, (CompleteGraph, PseudoCliqueGraph)):
            for b in b_ids.tolist():
                nb = g.neighbors(b)
                cs = nb[c_mask[nb]]
                cs = cs[np.argsort(c_pos[cs], kind="stable")]
                cb_b.append(np.full(len(cs), b, dtype=np.int64))
                cb_c.append(cs)
        else:
            ex = cached_explicit(g)
            src = np.repeat(np.arange(n, dtype=np.int64), np.diff(ex.offsets))
            sel = b_mask[src] & c_mask[ex.targets]
            order = np.lexsort((c_pos[ex.targets[sel]], src[sel]))
            cb_b = [src[sel][order]]
            cb_c = [ex.targets[sel][order]]
    eb = np.concatenate(cb_b) if cb_b else np.empty(0, dtype=np.int64)
    ec = np.concatenate(cb_c) if cb_c else np.empty(0, dtype=np.int64)
    diag["cb_edges"] = len(eb)

    if len(eb) >= 4 * k * lk:
        # windows E_i = edge slices [(2i-2)k, (2i-1)k), revealed on round 2
        diag["stages"].append("case3a-windows")
        need = math.ceil(lk)
        s_pairs = []
        max_i = math.ceil(2 * lk)
        for i in range(1, max_i + 1):
            lo, hi = (2 * i - 2) * k, (2 * i - 1) * k
            if hi > len(eb):
                break
            for j in range(lo, hi):
                b, x = int(eb[j]), int(ec[j])
                if o2.peek(b, x):
                    s_pairs.append((b, x))
                    break
        diag["windows_hit"] = len(s_pairs)
        if len(s_pairs) >= need:
            attach = dict(s_pairs)
            res = _path_from_set_on_b(g, b_ids, [b for b, _ in s_pairs], o3, diag)
            if res is not None and int(res.start) in attach:
                x = attach[int(res.start)]
                seq = _rotate_cycle_to(c_list, x) + [int(v) for v in res.path]
                cert = cert_concat(
                    _cycle_path_cert(c_list, x, 1),
                    make_certificate([x], [int(res.start)], o2.round_tag),
                    res.certificate,
                )
                return PathResult(
                    path=np.array(seq, dtype=np.int64),
                    tag="sprinkle-case2",
                    certificate=cert,
                    seed=seed,
                    rounds=rounds,
                    diagnostics={**diag, "route": "windows"},
                )
            if res is not None:
                return res  # best-effort: B-path without a splice
        diag["stages"].append("case3a-windows-failed")

    # A'-escape: members of A with many B-neighbors, linked through round 2
    into_b = _count_into(g, b_mask)
    a_ids = np.flatnonzero(a_mask)
    a_prime = a_ids[into_b[a_ids] >= k ** (2.0 / 3.0)]
    diag["a_prime"] = len(a_prime)
    if len(a_prime) >= math.sqrt(k):
        diag["stages"].append("case3a-escape")
        a_dd = []
        tried = 0
        for a in a_prime.tolist():
            nb = g.neighbors(a)
            cs = nb[c_mask[nb]]
            tried += 1
            for x in cs.tolist():
                if o2.peek(a, int(x)):
                    a_dd.append((a, int(x)))
                    break
            if len(a_dd) >= max(2 * math.ceil(lk), 16):
                break
        diag["a_dd"] = len(a_dd)
        diag["a_attach_rate"] = len(a_dd) / max(tried, 1)
        if a_dd:
            in_add = {a for a, _ in a_dd}
            attach_c = dict(a_dd)
            s_pairs = []
            for b in b_ids.tolist():
                nb = g.neighbors(b)
                cand = [int(a) for a in nb.tolist() if a in in_add]
                for a in cand:
                    if o2.peek(b, a):
                        s_pairs.append((b, a))
                        break
                if len(s_pairs) >= math.ceil(lk):
                    break
            diag["escape_s"] = len(s_pairs)
            if len(s_pairs) >= math.ceil(lk):
                attach_a = dict(s_pairs)
                res = _path_from_set_on_b(
                    g, b_ids, [b for b, _ in s_pairs], o3, diag
                )
                if res is not None and int(res.start) in attach_a:
                    a = attach_a[int(res.start)]
                    x = attach_c[a]
                    seq = (
                        _rotate_cycle_to(c_list, x)
                        + [a]
                        + [int(v) for v in res.path]
                    )
                    cert = cert_concat(
                        _cycle_path_cert(c_list, x, 1),
                        make_certificate([x, a], [a, int(res.start)], o2.round_tag),
                        res.certificate,
                    )
                    return PathResult(
                        path=np.array(seq, dtype=np.int64),
                        tag="sprinkle-case2",
                        certificate=cert,
                        seed=seed,
                        rounds=rounds,
                        diagnostics={**diag, "route": "a-prime-escape"},
                    )
        diag["stages"].append("case3a-escape-failed")

    # dense-Z route: A u C minus vertices with many B-neighbors
    diag["stages"].append("case3a-denseZ")
    z_mask = (a_mask | c_mask) & (into_b < k ** (2.0 / 3.0))
    if int(z_mask.sum()) >= 3:
        res = _subgraph_cycle_route(
            g, np.flatnonzero(z_mask), o2.p, seed, o2.round_tag, [o3],
            rounds, "pseudo-clique-route", diag,
        )
        if res is not None:
            return res
    diag["stages"].append("case3a-denseZ-failed")
    return None


def _case_large_a(g, k, eps, seed, rounds, c_list, c_mask, a_mask, o2, o3, diag):
    diag["stages"].append("case4-bipartite")
    n = g.n
    m_c = len(c_list)
    a1 = np.flatnonzero(a_mask)[: math.ceil(10.0 * eps * k)]
    seg_len = max(2, math.ceil(10.0 * eps * k))
    n_seg = max(1, m_c // seg_len)
    bounds = [(q * m_c) // n_seg for q in range(n_seg + 1)]
    a1_mask = np.zeros(n, dtype=bool)
    a1_mask[a1] = True
    into_a1 = _count_into(g, a1_mask)
    c_arr = np.asarray(c_list, dtype=np.int64)
    seg_scores = [
        int(into_a1[c_arr[bounds[q] : bounds[q + 1]]].sum()) for q in range(n_seg)
    ]
    q_best = int(np.argmax(seg_scores))
    s1 = c_arr[bounds[q_best] : bounds[q_best + 1]]
    ek = math.ceil(eps * k)
    if len(s1) <= 2 * ek + 2:
        diag["stages"].append("case4-segment-too-short")
        return None
    l_side = s1[:ek]
    r_side = s1[-ek:]
    mid = s1[ek:-ek]
    s1_mask = np.zeros(n, dtype=bool)
    s1_mask[s1] = True
    into_s1 = _count_into(g, s1_mask)
    comp_a = len(s1) - into_s1[a1]  # bipartite-complement degrees
    comp_mid = len(a1) - into_a1[mid]
    thresh = 100.0 * eps**1.5 * k
    a_keep = a1[comp_a < thresh]
    mid_keep = mid[comp_mid < thresh]
    m_side = min(len(a_keep), len(mid_keep))
    diag["h2_side"] = m_side
    if m_side < 2:
        diag["stages"].append("case4-empty-H2")
        return None
    a_keep = a_keep[:m_side]  # balance: keep the lowest ids
    mid_keep = mid_keep[:m_side]
    sub, mapping = _bipartite_host(g, a_keep, mid_keep)
    o2b = PercolationOracle(o2.p, o2.seed, round_tag=o2.round_tag,
                            graph=sub, relabel=mapping)
    k_h = max(min_degree(sub), 1)
    res = bipartite_long_path(sub, o2b, o2.p * k_h, k_h)
    diag["h2_path_len"] = res.length
    diag["h2_target"] = 15.0 * eps * k
    if not res.found or res.length < 2:
        diag["stages"].append("case4-no-bipartite-path")
        return None
    p_host = mapping[res.path]
    a_set = set(a_keep.tolist())
    p1 = [int(v) for v in p_host[: ek + 1] if int(v) in a_set]
    p2 = [int(v) for v in p_host[-(ek + 1):] if int(v) in a_set]
    e1 = e2 = None
    for l in l_side.tolist():
        for a in p1:
            if g.has_edge(l, a) and o3.peek(int(l), int(a)):
                e1 = (int(l), int(a))
                break
        if e1:
            break
    for r in r_side.tolist()[::-1]:
        for a in p2:
            if e1 and a == e1[1]:
                continue
            if g.has_edge(r, a) and o3.peek(int(r), int(a)):
                e2 = (int(r), int(a))
                break
        if e2:
            break
    diag["e1"], diag["e2"] = e1, e2
    if not (e1 and e2):
        diag["stages"].append("case4-no-splice-edges")
        return None
    # opened cycle: C-arc from e1's L-end backwards around C (avoiding S1's
    # interior) to e2's R-end, then e2, then the H'' path from e2's A1-end
    # back to e1's A1-end
    pos = {int(v): i for i, v in enumerate(c_list)}
    pl, pr = pos[e1[0]], pos[e2[0]]
    arc = []
    t = pl
    while True:
        arc.append(c_list[t])
        if t == pr:
            break
        t = (t - 1) % m_c
    hp = [int(v) for v in p_host.tolist()]
    i1, i2 = hp.index(e1[1]), hp.index(e2[1])
    pseg = hp[i2 : i1 + 1] if i2 <= i1 else hp[i1 : i2 + 1][::-1]  # a2 .. a1
    seq = arc + pseg
    if len(set(seq)) != len(seq):
        diag["stages"].append("case4-overlap")
        return None
    arc_arr = np.asarray(arc, dtype=np.int64)
    cu, cv, ct = res.certificate
    cert = cert_concat(
        make_certificate(arc_arr[:-1], arc_arr[1:], 1),
        make_certificate([e2[0], e1[0]], [e2[1], e1[1]], o3.round_tag),
        (mapping[cu], mapping[cv], ct),
    )
    return PathResult(
        path=np.array(seq, dtype=np.int64),
        tag="sprinkle-case3",
        certificate=cert,
        seed=seed,
        rounds=rounds,
        diagnostics=diag,
    )
