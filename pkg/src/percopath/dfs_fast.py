"""Optional numba-compiled DFS kernel for untraced runs.

Produces bit-identical forests, tested sets and counters to the numpy path
in dfs.run_dfs (same ascending candidate order, same per-edge outcomes), at
roughly two orders of magnitude lower per-query cost. Used automatically for
record_trace=False runs when numba imports; disable with PERCOPATH_NO_NUMBA=1.
"""

from __future__ import annotations

import os

import numpy as np

HAVE_NUMBA = False
if not os.environ.get("PERCOPATH_NO_NUMBA"):
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        pass

if not HAVE_NUMBA:  # pragma: no cover
    def njit(*a, **k):
        def wrap(f):
            return f

        return wrap(a[0]) if a and callable(a[0]) else wrap


_U = np.uint64
_GOLDEN = _U(0x9E3779B97F4A7C15)
_M1 = _U(0xBF58476D1CE4E5B9)
_M2 = _U(0x94D049BB133111EB)
_S30, _S27, _S31, _S32 = _U(30), _U(27), _U(31), _U(32)

# state vector slots
_SLEN, _SDISC, _SROOT, _SPRIO, _SQ, _SPOS, _SPOPS, _SROOTS, _SBUF = range(9)
_SSTOP_SIZE, _SSTOP_BUDGET, _SMODE = 9, 10, 11
_SMAXS, _SMAXTOP, _SLASTROOT = 12, 13, 14
_NSTATE = 15

DONE, BUF_FULL, STOP_SIZE, STOP_BUDGET = 0, 1, 2, 3


@njit(cache=True)
def _find(nxt, i):
    j = i
    while nxt[j] != j:
        nxt[j] = nxt[nxt[j]]
        j = nxt[j]
    return j


@njit(cache=True)
def _alive(salt, thr, thr_mode, u, v):
    if thr_mode == 1:
        return True
    if thr_mode == 2:
        return False
    if u < v:
        key = (_U(u) << _S32) | _U(v)
    else:
        key = (_U(v) << _S32) | _U(u)
    x = salt ^ key
    x = x + _GOLDEN
    x = (x ^ (x >> _S30)) * _M1
    x = (x ^ (x >> _S27)) * _M2
    x = x ^ (x >> _S31)
    return x < thr


@njit(cache=True)
def _pack(u, v):
    if u < v:
        return (_U(u) << _S32) | _U(v)
    return (_U(v) << _S32) | _U(u)


@njit(cache=True)
def _dfs_kernel(state, nxt, in_u, cursor, stack, parent, depth, root_of,
                e_in, e_out, disc_seq, lo_arr, hi_arr, adj_off, adj_tgt,
                del_off, del_tgt, prio, tested, tested_inc, relab,
                salt, thr, thr_mode):
    n = in_u.shape[0]
    cap = tested.shape[0]
    has_del = del_off.shape[0] > 1
    mode = state[_SMODE]
    while True:
        if state[_SLEN] == 0:
            v = np.int64(-1)
            while state[_SPRIO] < prio.shape[0]:
                cand = prio[state[_SPRIO]]
                if in_u[cand]:
                    v = cand
                    break
                state[_SPRIO] += 1
            if v < 0:
                r = _find(nxt, state[_SROOT])
                if r >= n:
                    return DONE
                state[_SROOT] = r
                v = r
            state[_SLASTROOT] = state[_SDISC] + state[_SPOPS]
            parent[v] = -1
            depth[v] = 0
            root_of[v] = v
            e_in[v] = state[_SDISC]
            disc_seq[state[_SDISC]] = v
            state[_SDISC] += 1
            in_u[v] = False
            nxt[v] = v + 1
            stack[state[_SLEN]] = v
            state[_SLEN] += 1
            if state[_SLEN] > state[_SMAXS]:
                state[_SMAXS] = state[_SLEN]
                state[_SMAXTOP] = v
            state[_SROOTS] += 1
            if state[_SSTOP_SIZE] >= 0 and state[_SDISC] == state[_SSTOP_SIZE]:
                return STOP_SIZE
            continue

        v = stack[state[_SLEN] - 1]
        pushed = np.int64(-1)
        if mode == 0:
            lo = lo_arr[v]
            hi = hi_arr[v]
            cur = cursor[v]
            if cur < lo:
                cur = lo
            x = _find(nxt, cur)
            while x <= hi:
                ok = True
                if has_del:
                    dl = del_off[v]
                    dh = del_off[v + 1]
                    while dl < dh:
                        mid = (dl + dh) // 2
                        if del_tgt[mid] < x:
                            dl = mid + 1
                        else:
                            dh = mid
                    if dl < del_off[v + 1] and del_tgt[dl] == x:
                        ok = False
                if ok:
                    if state[_SSTOP_BUDGET] >= 0 and state[_SQ] >= state[_SSTOP_BUDGET]:
                        cursor[v] = x
                        return STOP_BUDGET
                    alive = _alive(salt, thr, thr_mode, relab[v], relab[x])
                    tested[state[_SBUF]] = _pack(relab[v], relab[x])
                    state[_SBUF] += 1
                    state[_SQ] += 1
                    tested_inc[v] += 1
                    tested_inc[x] += 1
                    if alive:
                        state[_SPOS] += 1
                        pushed = x
                        cursor[v] = x + 1
                        break
                    if state[_SBUF] == cap:
                        cursor[v] = x + 1
                        return BUF_FULL
                x = _find(nxt, x + 1)
            if pushed < 0:
                cursor[v] = hi + 1
        else:
            beg = adj_off[v]
            end = adj_off[v + 1]
            idx = cursor[v]
            while beg + idx < end:
                w = adj_tgt[beg + idx]
                if in_u[w]:
                    if state[_SSTOP_BUDGET] >= 0 and state[_SQ] >= state[_SSTOP_BUDGET]:
                        cursor[v] = idx
                        return STOP_BUDGET
                    alive = _alive(salt, thr, thr_mode, relab[v], relab[w])
                    tested[state[_SBUF]] = _pack(relab[v], relab[w])
                    state[_SBUF] += 1
                    state[_SQ] += 1
                    tested_inc[v] += 1
                    tested_inc[w] += 1
                    if alive:
                        state[_SPOS] += 1
                        pushed = w
                        cursor[v] = idx + 1
                        break
                    if state[_SBUF] == cap:
                        cursor[v] = idx + 1
                        return BUF_FULL
                idx += 1
            if pushed < 0:
                cursor[v] = end - beg

        if pushed >= 0:
            w = pushed
            parent[w] = v
            depth[w] = depth[v] + 1
            root_of[w] = root_of[v]
            e_in[w] = state[_SDISC]
            disc_seq[state[_SDISC]] = w
            state[_SDISC] += 1
            in_u[w] = False
            nxt[w] = w + 1
            stack[state[_SLEN]] = w
            state[_SLEN] += 1
            if state[_SLEN] > state[_SMAXS]:
                state[_SMAXS] = state[_SLEN]
                state[_SMAXTOP] = w
            if state[_SSTOP_SIZE] >= 0 and state[_SDISC] == state[_SSTOP_SIZE]:
                return STOP_SIZE
            if state[_SBUF] == cap:
                return BUF_FULL
        else:
            state[_SLEN] -= 1
            e_out[v] = state[_SDISC]
            state[_SPOPS] += 1


def run_dfs_fast(g, oracle, policy=None, stop=None):
    """Kernel-backed run_dfs for record_trace=False; same outputs, no events."""
    from .dfs import DfsTrace, RootedForest, RootPolicy, StopCondition

    policy = policy or RootPolicy()
    stop = stop or StopCondition()
    n = g.n
    forest = RootedForest(n)
    trace = DfsTrace(n=n)
    if n == 0:
        trace.forest = forest
        return forest, trace

    ia = g.interval_arrays()
    if ia is not None:
        lo_arr, hi_arr = ia
        adj_off = np.zeros(1, dtype=np.int64)
        adj_tgt = np.zeros(0, dtype=np.int64)
        mode = 0
    else:
        lo_arr = hi_arr = np.zeros(0, dtype=np.int64)
        adj_off = g.offsets.astype(np.int64)
        adj_tgt = g.targets.astype(np.int64)
        mode = 1
    da = g.deleted_arrays()
    if da is not None:
        del_off, del_tgt = da
        del_off = del_off.astype(np.int64)
        del_tgt = del_tgt.astype(np.int64)
    else:
        del_off = np.zeros(1, dtype=np.int64)
        del_tgt = np.zeros(0, dtype=np.int64)
    if policy.mode == "priority-set" and policy.v0 is not None:
        prio = np.asarray(policy.v0, dtype=np.int64)
    else:
        prio = np.zeros(0, dtype=np.int64)

    if oracle._threshold is None:
        thr_mode, thr = 1, _U(0)
    elif oracle._threshold == 0:
        thr_mode, thr = 2, _U(0)
    else:
        thr_mode, thr = 0, _U(min(oracle._threshold, (1 << 64) - 1))
    salt = _U(oracle._salt)

    state = np.zeros(_NSTATE, dtype=np.int64)
    state[_SSTOP_SIZE] = stop.value if stop.kind == "reached-size" else -1
    state[_SSTOP_BUDGET] = stop.value if stop.kind == "query-budget" else -1
    state[_SMODE] = mode
    state[_SMAXTOP] = -1
    nxt = np.arange(n + 1, dtype=np.int64)
    in_u = np.ones(n, dtype=np.bool_)
    cursor = np.zeros(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    disc_seq = np.empty(n, dtype=np.int64)
    if oracle.tested_inc is None:
        oracle.tested_inc = np.zeros(n, dtype=np.int64)
    cap = int(min(max(2 * n, 1 << 16), 1 << 24))
    tested = np.empty(cap, dtype=np.uint64)
    if oracle.relabel is not None:
        relab = np.asarray(oracle.relabel, dtype=np.int64)
    else:
        relab = np.arange(n, dtype=np.int64)

    q0, p0 = oracle.queries, oracle.positive
    while True:
        code = _dfs_kernel(
            state, nxt, in_u, cursor, stack, forest.parent, forest.depth,
            forest.root, forest.euler_in, forest.euler_out, disc_seq,
            lo_arr, hi_arr, adj_off, adj_tgt, del_off, del_tgt, prio,
            tested, oracle.tested_inc, relab, salt, thr, thr_mode,
        )
        nbuf = int(state[_SBUF])
        if nbuf:
            oracle._chunks.append(tested[:nbuf].copy())
            oracle._chunk_len += nbuf
            state[_SBUF] = 0
        if code != BUF_FULL:
            break

    trace.n_queries = int(state[_SQ])
    trace.n_positive = int(state[_SPOS])
    trace.n_roots = int(state[_SROOTS])
    trace.n_pushes = int(state[_SDISC]) - trace.n_roots
    trace.n_pops = int(state[_SPOPS])
    trace.max_stack_size = int(state[_SMAXS])
    trace.max_stack_top = int(state[_SMAXTOP])
    trace.last_root_round = int(state[_SLASTROOT])
    oracle.queries = q0 + trace.n_queries
    oracle.positive = p0 + trace.n_positive
    oracle.negative += trace.n_queries - trace.n_positive
    disc = int(state[_SDISC])
    live = stack[: int(state[_SLEN])].tolist()
    if code in (STOP_SIZE, STOP_BUDGET):
        trace.stopped = True
        trace.stop_reason = "reached-size" if code == STOP_SIZE else "query-budget"
        trace.stop_stack = live
    for v in live:
        forest.euler_out[v] = disc
    forest.discovery_order = disc_seq[:disc]
    trace.forest = forest
    return forest, trace
