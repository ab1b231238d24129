"""DFS exploration of G_p with stack S, reached R, unreached U.

The stack top queries its host neighbors still in U in ascending id order,
resuming after the last queried neighbor whenever it returns to the top, so
each host edge is queried at most once and traces replay deterministically.
Candidate scanning is chunked and vectorized: implicit hosts expose their
neighborhoods as id intervals over a lazily compacted sorted U array, CSR
hosts scan their adjacency slice with a per-vertex cursor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from .graphs import GraphView
from .oracle import PercolationOracle

__all__ = [
    "EV_ROOT",
    "EV_QUERY",
    "EV_PUSH",
    "EV_POP",
    "RootPolicy",
    "StopCondition",
    "RootedForest",
    "DfsTrace",
    "DfsError",
    "run_dfs",
    "check_properties",
    "PropertyReport",
    "stack_path",
    "export_trace",
    "import_trace",
]

EV_ROOT, EV_QUERY, EV_PUSH, EV_POP = 0, 1, 2, 3


class DfsError(RuntimeError):
    pass


@dataclass
class RootPolicy:
    """Root selection: lowest unreached index, optionally preferring V0 first."""

    mode: str = "lowest-index"  # or "priority-set"
    v0: np.ndarray | None = None

    @classmethod
    def priority(cls, v0) -> "RootPolicy":
        return cls(mode="priority-set", v0=np.unique(np.asarray(list(v0), dtype=np.int64)))


@dataclass
class StopCondition:
    """Optional mid-flight stop: none, reached-size t, or query-budget q."""

    kind: str = "none"  # "reached-size" | "query-budget"
    value: int = 0

    @classmethod
    def reached_size(cls, t: int) -> "StopCondition":
        return cls(kind="reached-size", value=t)

    @classmethod
    def query_budget(cls, q: int) -> "StopCondition":
        return cls(kind="query-budget", value=q)


class RootedForest:
    """DFS output: parents, depths, roots, discovery order, euler intervals.

    Undiscovered vertices (stopped runs) carry parent=-1, depth=-1, root=-1.
    euler intervals use [in, out) so subtree_size(v) = out(v) - in(v).
    """

    def __init__(self, n: int):
        self.n = n
        self.parent = np.full(n, -1, dtype=np.int64)
        self.depth = np.full(n, -1, dtype=np.int64)
        self.root = np.full(n, -1, dtype=np.int64)
        self.euler_in = np.full(n, -1, dtype=np.int64)
        self.euler_out = np.full(n, -1, dtype=np.int64)
        self.discovery_order = np.empty(0, dtype=np.int64)
        self._children = None
        self._heights = None

    @property
    def subtree_size(self) -> np.ndarray:
        return self.euler_out - self.euler_in

    def discovered(self, v: int) -> bool:
        return self.depth[v] >= 0

    def roots(self) -> np.ndarray:
        mask = (self.parent < 0) & (self.depth == 0)
        return np.flatnonzero(mask)

    def is_ancestor(self, u: int, v: int) -> bool:
        """True iff u is a strict ancestor of v."""
        return bool(
            self.euler_in[u] < self.euler_in[v]
            and self.euler_in[v] < self.euler_out[u]
        )

    def path_up(self, v: int, u: int) -> list[int]:
        """Tree path from v up to ancestor u, inclusive."""
        out = [v]
        x = v
        while x != u:
            x = int(self.parent[x])
            if x < 0:
                raise DfsError(f"{u} is not an ancestor of {v}")
            out.append(x)
        return out

    def children_arrays(self):
        """(order, starts) grouping vertices by parent for child iteration."""
        if self._children is None:
            order = np.argsort(self.parent, kind="stable")
            order = order[self.parent[order] >= 0]
            starts = np.searchsorted(self.parent[order], np.arange(self.n + 1))
            self._children = (order, starts)
        return self._children

    def children(self, v: int) -> np.ndarray:
        order, starts = self.children_arrays()
        return order[starts[v] : starts[v + 1]]


@dataclass
class DfsTrace:
    """Replayable event log plus run summary.

    Event encoding: (type, a, b, ans) with type in {ROOT, QUERY, PUSH, POP};
    QUERY carries (v, w, answer), PUSH carries (w, parent), ROOT/POP carry
    the vertex in `a`. Event arrays are None when recording was disabled.
    """

    n: int
    ev_type: np.ndarray | None = None
    ev_a: np.ndarray | None = None
    ev_b: np.ndarray | None = None
    ev_ans: np.ndarray | None = None
    n_queries: int = 0
    n_positive: int = 0
    n_roots: int = 0
    n_pushes: int = 0
    n_pops: int = 0
    stopped: bool = False
    stop_reason: str = ""
    stop_stack: list = field(default_factory=list)
    max_stack_size: int = 0
    max_stack_top: int = -1
    last_root_round: int = 0  # rounds (moves) elapsed when the last root was placed
    forest: RootedForest | None = None

    @property
    def recorded(self) -> bool:
        return self.ev_type is not None

    def __len__(self) -> int:
        return 0 if self.ev_type is None else len(self.ev_type)


class _EventLog:
    """Append-friendly builder for the trace event arrays."""

    def __init__(self):
        self.t: list[int] = []
        self.a: list[int] = []
        self.b: list[int] = []
        self.ans: list[int] = []

    def root(self, v: int):
        self.t.append(EV_ROOT)
        self.a.append(v)
        self.b.append(-1)
        self.ans.append(-1)

    def queries(self, v: int, ws, n_neg: int, pushed: bool):
        m = len(ws)
        self.t.extend([EV_QUERY] * m)
        self.a.extend([v] * m)
        self.b.extend(ws.tolist())
        ans = [0] * n_neg
        if pushed:
            ans.append(1)
        self.ans.extend(ans)

    def push(self, w: int, parent: int):
        self.t.append(EV_PUSH)
        self.a.append(w)
        self.b.append(parent)
        self.ans.append(-1)

    def pop(self, v: int):
        self.t.append(EV_POP)
        self.a.append(v)
        self.b.append(-1)
        self.ans.append(-1)

    def finish(self, trace: DfsTrace):
        trace.ev_type = np.array(self.t, dtype=np.int8)
        trace.ev_a = np.array(self.a, dtype=np.int64)
        trace.ev_b = np.array(self.b, dtype=np.int64)
        trace.ev_ans = np.array(self.ans, dtype=np.int8)


class _USet:
    """Sorted array of unreached vertices with lazy deletion + compaction."""

    def __init__(self, n: int):
        self.arr = np.arange(n, dtype=np.int64)
        self.mask = np.ones(n, dtype=bool)  # indexed by vertex id
        self.dead = 0

    def remove(self, v: int):
        self.mask[v] = False
        self.dead += 1
        if self.dead * 2 > len(self.arr) and len(self.arr) > 64:
            self.arr = self.arr[self.mask[self.arr]]
            self.dead = 0


def _sorted_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a minus b, both sorted; small-b fast path."""
    if len(b) == 0 or len(a) == 0:
        return a
    idx = np.searchsorted(b, a)
    idx[idx == len(b)] = len(b) - 1
    return a[b[idx] != a]


def run_dfs(
    g: GraphView,
    oracle: PercolationOracle,
    policy: RootPolicy | None = None,
    stop: StopCondition | None = None,
    record_trace: bool = True,
) -> tuple[RootedForest, DfsTrace]:
    """Explore G_p, returning the rooted forest and a replayable trace.

    With no stop condition every vertex ends reached; with reached-size t the
    run halts the first time |R u S| = t and the trace reports the live
    stack; with query-budget q it halts once q host edges were queried.
    """
    if not record_trace:
        from .dfs_fast import HAVE_NUMBA, run_dfs_fast

        if HAVE_NUMBA:
            return run_dfs_fast(g, oracle, policy, stop)
    n = g.n
    policy = policy or RootPolicy()
    stop = stop or StopCondition()
    forest = RootedForest(n)
    trace = DfsTrace(n=n)
    log = _EventLog() if record_trace else None
    if n == 0:
        if log:
            log.finish(trace)
        trace.forest = forest
        return forest, trace

    uset = _USet(n)
    interval_mode = g.u_interval(0) is not None
    min_live: dict[int, int] = {}  # per interval start: smallest possibly-live id
    cursor = np.zeros(n, dtype=np.int64)  # vertex id (interval) / adj index (csr)
    disc_seq = np.empty(n, dtype=np.int64)
    disc_count = 0
    stack: list[int] = []
    stop_size = stop.value if stop.kind == "reached-size" else -1
    stop_budget = stop.value if stop.kind == "query-budget" else -1

    prio = None
    prio_pos = 0
    if policy.mode == "priority-set" and policy.v0 is not None and len(policy.v0):
        prio = policy.v0
    next_root = 0

    parent, depth, root_of = forest.parent, forest.depth, forest.root
    e_in, e_out = forest.euler_in, forest.euler_out
    mask = uset.mask

    def discover(w: int, par: int, rt: int):
        nonlocal disc_count
        parent[w] = par
        depth[w] = 0 if par < 0 else depth[par] + 1
        root_of[w] = rt
        e_in[w] = disc_count
        disc_seq[disc_count] = w
        disc_count += 1
        uset.remove(w)
        stack.append(w)
        if len(stack) > trace.max_stack_size:
            trace.max_stack_size = len(stack)
            trace.max_stack_top = w

    stopped = False
    reason = ""
    while not stopped:
        if not stack:
            v = -1
            if prio is not None:
                while prio_pos < len(prio) and not mask[prio[prio_pos]]:
                    prio_pos += 1
                if prio_pos < len(prio):
                    v = int(prio[prio_pos])
            if v < 0:
                while next_root < n and not mask[next_root]:
                    next_root += 1
                if next_root >= n:
                    break
                v = next_root
            trace.last_root_round = disc_count + trace.n_pops
            discover(v, -1, v)
            trace.n_roots += 1
            if log:
                log.root(v)
            if disc_count == stop_size:
                stopped, reason = True, "reached-size"
                break
            continue

        v = stack[-1]
        pushed = -1
        if interval_mode:
            lo, hi = g.u_interval(v)
            cur = int(cursor[v])
            if cur < lo:
                cur = lo
            base = min_live.get(lo, lo)
            tracking = cur <= base  # this scan can advance the live frontier
            if tracking:
                cur = base
            dels = g.deleted(v)
            end_pos = np.searchsorted(uset.arr, hi + 1)
            pos = np.searchsorted(uset.arr, cur)
            w_size = 64
            while pos < end_pos:
                window = uset.arr[pos : min(pos + w_size, end_pos)]
                pos += len(window)
                live = window[mask[window]]
                if tracking:
                    if len(live) == 0:
                        min_live[lo] = int(window[-1]) + 1
                    else:
                        min_live[lo] = int(live[0])
                        tracking = False
                if dels is not None and len(live):
                    live = _sorted_diff(live, dels)
                if len(live) == 0:
                    continue
                if stop_budget >= 0:
                    room = stop_budget - trace.n_queries
                    if room <= 0:
                        stopped, reason = True, "query-budget"
                        break
                    live = live[:room]
                alive = oracle.alive_many(v, live)
                hit = np.flatnonzero(alive)
                if len(hit):
                    j = int(hit[0])
                    tested = live[: j + 1]
                    oracle.record_batch(v, tested, j, int(tested[j]))
                    trace.n_queries += j + 1
                    trace.n_positive += 1
                    if log:
                        log.queries(v, tested, j, True)
                    pushed = int(tested[j])
                    cursor[v] = pushed + 1
                    break
                oracle.record_batch(v, live, len(live), None)
                trace.n_queries += len(live)
                if log:
                    log.queries(v, live, len(live), False)
                cursor[v] = int(window[-1]) + 1
                if stop_budget >= 0 and trace.n_queries >= stop_budget:
                    stopped, reason = True, "query-budget"
                    break
                w_size = min(w_size * 4, 4096)
        else:
            adj = g.neighbors(v)
            cand = adj[cursor[v] :]
            if len(cand):
                keep = np.flatnonzero(mask[cand])
                live = cand[keep]
                if stop_budget >= 0:
                    room = stop_budget - trace.n_queries
                    if room <= 0:
                        live = live[:0]
                        stopped, reason = True, "query-budget"
                    else:
                        live = live[:room]
                if len(live):
                    alive = oracle.alive_many(v, live)
                    hit = np.flatnonzero(alive)
                    if len(hit):
                        j = int(hit[0])
                        tested = live[: j + 1]
                        oracle.record_batch(v, tested, j, int(tested[j]))
                        trace.n_queries += j + 1
                        trace.n_positive += 1
                        if log:
                            log.queries(v, tested, j, True)
                        pushed = int(tested[j])
                        cursor[v] = int(keep[j]) + cursor[v] + 1
                    else:
                        oracle.record_batch(v, live, len(live), None)
                        trace.n_queries += len(live)
                        if log:
                            log.queries(v, live, len(live), False)
                        cursor[v] = len(adj)
                        if stop_budget >= 0 and trace.n_queries >= stop_budget:
                            stopped, reason = True, "query-budget"

        if stopped:
            break
        if pushed >= 0:
            discover(pushed, v, int(root_of[v]))
            trace.n_pushes += 1
            if log:
                log.push(pushed, v)
            if disc_count == stop_size:
                stopped, reason = True, "reached-size"
        else:
            stack.pop()
            e_out[v] = disc_count
            trace.n_pops += 1
            if log:
                log.pop(v)

    if stopped:
        trace.stopped = True
        trace.stop_reason = reason
        trace.stop_stack = list(stack)
    for v in reversed(stack):  # unpopped vertices close at the stop point
        e_out[v] = disc_count
    forest.discovery_order = disc_seq[:disc_count]
    if log:
        log.finish(trace)
    trace.forest = forest
    return forest, trace


# ── exploration property checking ───────────────────────────────────────────


@dataclass
class PropertyReport:
    structural_ok: bool
    p1: bool
    p2: bool
    p3: bool
    p4: bool
    first_offence: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.structural_ok and self.p1 and self.p2 and self.p3 and self.p4


def check_properties(trace: DfsTrace, g: GraphView, oracle=None) -> PropertyReport:
    """Mechanically check the four DFS exploration properties on a trace.

    (I) every positive answer grows R u S by one; (II) the stack always spans
    a path of positively answered edges; (III) R-U host edges were all
    queried negative; (IV) untested host edges join vertical pairs.
    """
    if not trace.recorded:
        raise DfsError("trace has no recorded events")
    t, a, b, ans = trace.ev_type, trace.ev_a, trace.ev_b, trace.ev_ans
    n = trace.n
    n_ev = len(t)
    details: dict = {}

    # replay stack-changing events; queries must come from the live top
    stack: list[int] = []
    seg_idx = [0]
    seg_top = [-1]
    on_stack = np.zeros(n, dtype=bool)
    seen = np.zeros(n, dtype=bool)
    popped = np.zeros(n, dtype=bool)
    first_offence = None
    structural_ok = True
    change = np.flatnonzero(t != EV_QUERY)
    for i in change.tolist():
        ty = t[i]
        x = int(a[i])
        okey = True
        if ty == EV_ROOT or ty == EV_PUSH:
            okey = not seen[x]
            if ty == EV_ROOT:
                okey = okey and len(stack) == 0
            else:
                okey = okey and len(stack) > 0
            seen[x] = True
            on_stack[x] = True
            stack.append(x)
        elif ty == EV_POP:
            okey = len(stack) > 0 and stack[-1] == x
            if okey:
                stack.pop()
                on_stack[x] = False
                popped[x] = True
        if not okey and first_offence is None:
            structural_ok = False
            first_offence = i
        seg_idx.append(i + 1)
        seg_top.append(stack[-1] if stack else -1)

    q = np.flatnonzero(t == EV_QUERY)
    if len(q):
        seg = np.searchsorted(np.asarray(seg_idx), q, side="right") - 1
        tops = np.asarray(seg_top)[seg]
        bad = a[q] != tops
        if bad.any() and first_offence is None:
            structural_ok = False
            first_offence = int(q[np.flatnonzero(bad)[0]])

    # (I): positive answers == pushes beyond roots
    n_pos = int((ans[q] == 1).sum()) if len(q) else 0
    n_push = int((t == EV_PUSH).sum())
    p1 = n_pos == n_push
    details["positives"] = n_pos
    details["pushes"] = n_push

    # (II): each push immediately preceded by a positive query for it
    p2 = True
    push_idx = np.flatnonzero(t == EV_PUSH)
    if len(push_idx):
        prev = push_idx - 1
        good = (
            (prev >= 0)
            & (t[prev] == EV_QUERY)
            & (ans[prev] == 1)
            & (b[prev] == a[push_idx])
            & (a[prev] == b[push_idx])
        )
        if not good.all():
            p2 = False
            if first_offence is None:
                first_offence = int(push_idx[np.flatnonzero(~good)[0]])
    # and positive queries must be followed by their push
    if len(q):
        posq = q[ans[q] == 1]
        nxt = posq + 1
        good = (nxt < n_ev) & (t[np.minimum(nxt, n_ev - 1)] == EV_PUSH)
        if len(posq) and not good.all():
            p2 = False
            if first_offence is None:
                first_offence = int(posq[np.flatnonzero(~good)[0]])

    # event times per vertex
    big = n_ev + 1
    disc_t = np.full(n, big, dtype=np.int64)
    pop_t = np.full(n, big, dtype=np.int64)
    isdisc = np.flatnonzero((t == EV_ROOT) | (t == EV_PUSH))
    disc_t[a[isdisc]] = isdisc
    ispop = np.flatnonzero(t == EV_POP)
    pop_t[a[ispop]] = ispop

    us, vs = g.edge_arrays()
    from .graphs import pack_edge

    ekeys = pack_edge(us, vs)
    if len(q):
        qkeys = pack_edge(a[q], b[q])
        order = np.argsort(qkeys, kind="stable")
        sq = qkeys[order]
        pos_in = np.searchsorted(sq, ekeys)
        pos_in_c = np.minimum(pos_in, len(sq) - 1)
        tested = sq[pos_in_c] == ekeys
        q_at = q[order][pos_in_c]
        q_ans = ans[q][order][pos_in_c]
    else:
        tested = np.zeros(len(ekeys), dtype=bool)
        q_at = np.zeros(len(ekeys), dtype=np.int64)
        q_ans = np.zeros(len(ekeys), dtype=np.int8)

    # (III): x popped while y undiscovered -> edge tested negative before the pop
    p3 = True
    for x_arr, y_arr in ((us, vs), (vs, us)):
        need = (pop_t[x_arr] < big) & (disc_t[y_arr] > pop_t[x_arr])
        viol = need & (~tested | (q_ans != 0) | (q_at > pop_t[x_arr]))
        if viol.any():
            p3 = False
            if first_offence is None:
                first_offence = int(pop_t[x_arr[np.flatnonzero(viol)[0]]])
            break
    details["r_u_edges_checked"] = int(
        (((pop_t[us] < big) & (disc_t[vs] > pop_t[us]))
         | ((pop_t[vs] < big) & (disc_t[us] > pop_t[vs]))).sum()
    )

    # (IV): untested host edges join ancestor-descendant pairs
    f = trace.forest
    p4 = True
    if f is not None:
        both = (disc_t[us] < big) & (disc_t[vs] < big)
        un = ~tested & both
        if un.any():
            iu, iv = f.euler_in[us[un]], f.euler_in[vs[un]]
            ou, ov = f.euler_out[us[un]], f.euler_out[vs[un]]
            vertical = ((iu < iv) & (iv < ou)) | ((iv < iu) & (iu < ov))
            if not vertical.all():
                p4 = False
        details["untested_checked"] = int(un.sum())

    return PropertyReport(
        structural_ok=structural_ok,
        p1=p1,
        p2=p2,
        p3=p3,
        p4=p4,
        first_offence=first_offence,
        details=details,
    )


def stack_path(trace: DfsTrace, t: int) -> list[int]:
    """Stack content, bottom to top, at the first moment |R u S| = t.

    Fails when t is never reached, or when the stack at that moment is a
    single vertex (the exploration fragmented and no edge witnesses the
    moment, as at p=0).
    """
    stack = None
    if trace.stopped and trace.stop_reason == "reached-size":
        f = trace.forest
        if f is not None and len(f.discovery_order) == t:
            stack = list(trace.stop_stack)
    if stack is None:
        if not trace.recorded:
            raise DfsError("need a recorded trace or a matching reached-size stop")
        cur: list[int] = []
        discovered = 0
        ty, a = trace.ev_type, trace.ev_a
        for i in np.flatnonzero(ty != EV_QUERY).tolist():
            if ty[i] == EV_POP:
                cur.pop()
                continue
            cur.append(int(a[i]))
            discovered += 1
            if discovered == t:
                stack = cur
                break
        if stack is None:
            raise DfsError(f"|R u S| never reached {t}")
    if t >= 2 and len(stack) < 2:
        raise DfsError(f"stack degenerate (single vertex) at |R u S| = {t}")
    return stack


_EV_NAMES = {EV_ROOT: "NewRoot", EV_QUERY: "Query", EV_PUSH: "Push", EV_POP: "Pop"}
_EV_CODES = {v: k for k, v in _EV_NAMES.items()}


def export_trace(trace: DfsTrace, path: str) -> None:
    """One event per line: NewRoot v | Query v w 0/1 | Push w | Pop v."""
    if not trace.recorded:
        raise DfsError("trace has no recorded events")
    with open(path, "w") as fh:
        fh.write(f"# n={trace.n}\n")
        for ty, a, b, an in zip(
            trace.ev_type.tolist(), trace.ev_a.tolist(),
            trace.ev_b.tolist(), trace.ev_ans.tolist(),
        ):
            if ty == EV_QUERY:
                fh.write(f"Query {a} {b} {an}\n")
            elif ty == EV_PUSH:
                fh.write(f"Push {a}\n")
            else:
                fh.write(f"{_EV_NAMES[ty]} {a}\n")


def import_trace(path: str) -> DfsTrace:
    t, a, b, ans = [], [], [], []
    n = 0
    last_query: tuple[int, int] | None = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                n = int(line.split("=")[1])
                continue
            parts = line.split()
            code = _EV_CODES[parts[0]]
            t.append(code)
            if code == EV_QUERY:
                a.append(int(parts[1]))
                b.append(int(parts[2]))
                ans.append(int(parts[3]))
                last_query = (int(parts[1]), int(parts[2]))
            elif code == EV_PUSH:
                a.append(int(parts[1]))
                b.append(last_query[0] if last_query else -1)
                ans.append(-1)
            else:
                a.append(int(parts[1]))
                b.append(-1)
                ans.append(-1)
    trace = DfsTrace(n=n)
    trace.ev_type = np.array(t, dtype=np.int8)
    trace.ev_a = np.array(a, dtype=np.int64)
    trace.ev_b = np.array(b, dtype=np.int64)
    trace.ev_ans = np.array(ans, dtype=np.int8)
    trace.n_queries = int((trace.ev_type == EV_QUERY).sum())
    trace.n_roots = int((trace.ev_type == EV_ROOT).sum())
    trace.n_pushes = int((trace.ev_type == EV_PUSH).sum())
    trace.n_pops = int((trace.ev_type == EV_POP).sum())
    return trace
