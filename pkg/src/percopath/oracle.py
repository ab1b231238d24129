"""Seed-deterministic lazy percolation oracle.

Every host edge survives independently with probability p. The alive/dead
outcome of an edge is a pure function of (seed, round_tag, canonical edge
key) — never of query order — so "tested" is pure bookkeeping and the whole
subgraph G_p is a fixed object per seed. DFS-time queries (`test`) and
post-exploration reveals (`peek`) are counted separately.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .graphs import ExplicitGraph, GraphView, pack_edge

__all__ = [
    "OracleError",
    "PercolationOracle",
    "SprinkleSet",
    "split_sprinkle",
    "mix64",
    "derive_seed",
    "untested_incident",
    "materialize",
]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


class OracleError(ValueError):
    pass


def mix64(x: int) -> int:
    """splitmix64 round (golden-ratio increment + finalizer) on 64 bits."""
    x = (x + _GOLDEN) & _MASK
    x = (x ^ (x >> 30)) * _M1 & _MASK
    x = (x ^ (x >> 27)) * _M2 & _MASK
    return x ^ (x >> 31)


def derive_seed(master: int, index: int) -> int:
    """Per-trial seed, a pure splittable function of (master, index)."""
    return mix64((master & _MASK) ^ mix64(index * _GOLDEN))


def _mix64_arr(x: np.ndarray) -> np.ndarray:
    # uint64 array ops wrap silently; inputs must be >= 1-d
    x = x + np.uint64(_GOLDEN)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


class PercolationOracle:
    """Bernoulli(p) oracle over host edges with tested/untested bookkeeping.

    Counters: `queries`/`positive`/`negative` for test(), `peeks` plus
    `peek_positive` for peek(). Tested keys are stored as append-only uint64
    chunks merged on demand into a sorted array (memory proportional to the
    number of tested edges, not to the host size).
    """

    def __init__(self, p: float, seed: int, round_tag: int = 0,
                 graph: GraphView | None = None,
                 relabel: np.ndarray | None = None):
        if not (0.0 <= p <= 1.0):
            raise OracleError(f"p={p} outside [0,1]")
        self.p = float(p)
        self.seed = int(seed)
        self.round_tag = int(round_tag)
        self.graph = graph
        # relabel maps local vertex ids to host ids so that induced-subgraph
        # runs keep evaluating (and recording) host edge keys
        self.relabel = relabel
        self._salt = mix64(mix64(self.seed ^ ((self.round_tag + 1) * _GOLDEN)))
        if self.p >= 1.0:
            self._threshold = None  # always alive
        elif self.p <= 0.0:
            self._threshold = 0
        else:
            self._threshold = int(self.p * 2.0**64)
        self.queries = 0
        self.positive = 0
        self.negative = 0
        self.peeks = 0
        self.peek_positive = 0
        self._chunks: list[np.ndarray] = []
        self._chunk_len = 0
        self._merged = np.empty(0, dtype=np.uint64)
        self._extra: set[int] = set()
        self._extra_arr = np.empty(0, dtype=np.uint64)
        self._extra_dirty = False
        if graph is not None:
            self.tested_inc = np.zeros(graph.n, dtype=np.int64)
        else:
            self.tested_inc = None
            self._inc_dict: dict[int, int] = {}

    # ── pure outcome evaluation (no state) ──────────────────────────────

    def alive_one(self, u: int, v: int) -> bool:
        if self._threshold is None:
            return True
        if self._threshold == 0:
            return False
        if self.relabel is not None:
            u, v = int(self.relabel[u]), int(self.relabel[v])
        lo, hi = (u, v) if u < v else (v, u)
        key = (lo << 32) | hi
        return mix64(self._salt ^ key) < self._threshold

    def alive_many(self, us, vs) -> np.ndarray:
        if self.relabel is not None:
            us, vs = self.relabel[us], self.relabel[vs]
        keys = np.atleast_1d(pack_edge(us, vs))
        if self._threshold is None:
            return np.ones(keys.shape, dtype=bool)
        if self._threshold == 0:
            return np.zeros(keys.shape, dtype=bool)
        h = _mix64_arr(np.uint64(self._salt) ^ keys)
        return h < np.uint64(min(self._threshold, _MASK))

    # ── tested-set bookkeeping ──────────────────────────────────────────

    def _key(self, u: int, v: int) -> int:
        if self.relabel is not None:
            u, v = int(self.relabel[u]), int(self.relabel[v])
        lo, hi = (u, v) if u < v else (v, u)
        return (lo << 32) | hi

    def is_tested(self, u: int, v: int) -> bool:
        key = self._key(u, v)
        if key in self._extra:
            return True
        if self._chunk_len:
            self._merge()
        if len(self._merged):
            i = np.searchsorted(self._merged, np.uint64(key))
            if i < len(self._merged) and self._merged[i] == np.uint64(key):
                return True
        return False

    def _merge(self) -> None:
        parts = [self._merged] + self._chunks if len(self._merged) else self._chunks
        self._merged = np.sort(np.concatenate(parts))
        self._chunks = []
        self._chunk_len = 0

    def tested_many(self, u: int, vs: np.ndarray) -> np.ndarray:
        """Vectorized is_tested for edges (u, v) over an array of v."""
        if self.relabel is not None:
            keys = pack_edge(self.relabel[u], self.relabel[vs])
        else:
            keys = pack_edge(u, vs)
        keys = np.atleast_1d(keys)
        if self._chunk_len:
            self._merge()
        out = np.zeros(len(keys), dtype=bool)
        if len(self._merged):
            pos = np.minimum(
                np.searchsorted(self._merged, keys), len(self._merged) - 1
            )
            out |= self._merged[pos] == keys
        if self._extra:
            if self._extra_dirty or len(self._extra_arr) != len(self._extra):
                self._extra_arr = np.sort(
                    np.fromiter(self._extra, dtype=np.uint64, count=len(self._extra))
                )
                self._extra_dirty = False
            pos = np.minimum(
                np.searchsorted(self._extra_arr, keys), len(self._extra_arr) - 1
            )
            out |= self._extra_arr[pos] == keys
        return out

    def _bump_inc(self, v: int, by: int = 1) -> None:
        if self.tested_inc is not None:
            self.tested_inc[v] += by
        else:
            self._inc_dict[v] = self._inc_dict.get(v, 0) + by

    def _check_host(self, u: int, v: int) -> None:
        if u == v:
            raise OracleError(f"loop ({u},{v}) is not a host edge")
        if self.graph is not None and not self.graph.has_edge(u, v):
            raise OracleError(f"({u},{v}) is not an edge of the host graph")

    def test(self, u: int, v: int) -> bool:
        """Reveal the edge's fixed outcome; idempotent on repeats."""
        self._check_host(u, v)
        out = self.alive_one(u, v)
        if not self.is_tested(u, v):
            self._extra.add(self._key(u, v))
            self.queries += 1
            if out:
                self.positive += 1
            else:
                self.negative += 1
            self._bump_inc(u)
            self._bump_inc(v)
        return out

    def peek(self, u: int, v: int) -> bool:
        """Post-exploration reveal: same outcome, separate counter, marks tested."""
        self._check_host(u, v)
        out = self.alive_one(u, v)
        if not self.is_tested(u, v):
            self._extra.add(self._key(u, v))
            self.peeks += 1
            if out:
                self.peek_positive += 1
            self._bump_inc(u)
            self._bump_inc(v)
        return out

    def record_batch(self, v: int, partners: np.ndarray, n_negative: int,
                     pushed: int | None) -> None:
        """DFS fast path: record fresh queries from stack-top v in bulk.

        `partners` holds the queried neighbors in order; the first
        `n_negative` answered dead, and `pushed` (if not None) answered
        alive. Caller guarantees none of these edges was tested before.
        """
        m = len(partners)
        if m == 0:
            return
        if self.relabel is not None:
            self._chunks.append(pack_edge(self.relabel[v], self.relabel[partners]))
        else:
            self._chunks.append(pack_edge(v, partners))
        self._chunk_len += m
        self.queries += m
        self.negative += n_negative
        if pushed is not None:
            self.positive += 1
        if self.tested_inc is not None:
            self.tested_inc[partners] += 1
            self.tested_inc[v] += m
        else:
            for w in partners.tolist():
                self._bump_inc(w)
            self._bump_inc(v, m)

    @property
    def tested_count(self) -> int:
        return len(self._merged) + self._chunk_len + len(self._extra)

    def tested_incident(self, v: int) -> int:
        if self.tested_inc is not None:
            return int(self.tested_inc[v])
        return self._inc_dict.get(v, 0)

    def untested_incident(self, g: GraphView, v: int) -> int:
        return g.degree(v) - self.tested_incident(v)


def untested_incident(oracle: PercolationOracle, g: GraphView, v: int) -> int:
    """Number of host edges at v not yet revealed by test or peek."""
    return oracle.untested_incident(g, v)


def materialize(oracle: PercolationOracle, g: GraphView,
                max_host_edges: int = 10**7) -> ExplicitGraph:
    """Explicit subgraph of all alive edges (pure; does not mark tested).

    Equals {e : test(e) = true} evaluated in any order. Rejected when the
    host carries more than `max_host_edges` edges.
    """
    m = g.host_edge_count()
    if m > max_host_edges:
        raise OracleError(f"host has {m} edges > guard {max_host_edges}")
    us, vs = g.edge_arrays()
    alive_us, alive_vs = [], []
    chunk = 1 << 22
    for s in range(0, len(us), chunk):
        ub, vb = us[s : s + chunk], vs[s : s + chunk]
        mask = oracle.alive_many(ub, vb)
        alive_us.append(ub[mask])
        alive_vs.append(vb[mask])
    if alive_us:
        au = np.concatenate(alive_us)
        av = np.concatenate(alive_vs)
    else:
        au = av = np.empty(0, dtype=np.int64)
    return ExplicitGraph.from_arrays(au, av, g.n)


@dataclass
class SprinkleSet:
    """Three independent rounds sharing a seed, each with p_i = c/(3k)."""

    rounds: tuple[PercolationOracle, PercolationOracle, PercolationOracle]
    c: float
    k: int

    @property
    def p_round(self) -> float:
        return self.rounds[0].p

    def union_prob(self) -> float:
        q = 1.0
        for r in self.rounds:
            q *= 1.0 - r.p
        return 1.0 - q

    def alive_any(self, u: int, v: int) -> bool:
        return any(r.alive_one(u, v) for r in self.rounds)


def split_sprinkle(seed: int, c: float, k: int,
                   graph: GraphView | None = None) -> SprinkleSet:
    """Three oracles with p_i = c/(3k) and round tags 1..3.

    The union survival probability 1-(1-p1)(1-p2)(1-p3) stays <= c/k.
    """
    p_i = c / (3.0 * k)
    if p_i > 1.0:
        raise OracleError(f"round probability c/(3k) = {p_i} > 1")
    rounds = tuple(
        PercolationOracle(p_i, seed, round_tag=t, graph=graph) for t in (1, 2, 3)
    )
    return SprinkleSet(rounds=rounds, c=c, k=k)
