"""Host-graph representations and generators with guaranteed minimum degree.

All graphs are simple, undirected, with dense vertex ids 0..n-1 and sorted
neighbor enumeration. Implicit families (complete, complete bipartite, clique
chain, pseudo-clique) expose their neighborhoods as id intervals so that dense
hosts with ~10^6 vertices never materialize Theta(n^2) edge storage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

__all__ = [
    "GraphError",
    "GenerationError",
    "GraphView",
    "ExplicitGraph",
    "CompleteGraph",
    "CompleteBipartiteGraph",
    "CliqueChain",
    "PseudoCliqueGraph",
    "GeneratorSpec",
    "canon_edge",
    "pack_edge",
    "unpack_edge",
    "build_explicit",
    "gen_complete",
    "gen_complete_bipartite",
    "gen_clique_chain",
    "gen_random_regular",
    "gen_pseudo_clique",
    "min_degree",
    "load_edge_list",
    "save_edge_list",
]


class GraphError(ValueError):
    """Malformed graph input (duplicate edge, loop, endpoint out of range)."""


class GenerationError(RuntimeError):
    """A randomized generator failed within its retry budget."""


def canon_edge(u: int, v: int) -> tuple[int, int]:
    """Canonical (min, max) form of an unordered edge."""
    return (u, v) if u < v else (v, u)


def pack_edge(u, v):
    """Pack a canonical edge into one uint64 key: (min << 32) | max.

    Works elementwise on numpy arrays. Vertex ids must fit in 32 bits.
    """
    u = np.asarray(u, dtype=np.uint64)
    v = np.asarray(v, dtype=np.uint64)
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    return (lo << np.uint64(32)) | hi


def unpack_edge(key: int) -> tuple[int, int]:
    k = int(key)
    return (k >> 32, k & 0xFFFFFFFF)


class GraphView:
    """Read-only host graph: vertex count, degrees, sorted neighbor lists.

    Subclasses must fill `n` and implement `degree` and `neighbors`.
    `u_interval(v)` returns an (lo, hi) inclusive id interval containing
    exactly the neighbors of v (minus v itself) for interval-structured
    implicit families, or None when the CSR path must be used. `deleted(v)`
    lists interval members that are *not* neighbors (pseudo-cliques).
    """

    n: int = 0

    def degree(self, v: int) -> int:
        raise NotImplementedError

    def neighbors(self, v: int) -> np.ndarray:
        """Strictly increasing int64 array of neighbors of v."""
        raise NotImplementedError

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return i < len(nb) and nb[i] == v

    def has_edges(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        """Elementwise host-adjacency; interval families answer vectorized."""
        ia = self.interval_arrays()
        if ia is not None:
            lo, hi = ia
            ok = (vs >= lo[us]) & (vs <= hi[us]) & (us != vs)
            da = self.deleted_arrays()
            if da is not None:
                offs, tgts = da
                degs = np.diff(offs)
                need = np.flatnonzero(ok & (degs[us] > 0))
                for i in need.tolist():
                    d = tgts[offs[us[i]] : offs[us[i] + 1]]
                    j = np.searchsorted(d, vs[i])
                    if j < len(d) and d[j] == vs[i]:
                        ok[i] = False
            return ok
        return np.fromiter(
            (self.has_edge(int(u), int(v)) for u, v in zip(us, vs)),
            dtype=bool,
            count=len(us),
        )

    def u_interval(self, v: int):
        return None

    def interval_arrays(self):
        """(lo, hi) interval arrays over all vertices, or None (CSR hosts)."""
        if self.u_interval(0) is None:
            return None
        lo = np.empty(self.n, dtype=np.int64)
        hi = np.empty(self.n, dtype=np.int64)
        for v in range(self.n):
            lo[v], hi[v] = self.u_interval(v)
        return lo, hi

    def deleted(self, v: int) -> np.ndarray | None:
        return None

    def deleted_arrays(self):
        """(offsets, targets) CSR of per-vertex non-neighbors inside the interval."""
        return None

    def degrees(self) -> np.ndarray:
        return np.fromiter(
            (self.degree(v) for v in range(self.n)), dtype=np.int64, count=self.n
        )

    def host_edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """All host edges as (u, v) arrays with u < v. Desk-scale only."""
        us, vs = [], []
        for u in range(self.n):
            nb = self.neighbors(u)
            nb = nb[nb > u]
            if len(nb):
                us.append(np.full(len(nb), u, dtype=np.int64))
                vs.append(nb.astype(np.int64))
        if not us:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        return np.concatenate(us), np.concatenate(vs)

    def to_explicit(self) -> "ExplicitGraph":
        us, vs = self.edge_arrays()
        return ExplicitGraph.from_arrays(us, vs, self.n)


class ExplicitGraph(GraphView):
    """CSR adjacency: offsets + concatenated sorted neighbor lists."""

    def __init__(self, offsets: np.ndarray, targets: np.ndarray):
        self.offsets = offsets
        self.targets = targets
        self.n = len(offsets) - 1

    @classmethod
    def from_arrays(cls, us: np.ndarray, vs: np.ndarray, n: int) -> "ExplicitGraph":
        src = np.concatenate([us, vs])
        dst = np.concatenate([vs, us])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.add.at(offsets, src + 1, 1)
        np.cumsum(offsets, out=offsets)
        return cls(offsets, dst.astype(np.int64))

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.targets[self.offsets[v] : self.offsets[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def host_edge_count(self) -> int:
        return len(self.targets) // 2

    def edge_arrays(self):
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.offsets))
        keep = src < self.targets
        return src[keep], self.targets[keep].astype(np.int64)

    def to_explicit(self) -> "ExplicitGraph":
        return self


def build_explicit(edge_list, n: int) -> ExplicitGraph:
    """Build a CSR graph from an iterable of (u, v) pairs.

    Rejects loops, duplicate keys (in either orientation) and endpoints
    outside 0..n-1, naming the offending key.
    """
    pairs = list(edge_list)
    seen = set()
    for u, v in pairs:
        if u == v:
            raise GraphError(f"loop edge ({u},{v})")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"endpoint out of range in ({u},{v}) for n={n}")
        key = canon_edge(u, v)
        if key in seen:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
    if not pairs:
        return ExplicitGraph(np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64))
    us = np.array([canon_edge(u, v)[0] for u, v in pairs], dtype=np.int64)
    vs = np.array([canon_edge(u, v)[1] for u, v in pairs], dtype=np.int64)
    return ExplicitGraph.from_arrays(us, vs, n)


class CompleteGraph(GraphView):
    """Implicit K_{k+1}: every vertex adjacent to every other."""

    def __init__(self, k: int):
        self.k = k
        self.n = k + 1

    def degree(self, v: int) -> int:
        return self.n - 1

    def neighbors(self, v: int) -> np.ndarray:
        nb = np.arange(self.n, dtype=np.int64)
        return np.delete(nb, v)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and 0 <= u < self.n and 0 <= v < self.n

    def u_interval(self, v: int):
        return (0, self.n - 1)

    def interval_arrays(self):
        return (
            np.zeros(self.n, dtype=np.int64),
            np.full(self.n, self.n - 1, dtype=np.int64),
        )

    def degrees(self) -> np.ndarray:
        return np.full(self.n, self.n - 1, dtype=np.int64)

    def host_edge_count(self) -> int:
        return self.n * (self.n - 1) // 2


class CompleteBipartiteGraph(GraphView):
    """Implicit K_{k,k}; left side 0..k-1, right side k..2k-1."""

    def __init__(self, k: int):
        self.k = k
        self.n = 2 * k

    def degree(self, v: int) -> int:
        return self.k

    def side(self, v: int) -> int:
        return 0 if v < self.k else 1

    def neighbors(self, v: int) -> np.ndarray:
        if v < self.k:
            return np.arange(self.k, 2 * self.k, dtype=np.int64)
        return np.arange(0, self.k, dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return (
            0 <= u < self.n and 0 <= v < self.n and (u < self.k) != (v < self.k)
        )

    def u_interval(self, v: int):
        if v < self.k:
            return (self.k, 2 * self.k - 1)
        return (0, self.k - 1)

    def interval_arrays(self):
        k = self.k
        lo = np.concatenate([np.full(k, k), np.zeros(k)]).astype(np.int64)
        hi = np.concatenate([np.full(k, 2 * k - 1), np.full(k, k - 1)]).astype(np.int64)
        return lo, hi

    def degrees(self) -> np.ndarray:
        return np.full(self.n, self.k, dtype=np.int64)

    def host_edge_count(self) -> int:
        return self.k * self.k


class CliqueChain(GraphView):
    """m cliques of size k+1 in a path, consecutive cliques sharing one vertex.

    Clique i (0-based) spans ids [i*k, i*k + k]; cut vertices are the
    multiples of k. n = m*k + 1, min degree k, diameter grows with m.
    """

    def __init__(self, k: int, m: int):
        self.k = k
        self.m = m
        self.n = m * k + 1

    def _span(self, v: int) -> tuple[int, int]:
        k, m = self.k, self.m
        if v % k == 0:
            j = v // k
            lo = (j - 1) * k if j > 0 else 0
            hi = j * k + k if j < m else v
            return lo, hi
        i = v // k
        return i * k, i * k + k

    def degree(self, v: int) -> int:
        lo, hi = self._span(v)
        return hi - lo

    def neighbors(self, v: int) -> np.ndarray:
        lo, hi = self._span(v)
        nb = np.arange(lo, hi + 1, dtype=np.int64)
        return np.delete(nb, v - lo)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            return False
        lo, hi = self._span(u)
        return lo <= v <= hi

    def u_interval(self, v: int):
        return self._span(v)

    def interval_arrays(self):
        k, m = self.k, self.m
        ids = np.arange(self.n, dtype=np.int64)
        j = ids // k
        is_cut = ids % k == 0
        lo = np.where(is_cut, np.maximum(j - 1, 0), j) * k
        hi = np.minimum(j * k + k, m * k)
        return lo, hi

    def degrees(self) -> np.ndarray:
        d = np.full(self.n, self.k, dtype=np.int64)
        cuts = np.arange(self.k, self.n - 1, self.k)
        d[cuts] = 2 * self.k
        return d

    def host_edge_count(self) -> int:
        return self.m * (self.k + 1) * self.k // 2


class PseudoCliqueGraph(GraphView):
    """Near-complete graph stored as its (sparse) complement.

    Vertex v is adjacent to every other vertex except those in the sorted
    deleted list del[v]. Used for k-pseudo-cliques where n <= (1+gamma)k.
    """

    def __init__(self, n: int, del_offsets: np.ndarray, del_targets: np.ndarray):
        self.n = n
        self.del_offsets = del_offsets
        self.del_targets = del_targets

    def _deleted(self, v: int) -> np.ndarray:
        return self.del_targets[self.del_offsets[v] : self.del_offsets[v + 1]]

    def deleted(self, v: int) -> np.ndarray:
        return self._deleted(v)

    def degree(self, v: int) -> int:
        return self.n - 1 - int(self.del_offsets[v + 1] - self.del_offsets[v])

    def neighbors(self, v: int) -> np.ndarray:
        nb = np.arange(self.n, dtype=np.int64)
        drop = np.concatenate([self._deleted(v), [v]])
        mask = np.ones(self.n, dtype=bool)
        mask[drop] = False
        return nb[mask]

    def has_edge(self, u: int, v: int) -> bool:
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            return False
        d = self._deleted(u)
        i = np.searchsorted(d, v)
        return not (i < len(d) and d[i] == v)

    def u_interval(self, v: int):
        return (0, self.n - 1)

    def interval_arrays(self):
        return (
            np.zeros(self.n, dtype=np.int64),
            np.full(self.n, self.n - 1, dtype=np.int64),
        )

    def deleted_arrays(self):
        return self.del_offsets, self.del_targets

    def degrees(self) -> np.ndarray:
        return self.n - 1 - np.diff(self.del_offsets)

    def host_edge_count(self) -> int:
        return self.n * (self.n - 1) // 2 - len(self.del_targets) // 2

    def edge_arrays(self):
        # complement of a sparse deletion set; desk-scale helper
        us, vs = [], []
        for u in range(self.n):
            nb = self.neighbors(u)
            nb = nb[nb > u]
            if len(nb):
                us.append(np.full(len(nb), u, dtype=np.int64))
                vs.append(nb)
        if not us:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        return np.concatenate(us), np.concatenate(vs)


# ── generators ──────────────────────────────────────────────────────────────


def gen_complete(k: int) -> CompleteGraph:
    """Implicit K_{k+1} with degree k everywhere."""
    if k < 1:
        raise GraphError("k must be >= 1")
    return CompleteGraph(k)


def gen_complete_bipartite(k: int) -> CompleteBipartiteGraph:
    """Implicit K_{k,k} with min degree k."""
    if k < 1:
        raise GraphError("k must be >= 1")
    return CompleteBipartiteGraph(k)


def gen_clique_chain(k: int, m: int) -> CliqueChain:
    """Chain of m (k+1)-cliques sharing cut vertices; min degree k."""
    if k < 2:
        raise GraphError("k must be >= 2")
    if m < 1:
        raise GraphError("m must be >= 1")
    return CliqueChain(k, m)


def _pairing_attempt(k: int, n: int, rng: np.random.Generator):
    stubs = np.repeat(np.arange(n, dtype=np.int64), k)
    rng.shuffle(stubs)
    us = stubs[0::2].copy()
    vs = stubs[1::2].copy()
    return us, vs


def _repair_pairing(us, vs, n, rng, max_rounds=200):
    """Double-edge swaps removing loops/multi-edges; keeps the pairing k-regular."""
    for _ in range(max_rounds):
        keys = pack_edge(us, vs)
        order = np.argsort(keys, kind="stable")
        sk = keys[order]
        bad = np.zeros(len(keys), dtype=bool)
        bad[order[1:]] |= sk[1:] == sk[:-1]  # duplicates keep first occurrence
        bad |= us == vs
        idx = np.flatnonzero(bad)
        if len(idx) == 0:
            return us, vs
        # swap each bad pair's second endpoint with a random other pair's
        partners = rng.integers(0, len(us), size=len(idx))
        for b, q in zip(idx, partners):
            vs[b], vs[q] = vs[q], vs[b]
    return None


def gen_random_regular(k: int, n: int, seed: int) -> ExplicitGraph:
    """Simple k-regular graph via the pairing model, deterministic per seed.

    Loops/multi-edges are repaired with double-edge swaps; bounded restarts,
    then GenerationError (caller retries with a new seed).
    """
    if n <= k:
        raise GraphError("need n > k")
    if (n * k) % 2 != 0:
        raise GraphError("n*k must be even")
    rng = np.random.default_rng(np.uint64(seed))
    for _ in range(50):
        us, vs = _pairing_attempt(k, n, rng)
        fixed = _repair_pairing(us, vs, n, rng)
        if fixed is None:
            continue
        us, vs = fixed
        lo = np.minimum(us, vs)
        hi = np.maximum(us, vs)
        return ExplicitGraph.from_arrays(lo, hi, n)
    raise GenerationError(f"pairing model failed for k={k}, n={n}, seed={seed}")


def gen_pseudo_clique(k: int, gamma: float = 0.05, seed: int = 0) -> PseudoCliqueGraph:
    """k-pseudo-clique: n = floor((1+gamma)k) vertices, min degree >= k.

    Starts from K_n and greedily deletes a seed-shuffled stream of edges while
    both endpoints stay above degree k.
    """
    if not (0 < gamma):
        raise GraphError("gamma must be positive")
    if k < 1:
        raise GraphError("k must be >= 1")
    n = int((1 + gamma) * k)
    if n < k + 1:
        n = k + 1
    total = n * (n - 1) // 2
    slack0 = n - 1 - k
    deg = np.full(n, n - 1, dtype=np.int64)
    del_u, del_v = [], []
    if slack0 > 0:
        rng = np.random.default_rng(np.uint64(seed))
        perm = rng.permutation(total)
        unfrozen = np.ones(n, dtype=bool)
        chunk = 1 << 16
        for start in range(0, total, chunk):
            block = perm[start : start + chunk]
            # invert linear index over the upper triangle (row-major, u < v)
            u = (
                n
                - 2
                - np.floor(
                    np.sqrt(-8.0 * block + 4.0 * n * (n - 1) - 7) / 2.0 - 0.5
                )
            ).astype(np.int64)
            v = (block + u + 1 - (n * (n - 1) // 2) + ((n - u) * (n - u - 1)) // 2).astype(
                np.int64
            )
            live = unfrozen[u] & unfrozen[v]
            if not live.any():
                if not unfrozen.any():
                    break
                continue
            for uu, vv in zip(u[live], v[live]):
                if deg[uu] > k and deg[vv] > k:
                    deg[uu] -= 1
                    deg[vv] -= 1
                    del_u.append(uu)
                    del_v.append(vv)
                    if deg[uu] == k:
                        unfrozen[uu] = False
                    if deg[vv] == k:
                        unfrozen[vv] = False
    if del_u:
        us = np.array(del_u, dtype=np.int64)
        vs = np.array(del_v, dtype=np.int64)
        src = np.concatenate([us, vs])
        dst = np.concatenate([vs, us])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.add.at(offsets, src + 1, 1)
        np.cumsum(offsets, out=offsets)
        return PseudoCliqueGraph(n, offsets, dst)
    return PseudoCliqueGraph(
        n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
    )


def min_degree(g: GraphView) -> int:
    """Minimum vertex degree; 0 for the empty graph."""
    if g.n == 0:
        return 0
    return int(g.degrees().min())


def induced_subgraph(g: GraphView, vertices) -> tuple[ExplicitGraph, np.ndarray]:
    """Relabeled induced subgraph plus the local-id -> host-id mapping."""
    vs = np.unique(np.asarray(list(vertices), dtype=np.int64))
    inv = np.full(g.n, -1, dtype=np.int64)
    inv[vs] = np.arange(len(vs))
    us_out, vs_out = [], []
    for local_u, host_u in enumerate(vs.tolist()):
        nb = g.neighbors(host_u)
        nb = nb[nb > host_u]
        keep = nb[inv[nb] >= 0]
        if len(keep):
            us_out.append(np.full(len(keep), local_u, dtype=np.int64))
            vs_out.append(inv[keep])
    if us_out:
        sub = ExplicitGraph.from_arrays(
            np.concatenate(us_out), np.concatenate(vs_out), len(vs)
        )
    else:
        sub = ExplicitGraph(
            np.zeros(len(vs) + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
        )
    return sub, vs


def cached_explicit(g: GraphView) -> ExplicitGraph:
    """Explicit CSR view of g, memoized on the instance (desk-scale hosts)."""
    if isinstance(g, ExplicitGraph):
        return g
    cached = getattr(g, "_explicit_cache", None)
    if cached is None:
        cached = g.to_explicit()
        g._explicit_cache = cached
    return cached


# ── text edge-list format: first line "n m", then m lines "u v" ─────────────


def save_edge_list(g: GraphView, path: str) -> None:
    us, vs = g.edge_arrays()
    with open(path, "w") as fh:
        fh.write(f"{g.n} {len(us)}\n")
        for u, v in zip(us.tolist(), vs.tolist()):
            fh.write(f"{u} {v}\n")


def load_edge_list(path: str) -> ExplicitGraph:
    with open(path) as fh:
        header = fh.readline().split()
        n, m = int(header[0]), int(header[1])
        pairs = []
        for _ in range(m):
            u, v = fh.readline().split()
            pairs.append((int(u), int(v)))
    return build_explicit(pairs, n)


@dataclass
class GeneratorSpec:
    """Config-file description of a host graph family."""

    family: str
    k: int = 0
    n: int = 0
    m: int = 1
    gamma: float = 0.05
    seed: int = 0
    path: str = ""
    extras: dict = field(default_factory=dict)

    FAMILIES = ("complete", "complete-bipartite", "clique-chain", "random-regular",
                "pseudo-clique", "edge-list")

    @classmethod
    def from_dict(cls, d: dict, k: int | None = None, seed: int | None = None):
        d = dict(d)
        fam = d.pop("family")
        spec = cls(family=fam)
        for key, val in d.items():
            if hasattr(spec, key):
                setattr(spec, key, val)
            else:
                spec.extras[key] = val
        if k is not None:
            spec.k = k
        if seed is not None:
            spec.seed = seed
        return spec

    def build(self) -> GraphView:
        f = self.family
        if f == "complete":
            return gen_complete(self.k)
        if f == "complete-bipartite":
            return gen_complete_bipartite(self.k)
        if f == "clique-chain":
            return gen_clique_chain(self.k, self.m)
        if f == "random-regular":
            return gen_random_regular(self.k, self.n, self.seed)
        if f == "pseudo-clique":
            return gen_pseudo_clique(self.k, self.gamma, self.seed)
        if f == "edge-list":
            return load_edge_list(self.path)
        raise GraphError(f"unknown family {f!r}")
