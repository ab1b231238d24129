"""Structural queries on a DFS forest: ancestors, heights, bounded-distance
descendant counts, and the up/down, skinny, free vertex classifications with
the back-edge candidate sets B(v).
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .dfs import RootedForest
from .graphs import GraphView
from .oracle import PercolationOracle

__all__ = [
    "ancestor_at",
    "height",
    "heights_all",
    "tree_distance",
    "desc_within_batch",
    "VertexClassification",
    "classify",
    "back_edge_sets",
    "classification_to_csv",
]


def ancestor_at(f: RootedForest, v: int, i: int):
    """The unique ancestor of v at distance exactly i, or None beyond the root."""
    if i < 0:
        raise ValueError("distance must be >= 0")
    if i > f.depth[v]:
        return None
    x = v
    for _ in range(i):
        x = int(f.parent[x])
    return x


def heights_all(f: RootedForest) -> np.ndarray:
    """height(v) = max descendant distance; 0 for leaves (and undiscovered)."""
    h = np.zeros(f.n, dtype=np.int64)
    parent = f.parent
    for v in f.discovery_order[::-1].tolist():
        p = parent[v]
        if p >= 0 and h[p] <= h[v]:
            h[p] = h[v] + 1
    return h


def height(f: RootedForest, v: int) -> int:
    """Max distance to a descendant of v (0 for leaves).

    Walks v's subtree only; use heights_all for bulk queries.
    """
    best = 0
    stack = [(v, 0)]
    while stack:
        x, d = stack.pop()
        if d > best:
            best = d
        for c in f.children(x).tolist():
            stack.append((c, d + 1))
    return best


def tree_distance(f: RootedForest, u: int, v: int) -> int:
    """Edges on the (unique) u,v-path in the forest; requires a common root."""
    if f.root[u] != f.root[v] or f.root[u] < 0:
        raise ValueError("vertices lie in different trees")
    du, dv = int(f.depth[u]), int(f.depth[v])
    x, y = u, v
    while du > dv:
        x = int(f.parent[x])
        du -= 1
    while dv > du:
        y = int(f.parent[y])
        dv -= 1
    while x != y:
        x, y = int(f.parent[x]), int(f.parent[y])
        du -= 1
    return int(f.depth[u]) + int(f.depth[v]) - 2 * du


class _Fenwick:
    def __init__(self, n: int):
        self.n = n
        self.t = np.zeros(n + 1, dtype=np.int64)

    def add(self, i: int):
        i += 1
        t, n = self.t, self.n
        while i <= n:
            t[i] += 1
            i += i & (-i)

    def prefix(self, i: int) -> int:
        # count of added positions <= i
        s = 0
        t = self.t
        i += 1
        while i > 0:
            s += t[i]
            i -= i & (-i)
        return int(s)


def desc_within_batch(f: RootedForest, d: int) -> np.ndarray:
    """|D_<=d(v)| for every v: strict descendants at distance at most d.

    Offline sweep: vertices enter a Fenwick tree over euler positions in
    depth order while queries are answered at threshold depth(v)+d, so the
    whole batch costs O(n log n) instead of O(n*d).
    """
    n = f.n
    counts = np.zeros(n, dtype=np.int64)
    if d < 0 or n == 0:
        return counts
    disc = f.discovery_order
    if len(disc) == 0:
        return counts
    depth = f.depth
    dn = len(disc)
    by_depth = disc[np.argsort(depth[disc], kind="stable")]
    add_depths = depth[by_depth]
    q_order = disc[np.argsort(depth[disc], kind="stable")]
    bit = _Fenwick(n)
    ai = 0
    for v in q_order.tolist():
        t = depth[v] + d
        while ai < dn and add_depths[ai] <= t:
            bit.add(int(f.euler_in[by_depth[ai]]))
            ai += 1
        a, b = int(f.euler_in[v]), int(f.euler_out[v])
        counts[v] = bit.prefix(b - 1) - bit.prefix(a)
    return counts


@dataclass
class VertexClassification:
    """Per-vertex flags: free, up (vs down), skinny; parameters recorded."""

    eps: float
    k: int
    free: np.ndarray
    up: np.ndarray
    skinny: np.ndarray

    @property
    def down(self) -> np.ndarray:
        return ~self.up

    def counts(self) -> dict:
        return {
            "free": int(self.free.sum()),
            "up": int(self.up.sum()),
            "down": int((~self.up).sum()),
            "skinny": int(self.skinny.sum()),
            "non_skinny": int((~self.skinny).sum()),
        }


def classify(
    f: RootedForest,
    oracle: PercolationOracle,
    g: GraphView,
    eps: float,
    k: int,
) -> VertexClassification:
    """free: >= (1-eps)k untested incident edges; up: >= eps*k strict
    descendants; skinny: |D_<=(1-5eps)k| <= (1-4eps)k."""
    degs = g.degrees()
    tested = oracle.tested_inc
    if tested is None:
        tested = np.zeros(g.n, dtype=np.int64)
    free = (degs - tested) >= (1.0 - eps) * k
    up = (f.subtree_size - 1) >= eps * k
    d_eff = math.floor((1.0 - 5.0 * eps) * k)
    if d_eff < 0:
        within = np.zeros(g.n, dtype=np.int64)
    else:
        within = desc_within_batch(f, d_eff)
    skinny = within <= (1.0 - 4.0 * eps) * k
    return VertexClassification(eps=eps, k=k, free=free, up=up, skinny=skinny)


def back_edge_sets(
    f: RootedForest,
    oracle: PercolationOracle,
    g: GraphView,
    eps: float,
    k: int,
    targets,
) -> dict[int, np.ndarray]:
    """B(v) per target: untested host neighbors among ancestors of v at
    distance between eps*k and (1-5eps)k, ascending by ancestor depth."""
    lo_d = max(1, math.ceil(eps * k))
    hi_d = math.floor((1.0 - 5.0 * eps) * k)
    out: dict[int, np.ndarray] = {}
    for v in targets:
        v = int(v)
        found = []
        dv = int(f.depth[v])
        if hi_d >= lo_d and dv >= lo_d:
            x = v
            for _ in range(lo_d):
                x = int(f.parent[x])
            d = lo_d
            while x >= 0 and d <= hi_d:
                if g.has_edge(x, v) and not oracle.is_tested(x, v):
                    found.append(x)
                x = int(f.parent[x])
                d += 1
        out[v] = np.array(sorted(found, key=lambda u: f.depth[u]), dtype=np.int64)
    return out


def classification_to_csv(
    path: str, f: RootedForest, cls: VertexClassification
) -> None:
    """vertex,depth,height,up,skinny,free rows for the harness."""
    hs = heights_all(f)
    with open(path, "w") as fh:
        fh.write("vertex,depth,height,up,skinny,free\n")
        for v in range(f.n):
            fh.write(
                f"{v},{f.depth[v]},{hs[v]},{int(cls.up[v])},"
                f"{int(cls.skinny[v])},{int(cls.free[v])}\n"
            )
