"""Bound-formula evaluators, the Chernoff tail utility, and the exact
small-instance longest path/cycle oracle used to validate certificates.
"""

from __future__ import annotations

import math

import numpy as np

from .graphs import ExplicitGraph

__all__ = ["chernoff_bound", "eval_bound", "BOUND_CURVES", "brute_longest"]


def chernoff_bound(n: int, p: float, lam: float) -> float:
    """Two-sided binomial tail bound 2*exp(-lam^2/(3np)) for 0 < lam <= np."""
    np_ = n * p
    if not (0 < lam <= np_):
        raise ValueError(f"lambda={lam} outside (0, np={np_}]")
    return min(1.0, 2.0 * math.exp(-(lam * lam) / (3.0 * np_)))


def _path_alpha(c: float, k: float) -> float:
    return (1.0 - c * math.exp(-c)) * k


def _cycle_beta(c: float, k: float) -> float:
    return (1.0 - 5.0 * c ** (-1.0 / 5.0)) * k


def _lemma32(c: float, k: float) -> float:
    return (1.0 - 2.0 * c ** (-1.0 / 2.0)) * k


def _lemma31(c: float, k: float) -> float:
    return (2.0 - 6.0 * c ** (-1.0 / 2.0)) * k


BOUND_CURVES = {
    "path-alpha": _path_alpha,
    "cycle-beta": _cycle_beta,
    "lemma32": _lemma32,
    "lemma31": _lemma31,
}


def eval_bound(curve: str, c: float, k: float) -> float:
    """Evaluate a named bound curve, clamped into [0, 2k]."""
    fn = BOUND_CURVES.get(curve)
    if fn is None:
        raise ValueError(f"unknown curve {curve!r}; known: {sorted(BOUND_CURVES)}")
    return min(max(fn(c, k), 0.0), 2.0 * k)


def _popcounts(n_masks: int) -> np.ndarray:
    m = np.arange(n_masks, dtype=np.uint32)
    cnt = np.zeros(n_masks, dtype=np.uint8)
    while m.any():
        cnt += (m & 1).astype(np.uint8)
        m >>= 1
    return cnt


def brute_longest(gp: ExplicitGraph, mode: str = "path") -> int:
    """Exact longest path (edges) or cycle (vertices=edges) length, n <= 18.

    Bitmask DP over (vertex subset, endpoint-set) states, processed by
    subset popcount layer so the numpy transitions stay order-correct.
    """
    if mode not in ("path", "cycle"):
        raise ValueError("mode must be 'path' or 'cycle'")
    n = gp.n
    if n > 18:
        raise ValueError(f"n={n} exceeds the exact-oracle limit 18")
    if n == 0:
        return 0
    adj = np.zeros(n, dtype=np.uint32)
    for v in range(n):
        for w in gp.neighbors(v).tolist():
            adj[v] |= np.uint32(1 << w)
    size = 1 << n
    pc = _popcounts(size)
    layers = [np.flatnonzero(pc == t).astype(np.uint32) for t in range(n + 1)]
    bits = np.uint32(1) << np.arange(n, dtype=np.uint32)

    restrict = mode == "cycle"  # cycle paths rooted at the subset minimum
    ends = np.zeros(size, dtype=np.uint32)
    for v in range(n):
        ends[1 << v] = 1 << v
    for t in range(1, n):
        layer = layers[t]
        live = layer[ends[layer] != 0]
        if len(live) == 0:
            continue
        e_live = ends[live]
        for w in range(n):
            bw = bits[w]
            sel = ((live & bw) == 0) & ((e_live & adj[w]) != 0)
            if restrict:
                sel &= bw > (live & (~live + np.uint32(1)))  # extend above the root only
            if not sel.any():
                continue
            tgt = live[sel] | bw
            np.bitwise_or.at(ends, tgt, bw)
    if mode == "path":
        nz = np.flatnonzero(ends != 0)
        return int(pc[nz].max()) - 1 if len(nz) else 0
    # cycle: endpoint adjacent to the subset's root closes it
    masks = np.flatnonzero(ends != 0).astype(np.uint32)
    masks = masks[pc[masks] >= 3]
    if len(masks) == 0:
        return 0
    roots = masks & (~masks + np.uint32(1))
    root_v = np.log2(roots.astype(np.float64)).astype(np.int64)
    closes = (ends[masks] & adj[root_v]) != 0
    if not closes.any():
        return 0
    return int(pc[masks[closes]].max())
