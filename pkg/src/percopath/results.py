"""Certified construction outputs: vertex sequences plus the edges
certifying each step, serializable to JSON.

A certificate is a triple of aligned arrays (us, vs, round_tags): edge i was
revealed alive by the oracle with round tag round_tags[i].
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

__all__ = ["Certificate", "make_certificate", "cert_concat", "CycleResult", "PathResult"]

Certificate = tuple[np.ndarray, np.ndarray, np.ndarray]


def make_certificate(us, vs, tags) -> Certificate:
    us = np.atleast_1d(np.asarray(us, dtype=np.int64))
    vs = np.atleast_1d(np.asarray(vs, dtype=np.int64))
    if np.isscalar(tags) or getattr(tags, "ndim", 1) == 0:
        tags = np.full(len(us), int(tags), dtype=np.int64)
    else:
        tags = np.asarray(tags, dtype=np.int64)
    return us, vs, tags


def empty_certificate() -> Certificate:
    z = np.empty(0, dtype=np.int64)
    return z, z.copy(), z.copy()


def cert_concat(*certs: Certificate) -> Certificate:
    certs = [c for c in certs if c is not None and len(c[0])]
    if not certs:
        return empty_certificate()
    return (
        np.concatenate([c[0] for c in certs]),
        np.concatenate([c[1] for c in certs]),
        np.concatenate([c[2] for c in certs]),
    )


@dataclass
class CycleResult:
    """A certified cycle: consecutive vertices (cyclically) joined by edges
    certified alive."""

    cycle: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    tag: str = "failed"  # back-edge | zig-zag | failed
    certificate: Certificate = field(default_factory=empty_certificate)
    seed: int = 0
    rounds: dict[int, float] = field(default_factory=dict)  # round_tag -> p
    diagnostics: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.tag != "failed"

    @property
    def length(self) -> int:
        return len(self.cycle) if self.found else 0

    def to_json(self, include_sequence: bool = True) -> str:
        body = {
            "length": self.length,
            "tag": self.tag,
            "j": self.diagnostics.get("j"),
            "epsilon": self.diagnostics.get("eps"),
            "seed": self.seed,
            "certified_edges": int(len(self.certificate[0])),
            "diagnostics": _plain(self.diagnostics),
        }
        if include_sequence:
            body["cycle"] = [int(v) for v in self.cycle]
        return json.dumps(body)


@dataclass
class PathResult:
    """A certified path; length counts edges."""

    path: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    tag: str = "failed"  # stack-path | bipartite | sprinkle-case1..3 |
    #                      pseudo-clique-route | failed
    certificate: Certificate = field(default_factory=empty_certificate)
    seed: int = 0
    rounds: dict[int, float] = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.tag != "failed" and len(self.path) > 0

    @property
    def length(self) -> int:
        return max(0, len(self.path) - 1) if self.found else 0

    @property
    def start(self) -> int | None:
        return int(self.path[0]) if len(self.path) else None

    def to_json(self, include_sequence: bool = True) -> str:
        body = {
            "length": self.length,
            "tag": self.tag,
            "start": self.start,
            "epsilon": self.diagnostics.get("eps"),
            "seed": self.seed,
            "certified_edges": int(len(self.certificate[0])),
            "diagnostics": _plain(self.diagnostics),
        }
        if include_sequence:
            body["path"] = [int(v) for v in self.path]
        return json.dumps(body)


def _plain(d: dict) -> dict:
    out = {}
    for key, val in d.items():
        if hasattr(val, "tolist"):
            val = val.tolist()
        elif isinstance(val, (list, tuple)):
            val = [int(x) if hasattr(x, "item") else x for x in val]
        elif hasattr(val, "item"):
            val = val.item()
        out[key] = val
    return out
