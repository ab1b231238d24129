"""Monte Carlo trial runner: grid sweeps over (k, c) with per-trial seeds
derived splittably from the master seed, certificate re-validation of every
success, and deterministic CSV/JSON outputs."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import json
import math
import time

import numpy as np

from .bounds import eval_bound
from .cycles import find_long_cycle
from .dfs import check_properties, run_dfs
from .graphs import GeneratorSpec, GraphView
from .oracle import PercolationOracle, derive_seed
from .paths import bipartite_long_path, find_long_path, path_from_set
from .pseudoclique import analyze_pseudo_clique
from .validate import validate_cycle, validate_path

__all__ = ["ExperimentConfig", "TrialRecord", "run_trials", "write_csv",
           "summarize", "CSV_HEADER"]

CSV_HEADER = "generator,k,c,trial,seed,mode,achieved,bound,attained,tag,ms"

_HOST_SALT = 0x486F7374  # distinct stream for host-generation seeds


@dataclass
class ExperimentConfig:
    generator: dict
    k_grid: list
    c_grid: list
    trials: int = 10
    master_seed: int = 0
    mode: str = "cycle"  # cycle | path | path-from-set | bipartite | dfs | pseudo
    curve: str = ""
    out_csv: str | None = None
    out_json: str | None = None
    workers: int = 1
    reproducible: bool = False
    fresh_host_per_trial: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def default_curve(self) -> str:
        return {
            "cycle": "cycle-beta",
            "path": "path-alpha",
            "path-from-set": "lemma32",
            "bipartite": "lemma31",
        }.get(self.mode, "")


@dataclass
class TrialRecord:
    generator: str
    k: int
    c: float
    trial: int
    seed: int
    mode: str
    achieved: int
    bound: float
    attained: bool
    tag: str
    ms: int
    valid: bool = True
    note: str = ""
    diagnostics: dict = field(default_factory=dict)

    def csv_row(self, reproducible: bool) -> str:
        ms = 0 if reproducible else self.ms
        return (
            f"{self.generator},{self.k},{self.c:g},{self.trial},{self.seed},"
            f"{self.mode},{self.achieved},{self.bound:.6g},"
            f"{int(self.attained)},{self.tag},{ms}"
        )


_WORKER_HOST: GraphView | None = None


def _set_worker_host(host: GraphView) -> None:
    global _WORKER_HOST
    _WORKER_HOST = host


def run_one_trial(host: GraphView, mode: str, k: int, c: float, seed: int,
                  curve: str, gen_name: str, trial: int) -> TrialRecord:
    """One independent trial; never raises for construction failures."""
    t0 = time.monotonic()
    p = min(1.0, c / k)
    achieved = 0
    tag = "failed"
    valid = True
    note = ""
    diag: dict = {}
    bound = eval_bound(curve, c, k) if curve else 0.0
    if mode == "cycle":
        res = find_long_cycle(host, k, c, seed)
        achieved, tag, diag = res.length, res.tag, res.diagnostics
        valid, note = validate_cycle(host, res)
    elif mode == "path":
        res = find_long_path(host, k, c, seed)
        achieved, tag, diag = res.length, res.tag, res.diagnostics
        valid, note = validate_path(host, res)
    elif mode == "path-from-set":
        rng = np.random.default_rng(np.uint64(seed))
        v0 = rng.choice(host.n, size=min(host.n, math.ceil(math.log(max(k, 2)))),
                        replace=False)
        oracle = PercolationOracle(p, seed, round_tag=0, graph=host)
        res = path_from_set(host, oracle, v0, c, k)
        achieved, tag, diag = res.length, res.tag, res.diagnostics
        valid, note = validate_path(host, res)
        if res.found and not diag.get("start_in_v0", False):
            achieved = 0
            note = "start outside V0"
    elif mode == "bipartite":
        oracle = PercolationOracle(p, seed, round_tag=0, graph=host)
        res = bipartite_long_path(host, oracle, c, k)
        achieved, tag, diag = res.length, res.tag, res.diagnostics
        valid, note = validate_path(host, res)
    elif mode == "dfs":
        oracle = PercolationOracle(p, seed, round_tag=0, graph=host)
        small = host.n <= 2000
        f, trace = run_dfs(host, oracle, record_trace=small)
        achieved = trace.n_queries
        bound = 2.0 * host.n * k / c
        tag = "dfs"
        if small:
            rep = check_properties(trace, host)
            valid = rep.ok
            note = "" if rep.ok else f"property failure at {rep.first_offence}"
        diag = {"roots": trace.n_roots, "max_depth": int(f.depth.max())}
    elif mode == "pseudo":
        gamma = host.n / k - 1.0
        rep = analyze_pseudo_clique(host, k=k, c=c, gamma=gamma, seed=seed)
        achieved = rep.a_size
        bound = (1.0 - 2.0 * c * math.exp(-c)) * k
        tag = "pseudo"
        diag = {"v2": rep.v2_size, "x": rep.x_size, "w": rep.w_size}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ms = int((time.monotonic() - t0) * 1000)
    attained = bool(achieved >= bound) if mode != "dfs" else bool(
        achieved <= bound
    )
    return TrialRecord(
        generator=gen_name, k=k, c=c, trial=trial, seed=seed, mode=mode,
        achieved=achieved, bound=bound, attained=attained, tag=tag, ms=ms,
        valid=valid, note=note, diagnostics=diag,
    )


def _pool_trial(args):
    mode, k, c, seed, curve, gen_name, trial = args
    return run_one_trial(_WORKER_HOST, mode, k, c, seed, curve, gen_name, trial)


def run_trials(cfg: ExperimentConfig):
    """Execute the sweep; returns (records, summary). Trial failures are
    recorded, never abort the sweep; records come back in trial order."""
    curve = cfg.curve or cfg.default_curve()
    records: list[TrialRecord] = []
    gen_name = cfg.generator.get("family", "edge-list")
    cell_index = 0
    for k in cfg.k_grid:
        for c in cfg.c_grid:
            host_seed = derive_seed(cfg.master_seed ^ _HOST_SALT, cell_index)
            spec = GeneratorSpec.from_dict(dict(cfg.generator), k=int(k),
                                           seed=host_seed)
            host = spec.build()
            tasks = []
            for t in range(cfg.trials):
                seed = derive_seed(cfg.master_seed, cell_index * 1_000_003 + t)
                tasks.append((cfg.mode, int(k), float(c), seed, curve,
                              gen_name, t))
            if cfg.workers > 1:
                with ProcessPoolExecutor(
                    max_workers=cfg.workers,
                    initializer=_set_worker_host,
                    initargs=(host,),
                ) as pool:
                    cell_records = list(pool.map(_pool_trial, tasks))
            else:
                cell_records = [run_one_trial(host, *task) for task in tasks]
            records.extend(cell_records)
            cell_index += 1
    summary = summarize(records, cfg)
    if cfg.out_csv:
        write_csv(records, cfg.out_csv, cfg.reproducible)
    if cfg.out_json:
        with open(cfg.out_json, "w") as fh:
            json.dump(summary, fh, indent=2)
    return records, summary


def write_csv(records, path: str, reproducible: bool = False) -> None:
    with open(path, "w") as fh:
        if not reproducible:
            fh.write(f"# generated {time.strftime('%Y-%m-%dT%H:%M:%S')}\n")
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(r.csv_row(reproducible) + "\n")


def summarize(records, cfg: ExperimentConfig | None = None) -> dict:
    cells: dict = {}
    for r in records:
        cells.setdefault((r.k, r.c), []).append(r)
    out = []
    for (k, c), rs in sorted(cells.items()):
        lens = np.array([r.achieved for r in rs], dtype=float)
        out.append(
            {
                "k": k,
                "c": c,
                "mode": rs[0].mode,
                "trials": len(rs),
                "mean": float(lens.mean()),
                "p5": float(np.percentile(lens, 5)),
                "success_rate": float(np.mean([r.tag != "failed" for r in rs])),
                "attainment_rate": float(np.mean([r.attained for r in rs])),
                "all_valid": bool(all(r.valid for r in rs)),
            }
        )
    summary = {"cells": out}
    if cfg is not None:
        summary["config"] = {
            "generator": cfg.generator,
            "mode": cfg.mode,
            "curve": cfg.curve or cfg.default_curve(),
            "trials": cfg.trials,
            "master_seed": cfg.master_seed,
        }
    return summary
