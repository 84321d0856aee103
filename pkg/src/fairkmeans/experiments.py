"""Experiment harness: dataset prep, repeated seeded trials, reporting.

A run loads a CSV, optionally normalizes and subsamples it, computes radius
bounds, then executes independent trials of the selected algorithm with seeds
``base_seed + i``.  Wall time is measured per trial and excludes preparation.
The report is JSON (the stable interface) plus a cosmetic text table; all
non-timing fields are deterministic for a given config and seed.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import metrics
from .dataset import (
    EXACT_RADII_RECOMMENDED_MAX,
    Dataset,
    RadiusBounds,
    compute_radii,
    load_points,
    normalize,
    subsample,
)
from .baselines import greedy_baseline, vanilla_kmeans
from .errors import InfeasibleInstanceError
from .local_search import LsConfig, run
from .refine import FlConfig, flloyd_run

ALGORITHMS = ("lspp", "greedy", "vanilla")


@dataclass
class ExperimentConfig:
    """One experiment: input, preprocessing, algorithm, and trial plan.

    ``delta_mode`` is ``"exact"``, ``"sampled:<m>"``, or None to pick exact
    radii up to 50,000 points and a 1000-point sample above that.  With
    ``eval_on_full`` set and a subsample in use, solutions are solved on the
    sample but scored on the full dataset, against radii recomputed on the
    full dataset.
    """

    input_path: str | Path
    columns: Sequence[int] | None = None
    header: bool = False
    normalize: bool = False
    sample: int | None = None
    k: int = 10
    gamma: float = 3.0
    iterations: int = 500
    flloyd_iters: int = 20
    delta_mode: str | None = None
    algorithm: str = "lspp"
    trials: int = 10
    seed: int = 0
    out: str | Path | None = None
    eval_on_full: bool = False

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.iterations < 0 or self.flloyd_iters < 0:
            raise ValueError("iteration counts must be nonnegative")
        if self.sample is not None and self.sample < 1:
            raise ValueError("sample size must be positive")
        if self.delta_mode is not None:
            parse_delta_mode(self.delta_mode, 1)


@dataclass
class TrialRecord:
    trial: int
    seed: int
    feasible: bool
    wall_time_seconds: float
    kmeans_cost: float | None = None
    kmedian_cost: float | None = None
    bound_ratio: float | None = None
    bound_witness: int | None = None
    accepted_swaps: int | None = None
    cost_trace: list[float] = field(default_factory=list)
    flloyd_cost_trace: list[float] | None = None
    error: str | None = None
    anchors_needed: int | None = None


@dataclass
class ExperimentReport:
    config: dict
    n: int
    d: int
    n_full: int
    trials: list[TrialRecord]
    aggregates: dict
    feasible_trials: int

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "config": self.config,
                "dataset": {"n": self.n, "d": self.d, "n_full": self.n_full},
                "trials": [dataclasses.asdict(t) for t in self.trials],
                "aggregates": self.aggregates,
                "feasible_trials": self.feasible_trials,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def text_table(self) -> str:
        head = (
            f"algorithm={self.config['algorithm']} k={self.config['k']} "
            f"gamma={self.config['gamma']} n={self.n} d={self.d} "
            f"trials={len(self.trials)}"
        )
        cols = "trial  seed  feasible  kmeans_cost  kmedian_cost  bound_ratio  swaps    time_s"
        lines = [head, cols]
        for t in self.trials:
            if t.feasible:
                lines.append(
                    f"{t.trial:5d}  {t.seed:4d}  {'yes':>8}  {t.kmeans_cost:11.4f}  "
                    f"{t.kmedian_cost:12.4f}  {_fmt(t.bound_ratio):>11}  "
                    f"{_fmt_int(t.accepted_swaps):>5}  {t.wall_time_seconds:8.3f}"
                )
            else:
                lines.append(
                    f"{t.trial:5d}  {t.seed:4d}  {'no':>8}  {t.error or 'infeasible'}"
                )
        for name in ("mean", "std"):
            agg = self.aggregates or {}
            lines.append(
                f"{name:>5}  {'':4}  {'':8}  "
                f"{_fmt(_agg(agg, 'kmeans_cost', name)):>11}  "
                f"{_fmt(_agg(agg, 'kmedian_cost', name)):>12}  "
                f"{_fmt(_agg(agg, 'bound_ratio', name)):>11}  "
                f"{_fmt(_agg(agg, 'accepted_swaps', name)):>5}  "
                f"{_fmt(_agg(agg, 'wall_time_seconds', name)):>8}"
            )
        return "\n".join(lines)


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.4f}"


def _fmt_int(x) -> str:
    return "-" if x is None else str(x)


def _agg(aggregates: dict, key: str, stat: str):
    entry = aggregates.get(key)
    return None if entry is None else entry.get(stat)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def parse_delta_mode(mode: str, n: int) -> tuple[str, int]:
    """Parse "exact" or "sampled:<m>" into (mode, sample_size)."""
    if mode == "exact":
        return "exact", 0
    if mode.startswith("sampled:"):
        try:
            m = int(mode.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad delta mode {mode!r}; use exact or sampled:<m>") from None
        if m < 1:
            raise ValueError("sampled delta mode needs a positive sample size")
        return "sampled", m
    raise ValueError(f"bad delta mode {mode!r}; use exact or sampled:<m>")


def _resolve_delta(cfg: ExperimentConfig, ds: Dataset) -> RadiusBounds:
    if cfg.delta_mode is None:
        if ds.n <= EXACT_RADII_RECOMMENDED_MAX:
            return compute_radii(ds, cfg.k, mode="exact")
        return compute_radii(ds, cfg.k, mode="sampled", sample_size=1000, seed=cfg.seed)
    mode, m = parse_delta_mode(cfg.delta_mode, ds.n)
    if mode == "exact":
        return compute_radii(ds, cfg.k, mode="exact")
    return compute_radii(ds, cfg.k, mode="sampled", sample_size=m, seed=cfg.seed)


def _run_trial(cfg: ExperimentConfig, ds: Dataset, delta: RadiusBounds, trial: int):
    """Returns (center positions, ls trace list, flloyd trace list or None,
    accepted swap count or None)."""
    tseed = cfg.seed + trial
    if cfg.algorithm == "vanilla":
        positions, trace = vanilla_kmeans(ds, cfg.k, tseed)
        return positions, trace.tolist(), None, None
    if cfg.algorithm == "greedy":
        sol = greedy_baseline(ds, delta, cfg.gamma, cfg.k, tseed)
        return sol.center_pos, [sol.total_cost], None, None
    sol, trace = run(
        ds, delta, LsConfig(k=cfg.k, gamma=cfg.gamma, iterations=cfg.iterations, seed=tseed)
    )
    ls_trace = [trace.initial_cost] + trace.costs.tolist()
    fl_trace = None
    if cfg.flloyd_iters > 0:
        sol, fl = flloyd_run(ds, sol, sol.anchor_set, FlConfig(iterations=cfg.flloyd_iters))
        fl_trace = fl.tolist()
    return sol.center_pos, ls_trace, fl_trace, trace.accepted_count


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Prep the dataset, run all trials, aggregate, and write the report."""
    cfg.validate()
    ds_full = load_points(cfg.input_path, columns=cfg.columns, header=cfg.header)
    if cfg.normalize:
        ds_full = normalize(ds_full)
    if cfg.sample is not None and cfg.sample < ds_full.n:
        ds = subsample(ds_full, cfg.sample, cfg.seed)
    else:
        ds = ds_full
    delta = _resolve_delta(cfg, ds)

    eval_ds, eval_delta = ds, delta
    if cfg.eval_on_full and ds is not ds_full:
        eval_ds = ds_full
        eval_delta = _resolve_delta(cfg, ds_full)

    records: list[TrialRecord] = []
    for i in range(cfg.trials):
        t0 = time.perf_counter()
        try:
            positions, ls_trace, fl_trace, swaps = _run_trial(cfg, ds, delta, i)
        except InfeasibleInstanceError as exc:
            records.append(
                TrialRecord(
                    trial=i,
                    seed=cfg.seed + i,
                    feasible=False,
                    wall_time_seconds=time.perf_counter() - t0,
                    error=str(exc),
                    anchors_needed=exc.anchors_needed,
                )
            )
            continue
        wall = time.perf_counter() - t0
        ratio, witness = metrics.bound_ratio(eval_ds, eval_delta, positions)
        records.append(
            TrialRecord(
                trial=i,
                seed=cfg.seed + i,
                feasible=True,
                wall_time_seconds=wall,
                kmeans_cost=metrics.cost(eval_ds, positions, p=2),
                kmedian_cost=metrics.cost(eval_ds, positions, p=1),
                bound_ratio=ratio,
                bound_witness=witness,
                accepted_swaps=swaps,
                cost_trace=ls_trace,
                flloyd_cost_trace=fl_trace,
            )
        )

    ok = [t for t in records if t.feasible]
    aggregates = {}
    for key in ("kmeans_cost", "kmedian_cost", "bound_ratio", "wall_time_seconds", "accepted_swaps"):
        vals = [getattr(t, key) for t in ok if getattr(t, key) is not None]
        aggregates[key] = (
            None
            if not vals
            else {"mean": float(np.mean(vals)), "std": float(np.std(vals))}
        )

    config_dict = dataclasses.asdict(cfg)
    if config_dict["columns"] is not None:
        config_dict["columns"] = list(config_dict["columns"])
    report = ExperimentReport(
        config=_jsonable(config_dict),
        n=ds.n,
        d=ds.d,
        n_full=ds_full.n,
        trials=records,
        aggregates=aggregates,
        feasible_trials=len(ok),
    )
    if cfg.out is not None:
        Path(cfg.out).write_text(report.to_json() + "\n")
    return report
