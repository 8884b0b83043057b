"""Benchmark harness: selector x dataset grids with metric aggregation.

``run_benchmark`` executes every configured algorithm on every configured
dataset for ``repeats`` seeded runs, then aggregates per-cell metrics:
AUC of the VE curve, the smallest k reaching each VE threshold, relative
performance against the other algorithms in the grid, metric values at
requested selection sizes, median wall-clock time, and speed-up versus
FSCA.  Failures are captured per cell so one broken combination does not
abort the grid.

Conventions baked in here:

* Seeds are ``seed_base + run_index`` and are recorded in the report.
  Seeded (simulated) sources are regenerated per run; CSV sources are
  fixed data, so their repeats differ only in timing.
* Centering is shared preprocessing and excluded from timing; unit
  normalization and covariance construction happen inside the selectors
  that need them and are therefore timed.
* Integer summaries (k at threshold) use the lower median; continuous
  summaries use the standard median.  A threshold never reached counts as
  infinity in the median, and the summary is None when the median itself
  is unreached.
* A selector that stops early (span exhausted, VE at its plateau) yields
  a short curve; curves are padded with their last value when alignment
  with other algorithms requires it.
* AUC is reported only when the run covers k = 1..v-1.
* Metric values at k (VE/FP/MI) are evaluated with one shared model per
  dataset: FP on the unit-normalized columns, MI under the default noise
  scale, regardless of per-algorithm options.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .dataset import Dataset, center_columns, load_csv, normalize_unit
from .errors import SelectionError, ThresholdNeverReached
from .metrics import (
    CovarianceModel,
    VECurve,
    auc,
    frame_potential,
    k_at_threshold,
    mutual_information,
    relative_performance,
)
from .selectors import ALGORITHMS, SelectionResult
from .simgen import SimSpec, dataset_from_spec

__all__ = [
    "DatasetSource",
    "AlgoConfig",
    "BenchConfig",
    "BenchCell",
    "BenchmarkReport",
    "run_benchmark",
    "measure_speedup",
    "emit_report",
    "report_from_json",
]

SCHEMA_VERSION = "1.0.0"

#: Fixed leading CSV columns; k-at-threshold columns follow, one per
#: configured threshold, named ``k{n}pct``.
CSV_FIXED_COLUMNS = (
    "dataset",
    "algorithm",
    "auc",
    "r",
    "elapsed_median_s",
    "speedup_vs_fsca",
)


# =========================================================================
# Configuration
# =========================================================================


@dataclass(frozen=True)
class DatasetSource:
    """One dataset in the grid: either a CSV file or a simulation spec."""

    name: str
    csv_path: str | None = None
    sim: SimSpec | None = None
    has_header: bool = False

    def __post_init__(self):
        if not self.name:
            raise ValueError("dataset name must be nonempty")
        if (self.csv_path is None) == (self.sim is None):
            raise ValueError(f"dataset {self.name!r}: provide exactly one of csv_path and sim")

    @property
    def seeded(self) -> bool:
        return self.sim is not None

    def load(self, seed: int | None = None) -> Dataset:
        """Materialize the raw (uncentered) dataset."""
        if self.csv_path is not None:
            return load_csv(self.csv_path, has_header=self.has_header)
        sim = self.sim if seed is None else replace(self.sim, seed=seed)
        return dataset_from_spec(sim)

    def to_dict(self) -> dict:
        out: dict = {"name": self.name}
        if self.csv_path is not None:
            out["csv_path"] = self.csv_path
            out["has_header"] = self.has_header
        else:
            out["sim"] = {
                "family": self.sim.family,
                "m": self.sim.m,
                "seed": self.sim.seed,
                "params": dict(self.sim.params),
            }
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "DatasetSource":
        sim = None
        if "sim" in raw:
            s = raw["sim"]
            sim = SimSpec(
                family=s["family"],
                m=int(s.get("m", 1000)),
                seed=int(s.get("seed", 0)),
                params=dict(s.get("params", {})),
            )
        return cls(
            name=raw["name"],
            csv_path=raw.get("csv_path"),
            sim=sim,
            has_header=bool(raw.get("has_header", False)),
        )


@dataclass(frozen=True)
class AlgoConfig:
    """One algorithm in the grid with its per-algorithm options."""

    name: str
    sigma: float | None = None
    engine: str | None = None

    def __post_init__(self):
        if self.name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.name!r}; known: {sorted(ALGORITHMS)}")
        if self.sigma is not None and self.name != "itfs":
            raise ValueError(f"sigma applies only to itfs, not {self.name!r}")
        if self.engine is not None:
            if self.name not in ("fsfp-fsca", "ufs"):
                raise ValueError(f"engine applies only to fsfp-fsca/ufs, not {self.name!r}")
            if self.engine not in ("greedy", "lazy"):
                raise ValueError(f"engine must be greedy or lazy, got {self.engine!r}")

    def run(self, data: Dataset, k: int) -> SelectionResult:
        kwargs = {}
        if self.sigma is not None:
            kwargs["sigma"] = self.sigma
        if self.engine is not None:
            kwargs["engine"] = self.engine
        return ALGORITHMS[self.name](data, k, **kwargs)

    def to_dict(self) -> dict:
        out: dict = {"name": self.name}
        if self.sigma is not None:
            out["sigma"] = self.sigma
        if self.engine is not None:
            out["engine"] = self.engine
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "AlgoConfig":
        return cls(
            name=raw["name"],
            sigma=raw.get("sigma"),
            engine=raw.get("engine"),
        )


@dataclass(frozen=True)
class BenchConfig:
    """Full description of a benchmark grid."""

    datasets: tuple[DatasetSource, ...]
    algorithms: tuple[AlgoConfig, ...]
    k_max: int
    thresholds: tuple[float, ...] = (95.0, 99.0)
    repeats: int = 1
    seed_base: int = 0
    parallelism: int = 1
    metric_ks: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        object.__setattr__(self, "metric_ks", tuple(int(k) for k in self.metric_ks))
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ValueError("dataset names must be unique")
        algos = [a.name for a in self.algorithms]
        if len(set(algos)) != len(algos):
            raise ValueError("algorithm names must be unique")
        if self.k_max < 1:
            raise ValueError(f"k_max must be positive, got {self.k_max}")
        if self.repeats < 1:
            raise ValueError(f"repeats must be at least 1, got {self.repeats}")
        if self.parallelism < 1:
            raise ValueError(f"parallelism must be at least 1, got {self.parallelism}")
        for t in self.thresholds:
            if not 0.0 < t < 100.0:
                raise ValueError(f"thresholds must lie in (0, 100), got {t}")
        for k in self.metric_ks:
            if not 1 <= k <= self.k_max:
                raise ValueError(f"metric_ks entries must lie in 1..k_max, got {k}")

    def to_dict(self) -> dict:
        return {
            "datasets": [d.to_dict() for d in self.datasets],
            "algorithms": [a.to_dict() for a in self.algorithms],
            "k_max": self.k_max,
            "thresholds": list(self.thresholds),
            "repeats": self.repeats,
            "seed_base": self.seed_base,
            "parallelism": self.parallelism,
            "metric_ks": list(self.metric_ks),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "BenchConfig":
        return cls(
            datasets=tuple(DatasetSource.from_dict(d) for d in raw["datasets"]),
            algorithms=tuple(AlgoConfig.from_dict(a) for a in raw["algorithms"]),
            k_max=int(raw["k_max"]),
            thresholds=tuple(raw.get("thresholds", (95.0, 99.0))),
            repeats=int(raw.get("repeats", 1)),
            seed_base=int(raw.get("seed_base", 0)),
            parallelism=int(raw.get("parallelism", 1)),
            metric_ks=tuple(raw.get("metric_ks", ())),
        )


# =========================================================================
# Report types
# =========================================================================


@dataclass(frozen=True)
class BenchCell:
    """Aggregated results for one (dataset, algorithm) combination.

    ``orders`` and ``ve_curves`` are per-seed, aligned with ``seeds``.
    ``k_at`` holds (threshold, lower-median k) pairs with None when the
    median run never reached the threshold.  ``metric_values`` holds
    (metric, k, median value) triples for the configured ``metric_ks``.
    ``error`` is a diagnostic string when the cell failed; failed cells
    carry no metric payload.
    """

    dataset: str
    algorithm: str
    seeds: tuple[int, ...] = ()
    orders: tuple[tuple[int, ...], ...] = ()
    ve_curves: tuple[tuple[float, ...], ...] = ()
    auc: float | None = None
    k_at: tuple[tuple[float, int | None], ...] = ()
    r: float | None = None
    metric_values: tuple[tuple[str, int, float | None], ...] = ()
    elapsed_median_s: float | None = None
    speedup_vs_fsca: float | None = None
    error: str | None = None

    def k_for(self, threshold: float) -> int | None:
        for t, k in self.k_at:
            if t == float(threshold):
                return k
        raise KeyError(f"threshold {threshold} not in cell")

    def metric_value(self, metric: str, k: int) -> float | None:
        for name, at_k, value in self.metric_values:
            if name == metric and at_k == int(k):
                return value
        raise KeyError(f"({metric}, {k}) not in cell")

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "algorithm": self.algorithm,
            "seeds": list(self.seeds),
            "orders": [list(o) for o in self.orders],
            "ve_curves": [list(c) for c in self.ve_curves],
            "auc": self.auc,
            "k_at": [[t, k] for t, k in self.k_at],
            "r": self.r,
            "metric_values": [[m, k, val] for m, k, val in self.metric_values],
            "elapsed_median_s": self.elapsed_median_s,
            "speedup_vs_fsca": self.speedup_vs_fsca,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "BenchCell":
        return cls(
            dataset=raw["dataset"],
            algorithm=raw["algorithm"],
            seeds=tuple(int(s) for s in raw.get("seeds", ())),
            orders=tuple(tuple(int(i) for i in o) for o in raw.get("orders", ())),
            ve_curves=tuple(tuple(float(x) for x in c) for c in raw.get("ve_curves", ())),
            auc=raw.get("auc"),
            k_at=tuple(
                (float(t), None if k is None else int(k)) for t, k in raw.get("k_at", ())
            ),
            r=raw.get("r"),
            metric_values=tuple(
                (m, int(k), None if v is None else float(v))
                for m, k, v in raw.get("metric_values", ())
            ),
            elapsed_median_s=raw.get("elapsed_median_s"),
            speedup_vs_fsca=raw.get("speedup_vs_fsca"),
            error=raw.get("error"),
        )


@dataclass(frozen=True)
class BenchmarkReport:
    """A benchmark grid's outcome: config echo plus one cell per combination."""

    config: BenchConfig
    cells: tuple[BenchCell, ...]
    schema_version: str = SCHEMA_VERSION
    generated_at: str = ""

    @property
    def has_errors(self) -> bool:
        return any(cell.error is not None for cell in self.cells)

    def cell(self, dataset: str, algorithm: str) -> BenchCell:
        for c in self.cells:
            if c.dataset == dataset and c.algorithm == algorithm:
                return c
        raise KeyError(f"no cell for ({dataset!r}, {algorithm!r})")

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "generated_at": self.generated_at,
            "config": self.config.to_dict(),
            "cells": [c.to_dict() for c in self.cells],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "BenchmarkReport":
        return cls(
            config=BenchConfig.from_dict(raw["config"]),
            cells=tuple(BenchCell.from_dict(c) for c in raw["cells"]),
            schema_version=raw.get("schema_version", SCHEMA_VERSION),
            generated_at=raw.get("generated_at", ""),
        )


# =========================================================================
# Aggregation helpers
# =========================================================================


def _lower_median(values) -> int | None:
    """Lower median of integers where None sorts as +infinity."""
    keyed = sorted(math.inf if x is None else x for x in values)
    pick = keyed[(len(keyed) - 1) // 2]
    return None if pick == math.inf else int(pick)


def _median(values) -> float | None:
    """Standard median of the non-None entries; None when all are None."""
    vals = [x for x in values if x is not None]
    return float(np.median(vals)) if vals else None


def _extend_curve(values, length: int) -> tuple[float, ...]:
    vals = list(values)[:length]
    if vals and len(vals) < length:
        vals.extend([vals[-1]] * (length - len(vals)))
    return tuple(vals)


def _run_error(exc: Exception, seed: int) -> str:
    return f"{type(exc).__name__} (seed {seed}): {exc}"


# =========================================================================
# Grid execution
# =========================================================================


def _run_cell(algo: AlgoConfig, per_seed_data: list[Dataset], seeds: list[int], k: int):
    """All repeats for one cell; returns (results, error-or-None)."""
    results: list[SelectionResult] = []
    for data, seed in zip(per_seed_data, seeds):
        try:
            results.append(algo.run(data, k))
        except (SelectionError, ValueError, np.linalg.LinAlgError) as exc:
            return results, _run_error(exc, seed)
    return results, None


def _evaluate_metric_at_k(
    metric: str,
    k: int,
    results: list[SelectionResult],
    eval_ctx: list[dict],
) -> float | None:
    per_seed: list[float | None] = []
    for result, ctx in zip(results, eval_ctx):
        if len(result.order) < k:
            per_seed.append(None)
            continue
        head = result.order[:k]
        if metric == "ve":
            per_seed.append(float(result.ve_curve[k - 1]))
        elif metric == "fp":
            per_seed.append(frame_potential(ctx["unit"], head))
        else:
            per_seed.append(mutual_information(ctx["model"], head))
    return _median(per_seed)


def run_benchmark(config: BenchConfig) -> BenchmarkReport:
    """Execute the grid and aggregate a report.

    Deterministic apart from wall-clock fields: the same config produces
    the same metric values.  Per-cell failures become ``error`` entries;
    dataset-level problems (unreadable CSV, k_max exceeding the column
    count) are configuration errors and raise instead.
    """
    seeds = [config.seed_base + i for i in range(config.repeats)]

    # Shared preprocessing, excluded from timing: load/generate + center.
    prepared: dict[str, list[Dataset]] = {}
    for source in config.datasets:
        if source.seeded:
            raws = [source.load(seed) for seed in seeds]
            centered = [center_columns(raw) for raw in raws]
        else:
            raws = [source.load()]
            centered = [center_columns(raws[0])] * config.repeats
        if any(config.k_max > raw.v for raw in raws):
            raise ValueError(
                f"k_max={config.k_max} exceeds column count of dataset {source.name!r}"
            )
        prepared[source.name] = centered

    jobs = [(source, algo) for source in config.datasets for algo in config.algorithms]

    def execute(job):
        source, algo = job
        return _run_cell(algo, prepared[source.name], seeds, config.k_max)

    if config.parallelism > 1:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            outcomes = list(pool.map(execute, jobs))
    else:
        outcomes = [execute(job) for job in jobs]

    by_key = {
        (source.name, algo.name): outcome
        for (source, algo), outcome in zip(jobs, outcomes)
    }

    # Lazily built shared evaluation models (per dataset, per seed).
    eval_ctx_cache: dict[str, list[dict]] = {}

    def eval_ctx(dataset_name: str) -> list[dict]:
        if dataset_name not in eval_ctx_cache:
            ctxs: list[dict] = []
            by_identity: dict[int, dict] = {}
            for data in prepared[dataset_name]:
                ctx = by_identity.get(id(data))
                if ctx is None:
                    ctx = {
                        "unit": normalize_unit(data),
                        "model": CovarianceModel.from_dataset(data),
                    }
                    by_identity[id(data)] = ctx
                ctxs.append(ctx)
            eval_ctx_cache[dataset_name] = ctxs
        return eval_ctx_cache[dataset_name]

    # Joint relative performance, per dataset and seed, over healthy cells.
    r_values: dict[tuple[str, str], list[float | None]] = {}
    for source in config.datasets:
        healthy = [
            algo.name
            for algo in config.algorithms
            if by_key[(source.name, algo.name)][1] is None
        ]
        for run_index in range(config.repeats):
            curves = {
                name: VECurve(
                    _extend_curve(
                        by_key[(source.name, name)][0][run_index].ve_curve.values,
                        config.k_max,
                    )
                )
                for name in healthy
            }
            if not curves:
                continue
            try:
                joint = relative_performance(curves)
            except ThresholdNeverReached:
                joint = {name: None for name in curves}
            for name, value in joint.items():
                r_values.setdefault((source.name, name), []).append(value)

    cells: list[BenchCell] = []
    elapsed_by_key: dict[tuple[str, str], float] = {}
    for source in config.datasets:
        v = prepared[source.name][0].v
        for algo in config.algorithms:
            results, error = by_key[(source.name, algo.name)]
            if error is not None:
                cells.append(
                    BenchCell(dataset=source.name, algorithm=algo.name, error=error)
                )
                continue
            curves = [result.ve_curve.values for result in results]
            auc_value = None
            if config.k_max >= v - 1 and v >= 2:
                auc_value = _median(
                    [auc(VECurve(_extend_curve(c, v - 1)), v) for c in curves]
                )
            k_at = []
            for threshold in config.thresholds:
                per_seed = []
                for c in curves:
                    try:
                        per_seed.append(k_at_threshold(VECurve(c), threshold))
                    except ThresholdNeverReached:
                        per_seed.append(None)
                k_at.append((threshold, _lower_median(per_seed)))
            metric_values = tuple(
                (metric, k, _evaluate_metric_at_k(metric, k, results, eval_ctx(source.name)))
                for metric in ("ve", "fp", "mi")
                for k in config.metric_ks
            )
            elapsed = float(np.median([result.elapsed for result in results]))
            elapsed_by_key[(source.name, algo.name)] = elapsed
            cells.append(
                BenchCell(
                    dataset=source.name,
                    algorithm=algo.name,
                    seeds=tuple(seeds),
                    orders=tuple(result.order for result in results),
                    ve_curves=tuple(tuple(c) for c in curves),
                    auc=auc_value,
                    k_at=tuple(k_at),
                    r=_median(r_values.get((source.name, algo.name), [])),
                    metric_values=metric_values,
                    elapsed_median_s=elapsed,
                    speedup_vs_fsca=None,
                )
            )

    # Speed-up pass: ratio of median elapsed times against the FSCA cell.
    final_cells = []
    for cell in cells:
        speedup = None
        if cell.error is None:
            base = elapsed_by_key.get((cell.dataset, "fsca"))
            if base is not None and cell.elapsed_median_s:
                if cell.algorithm == "fsca":
                    speedup = 1.0
                else:
                    speedup = base / cell.elapsed_median_s
        final_cells.append(replace(cell, speedup_vs_fsca=speedup))

    return BenchmarkReport(
        config=config,
        cells=tuple(final_cells),
        generated_at=time.strftime("%Y-%m-%dT%H:%M:%S"),
    )


# =========================================================================
# Speed-up measurement
# =========================================================================


def measure_speedup(
    data: Dataset,
    k: int,
    repeats: int = 5,
    algorithms: list[str] | None = None,
) -> dict[str, float]:
    """Median-of-repeats speed-up of each algorithm relative to FSCA.

    Runs strictly sequentially (no concurrency, to keep timings clean).
    Values below 1 mean slower than FSCA.  ``repeats`` must be at least 3.
    """
    if repeats < 3:
        raise ValueError(f"repeats must be at least 3, got {repeats}")
    names = list(algorithms) if algorithms is not None else list(ALGORITHMS)
    for name in names:
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r}")
    if "fsca" not in names:
        names.insert(0, "fsca")
    if not data.centered:
        data = center_columns(data)
    medians: dict[str, float] = {}
    for name in names:
        times = []
        for _ in range(repeats):
            times.append(ALGORITHMS[name](data, k).elapsed)
        medians[name] = float(np.median(times))
    base = medians["fsca"]
    return {name: base / medians[name] for name in names}


# =========================================================================
# Serialization
# =========================================================================


def emit_report(report: BenchmarkReport, path, format: str = "json") -> None:
    """Write a report to disk as JSON (lossless) or CSV (summary table).

    The CSV has the six fixed columns ``dataset, algorithm, auc, r,
    elapsed_median_s, speedup_vs_fsca`` followed by one ``k{n}pct``
    column per configured threshold; empty fields mark unavailable values
    and failed cells.
    """
    path = Path(path)
    if format == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    elif format == "csv":
        threshold_cols = [f"k{t:g}pct" for t in report.config.thresholds]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(CSV_FIXED_COLUMNS) + threshold_cols)
            for cell in report.cells:
                row = [
                    cell.dataset,
                    cell.algorithm,
                    _csv_value(cell.auc),
                    _csv_value(cell.r),
                    _csv_value(cell.elapsed_median_s),
                    _csv_value(cell.speedup_vs_fsca),
                ]
                if cell.error is None:
                    row.extend(_csv_value(cell.k_for(t)) for t in report.config.thresholds)
                else:
                    row.extend("" for _ in report.config.thresholds)
                writer.writerow(row)
    else:
        raise ValueError(f"format must be json or csv, got {format!r}")


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def report_from_json(path) -> BenchmarkReport:
    """Re-read a JSON report written by :func:`emit_report`."""
    with open(path, encoding="utf-8") as fh:
        return BenchmarkReport.from_dict(json.load(fh))
