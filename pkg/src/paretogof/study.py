"""Experiment orchestration: power tables, the golf-earnings case study, rendering.

This module wires the inference routines into full simulation studies. A
:class:`StudyConfig` fixes the grid (sample sizes, alternatives, statistics,
estimators, replication counts, master seed); :func:`run_power_table` produces
one table per sample size with a deterministic substream block per cell, so
re-running any subset of the grid reproduces identical numbers.

The golf application embeds the two 2022-season earnings datasets (all
players above the 3.5 million selection threshold, 28 per tour) and tests
them for Pareto-ness with bootstrap p-values.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .distributions import (
    AlternativeSpec,
    Contaminant,
    DomainError,
    Family,
    MixtureSpec,
    RandomStream,
    Sample,
)
from .estimation import EstimatorMethod
from .inference import (
    DEFAULT_ALPHAS,
    CriticalValueTable,
    PowerEstimate,
    TestResult,
    bootstrap_pvalue_many,
    null_critical_values,
    power_fixed_critical_many,
    warp_speed_power_many,
)
from .statistics import PARETO_KINDS, TestKind

__all__ = [
    "FIXED_ALTERNATIVES",
    "MIXTURE_PROPORTIONS",
    "mixture_grid",
    "StudyConfig",
    "PowerTable",
    "Tour",
    "GolfDataset",
    "golf_dataset",
    "GOLF_SCALE",
    "run_power_table",
    "run_power_study",
    "run_golf_application",
    "render_table",
    "study_manifest",
]

# one substream block per table cell; cells never overlap
_CELL_STRIDE = 1 << 32
_CV_BLOCK = 1 << 20  # block index where per-n critical-value pools start


def _alts(family: Family, *thetas) -> tuple:
    return tuple(AlternativeSpec(family, th) for th in thetas)


# The fixed-alternative grid of the power study, in reporting order. The
# first three rows are null cases and double as a size check.
FIXED_ALTERNATIVES = (
    _alts(Family.PARETO, 2, 5, 10)
    + _alts(Family.GAMMA, 0.8, 1, 1.2)
    + _alts(Family.WEIBULL, 0.8, 1.2, 1.5)
    + _alts(Family.LOG_NORMAL, 1, 1.5, 2.5)
    + _alts(Family.HALF_NORMAL, 0.5, 1, 1.2)
    + _alts(Family.LINEAR_FAILURE_RATE, 0.2, 0.8, 1)
    + _alts(Family.BETA_EXPONENTIAL, 0.8, 1, 1.5)
    + _alts(Family.TILTED_PARETO, 1, 2, 3)
    + _alts(Family.DHILLON, 0.4, 0.6, 0.8)
)

MIXTURE_PROPORTIONS = (0.1, 0.3, 0.5, 0.7, 0.9)


def mixture_grid(contaminant: Contaminant, mean: float = 3.0) -> tuple:
    """Mixture alternatives over the standard proportion grid."""
    return tuple(
        MixtureSpec(p, Contaminant(contaminant), mean) for p in MIXTURE_PROPORTIONS
    )


@dataclass(frozen=True)
class StudyConfig:
    """Grid and budget of one simulation study.

    Replication counts are the full-study budgets; ``desk_scale`` shrinks
    them uniformly and defaults to the 0.1 smoke tier, which keeps a full
    grid in CI-friendly minutes. Scaled counts must stay at or above 1000 so
    that quantile estimates remain meaningful; set ``desk_scale=1`` for
    publication-scale runs.
    """

    sample_sizes: tuple = (20, 30)
    alpha: float = 0.05
    tests: tuple = PARETO_KINDS
    estimators: tuple = (EstimatorMethod.MME, EstimatorMethod.MLE)
    alternatives: tuple = FIXED_ALTERNATIVES
    critical_reps: int = 100_000
    power_reps: int = 10_000
    warp_reps: int = 50_000
    desk_scale: float = 0.1
    master_seed: int = 271828

    def __post_init__(self) -> None:
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "tests", tuple(self.tests))
        object.__setattr__(
            self, "estimators", tuple(EstimatorMethod(e) for e in self.estimators)
        )
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        if not self.sample_sizes or any(n < 1 for n in self.sample_sizes):
            raise ValueError("sample sizes must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not 0.0 < self.desk_scale <= 1.0:
            raise ValueError("desk_scale must lie in (0, 1]")
        for name in ("critical", "power", "warp"):
            if self.scaled_reps(name) < 1000:
                raise ValueError(
                    f"{name} replications fall below 1000 after desk scaling"
                )
        if not self.tests or not self.estimators or not self.alternatives:
            raise ValueError("tests, estimators and alternatives must be non-empty")

    def scaled_reps(self, which: str) -> int:
        base = {
            "critical": self.critical_reps,
            "power": self.power_reps,
            "warp": self.warp_reps,
        }[which]
        return int(round(base * self.desk_scale))


@dataclass
class PowerTable:
    """One power table: alternatives down the rows, (test, estimator) across.

    ``cells`` maps (alternative, kind, estimator) to a
    :class:`~paretogof.inference.PowerEstimate`; combinations that cannot run
    (or failed) are absent, with the reason recorded in ``notes``.
    """

    n: int
    alpha: float
    rows: tuple
    columns: tuple
    cells: dict
    seed: int
    wall_clock: float = 0.0
    notes: list = field(default_factory=list)

    def get(self, alternative, kind: TestKind, estimator: EstimatorMethod):
        return self.cells.get((alternative, kind, EstimatorMethod(estimator)))


def _cell_stream(config: StudyConfig, n_idx: int, alt_idx: int, est_idx: int) -> RandomStream:
    cell = (n_idx * len(config.alternatives) + alt_idx) * len(config.estimators) + est_idx
    return RandomStream(config.master_seed, cell * _CELL_STRIDE)


def _cv_stream(config: StudyConfig, n_idx: int) -> RandomStream:
    return RandomStream(config.master_seed, (_CV_BLOCK + n_idx) * _CELL_STRIDE)


def _run_cell(config: StudyConfig, n_idx: int, alt_idx: int, est_idx: int,
              cv_table: CriticalValueTable | None):
    n = config.sample_sizes[n_idx]
    alt = config.alternatives[alt_idx]
    estimator = config.estimators[est_idx]
    kinds = [k for k in config.tests
             if not (k.is_exponentiality and estimator is EstimatorMethod.MME)]
    if not kinds:
        return alt_idx, est_idx, {}
    stream = _cell_stream(config, n_idx, alt_idx, est_idx)
    if estimator is EstimatorMethod.MLE:
        cells = power_fixed_critical_many(
            kinds, alt, n, config.alpha, config.scaled_reps("power"), cv_table, stream
        )
    else:
        cells = warp_speed_power_many(
            kinds, estimator, alt, n, config.alpha, config.scaled_reps("warp"), stream
        )
    return alt_idx, est_idx, cells


def run_power_table(config: StudyConfig, n: int | None = None,
                    jobs: int = 1) -> PowerTable:
    """Power table for one sample size.

    The MLE columns tabulate critical values from one shared P(1) pool and
    reuse them across every alternative; the MME columns run the warp-speed
    bootstrap per alternative. Cells are deterministic functions of the
    master seed and the cell's grid position.
    """
    if n is None:
        if len(config.sample_sizes) != 1:
            raise ValueError(
                "config lists several sample sizes; pass n= or use run_power_study"
            )
        n = config.sample_sizes[0]
    if n not in config.sample_sizes:
        raise ValueError(f"n={n} is not one of the configured sample sizes")
    n_idx = config.sample_sizes.index(n)

    start = time.perf_counter()
    notes: list = []
    cv_table = None
    if EstimatorMethod.MLE in config.estimators:
        cv_table = null_critical_values(
            config.tests, n, [config.alpha], config.scaled_reps("critical"),
            _cv_stream(config, n_idx),
        )

    tasks = [
        (alt_idx, est_idx)
        for alt_idx in range(len(config.alternatives))
        for est_idx in range(len(config.estimators))
    ]
    cells: dict = {}

    def record(alt_idx, est_idx, result):
        alt = config.alternatives[alt_idx]
        estimator = config.estimators[est_idx]
        for kind, est in result.items():
            cells[(alt, kind, estimator)] = est
        skipped = [k for k in config.tests if k not in result]
        for kind in skipped:
            notes.append(
                f"{alt.label} / {kind.label} / {estimator.value}: "
                "not applicable on this route"
            )

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_run_cell, config, n_idx, alt_idx, est_idx, cv_table)
                for alt_idx, est_idx in tasks
            ]
            for fut in futures:
                record(*fut.result())
    else:
        for alt_idx, est_idx in tasks:
            try:
                record(*_run_cell(config, n_idx, alt_idx, est_idx, cv_table))
            except (DomainError, ValueError) as exc:
                alt = config.alternatives[alt_idx]
                notes.append(
                    f"{alt.label} / {config.estimators[est_idx].value}: failed ({exc})"
                )

    columns = tuple(
        (kind, estimator)
        for kind in config.tests
        for estimator in config.estimators
    )
    return PowerTable(
        n=n,
        alpha=config.alpha,
        rows=config.alternatives,
        columns=columns,
        cells=cells,
        seed=config.master_seed,
        wall_clock=time.perf_counter() - start,
        notes=notes,
    )


def run_power_study(config: StudyConfig, jobs: int = 1) -> list:
    """One :class:`PowerTable` per configured sample size."""
    return [run_power_table(config, n, jobs=jobs) for n in config.sample_sizes]


# ---------------------------------------------------------------------------
# golf earnings application


class Tour(str, Enum):
    PGA = "pga"
    LIV = "liv"


GOLF_SCALE = 3_500_000.0

# 2022-season earnings of every player above the 3.5 million threshold,
# 28 per tour, in reporting order (largest first).
_PGA_EARNINGS = (
    14046909, 10107897, 9405081, 9369605, 8654566, 7427299, 7073986,
    7012672, 6829575, 6520597, 6117886, 5776298, 5567974, 5289842,
    5248220, 5076060, 5018443, 4940600, 4868461, 4837271, 4722433,
    4310047, 3940513, 3876590, 3757425, 3718990, 3623137, 3616679,
)
_LIV_EARNINGS = (
    36071517, 16993416, 15124499, 13422785, 12765714, 9792500, 8755785,
    8297000, 8169167, 8033500, 7638000, 6755314, 5741000, 5718500,
    5109000, 4992618, 4843367, 4614500, 4596000, 4535000, 4459964,
    4434314, 4382417, 3877583, 3700000, 3693666, 3599100, 3584333,
)


@dataclass(frozen=True)
class GolfDataset:
    """Embedded season-earnings dataset for one tour.

    ``scale`` divides the raw currency amounts onto the model support; the
    default is the 3.5 million selection threshold, under which every scaled
    value exceeds one.
    """

    tour: Tour
    raw: tuple
    scale: float = GOLF_SCALE

    def __post_init__(self) -> None:
        if len(self.raw) != 28:
            raise DomainError("each tour dataset holds 28 observations")
        if not self.scale > 0:
            raise DomainError("scale divisor must be positive")
        if min(self.raw) <= self.scale:
            raise DomainError(
                "scale divisor must sit below the smallest earnings value"
            )

    @property
    def sample(self) -> Sample:
        return Sample(np.asarray(self.raw, dtype=np.float64) / self.scale)

    @property
    def mean_earnings(self) -> float:
        return float(np.mean(self.raw))


def golf_dataset(tour: Tour, scale: float = GOLF_SCALE) -> GolfDataset:
    tour = Tour(tour)
    raw = _PGA_EARNINGS if tour is Tour.PGA else _LIV_EARNINGS
    return GolfDataset(tour=tour, raw=raw, scale=scale)


def run_golf_application(tour: Tour, estimators=(EstimatorMethod.MME, EstimatorMethod.MLE),
                         tests=PARETO_KINDS, B: int = 10_000,
                         stream: RandomStream | None = None,
                         alphas=DEFAULT_ALPHAS, scale: float = GOLF_SCALE) -> list:
    """Bootstrap tests of one tour's earnings; returns a TestResult per
    (estimator, test) pair, estimator-major, in the given test order."""
    if stream is None:
        stream = RandomStream(271828)
    data = golf_dataset(tour, scale)
    results: list = []
    for est_idx, estimator in enumerate(estimators):
        results.extend(
            bootstrap_pvalue_many(
                tests, estimator, data.sample, B,
                stream.shifted(est_idx * _CELL_STRIDE), alphas,
            )
        )
    return results


# ---------------------------------------------------------------------------
# rendering


def _pct(p: float) -> str:
    return str(int(math.floor(p * 100.0 + 0.5)))


def _power_markdown(table: PowerTable) -> str:
    heads = ["alternative"] + [f"{k.label} {e.value.upper()}" for k, e in table.columns]
    lines = ["| " + " | ".join(heads) + " |",
             "| --- " + "| ---: " * (len(heads) - 1) + "|"]
    for alt in table.rows:
        row = [alt.label]
        for kind, estimator in table.columns:
            cell = table.get(alt, kind, estimator)
            row.append(_pct(cell.power) if cell is not None else "")
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def _power_csv(table: PowerTable) -> str:
    heads = ["alternative"]
    for kind, estimator in table.columns:
        stem = f"{kind.label} {estimator.value}"
        heads += [stem, stem + " se"]
    lines = [",".join(heads)]
    for alt in table.rows:
        row = [alt.label]
        for kind, estimator in table.columns:
            cell = table.get(alt, kind, estimator)
            if cell is None:
                row += ["", ""]
            else:
                row += [f"{cell.power:.4f}", f"{cell.std_error:.4f}"]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _results_markdown(results) -> str:
    estimators, kinds = _result_axes(results)
    heads = ["test"]
    for est in estimators:
        heads += [f"{est.value.upper()} statistic", f"{est.value.upper()} p-value"]
    lines = ["| " + " | ".join(heads) + " |",
             "| --- " + "| ---: " * (len(heads) - 1) + "|"]
    index = {(r.kind, r.estimator): r for r in results}
    for kind in kinds:
        row = [kind.label]
        for est in estimators:
            r = index.get((kind, est))
            if r is None:
                row += ["", ""]
            else:
                row += [f"{r.statistic:.3f}",
                        f"{r.p_value:.4f}" if r.p_value is not None else ""]
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def _results_csv(results) -> str:
    estimators, kinds = _result_axes(results)
    heads = ["test"]
    for est in estimators:
        heads += [f"{est.value} statistic", f"{est.value} p-value"]
    lines = [",".join(heads)]
    index = {(r.kind, r.estimator): r for r in results}
    for kind in kinds:
        row = [kind.label]
        for est in estimators:
            r = index.get((kind, est))
            if r is None:
                row += ["", ""]
            else:
                row += [repr(r.statistic),
                        repr(r.p_value) if r.p_value is not None else ""]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _result_axes(results):
    estimators: list = []
    kinds: list = []
    for r in results:
        if r.estimator not in estimators:
            estimators.append(r.estimator)
        if r.kind not in kinds:
            kinds.append(r.kind)
    return estimators, kinds


def render_table(table, fmt: str = "markdown") -> str:
    """Render a :class:`PowerTable` or a list of test results as text.

    Markdown shows powers as integer percentages (rounded half up) and
    statistics at three decimals; CSV keeps full precision and attaches the
    Monte Carlo standard error of every power cell.
    """
    if fmt not in ("markdown", "csv"):
        raise ValueError(f"format must be 'markdown' or 'csv', got {fmt!r}")
    if isinstance(table, PowerTable):
        return _power_markdown(table) if fmt == "markdown" else _power_csv(table)
    results = list(table)
    if not all(isinstance(r, TestResult) for r in results):
        raise TypeError("render_table accepts a PowerTable or a list of TestResult")
    return _results_markdown(results) if fmt == "markdown" else _results_csv(results)


def study_manifest(config: StudyConfig, tables) -> dict:
    """JSON-ready record of a study run: grid, budgets, seed, timings."""
    try:
        from importlib.metadata import version

        pkg_version = version("paretogof")
    except Exception:  # pragma: no cover
        pkg_version = "unknown"
    return {
        "package": {"name": "paretogof", "version": pkg_version},
        "config": {
            "sample_sizes": list(config.sample_sizes),
            "alpha": config.alpha,
            "tests": [k.label for k in config.tests],
            "estimators": [e.value for e in config.estimators],
            "alternatives": [a.label for a in config.alternatives],
            "replications": {
                "critical": config.scaled_reps("critical"),
                "power": config.scaled_reps("power"),
                "warp_speed": config.scaled_reps("warp"),
            },
            "desk_scale": config.desk_scale,
            "master_seed": config.master_seed,
        },
        "tables": [
            {
                "n": t.n,
                "alpha": t.alpha,
                "cells": len(t.cells),
                "wall_clock_seconds": round(t.wall_clock, 3),
                "notes": list(t.notes),
            }
            for t in tables
        ],
    }
