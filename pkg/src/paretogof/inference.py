"""Decision machinery: critical values, bootstrap p-values, and power estimation.

Two estimation routes run through everything here and they are not
interchangeable.

MLE route
    Raising the data to the estimated shape gives a sample whose fitted shape
    is exactly one, and under the null the transformed sample's law is free of
    the true shape. Statistics computed on the transformed sample at beta = 1
    are therefore exact pivots, so critical values can be simulated once from
    P(1) and tabulated. For every statistic except MellinG this evaluation is
    algebraically the same as plugging the raw estimate in directly; for
    MellinG the two differ, the transformed-sample value is what decisions
    use, and the plug-in value is what gets reported as "the statistic".

MME route
    The moment estimate admits no such pivot, so critical values depend on
    the unknown shape and must be bootstrapped: test decisions come from
    resampling P(beta_mme). Asking for a tabulated critical value under MME
    raises :class:`UnsupportedPathError` pointing at the bootstrap routines.

Power estimation mirrors the two routes: a fixed-critical-value loop for MLE
and the warp-speed bootstrap (one bootstrap sample per Monte Carlo sample,
pooled quantile) for either estimator.

Replication ``r`` of any loop owns a fixed substream of the supplied
:class:`~paretogof.distributions.RandomStream`, so results are reproducible
bit for bit regardless of execution order or worker count.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .distributions import (
    AlternativeSpec,
    DomainError,
    MixtureSpec,
    RandomStream,
    Sample,
    alternative_rows,
    bootstrap_rows,
    pareto_rows,
)
from .estimation import EstimatorMethod, estimate_shape, mle_rows, mme_rows
from .statistics import TestKind, statistic_rows

__all__ = [
    "UnsupportedPathError",
    "ConfigurationError",
    "CriticalValueTable",
    "TestResult",
    "PowerEstimate",
    "upper_quantile",
    "pivotal_statistic_rows",
    "plugin_statistic_rows",
    "null_critical_value",
    "null_critical_values",
    "power_fixed_critical",
    "power_fixed_critical_many",
    "warp_speed_power",
    "warp_speed_power_many",
    "bootstrap_pvalue",
    "bootstrap_pvalue_many",
]

_MAX_RETRIES = 10
_TABLE_FORMAT = "paretogof-critical-values v1"
_TABLE_COLUMNS = ["kind", "estimator", "n", "alpha", "reps", "seed", "value"]
DEFAULT_ALPHAS = (0.01, 0.05, 0.10)


class UnsupportedPathError(ValueError):
    """A tabulated-critical-value request on a route that has no pivot."""


class ConfigurationError(LookupError):
    """A required critical-value entry or table resource is missing."""


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    return alpha


def upper_quantile(values: np.ndarray, alpha: float) -> float:
    """Empirical upper quantile: the ceil((1 - alpha) * m)-th order statistic.

    The index is computed in floating point and clipped to [1, m], so
    ``alpha = 1`` returns the minimum. This convention is fixed so that a
    given seed reproduces identical critical values everywhere.
    """
    alpha = _check_alpha(alpha)
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    m = values.size
    if m == 0:
        raise ValueError("need at least one value")
    k = min(max(math.ceil((1.0 - alpha) * m), 1), m)
    return float(np.partition(values, k - 1)[k - 1])


# ---------------------------------------------------------------------------
# evaluation conventions


def pivotal_statistic_rows(kinds, x: np.ndarray):
    """Statistics under the MLE convention for each row of ``x``.

    Each row is transformed by its own maximum likelihood estimate and the
    statistics are evaluated at shape one. Returns ``(stats, betas)`` where
    ``stats`` maps each kind to a per-row array and ``betas`` holds the raw
    estimates used in the transform.
    """
    x = np.asarray(x, dtype=np.float64)
    b = mle_rows(x)
    y = x ** b[:, None]
    return statistic_rows(kinds, y, 1.0), b


def plugin_statistic_rows(kinds, x: np.ndarray, estimator: EstimatorMethod):
    """Statistics with the chosen estimate plugged in directly, row-wise.

    Returns ``(stats, betas)``. This is the reporting convention for both
    estimators and the decision convention for the MME route.
    """
    estimator = EstimatorMethod(estimator)
    x = np.asarray(x, dtype=np.float64)
    b = mle_rows(x) if estimator is EstimatorMethod.MLE else mme_rows(x)
    return statistic_rows(kinds, x, b), b


def _est_fn(estimator: EstimatorMethod):
    return mle_rows if estimator is EstimatorMethod.MLE else mme_rows


def _bad_estimates(b: np.ndarray) -> np.ndarray:
    return ~np.isfinite(b) | (b <= 0.0)


def _redraw_bad(x, b, est_fn, redraw_row, context: str) -> None:
    """Replace rows whose estimate is degenerate, drawing each retry from a
    dedicated substream so untouched rows stay identical."""
    bad = _bad_estimates(b)
    t = 0
    while bad.any():
        if t >= _MAX_RETRIES:
            raise DomainError(
                f"{context}: estimator still degenerate after {_MAX_RETRIES} redraws"
            )
        idx = np.nonzero(bad)[0]
        for r in idx:
            x[r] = redraw_row(int(r), t)
        b[idx] = est_fn(x[idx])
        bad = _bad_estimates(b)
        t += 1


def _alt_rows_estimated(spec, n, reps, stream, offset, step, retry_base, estimator):
    est_fn = _est_fn(estimator)
    x = alternative_rows(spec, n, reps, stream, offset, step)
    b = est_fn(x)

    def redraw(r, t):
        return alternative_rows(spec, n, 1, stream, retry_base + _MAX_RETRIES * r + t, 1)[0]

    _redraw_bad(x, b, est_fn, redraw, "alternative sampling")
    return x, b


def _null_rows_estimated(beta, n, reps, stream, offset, step, retry_base, estimator):
    est_fn = _est_fn(estimator)
    x = pareto_rows(beta, n, reps, stream, offset, step)
    b = est_fn(x)

    def redraw(r, t):
        return pareto_rows(beta, n, 1, stream, retry_base + _MAX_RETRIES * r + t, 1)[0]

    _redraw_bad(x, b, est_fn, redraw, "null sampling")
    return x, b


def _boot_rows_estimated(betas, n, stream, offset, step, retry_base, estimator):
    est_fn = _est_fn(estimator)
    x = bootstrap_rows(betas, n, stream, offset, step)
    b = est_fn(x)

    def redraw(r, t):
        return bootstrap_rows(betas[r : r + 1], n, stream,
                              retry_base + _MAX_RETRIES * r + t, 1)[0]

    _redraw_bad(x, b, est_fn, redraw, "bootstrap sampling")
    return x, b


def _as_kinds(kinds):
    out = []
    for k in kinds:
        if not isinstance(k, TestKind):
            k = TestKind(k)
        if k not in out:
            out.append(k)
    if not out:
        raise ValueError("need at least one test kind")
    return out


def _check_route(kinds, estimator: EstimatorMethod) -> EstimatorMethod:
    estimator = EstimatorMethod(estimator)
    if estimator is EstimatorMethod.MME:
        for k in kinds:
            if k.is_exponentiality:
                raise UnsupportedPathError(
                    f"{k.label} runs on log-transformed data with a fitted rate; "
                    "only the MLE route applies"
                )
    return estimator


# ---------------------------------------------------------------------------
# critical values (MLE route)


@dataclass
class CriticalValueTable:
    """Simulated upper-tail critical values, keyed by (kind, estimator, n, alpha).

    Only MLE-route entries exist; the table records the replication count and
    the seed that produced it. Persisted as versioned CSV so the expensive
    high-replication tables are simulated once per seed.
    """

    reps: int
    seed: int
    entries: dict = field(default_factory=dict)

    def put(self, kind: TestKind, estimator: EstimatorMethod, n: int,
            alpha: float, value: float) -> None:
        self.entries[(kind, EstimatorMethod(estimator), int(n), float(alpha))] = float(value)

    def value(self, kind: TestKind, estimator: EstimatorMethod, n: int,
              alpha: float) -> float:
        key = (kind, EstimatorMethod(estimator), int(n), float(alpha))
        try:
            return self.entries[key]
        except KeyError:
            raise ConfigurationError(
                f"no critical value tabulated for {kind.label}/"
                f"{EstimatorMethod(estimator).value} at n={n}, alpha={alpha}"
            ) from None

    def __contains__(self, key) -> bool:
        kind, estimator, n, alpha = key
        return (kind, EstimatorMethod(estimator), int(n), float(alpha)) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def save(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(_TABLE_FORMAT + "\n")
            writer = csv.writer(fh)
            writer.writerow(_TABLE_COLUMNS)
            for (kind, estimator, n, alpha), value in sorted(
                self.entries.items(),
                key=lambda kv: (kv[0][0].tag.value, kv[0][0].tuning_a or 0.0,
                                kv[0][1].value, kv[0][2], kv[0][3]),
            ):
                tag = kind.tag.value
                if kind.tuning_a is not None and kind.tuning_a != 1.0:
                    tag = f"{tag}:a={kind.tuning_a!r}"
                writer.writerow([tag, estimator.value, n, repr(alpha),
                                 self.reps, self.seed, repr(value)])

    @classmethod
    def load(cls, path) -> "CriticalValueTable":
        with open(path, newline="") as fh:
            head = fh.readline().rstrip("\n")
            if head != _TABLE_FORMAT:
                raise ConfigurationError(
                    f"unrecognized critical-value file format: {head!r}"
                )
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != _TABLE_COLUMNS:
                raise ConfigurationError(f"unexpected column header: {header!r}")
            table = None
            for row in reader:
                if not row:
                    continue
                tag, est, n, alpha, reps, seed, value = row
                if ":a=" in tag:
                    tag, _, a_txt = tag.partition(":a=")
                    kind = TestKind(tag, float(a_txt))
                else:
                    kind = TestKind(tag)
                reps, seed = int(reps), int(seed)
                if table is None:
                    table = cls(reps=reps, seed=seed)
                elif (reps, seed) != (table.reps, table.seed):
                    raise ConfigurationError(
                        "critical-value file mixes entries from different runs"
                    )
                table.put(kind, EstimatorMethod(est), int(n), float(alpha), float(value))
            if table is None:
                raise ConfigurationError(f"critical-value file {path!r} holds no entries")
            return table


def null_critical_values(kinds, n: int, alphas, reps: int,
                         stream: RandomStream) -> CriticalValueTable:
    """Simulate one null pool at P(1) and read off critical values for every
    requested kind and level.

    All kinds share the same ``reps`` transformed null samples, which is much
    cheaper than separate runs and makes the joint rejection behaviour of the
    statistics internally consistent.
    """
    kinds = _as_kinds(kinds)
    if reps < 1000:
        raise ValueError("critical-value simulation needs reps >= 1000")
    alphas = [_check_alpha(a) for a in np.atleast_1d(alphas)]
    x, b = _null_rows_estimated(1.0, n, reps, stream, 0, 1, reps, EstimatorMethod.MLE)
    stats = statistic_rows(kinds, x ** b[:, None], 1.0)
    table = CriticalValueTable(reps=reps, seed=stream.seed)
    for kind in kinds:
        for alpha in alphas:
            table.put(kind, EstimatorMethod.MLE, n, alpha,
                      upper_quantile(stats[kind], alpha))
    return table


def null_critical_value(kind, n: int, alpha: float, reps: int, stream: RandomStream,
                        estimator: EstimatorMethod = EstimatorMethod.MLE) -> float:
    """Upper-tail critical value on the MLE route, simulated from P(1).

    The MME route has no shape-free null distribution, so requesting it here
    raises :class:`UnsupportedPathError`; use :func:`bootstrap_pvalue` or
    :func:`warp_speed_power` instead.
    """
    if EstimatorMethod(estimator) is not EstimatorMethod.MLE:
        raise UnsupportedPathError(
            "critical values can only be tabulated on the MLE route; "
            "the MME route needs the parametric bootstrap "
            "(bootstrap_pvalue / warp_speed_power)"
        )
    kind = kind if isinstance(kind, TestKind) else TestKind(kind)
    table = null_critical_values([kind], n, [alpha], reps, stream)
    return table.value(kind, EstimatorMethod.MLE, n, alpha)


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class TestResult:
    """Outcome of one test on one sample.

    ``statistic`` is the reported plug-in value. ``decision_statistic`` is
    the value actually compared against the null distribution; the two agree
    up to rounding except for MellinG on the MLE route, whose decisions are
    made on the pivotal-transformed sample. ``reject_at`` maps each
    significance level to the decision at that level.
    """

    __test__ = False  # not a pytest class, despite the name

    kind: TestKind
    estimator: EstimatorMethod
    statistic: float
    n: int
    critical_value: float | None = None
    p_value: float | None = None
    reject_at: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))
    decision_statistic: float | None = None


@dataclass(frozen=True)
class PowerEstimate:
    """Monte Carlo rejection proportion against one alternative.

    ``alternative`` is None when the draw came from the null model itself, in
    which case the estimate is an empirical size.
    """

    alternative: object
    kind: TestKind
    estimator: EstimatorMethod
    n: int
    alpha: float
    power: float
    replications: int
    seed: int

    @property
    def std_error(self) -> float:
        p = self.power
        return math.sqrt(p * (1.0 - p) / self.replications)


def _check_alt(alt):
    if not isinstance(alt, (AlternativeSpec, MixtureSpec)):
        raise TypeError(
            f"alternative must be AlternativeSpec or MixtureSpec, got {type(alt).__name__}"
        )
    return alt


# ---------------------------------------------------------------------------
# power estimation


def power_fixed_critical_many(kinds, alt, n: int, alpha: float, reps: int,
                              cv_table: CriticalValueTable,
                              stream: RandomStream) -> dict:
    """Share one batch of alternative draws across several statistics.

    MLE route: each replication is transformed by its own estimate and the
    statistic compared against the tabulated P(1) critical value. Missing
    table entries raise :class:`ConfigurationError` before any sampling.
    """
    kinds = _as_kinds(kinds)
    alt = _check_alt(alt)
    alpha = _check_alpha(alpha)
    if reps < 1:
        raise ValueError("reps must be at least 1")
    crit = {k: cv_table.value(k, EstimatorMethod.MLE, n, alpha) for k in kinds}
    x, b = _alt_rows_estimated(alt, n, reps, stream, 0, 1, reps, EstimatorMethod.MLE)
    stats = statistic_rows(kinds, x ** b[:, None], 1.0)
    return {
        k: PowerEstimate(alt, k, EstimatorMethod.MLE, n, alpha,
                         float(np.mean(stats[k] > crit[k])), reps, stream.seed)
        for k in kinds
    }


def power_fixed_critical(kind, alt, n: int, alpha: float, reps: int,
                         cv_table: CriticalValueTable,
                         stream: RandomStream) -> PowerEstimate:
    """Rejection rate of one MLE-route test at a tabulated critical value."""
    kind = kind if isinstance(kind, TestKind) else TestKind(kind)
    return power_fixed_critical_many([kind], alt, n, alpha, reps, cv_table, stream)[kind]


def warp_speed_power_many(kinds, estimator, alt, n: int, alpha: float, reps: int,
                          stream: RandomStream) -> dict:
    """Warp-speed bootstrap power for several statistics on shared draws.

    Replication ``r`` draws one alternative sample (substream ``2r``),
    estimates the shape, then draws a single parametric bootstrap sample from
    the fitted null (substream ``2r + 1``). The bootstrap statistics from all
    replications pool into one null reference; power is the proportion of
    alternative statistics above that pool's upper quantile. One bootstrap
    sample per replication is what makes 50 000-replication studies feasible.
    """
    kinds = _as_kinds(kinds)
    estimator = _check_route(kinds, estimator)
    alt = _check_alt(alt)
    alpha = _check_alpha(alpha)
    if reps < 2:
        raise ValueError("warp-speed estimation needs at least 2 replications")

    x, b = _alt_rows_estimated(alt, n, reps, stream, 0, 2, 2 * reps, estimator)
    xb, bb = _boot_rows_estimated(b, n, stream, 1, 2,
                                  (2 + _MAX_RETRIES) * reps, estimator)
    if estimator is EstimatorMethod.MLE:
        stats = statistic_rows(kinds, x ** b[:, None], 1.0)
        boot = statistic_rows(kinds, xb ** bb[:, None], 1.0)
    else:
        stats = statistic_rows(kinds, x, b)
        boot = statistic_rows(kinds, xb, bb)
    out = {}
    for k in kinds:
        crit = upper_quantile(boot[k], alpha)
        out[k] = PowerEstimate(alt, k, estimator, n, alpha,
                               float(np.mean(stats[k] > crit)), reps, stream.seed)
    return out


def warp_speed_power(kind, estimator, alt, n: int, alpha: float, reps: int,
                     stream: RandomStream) -> PowerEstimate:
    """Warp-speed bootstrap power of a single test; see the batch variant."""
    kind = kind if isinstance(kind, TestKind) else TestKind(kind)
    return warp_speed_power_many([kind], estimator, alt, n, alpha, reps, stream)[kind]


# ---------------------------------------------------------------------------
# single-sample inference


def bootstrap_pvalue_many(kinds, estimator, sample, B: int, stream: RandomStream,
                          alphas=DEFAULT_ALPHAS) -> list:
    """Parametric-bootstrap tests of one sample, sharing the bootstrap pool.

    Fits the shape with the chosen estimator, draws ``B`` samples from the
    fitted null, and evaluates every requested statistic on the same draws.
    The p-value convention is (1 + #{T*_b >= T_obs}) / (B + 1), which can
    never return an exact zero. ``B`` of at least 1000 is recommended; small
    values make the p-value resolution coarse.
    """
    kinds = _as_kinds(kinds)
    estimator = _check_route(kinds, estimator)
    if B < 1:
        raise ValueError("bootstrap needs B >= 1")
    alphas = [_check_alpha(a) for a in np.atleast_1d(alphas)]
    sample = sample if isinstance(sample, Sample) else Sample(sample)
    est = estimate_shape(sample, estimator)
    obs_display, _ = plugin_statistic_rows(kinds, sample.values[None, :], estimator)

    betas = np.full(B, est.value)
    xb, bb = _boot_rows_estimated(betas, n := sample.n, stream, 0, 1, B, estimator)
    if estimator is EstimatorMethod.MLE:
        obs_decision, _ = pivotal_statistic_rows(kinds, sample.values[None, :])
        boot = statistic_rows(kinds, xb ** bb[:, None], 1.0)
    else:
        obs_decision = obs_display
        boot = statistic_rows(kinds, xb, bb)

    results = []
    for k in kinds:
        t_obs = float(obs_decision[k][0])
        p = (1.0 + int(np.sum(boot[k] >= t_obs))) / (B + 1.0)
        results.append(
            TestResult(
                kind=k,
                estimator=estimator,
                statistic=float(obs_display[k][0]),
                n=n,
                p_value=p,
                reject_at=MappingProxyType({a: p <= a for a in alphas}),
                decision_statistic=t_obs,
            )
        )
    return results


def bootstrap_pvalue(kind, estimator, sample, B: int, stream: RandomStream,
                     alphas=DEFAULT_ALPHAS) -> TestResult:
    """Parametric-bootstrap p-value for one test on one sample."""
    kind = kind if isinstance(kind, TestKind) else TestKind(kind)
    return bootstrap_pvalue_many([kind], estimator, sample, B, stream, alphas)[0]
