"""Test-statistic kernels for Pareto type I goodness of fit.

Seven statistics target the Pareto model directly. MP1 and MP2 measure
departures from the multiplicative memoryless property, the identity
S(s t) = S(s) S(t) satisfied by the Pareto survival function alone; both are
weighted integrals of a squared deviation and reduce to closed-form sums over
order statistics. KS, CV and AD are the classical distribution-function
discrepancies, ZA is a likelihood-ratio variant, and G is a Mellin-transform
statistic with an exponential weight controlled by a tuning constant ``a``.

Four more statistics test exponentiality of the log-transformed data, since
log X is exponential exactly when X is Pareto. They fit the exponential rate
by maximum likelihood internally, so they take no shape argument.

Everything here is a pure function of the sample (plus a shape value for the
Pareto-model statistics). Which shape to plug in, and how critical values or
p-values are produced, is the business of :mod:`paretogof.inference`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from enum import Enum

import numpy as np

from .distributions import DomainError, Sample, _check_beta
from .estimation import mle_rows

__all__ = [
    "TestTag",
    "TestKind",
    "StatisticValue",
    "MP1",
    "MP2",
    "KS",
    "CV",
    "AD",
    "ZA",
    "MELLIN_G",
    "EXP_KS",
    "EXP_CV",
    "EXP_AD",
    "EXP_ZA",
    "PARETO_KINDS",
    "EXP_KINDS",
    "ALL_KINDS",
    "mp1",
    "mp2",
    "ks",
    "cv",
    "ad",
    "za",
    "mellin_g",
    "exp_edf_suite",
    "mellin_integrals",
    "order_weights",
    "statistic_rows",
]

_CLAMP_EPS = 1e-15
# pairwise-table budget for the Mellin statistic, in float64 elements per block
_MELLIN_BLOCK = 2_000_000


class TestTag(str, Enum):
    __test__ = False  # not a pytest class, despite the name

    MP1 = "MP1"
    MP2 = "MP2"
    KS = "KS"
    CV = "CV"
    AD = "AD"
    ZA = "ZA"
    MELLIN_G = "MellinG"
    EXP_KS = "ExpKS"
    EXP_CV = "ExpCV"
    EXP_AD = "ExpAD"
    EXP_ZA = "ExpZA"


_EXP_TAGS = frozenset(
    {TestTag.EXP_KS, TestTag.EXP_CV, TestTag.EXP_AD, TestTag.EXP_ZA}
)
_LOG_TAGS = frozenset(
    {TestTag.AD, TestTag.ZA, TestTag.EXP_AD, TestTag.EXP_ZA}
)


@dataclass(frozen=True)
class TestKind:
    """A statistic identity: the family tag plus, for MellinG, its tuning constant.

    ``tuning_a`` exists only for the Mellin statistic and defaults to 1 there;
    supplying it for any other tag is an error.
    """

    __test__ = False  # not a pytest class, despite the name

    tag: TestTag
    tuning_a: float | None = None

    def __post_init__(self) -> None:
        tag = TestTag(self.tag)
        object.__setattr__(self, "tag", tag)
        if tag is TestTag.MELLIN_G:
            a = 1.0 if self.tuning_a is None else float(self.tuning_a)
            if not np.isfinite(a) or a <= 0:
                raise DomainError(f"tuning constant must be positive, got {self.tuning_a!r}")
            object.__setattr__(self, "tuning_a", a)
        elif self.tuning_a is not None:
            raise DomainError(f"tuning_a applies only to the Mellin statistic, not {tag.value}")

    @property
    def is_exponentiality(self) -> bool:
        """True for the statistics applied to log-transformed data."""
        return self.tag in _EXP_TAGS

    @property
    def label(self) -> str:
        if self.tag is TestTag.MELLIN_G:
            return "G" if self.tuning_a == 1.0 else f"G(a={self.tuning_a:g})"
        return self.tag.value

    def __str__(self) -> str:
        return self.label


MP1 = TestKind(TestTag.MP1)
MP2 = TestKind(TestTag.MP2)
KS = TestKind(TestTag.KS)
CV = TestKind(TestTag.CV)
AD = TestKind(TestTag.AD)
ZA = TestKind(TestTag.ZA)
MELLIN_G = TestKind(TestTag.MELLIN_G)
EXP_KS = TestKind(TestTag.EXP_KS)
EXP_CV = TestKind(TestTag.EXP_CV)
EXP_AD = TestKind(TestTag.EXP_AD)
EXP_ZA = TestKind(TestTag.EXP_ZA)

# canonical reporting order for the two suites
PARETO_KINDS = (KS, CV, AD, ZA, MELLIN_G, MP1, MP2)
EXP_KINDS = (EXP_KS, EXP_CV, EXP_AD, EXP_ZA)
ALL_KINDS = PARETO_KINDS + EXP_KINDS


@dataclass(frozen=True)
class StatisticValue:
    """One evaluated statistic.

    ``beta_used`` records the shape the statistic was evaluated at (for the
    exponentiality suite, the fitted exponential rate of the log data).
    ``clamped`` is set when a distribution-function value had to be pulled
    away from 0 or 1 before taking logs; the value is then a saturated
    approximation rather than an exact evaluation.
    """

    kind: TestKind
    value: float
    n: int
    beta_used: float
    clamped: bool = False


# ---------------------------------------------------------------------------
# shared pieces


@lru_cache(maxsize=64)
def _order_weights(n: int) -> np.ndarray:
    j = np.arange(1, n + 1, dtype=np.float64)
    w = (n - j + 1.0) ** 2 - (n - j) ** 2
    w.flags.writeable = False
    return w


def order_weights(n: int) -> np.ndarray:
    """Rank weights (n-j+1)^2 - (n-j)^2 for j = 1..n.

    These collapse the double sum over min(X_j, X_k) into a single sum over
    order statistics; they add up to n^2 exactly.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return _order_weights(int(n)).copy()


def _as_sample(sample) -> Sample:
    return sample if isinstance(sample, Sample) else Sample(sample)


def _edf_sorted(xs: np.ndarray, beta_col: np.ndarray):
    """Clamped model CDF at the sorted values, plus a per-row clamp indicator."""
    f = 1.0 - xs ** (-beta_col)
    hit = (f < _CLAMP_EPS) | (f > 1.0 - _CLAMP_EPS)
    return np.clip(f, _CLAMP_EPS, 1.0 - _CLAMP_EPS), hit.any(axis=1)


# ---------------------------------------------------------------------------
# row kernels: x is (m, n), beta is (m,), f is the clamped CDF at sorted rows


def _ks_rows(f: np.ndarray) -> np.ndarray:
    n = f.shape[1]
    j = np.arange(1, n + 1, dtype=np.float64)
    return np.maximum((j / n - f).max(axis=1), (f - (j - 1.0) / n).max(axis=1))


def _cv_rows(f: np.ndarray) -> np.ndarray:
    n = f.shape[1]
    j = np.arange(1, n + 1, dtype=np.float64)
    return 1.0 / (12.0 * n) + np.sum((f - (2.0 * j - 1.0) / (2.0 * n)) ** 2, axis=1)


def _ad_rows(f: np.ndarray) -> np.ndarray:
    n = f.shape[1]
    j = np.arange(1, n + 1, dtype=np.float64)
    inner = (2.0 * j - 1.0) * (np.log(f) + np.log1p(-f[:, ::-1]))
    return -n - np.sum(inner, axis=1) / n


def _za_rows(f: np.ndarray) -> np.ndarray:
    n = f.shape[1]
    j = np.arange(1, n + 1, dtype=np.float64)
    return -np.sum(
        np.log(f) / (n - j + 0.5) + np.log1p(-f) / (j - 0.5), axis=1
    )


def _mp1_rows(x: np.ndarray, xs: np.ndarray, beta: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    b = beta[:, None]
    w = _order_weights(n)
    t1 = (2.0 / (3.0 * n)) * np.sum(x ** (-1.5 * b), axis=1)
    t2 = np.sum(w * xs ** (-0.5 * b), axis=1) / n**2
    return t1 - t2 + 8.0 / 15.0


def _mp2_rows(x: np.ndarray, xs: np.ndarray, beta: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    b = beta[:, None]
    w = _order_weights(n)
    pw = xs ** (-b)
    t1 = np.sum(w * pw, axis=1) / n**2
    t2 = beta / n**2 * np.sum(w * pw * np.log(xs), axis=1)
    x2 = x ** (-2.0 * b)
    t3 = beta / n * np.sum((1.0 - x2) / (2.0 * b) - x2 * np.log(x), axis=1)
    return 10.0 / 9.0 - t1 - t2 - t3


def mellin_integrals(c, log_x=0.0):
    """Moment integrals against an exponential weight.

    Returns the triple ``I_m = ∫_0^∞ (t - 1)^m exp(-(c + log_x) t) dt`` for
    m = 0, 1, 2, the three building blocks of the Mellin statistic. With
    ``log_x = 0`` these are 1/c, (1-c)/c^2 and (2 - 2c + c^2)/c^3. The
    combined constant must be positive.
    """
    cc = np.asarray(c, dtype=np.float64) + np.asarray(log_x, dtype=np.float64)
    if np.any(cc <= 0.0):
        raise DomainError("weight constant plus log argument must be positive")
    i0 = 1.0 / cc
    i1 = (1.0 - cc) / cc**2
    i2 = (2.0 - 2.0 * cc + cc * cc) / cc**3
    if cc.ndim == 0:
        return float(i0), float(i1), float(i2)
    return i0, i1, i2


def _mellin_rows(x: np.ndarray, beta: np.ndarray, a: float) -> np.ndarray:
    """The G statistic row-wise, weight exp(-(1 + a) t), in O(n^2) per row."""
    m, n = x.shape
    lx = np.log(x)
    c = 1.0 + a
    j0, j1, _ = mellin_integrals(c, lx)
    J0 = j0.sum(axis=1)
    J1 = j1.sum(axis=1)
    single = beta * (n * beta / c - 2.0 * (beta + 1.0) * J0 - 2.0 * J1)
    bp1 = beta + 1.0
    paired = np.empty(m, dtype=np.float64)
    block = max(1, _MELLIN_BLOCK // (n * n))
    for lo in range(0, m, block):
        hi = min(m, lo + block)
        i0, i1, i2 = mellin_integrals(c, lx[lo:hi, :, None] + lx[lo:hi, None, :])
        w = bp1[lo:hi, None, None]
        paired[lo:hi] = (w * w * i0 + i2 + 2.0 * w * i1).sum(axis=(1, 2))
    return paired / n + single


# ---------------------------------------------------------------------------
# batch evaluation


def statistic_rows(kinds, x: np.ndarray, beta=None) -> dict:
    """Evaluate statistics on every row of a (reps, n) sample matrix.

    Parameters
    ----------
    kinds:
        Iterable of :class:`TestKind`. Duplicates collapse; insertion order
        is kept in the result.
    x:
        Matrix of samples, one replication per row, all values above 1.
    beta:
        Shape to plug into the Pareto-model statistics, scalar or one value
        per row. The exponentiality statistics ignore it and fit their own
        rate from the log data.

    Returns
    -------
    dict mapping each kind to a length-``reps`` array of statistic values.

    Notes
    -----
    Sorting, distribution-function values and log tables are shared across
    kinds, which is what makes large critical-value simulations affordable.
    Degenerate CDF values are clamped to [1e-15, 1 - 1e-15] silently here;
    the single-sample wrappers report a flag instead.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("x must be a (reps, n) matrix")
    m, n = x.shape
    wanted = []
    for k in kinds:
        if not isinstance(k, TestKind):
            k = TestKind(k)
        if k not in wanted:
            wanted.append(k)
    if not wanted:
        return {}

    pareto_kinds = [k for k in wanted if not k.is_exponentiality]
    exp_kinds = [k for k in wanted if k.is_exponentiality]

    b = None
    if pareto_kinds:
        if beta is None:
            raise ValueError("beta is required for the Pareto-model statistics")
        b = np.asarray(beta, dtype=np.float64)
        if b.ndim == 0:
            b = np.full(m, float(b))
        elif b.shape != (m,):
            raise ValueError(f"beta must be scalar or shape ({m},), got {b.shape}")
        if np.any(~np.isfinite(b)) or np.any(b <= 0.0):
            raise DomainError("beta values must be positive and finite")

    xs = None
    need_sorted = exp_kinds or any(
        k.tag in (TestTag.KS, TestTag.CV, TestTag.AD, TestTag.ZA, TestTag.MP1, TestTag.MP2)
        for k in pareto_kinds
    )
    if need_sorted:
        xs = np.sort(x, axis=1)

    out = {}
    f = None
    f_exp = None
    for k in wanted:
        tag = k.tag
        if tag in (TestTag.KS, TestTag.CV, TestTag.AD, TestTag.ZA):
            if f is None:
                f, _ = _edf_sorted(xs, b[:, None])
            kern = {TestTag.KS: _ks_rows, TestTag.CV: _cv_rows,
                    TestTag.AD: _ad_rows, TestTag.ZA: _za_rows}[tag]
            out[k] = kern(f)
        elif tag is TestTag.MP1:
            out[k] = _mp1_rows(x, xs, b)
        elif tag is TestTag.MP2:
            out[k] = _mp2_rows(x, xs, b)
        elif tag is TestTag.MELLIN_G:
            out[k] = _mellin_rows(x, b, k.tuning_a)
        else:
            if f_exp is None:
                lam = mle_rows(x)
                f_exp, _ = _edf_sorted(xs, lam[:, None])
            kern = {TestTag.EXP_KS: _ks_rows, TestTag.EXP_CV: _cv_rows,
                    TestTag.EXP_AD: _ad_rows, TestTag.EXP_ZA: _za_rows}[tag]
            out[k] = kern(f_exp)
    return out


# ---------------------------------------------------------------------------
# single-sample interface


def _single_edf(kind: TestKind, sample, beta: float) -> StatisticValue:
    sample = _as_sample(sample)
    beta = _check_beta(beta)
    f, hit = _edf_sorted(sample.sorted_values[None, :], np.array([[beta]]))
    kern = {TestTag.KS: _ks_rows, TestTag.CV: _cv_rows,
            TestTag.AD: _ad_rows, TestTag.ZA: _za_rows}[kind.tag]
    clamped = bool(hit[0]) if kind.tag in _LOG_TAGS else False
    return StatisticValue(kind, float(kern(f)[0]), sample.n, beta, clamped)


def ks(sample, beta: float) -> StatisticValue:
    """Kolmogorov-Smirnov sup-distance between the empirical and model CDFs."""
    return _single_edf(KS, sample, beta)


def cv(sample, beta: float) -> StatisticValue:
    """Cramér-von Mises integrated squared CDF discrepancy."""
    return _single_edf(CV, sample, beta)


def ad(sample, beta: float) -> StatisticValue:
    """Anderson-Darling tail-weighted CDF discrepancy."""
    return _single_edf(AD, sample, beta)


def za(sample, beta: float) -> StatisticValue:
    """Likelihood-ratio EDF statistic with 1/(j - 1/2) spacings."""
    return _single_edf(ZA, sample, beta)


def mp1(sample, beta: float) -> StatisticValue:
    """First memoryless-property statistic.

    Integrates the squared gap between the empirical survival function
    evaluated at t^2 and the fitted survival function squared, weighted by
    the fitted density. The closed form below needs one pass over the sample
    and one over the order statistics:

        MP1 = (2/3n) Σ X_j^(-3β/2) - (1/n²) Σ w_j X_(j)^(-β/2) + 8/15

    with the rank weights w_j of :func:`order_weights`.
    """
    sample = _as_sample(sample)
    beta = _check_beta(beta)
    val = _mp1_rows(sample.values[None, :], sample.sorted_values[None, :], np.array([beta]))
    return StatisticValue(MP1, float(val[0]), sample.n, beta)


def mp2(sample, beta: float) -> StatisticValue:
    """Second memoryless-property statistic.

    Same idea as :func:`mp1` but integrating the squared gap over both
    factors of the product s·t, which weights departures differently.
    Evaluates the closed-form reduction, again O(n) after sorting.
    """
    sample = _as_sample(sample)
    beta = _check_beta(beta)
    val = _mp2_rows(sample.values[None, :], sample.sorted_values[None, :], np.array([beta]))
    return StatisticValue(MP2, float(val[0]), sample.n, beta)


def mellin_g(sample, beta: float, a: float = 1.0) -> StatisticValue:
    """Mellin-transform statistic G with weight exp(-(1 + a) t).

    Measures n ∫ ((β + t) M_n(t) - β)² w(t) dt where M_n(t) is the empirical
    Mellin transform (1/n) Σ X_j^(-t); under the model the population version
    of (β + t) M(t) is the constant β. Expanding the square gives pairwise
    terms in the integrals of :func:`mellin_integrals`, so the cost is O(n²).
    """
    sample = _as_sample(sample)
    beta = _check_beta(beta)
    kind = MELLIN_G if a == 1.0 else TestKind(TestTag.MELLIN_G, a)
    val = _mellin_rows(sample.values[None, :], np.array([beta]), kind.tuning_a)
    return StatisticValue(kind, float(val[0]), sample.n, beta)


def exp_edf_suite(sample) -> list:
    """EDF tests of exponentiality applied to the log-transformed sample.

    log X is exponential exactly when X is Pareto, so KS, CV, AD and ZA with
    a fitted exponential rate test the same hypothesis from the log scale.
    The fitted rate appears as ``beta_used`` on each result.
    """
    sample = _as_sample(sample)
    lam = float(mle_rows(sample.values[None, :])[0])
    f, hit = _edf_sorted(sample.sorted_values[None, :], np.array([[lam]]))
    out = []
    for kind, kern in ((EXP_KS, _ks_rows), (EXP_CV, _cv_rows),
                       (EXP_AD, _ad_rows), (EXP_ZA, _za_rows)):
        clamped = bool(hit[0]) if kind.tag in _LOG_TAGS else False
        out.append(StatisticValue(kind, float(kern(f)[0]), sample.n, lam, clamped))
    return out
