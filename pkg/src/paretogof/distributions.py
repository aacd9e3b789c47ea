"""Sampling and distribution functions for the Pareto type I model and its alternatives.

The null model throughout is the Pareto type I distribution with scale fixed
at one: F(x) = 1 - x**(-beta) on x > 1. Alternative families are right-shifted
by one unit so that they live on the same support, and mixture models combine a
mean-matched Pareto with a shifted contaminant.

All sampling goes through :class:`RandomStream`, a counter-based substream
handle. Replication r of any simulation owns the substream ``stream.shifted(r)``,
which makes parallel runs order-independent and bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "DomainError",
    "RandomStream",
    "Sample",
    "Family",
    "AlternativeSpec",
    "Contaminant",
    "MixtureSpec",
    "pareto_cdf",
    "pareto_ppf",
    "pareto_sample",
    "pareto_rows",
    "alt_cdf",
    "alt_sample",
    "alternative_rows",
    "mixture_cdf",
    "mixture_sample",
    "bootstrap_rows",
]

_MASK64 = (1 << 64) - 1
_MAX_REDRAWS = 10


class DomainError(ValueError):
    """Raised when data or parameters fall outside the supported domain."""


@dataclass(frozen=True)
class RandomStream:
    """Keyed substream of a counter-based generator.

    Equal ``(seed, stream_id)`` pairs always yield the identical variate
    sequence; distinct stream ids give statistically independent streams, so a
    simulation can hand substream ``stream.shifted(r)`` to replication ``r``
    without any cross-talk regardless of execution order.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = ((self.seed & _MASK64) << 64) | (self.stream_id & _MASK64)
        return np.random.Generator(np.random.Philox(key=key))

    def shifted(self, offset: int) -> "RandomStream":
        """Substream at ``stream_id + offset`` under the same seed."""
        return RandomStream(self.seed, self.stream_id + offset)


class Sample:
    """Immutable one-dimensional sample on the support x > 1.

    Values are validated eagerly: every observation must be finite and
    strictly greater than one, the lower support endpoint of the null model.
    The sorted view is computed once on first use with a stable sort, so tied
    values keep their original relative order.
    """

    __slots__ = ("_values", "_sorted")

    def __init__(self, values) -> None:
        arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
        if arr.size == 0:
            raise DomainError("sample must contain at least one observation")
        if not np.all(np.isfinite(arr)):
            raise DomainError("sample contains non-finite values")
        if np.any(arr <= 1.0):
            bad = float(arr[arr <= 1.0][0])
            raise DomainError(
                f"all observations must exceed 1 (support of the model); got {bad!r}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "_values", arr)
        object.__setattr__(self, "_sorted", None)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def sorted_values(self) -> np.ndarray:
        if self._sorted is None:
            srt = np.sort(self._values, kind="stable")
            srt.flags.writeable = False
            object.__setattr__(self, "_sorted", srt)
        return self._sorted

    @property
    def n(self) -> int:
        return int(self._values.size)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self._values)

    def __repr__(self) -> str:
        return f"Sample(n={self.n}, min={self._values.min():g}, max={self._values.max():g})"


class Family(str, Enum):
    """Alternative families used in the power study."""

    PARETO = "pareto"
    GAMMA = "gamma"
    WEIBULL = "weibull"
    LOG_NORMAL = "lognormal"
    HALF_NORMAL = "halfnormal"
    LINEAR_FAILURE_RATE = "lfr"
    BETA_EXPONENTIAL = "betaexp"
    TILTED_PARETO = "tiltedpareto"
    DHILLON = "dhillon"


_FAMILY_LABEL = {
    Family.PARETO: "Pareto",
    Family.GAMMA: "Gamma",
    Family.WEIBULL: "Weibull",
    Family.LOG_NORMAL: "LogNormal",
    Family.HALF_NORMAL: "HalfNormal",
    Family.LINEAR_FAILURE_RATE: "LFR",
    Family.BETA_EXPONENTIAL: "BetaExp",
    Family.TILTED_PARETO: "TiltedPareto",
    Family.DHILLON: "Dhillon",
}


@dataclass(frozen=True)
class AlternativeSpec:
    """One alternative distribution: a family plus its shape parameter.

    Every non-Pareto family is shifted right by one unit so its support is
    x > 1; the Pareto family itself needs no shift. The shift is derived from
    the family and cannot be overridden.
    """

    family: Family
    theta: float
    shift: float = field(init=False)

    def __post_init__(self) -> None:
        if not np.isfinite(self.theta) or self.theta <= 0:
            raise DomainError(f"theta must be positive, got {self.theta!r}")
        object.__setattr__(
            self, "shift", 0.0 if self.family is Family.PARETO else 1.0
        )

    @property
    def label(self) -> str:
        theta = self.theta
        txt = f"{theta:g}"
        return f"{_FAMILY_LABEL[self.family]}({txt})"


class Contaminant(str, Enum):
    """Contaminating component of a Pareto mixture."""

    SHIFTED_EXPONENTIAL = "exponential"
    SHIFTED_HALF_NORMAL = "halfnormal"
    SHIFTED_LOG_NORMAL = "lognormal"


_CONTAMINANT_LABEL = {
    Contaminant.SHIFTED_EXPONENTIAL: "ExpMix",
    Contaminant.SHIFTED_HALF_NORMAL: "HalfNormMix",
    Contaminant.SHIFTED_LOG_NORMAL: "LogNormMix",
}


@dataclass(frozen=True)
class MixtureSpec:
    """Mixture of a contaminant (probability ``p``) with a mean-matched Pareto.

    The Pareto component's shape is solved from the mean-matching condition
    beta/(beta - 1) = contaminant_mean, so both components share the same
    mean and the mixing proportion is the only knob that moves the mixture
    away from the null.
    """

    p: float
    contaminant: Contaminant
    contaminant_mean: float = 3.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"mixing proportion must lie in [0, 1], got {self.p!r}")
        if not np.isfinite(self.contaminant_mean) or self.contaminant_mean <= 1.0:
            raise DomainError(
                "contaminant_mean must exceed 1 (shifted support), got "
                f"{self.contaminant_mean!r}"
            )

    @property
    def pareto_beta(self) -> float:
        m = self.contaminant_mean
        return m / (m - 1.0)

    @property
    def label(self) -> str:
        return f"{_CONTAMINANT_LABEL[self.contaminant]}(p={self.p:g})"


# ---------------------------------------------------------------------------
# Null model


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not np.isfinite(beta) or beta <= 0:
        raise DomainError(f"shape parameter must be positive, got {beta!r}")
    return beta


def pareto_cdf(x, beta: float):
    """Distribution function 1 - x**(-beta), zero at and below the support endpoint."""
    beta = _check_beta(beta)
    x = np.asarray(x, dtype=np.float64)
    out = np.where(x > 1.0, 1.0 - np.power(np.maximum(x, 1.0), -beta), 0.0)
    return out if out.ndim else float(out)


def pareto_ppf(u, beta: float):
    """Quantile function (1 - u)**(-1/beta) for u in [0, 1)."""
    beta = _check_beta(beta)
    u = np.asarray(u, dtype=np.float64)
    out = np.power(1.0 - u, -1.0 / beta)
    return out if out.ndim else float(out)


def _pareto_draw(beta: float):
    def draw(g: np.random.Generator, n: int) -> np.ndarray:
        return np.power(1.0 - g.random(n), -1.0 / beta)

    return draw


# ---------------------------------------------------------------------------
# Alternatives: distribution functions

try:  # scipy is a hard dependency; the guard only keeps import errors readable
    from scipy import special as _special
except ImportError as exc:  # pragma: no cover
    raise ImportError("paretogof requires scipy") from exc


def alt_cdf(spec: AlternativeSpec, x):
    """CDF of an alternative family at ``x``; zero below the support."""
    x = np.asarray(x, dtype=np.float64)
    th = spec.theta
    if spec.family is Family.PARETO:
        return pareto_cdf(x, th)
    y = np.maximum(x - 1.0, 0.0)
    if spec.family is Family.GAMMA:
        out = _special.gammainc(th, y)
    elif spec.family is Family.WEIBULL:
        out = -np.expm1(-np.power(y, th))
    elif spec.family is Family.LOG_NORMAL:
        with np.errstate(divide="ignore"):
            out = np.where(y > 0.0, _special.ndtr(np.log(np.where(y > 0, y, 1.0)) / th), 0.0)
    elif spec.family is Family.HALF_NORMAL:
        out = _special.erf(y / (th * np.sqrt(2.0)))
    elif spec.family is Family.LINEAR_FAILURE_RATE:
        out = -np.expm1(-(y + 0.5 * th * y * y))
    elif spec.family is Family.BETA_EXPONENTIAL:
        out = np.power(-np.expm1(-y), th)
    elif spec.family is Family.TILTED_PARETO:
        out = np.where(x > 1.0, 1.0 - (1.0 + th) / (np.maximum(x, 1.0) + th), 0.0)
    elif spec.family is Family.DHILLON:
        lx = np.log(np.maximum(x, 1.0))
        out = np.where(x > 1.0, -np.expm1(-np.power(lx, th + 1.0)), 0.0)
    else:  # pragma: no cover
        raise ValueError(f"unhandled family {spec.family}")
    out = np.where(x <= 1.0, 0.0, out)
    return out if out.ndim else float(out)


def _alt_draw(spec: AlternativeSpec):
    """Per-family sampler drawing ``n`` variates from a Generator.

    Families with a closed-form quantile use inverse transform sampling on a
    single block of uniforms; the remaining four use the standard library
    generators and are shifted up by one unit.
    """
    th = spec.theta
    fam = spec.family
    if fam is Family.PARETO:
        return _pareto_draw(th)
    if fam is Family.GAMMA:
        return lambda g, n: 1.0 + g.gamma(th, size=n)
    if fam is Family.WEIBULL:
        return lambda g, n: 1.0 + g.weibull(th, size=n)
    if fam is Family.LOG_NORMAL:
        return lambda g, n: 1.0 + g.lognormal(0.0, th, size=n)
    if fam is Family.HALF_NORMAL:
        return lambda g, n: 1.0 + np.abs(g.normal(0.0, th, size=n))
    if fam is Family.LINEAR_FAILURE_RATE:
        def draw_lfr(g, n):
            load = -np.log1p(-g.random(n))
            # stable root of theta*y**2/2 + y = load
            return 1.0 + 2.0 * load / (1.0 + np.sqrt(1.0 + 2.0 * th * load))
        return draw_lfr
    if fam is Family.BETA_EXPONENTIAL:
        return lambda g, n: 1.0 - np.log1p(-np.power(g.random(n), 1.0 / th))
    if fam is Family.TILTED_PARETO:
        return lambda g, n: (1.0 + th) / (1.0 - g.random(n)) - th
    if fam is Family.DHILLON:
        return lambda g, n: np.exp(np.power(-np.log1p(-g.random(n)), 1.0 / (th + 1.0)))
    raise ValueError(f"unhandled family {fam}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Mixtures


def _contaminant_params(spec: MixtureSpec):
    m = spec.contaminant_mean - 1.0
    if spec.contaminant is Contaminant.SHIFTED_EXPONENTIAL:
        return {"scale": m}
    if spec.contaminant is Contaminant.SHIFTED_HALF_NORMAL:
        return {"sigma": m * np.sqrt(np.pi / 2.0)}
    # lognormal with sigma fixed at 1, mu solved from the mean
    return {"mu": np.log(m) - 0.5, "sigma": 1.0}


def _mixture_draw(spec: MixtureSpec):
    beta = spec.pareto_beta
    params = _contaminant_params(spec)
    kind = spec.contaminant
    p = spec.p

    def draw(g: np.random.Generator, n: int) -> np.ndarray:
        # Fixed consumption order keeps the stream layout deterministic:
        # mixture indicators, then Pareto uniforms, then contaminant draws.
        pick = g.random(n) < p
        pareto_vals = np.power(1.0 - g.random(n), -1.0 / beta)
        if kind is Contaminant.SHIFTED_EXPONENTIAL:
            contam = 1.0 + g.exponential(params["scale"], size=n)
        elif kind is Contaminant.SHIFTED_HALF_NORMAL:
            contam = 1.0 + np.abs(g.normal(0.0, params["sigma"], size=n))
        else:
            contam = 1.0 + g.lognormal(params["mu"], params["sigma"], size=n)
        return np.where(pick, contam, pareto_vals)

    return draw


def mixture_cdf(spec: MixtureSpec, x):
    """CDF of the mixture: p * contaminant + (1 - p) * mean-matched Pareto."""
    x = np.asarray(x, dtype=np.float64)
    y = np.maximum(x - 1.0, 0.0)
    params = _contaminant_params(spec)
    if spec.contaminant is Contaminant.SHIFTED_EXPONENTIAL:
        gc = -np.expm1(-y / params["scale"])
    elif spec.contaminant is Contaminant.SHIFTED_HALF_NORMAL:
        gc = _special.erf(y / (params["sigma"] * np.sqrt(2.0)))
    else:
        with np.errstate(divide="ignore"):
            logs = np.log(np.where(y > 0, y, 1.0))
            gc = np.where(y > 0.0, _special.ndtr((logs - params["mu"]) / params["sigma"]), 0.0)
    out = spec.p * gc + (1.0 - spec.p) * pareto_cdf(x, spec.pareto_beta)
    out = np.where(x <= 1.0, 0.0, out)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Row-block sampling used by the simulation machinery


def _fill_rows(n: int, reps: int, stream: RandomStream, offset: int, step: int, draw) -> np.ndarray:
    """Draw a (reps, n) matrix, row r from substream ``offset + step * r``.

    Rows are validated against the support (finite, strictly above one).
    An invalid draw, which happens only when a uniform lands exactly on an
    endpoint, is redrawn by continuing the same substream so that every other
    row is unaffected.
    """
    if n < 1:
        raise ValueError("sample size must be at least 1")
    if reps < 1:
        raise ValueError("replication count must be at least 1")
    out = np.empty((reps, n), dtype=np.float64)
    for r in range(reps):
        g = stream.shifted(offset + step * r).generator()
        row = np.asarray(draw(g, n), dtype=np.float64)
        tries = 0
        while not (np.all(np.isfinite(row)) and np.all(row > 1.0)):
            tries += 1
            if tries > _MAX_REDRAWS:
                raise DomainError(
                    f"substream {offset + step * r} produced no valid sample in "
                    f"{_MAX_REDRAWS} redraws"
                )
            row = np.asarray(draw(g, n), dtype=np.float64)
        out[r] = row
    return out


def pareto_sample(beta: float, n: int, stream: RandomStream) -> Sample:
    """Draw ``n`` variates from the Pareto model by inverse transform."""
    beta = _check_beta(beta)
    return Sample(_fill_rows(n, 1, stream, 0, 1, _pareto_draw(beta))[0])


def pareto_rows(beta: float, n: int, reps: int, stream: RandomStream,
                offset: int = 0, step: int = 1) -> np.ndarray:
    """(reps, n) matrix of null samples; row r uses substream offset + step*r."""
    beta = _check_beta(beta)
    return _fill_rows(n, reps, stream, offset, step, _pareto_draw(beta))


def alt_sample(spec: AlternativeSpec, n: int, stream: RandomStream) -> Sample:
    """Draw ``n`` variates from one alternative family."""
    return Sample(_fill_rows(n, 1, stream, 0, 1, _alt_draw(spec))[0])


def mixture_sample(spec: MixtureSpec, n: int, stream: RandomStream) -> Sample:
    """Draw ``n`` variates from a contaminated Pareto mixture."""
    return Sample(_fill_rows(n, 1, stream, 0, 1, _mixture_draw(spec))[0])


def alternative_rows(spec, n: int, reps: int, stream: RandomStream,
                     offset: int = 0, step: int = 1) -> np.ndarray:
    """(reps, n) matrix from an :class:`AlternativeSpec` or :class:`MixtureSpec`."""
    if isinstance(spec, MixtureSpec):
        draw = _mixture_draw(spec)
    elif isinstance(spec, AlternativeSpec):
        draw = _alt_draw(spec)
    else:
        raise TypeError(f"expected AlternativeSpec or MixtureSpec, got {type(spec).__name__}")
    return _fill_rows(n, reps, stream, offset, step, draw)


def bootstrap_rows(betas: np.ndarray, n: int, stream: RandomStream,
                   offset: int = 0, step: int = 1) -> np.ndarray:
    """Null samples with a per-row shape: row r is drawn from P(betas[r]).

    This is the parametric-bootstrap building block; the warp-speed power
    routine interleaves these substreams with the alternative draws.
    """
    betas = np.asarray(betas, dtype=np.float64)
    if betas.ndim != 1:
        raise ValueError("betas must be one-dimensional")
    if np.any(~np.isfinite(betas)) or np.any(betas <= 0):
        raise DomainError("bootstrap shapes must be positive and finite")
    reps = betas.size
    out = np.empty((reps, n), dtype=np.float64)
    for r in range(reps):
        g = stream.shifted(offset + step * r).generator()
        b = betas[r]
        row = np.power(1.0 - g.random(n), -1.0 / b)
        tries = 0
        while not (np.all(np.isfinite(row)) and np.all(row > 1.0)):
            tries += 1
            if tries > _MAX_REDRAWS:
                raise DomainError(
                    f"substream {offset + step * r} produced no valid bootstrap "
                    f"sample in {_MAX_REDRAWS} redraws"
                )
            row = np.power(1.0 - g.random(n), -1.0 / b)
        out[r] = row
    return out
