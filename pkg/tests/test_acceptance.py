"""Acceptance battery.

Each test covers one numbered acceptance criterion and prints the evidence it
gathered; the pytest pass/fail line for the test is the verdict line for the
criterion. Reference values quoted here are the three-decimal
statistics, p-values and integer power percentages this library is expected
to reproduce.

The likelihood-route p-value check is kept at its stated tolerance even
though a faithful parametric bootstrap does not reproduce the reference
column; see its docstring. A failing line there is a finding, not a defect.
"""

import time

import numpy as np
import pytest

from paretogof import (
    ALL_KINDS,
    AlternativeSpec,
    Contaminant,
    DomainError,
    EstimatorMethod,
    Family,
    MELLIN_G,
    MP1,
    MP2,
    MixtureSpec,
    PARETO_KINDS,
    RandomStream,
    Sample,
    Tour,
    estimate_shape,
    golf_dataset,
    pivotal_transform,
)
from paretogof.distributions import pareto_rows
from paretogof.inference import (
    bootstrap_pvalue_many,
    pivotal_statistic_rows,
    power_fixed_critical_many,
    warp_speed_power_many,
)
from paretogof.statistics import order_weights, statistic_rows

from oracles import mp1_by_quadrature, mp2_by_quadrature

ACC_SEED = 560001
BLOCK = 1 << 20
MME, MLE = EstimatorMethod.MME, EstimatorMethod.MLE


def _stream(i: int) -> RandomStream:
    return RandomStream(ACC_SEED, i * BLOCK)


# ---------------------------------------------------------------------------
# reference values (three-decimal statistics and four-decimal p-values)

REF_STAT = {
    ("PGA", "mme"): {"KS": 0.255, "CV": 0.356, "AD": 1.655, "ZA": 3.484,
                     "G": 0.225, "MP1": 0.009, "MP2": 0.009},
    ("PGA", "mle"): {"KS": 0.206, "CV": 0.177, "AD": 0.891, "ZA": 3.440,
                     "G": 0.045, "MP1": 0.005, "MP2": 0.004},
    ("LIV", "mme"): {"KS": 0.151, "CV": 0.110, "AD": 0.603, "ZA": 3.337,
                     "G": 0.069, "MP1": 0.003, "MP2": 0.003},
    ("LIV", "mle"): {"KS": 0.119, "CV": 0.047, "AD": 0.284, "ZA": 3.309,
                     "G": 0.004, "MP1": 0.001, "MP2": 0.002},
}

REF_P = {
    ("PGA", "mme"): {"KS": 0.0243, "CV": 0.0505, "AD": 0.0741, "ZA": 0.1302,
                     "G": 0.0412, "MP1": 0.0489, "MP2": 0.0448},
    ("PGA", "mle"): {"KS": 0.1284, "CV": 0.2668, "AD": 0.3313, "ZA": 0.2273,
                     "G": 0.4480, "MP1": 0.2849, "MP2": 0.3135},
    ("LIV", "mme"): {"KS": 0.4865, "CV": 0.5154, "AD": 0.5926, "ZA": 0.7631,
                     "G": 0.3791, "MP1": 0.4958, "MP2": 0.4457},
    ("LIV", "mle"): {"KS": 0.7714, "CV": 0.8961, "AD": 0.9473, "ZA": 0.9584,
                     "G": 0.8813, "MP1": 0.9212, "MP2": 0.9174},
}


# ---------------------------------------------------------------------------
# criterion 1: size calibration


def test_criterion_one_size_calibration(cv20):
    """Null rejection at alpha=0.05 stays within 0.05 +/- 0.01 at 10^4 reps.

    Likelihood route: every kind at shapes 1, 2, 5 and 10 against the shared
    100k critical-value table. Moment route: the seven power-law statistics
    via warp-speed at shapes 2, 5 and 10. The moment estimator targets the
    mean beta/(beta-1), which diverges at shape 1, so that route has no
    applicable null point there; its shape-1 rates are printed for the
    record but not gated.
    """
    t0 = time.perf_counter()
    n, reps, alpha = 20, 10_000, 0.05
    out_of_band = []

    crit = {k: cv20.value(k, MLE, n, alpha) for k in ALL_KINDS}
    for i, beta in enumerate((1.0, 2.0, 5.0, 10.0)):
        x = pareto_rows(beta, n, reps, _stream(1 + i))
        stats, _ = pivotal_statistic_rows(ALL_KINDS, x)
        for k in ALL_KINDS:
            rate = float(np.mean(stats[k] > crit[k]))
            line = f"  P({beta:g}) {k.label:>6s}/mle  size {rate:.4f}"
            print(line)
            if abs(rate - alpha) > 0.01:
                out_of_band.append(line)

    for i, beta in enumerate((2.0, 5.0, 10.0)):
        got = warp_speed_power_many(PARETO_KINDS, MME,
                                    AlternativeSpec(Family.PARETO, beta),
                                    n, alpha, reps, _stream(8 + i))
        for k in PARETO_KINDS:
            rate = got[k].power
            line = f"  P({beta:g}) {k.label:>6s}/mme  size {rate:.4f}"
            print(line)
            if abs(rate - alpha) > 0.01:
                out_of_band.append(line)

    got = warp_speed_power_many(PARETO_KINDS, MME,
                                AlternativeSpec(Family.PARETO, 1.0),
                                n, alpha, reps, _stream(11))
    for k in PARETO_KINDS:
        print(f"  P(1) {k.label:>6s}/mme  rate {got[k].power:.4f}"
              "  (not gated: mean-based fit has no finite target at shape 1)")

    elapsed = time.perf_counter() - t0
    print(f"criterion 1: 65 gated cells, {elapsed:.0f}s")
    assert elapsed < 600.0
    assert not out_of_band, "size out of the 0.04..0.06 band:\n" + "\n".join(out_of_band)


# ---------------------------------------------------------------------------
# criterion 2: deterministic statistics


def test_criterion_two_case_study_statistics(capsys):
    """All 28 case-study statistics match the reference values to 1e-3 under
    the 3.5 million scale divisor; the other candidate divisors are reported.
    """
    raw = {t: golf_dataset(t, scale=1.0).sample.values for t in Tour}
    rows = []
    worst = 0.0
    for tour in (Tour.PGA, Tour.LIV):
        ds = golf_dataset(tour)
        for est in (MME, MLE):
            beta = estimate_shape(ds.sample, est).value
            got = statistic_rows(PARETO_KINDS, ds.sample.values[None, :], beta)
            for k in PARETO_KINDS:
                value = float(got[k][0])
                ref = REF_STAT[(tour.name, est.value)][k.label]
                diff = value - ref
                worst = max(worst, abs(diff))
                half_up = np.floor(value * 1000.0 + 0.5) / 1000.0
                note = "" if half_up == ref else \
                    f"  (prints {half_up:.3f} under round-half-up)"
                rows.append((abs(diff),
                             f"  {tour.name} {est.value} {k.label:>4s}: "
                             f"{value:.7f} ref {ref:.3f} diff {diff:+.2e}{note}"))
    for _, line in sorted(rows, reverse=True):
        print(line)

    for label, scale in (("divisor 1 (raw dollars)", 1.0),
                         ("divisor min-value", float(min(raw[t].min() for t in Tour)))):
        matches = 0
        try:
            for tour in (Tour.PGA, Tour.LIV):
                ds = golf_dataset(tour, scale=scale)
                for est in (MME, MLE):
                    beta = estimate_shape(ds.sample, est).value
                    got = statistic_rows(PARETO_KINDS, ds.sample.values[None, :], beta)
                    for k in PARETO_KINDS:
                        ref = REF_STAT[(tour.name, est.value)][k.label]
                        matches += abs(float(got[k][0]) - ref) < 1e-3
            print(f"  {label}: {matches}/28 within 1e-3")
        except DomainError as exc:
            print(f"  {label}: infeasible ({exc})")

    print(f"criterion 2: 28/28 within 1e-3 at divisor 3.5e6, worst {worst:.2e}")
    assert worst < 1e-3


# ---------------------------------------------------------------------------
# criterion 3: p-value reproduction


def test_criterion_three_moment_route_p_values_and_findings():
    """Moment-route p-values within +/-0.015 at B=10^4, and the qualitative
    decisions: the PGA sample rejects for KS, MP1, MP2 and G at the 5% level
    and for nothing else, and the LIV sample rejects nothing at the 10% level
    on either route.
    """
    bad = []
    p_by = {}
    for i, tour in enumerate((Tour.PGA, Tour.LIV)):
        ds = golf_dataset(tour)
        for j, est in enumerate((MME, MLE)):
            res = bootstrap_pvalue_many(PARETO_KINDS, est, ds.sample, 10_000,
                                        _stream(16 + 2 * i + j))
            for r in res:
                p_by[(tour.name, est.value, r.kind.label)] = r.p_value

    for tour in ("PGA", "LIV"):
        for k in PARETO_KINDS:
            p = p_by[(tour, "mme", k.label)]
            ref = REF_P[(tour, "mme")][k.label]
            line = f"  {tour} mme {k.label:>4s}: p {p:.4f} ref {ref:.4f} diff {p - ref:+.4f}"
            print(line)
            if abs(p - ref) > 0.015:
                bad.append(line)

    rejected = sorted(k.label for k in PARETO_KINDS
                      if p_by[("PGA", "mme", k.label)] < 0.05)
    print(f"  PGA mme rejects at 5%: {rejected}")
    missing = sorted({"G", "KS", "MP1", "MP2"} - set(rejected))
    if missing:
        bad.append(f"PGA mme fails to reject for {missing}")
    # AD and ZA sit well above the 5% level; CV's reference p-value is 0.0505,
    # on the boundary, so its decision is left unconstrained.
    for label in ("AD", "ZA"):
        if label in rejected:
            bad.append(f"PGA mme unexpectedly rejects for {label}")
    liv_min = min(p_by[("LIV", est, k.label)]
                  for est in ("mme", "mle") for k in PARETO_KINDS)
    print(f"  LIV smallest p on either route: {liv_min:.4f}")
    if liv_min <= 0.10:
        bad.append(f"LIV rejects at 10% (min p {liv_min:.4f})")

    print("criterion 3 (moment route + findings): "
          + ("PASS" if not bad else "FAIL"))
    assert not bad, "\n".join(bad)


def test_criterion_three_likelihood_route_p_values():
    """Likelihood-route p-values against the reference columns, +/-0.015.

    A faithful parametric bootstrap (resample from the fitted shape,
    re-estimate on every resample) does not reproduce these reference
    values: the computed p-values sit far below the quoted ones on both
    datasets. The LIV reference column is reproduced almost exactly by a
    null pool whose shape is held at one with no per-sample re-estimation,
    so the quoted likelihood-route values appear to come from that cheaper
    convention; the PGA column matches neither convention. The tolerance is
    kept as stated and the discrepancy is reported, not masked.
    """
    bad = []
    for i, tour in enumerate((Tour.PGA, Tour.LIV)):
        ds = golf_dataset(tour)
        res = bootstrap_pvalue_many(PARETO_KINDS, MLE, ds.sample, 10_000,
                                    _stream(20 + i))
        for r in res:
            ref = REF_P[(tour.name, "mle")][r.kind.label]
            line = (f"  {tour.name} mle {r.kind.label:>4s}: p {r.p_value:.4f} "
                    f"ref {ref:.4f} diff {r.p_value - ref:+.4f}")
            print(line)
            if abs(r.p_value - ref) > 0.015:
                bad.append(line)
    print("criterion 3 (likelihood route): " + ("PASS" if not bad else "FAIL"))
    assert not bad, (
        "likelihood-route p-values outside +/-0.015 of the reference values "
        "(reference column consistent with a fixed-shape-one null pool, "
        "not with a re-estimating bootstrap):\n" + "\n".join(bad))


# ---------------------------------------------------------------------------
# criterion 4: power spot checks


def test_criterion_four_power_spot_checks(cv20, cv30):
    """Desk-scale spot checks against reference integer percentages, +/-3.

    The mixture cells only reproduce with contaminant mean 1.5 (matched
    Pareto shape 3); the documented mean-3 construction yields far higher
    power and is printed alongside for the record. The second mixture
    reference table is reproduced by the half-normal contaminant, not the
    lognormal one named in its caption, so per the stated fallback all
    three contaminants are reported and the half-normal must hit the cell.
    """
    reps, alpha = 10_000, 0.05
    bad = []

    def check(name, got, ref, tol=0.03):
        line = f"  {name}: {got:.4f} ref {ref:.2f}"
        print(line)
        if abs(got - ref) > tol:
            bad.append(line)

    got = warp_speed_power_many((MELLIN_G, MP1), MME,
                                AlternativeSpec(Family.GAMMA, 1.2),
                                20, alpha, reps, _stream(24))
    check("Gamma(1.2) n=20 G/mme", got[MELLIN_G].power, 0.80)
    check("Gamma(1.2) n=20 MP1/mme", got[MP1].power, 0.75)

    tp3 = AlternativeSpec(Family.TILTED_PARETO, 3.0)
    warp = warp_speed_power_many((MP1,), MME, tp3, 20, alpha, reps, _stream(25))
    fixed = power_fixed_critical_many((MP1,), tp3, 20, alpha, reps, cv20, _stream(26))
    check("TP(3) n=20 MP1/mme", warp[MP1].power, 0.96)
    check("TP(3) n=20 MP1/mle", fixed[MP1].power, 0.38)
    gap = warp[MP1].power - fixed[MP1].power
    print(f"  TP(3) route gap {gap:+.4f}")
    if gap < 0.40:
        bad.append(f"TP(3) moment-over-likelihood gap {gap:.4f} below 0.40")

    w15 = AlternativeSpec(Family.WEIBULL, 1.5)
    warp = warp_speed_power_many(PARETO_KINDS, MME, w15, 30, alpha, reps, _stream(27))
    fixed = power_fixed_critical_many(PARETO_KINDS, w15, 30, alpha, reps, cv30,
                                      _stream(28))
    floor = min(min(warp[k].power for k in PARETO_KINDS),
                min(fixed[k].power for k in PARETO_KINDS))
    print(f"  W(1.5) n=30 lowest of 14 cells: {floor:.4f} (all refs >= .95)")
    if floor < 0.92:
        bad.append(f"W(1.5) n=30 weakest cell {floor:.4f} below 0.92")

    mixes = {}
    for i, (name, cont) in enumerate((("exp", Contaminant.SHIFTED_EXPONENTIAL),
                                      ("halfnorm", Contaminant.SHIFTED_HALF_NORMAL),
                                      ("lognorm", Contaminant.SHIFTED_LOG_NORMAL))):
        got = warp_speed_power_many((MP2,), MME, MixtureSpec(0.9, cont, 1.5),
                                    30, alpha, reps, _stream(29 + i))
        mixes[name] = got[MP2].power
        doc = warp_speed_power_many((MP2,), MME, MixtureSpec(0.9, cont, 3.0),
                                    30, alpha, reps, _stream(32 + i))
        print(f"  {name} mixture p=0.9 n=30 MP2/mme: {got[MP2].power:.4f} at "
              f"contaminant mean 1.5 ({doc[MP2].power:.4f} at documented mean 3)")

    check("exp mixture p=0.9 n=30 MP2/mme", mixes["exp"], 0.23)
    if abs(mixes["lognorm"] - 0.71) <= 0.03:
        print("  second mixture table: lognormal contaminant hits 0.71")
    else:
        print(f"  second mixture table: lognormal misses 0.71 "
              f"({mixes['lognorm']:.4f}); half-normal {mixes['halfnorm']:.4f} "
              f"and exponential {mixes['exp']:.4f} reported alongside")
        check("halfnorm mixture p=0.9 n=30 MP2/mme", mixes["halfnorm"], 0.71)

    print("criterion 4: " + ("PASS" if not bad else "FAIL"))
    assert not bad, "\n".join(bad)


# ---------------------------------------------------------------------------
# criterion 5: oracle equivalences


def _mp1_double_sum(x, beta):
    n = x.size
    mins = np.minimum.outer(x, x)
    return (2.0 / (3.0 * n)) * np.sum(x ** (-1.5 * beta)) \
        - np.sum(mins ** (-0.5 * beta)) / n ** 2 + 8.0 / 15.0


def _mp2_double_sum(x, beta):
    n = x.size
    mins = np.minimum.outer(x, x)
    mid = np.sum(mins ** -beta) + beta * np.sum(mins ** -beta * np.log(mins))
    tail = np.sum((1.0 - x ** (-2.0 * beta)) / (2.0 * beta)
                  - x ** (-2.0 * beta) * np.log(x))
    return 10.0 / 9.0 - mid / n ** 2 - beta * tail / n


def test_criterion_five_oracle_equivalences():
    """100 random (sample, shape) pairs, n <= 30: MP1 within 1e-8 of the
    one-dimensional quadrature oracle, MP2 within 1e-6 of the nested one;
    single-sum order-weight forms equal the naive double sums to 1e-10 with
    the weights summing to n^2; the transform-then-evaluate and plug-in
    conventions agree to 1e-10 for the six power-law statistics.
    """
    rng = np.random.default_rng(ACC_SEED)
    kinds = [k for k in PARETO_KINDS if k.label != "G"]
    worst = {"mp1": 0.0, "mp2": 0.0, "double": 0.0, "pivot": 0.0}
    for _ in range(100):
        n = int(rng.integers(2, 31))
        beta_true = float(rng.uniform(0.5, 3.0))
        x = np.sort((1.0 - rng.random(n)) ** (-1.0 / beta_true))
        bhat = float(rng.uniform(0.2, 5.0))
        sample = Sample(x)

        got = statistic_rows((MP1, MP2), x[None, :], bhat)
        m1, m2 = float(got[MP1][0]), float(got[MP2][0])
        worst["mp1"] = max(worst["mp1"], abs(m1 - mp1_by_quadrature(x, bhat)))
        worst["mp2"] = max(worst["mp2"], abs(m2 - mp2_by_quadrature(x, bhat)))
        worst["double"] = max(worst["double"],
                              abs(m1 - _mp1_double_sum(x, bhat)),
                              abs(m2 - _mp2_double_sum(x, bhat)))
        assert float(order_weights(n).sum()) == float(n * n)

        beta_ml = estimate_shape(sample, MLE).value
        plug = statistic_rows(kinds, x[None, :], beta_ml)
        piv = statistic_rows(kinds, pivotal_transform(sample).values[None, :], 1.0)
        worst["pivot"] = max(worst["pivot"],
                             max(abs(float(plug[k][0]) - float(piv[k][0]))
                                 for k in kinds))

    print(f"criterion 5 worst deviations: MP1 vs quadrature {worst['mp1']:.2e}, "
          f"MP2 vs quadrature {worst['mp2']:.2e}, double-sum {worst['double']:.2e}, "
          f"pivotal identity {worst['pivot']:.2e}")
    assert worst["mp1"] < 1e-8
    assert worst["mp2"] < 1e-6
    assert worst["double"] < 1e-10
    assert worst["pivot"] < 1e-10
