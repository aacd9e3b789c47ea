"""Goodness-of-fit testing for the Pareto type I distribution.

The package tests whether data on x > 1 follow the unit-scale Pareto law
F(x) = 1 - x**(-beta) with unknown shape. Two of the statistics, MP1 and MP2,
exploit the multiplicative memoryless property that characterizes this law;
the rest are classical distribution-function discrepancies, a Mellin
transform statistic, and exponentiality tests on the log scale. A simulation
harness estimates critical values, p-values and power with reproducible
substream-per-replication random number generation.

Typical single-sample use::

    from paretogof import Sample, RandomStream, bootstrap_pvalue, MP2
    from paretogof.estimation import EstimatorMethod

    result = bootstrap_pvalue(MP2, EstimatorMethod.MME, Sample(data),
                              B=10_000, stream=RandomStream(seed=7))
    print(result.statistic, result.p_value)
"""

from .distributions import (
    AlternativeSpec,
    Contaminant,
    DomainError,
    Family,
    MixtureSpec,
    RandomStream,
    Sample,
    alt_cdf,
    alt_sample,
    mixture_cdf,
    mixture_sample,
    pareto_cdf,
    pareto_ppf,
    pareto_sample,
)
from .estimation import (
    EstimatorMethod,
    ShapeEstimate,
    estimate_mle,
    estimate_mme,
    estimate_shape,
    pivotal_transform,
)
from .inference import (
    ConfigurationError,
    CriticalValueTable,
    PowerEstimate,
    TestResult,
    UnsupportedPathError,
    bootstrap_pvalue,
    bootstrap_pvalue_many,
    null_critical_value,
    null_critical_values,
    power_fixed_critical,
    upper_quantile,
    warp_speed_power,
)
from .statistics import (
    AD,
    ALL_KINDS,
    CV,
    EXP_KINDS,
    KS,
    MELLIN_G,
    MP1,
    MP2,
    PARETO_KINDS,
    ZA,
    StatisticValue,
    TestKind,
    TestTag,
    ad,
    cv,
    exp_edf_suite,
    ks,
    mellin_g,
    mp1,
    mp2,
    za,
)
from .study import (
    FIXED_ALTERNATIVES,
    GolfDataset,
    PowerTable,
    StudyConfig,
    Tour,
    golf_dataset,
    mixture_grid,
    render_table,
    run_golf_application,
    run_power_study,
    run_power_table,
)

__version__ = "0.1.0"

__all__ = [
    "AD",
    "ALL_KINDS",
    "AlternativeSpec",
    "CV",
    "ConfigurationError",
    "Contaminant",
    "CriticalValueTable",
    "DomainError",
    "EXP_KINDS",
    "EstimatorMethod",
    "FIXED_ALTERNATIVES",
    "Family",
    "GolfDataset",
    "KS",
    "MELLIN_G",
    "MP1",
    "MP2",
    "MixtureSpec",
    "PARETO_KINDS",
    "PowerEstimate",
    "PowerTable",
    "RandomStream",
    "Sample",
    "ShapeEstimate",
    "StatisticValue",
    "StudyConfig",
    "TestKind",
    "TestResult",
    "TestTag",
    "Tour",
    "UnsupportedPathError",
    "ZA",
    "ad",
    "alt_cdf",
    "alt_sample",
    "bootstrap_pvalue",
    "bootstrap_pvalue_many",
    "cv",
    "estimate_mle",
    "estimate_mme",
    "estimate_shape",
    "exp_edf_suite",
    "golf_dataset",
    "ks",
    "mellin_g",
    "mixture_cdf",
    "mixture_grid",
    "mixture_sample",
    "mp1",
    "mp2",
    "null_critical_value",
    "null_critical_values",
    "pareto_cdf",
    "pareto_ppf",
    "pareto_sample",
    "pivotal_transform",
    "power_fixed_critical",
    "render_table",
    "run_golf_application",
    "run_power_study",
    "run_power_table",
    "upper_quantile",
    "warp_speed_power",
    "za",
]
