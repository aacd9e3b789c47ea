"""Compare rejection rates under a handful of alternatives.

Two simulation routes are shown side by side. The likelihood route uses
fixed critical values because the transformed statistics are pivotal.
The moment route has no such luxury, so each replication draws one
parametric bootstrap copy and all replications pool into a single
critical value (the warp-speed shortcut). Counts here are desk scale;
multiply reps by ten or more for table-quality numbers.
"""

import time

import numpy as np

from paretogof import (
    AlternativeSpec,
    EstimatorMethod,
    Family,
    PARETO_KINDS,
    RandomStream,
    null_critical_values,
)
from paretogof.inference import power_fixed_critical_many, warp_speed_power_many

n, alpha = 20, 0.05
CV_REPS, POWER_REPS, WARP_REPS = 20_000, 2_000, 5_000

alts = [
    AlternativeSpec(Family.GAMMA, 1.0),
    AlternativeSpec(Family.WEIBULL, 1.5),
    AlternativeSpec(Family.LOG_NORMAL, 2.5),
    AlternativeSpec(Family.TILTED_PARETO, 2.0),
]

t0 = time.perf_counter()
cv = null_critical_values(PARETO_KINDS, n, (alpha,), CV_REPS, RandomStream(11, 0))

print(f"power at n={n}, alpha={alpha} (percent; mme via warp speed, mle via fixed cutoffs)")
header = " ".join(f"{k.label:>8}" for k in PARETO_KINDS)
print(f"{'alternative':>18} {'route':>5} {header}")
for i, alt in enumerate(alts):
    warp = warp_speed_power_many(PARETO_KINDS, EstimatorMethod.MME, alt, n,
                                 alpha, WARP_REPS, RandomStream(11, (2 * i + 1) << 20))
    fixed = power_fixed_critical_many(PARETO_KINDS, alt, n, alpha, POWER_REPS,
                                      cv, RandomStream(11, (2 * i + 2) << 20))
    for route, res in (("mme", warp), ("mle", fixed)):
        cells = " ".join(f"{100 * res[k].power:>8.1f}" for k in PARETO_KINDS)
        print(f"{alt.label:>18} {route:>5} {cells}")

print(f"\nelapsed {time.perf_counter() - t0:.1f}s")

# Two regularities worth noticing. Against most lighter-tailed
# alternatives the moment fit rejects far more often than the likelihood
# fit, with the Mellin and second moment-identity statistics usually in
# front. LogNormal(2.5) is the classic reversal where the ordering flips
# for several statistics.
se = np.sqrt(0.5 * 0.5 / POWER_REPS)
print(f"rough standard error on a 50% cell at {POWER_REPS} reps: {100 * se:.1f} points")
