"""
Power of a one-sample t-test
============================

Analytic power from the noncentral t distribution, first over effect
sizes at a fixed sample size, then over sample sizes at a fixed effect.
"""

import numpy as np

from freqsim import PowerQuery, power_curve, type12_regions

base = PowerQuery(effect=10, sd=40, n=10)

# effect axis: starts at alpha and rises slowly with only ten subjects
by_effect = power_curve(base, effects=np.arange(0, 81, 10))
for x, p in zip(by_effect.x, by_effect.power):
    print(f"effect {x:5.0f}   power {p:.3f}")

# sample-size axis: an effect of a quarter sd needs well over 100 subjects
by_n = power_curve(base, ns=[10, 25, 50, 100, 150, 200])
for x, p in zip(by_n.x, by_n.power):
    print(f"n {int(x):4d}   power {p:.3f}")

# the normal picture behind it: rejection bounds and the Type II mass
r = type12_regions(mu_alt=2.0, sd_sampling=1.0, alpha=0.05)
print(f"reject outside ({r.lower:.2f}, {r.upper:.2f}); type II = {r.type2:.4f}")
