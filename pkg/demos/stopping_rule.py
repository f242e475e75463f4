"""
Running until significance
==========================

Test after 15 subjects, add 15 more and test again, and stop as soon as
p < 0.05. Under a true null the realized Type I error grows with the
number of looks. The sweep below is how the default number of looks was
chosen: five looks land close to 15%.
"""

import numpy as np

from freqsim import StoppingRule, stopping_simulation

n_sims = 100_000
for looks in range(1, 9):
    rep = stopping_simulation(StoppingRule(max_looks=looks), n_sims, seed=99)
    print(f"max looks {looks}: type I = {rep.type1_rate:.4f}")

# final t-values pile up just past the critical value
rep = stopping_simulation(StoppingRule(), 20_000, seed=99)
fixed = stopping_simulation(StoppingRule(max_looks=1), 20_000, seed=99)
print(f"|t| beyond critical: {rep.fraction_beyond_critical():.3f} with stopping, "
      f"{fixed.fraction_beyond_critical():.3f} at fixed n")
hist, edges = np.histogram(rep.final_t_values, bins=np.arange(-4, 4.5, 0.5))
for lo, count in zip(edges[:-1], hist):
    print(f"{lo:5.1f} {'#' * (count // 100)}")
