"""
Significant estimates against the true effect
=============================================

For several true effects and two designs, keep only the significant
estimates and compare them with the truth. Small designs report only
inflated (and sometimes wrongly signed) effects.

Pass ``--quick`` for a smaller run.
"""

import sys

import numpy as np

from freqsim import DesignSpec, estimate_distribution_experiment

n_sims = 40 if "--quick" in sys.argv else 200
effects = [0.01, 0.02, 0.03, 0.05, 0.1]
designs = [DesignSpec(30, 16), DesignSpec(80, 40)]

exp = estimate_distribution_experiment(effects, designs, n_sims, seed=7)

print(" effect  design  power  n_sig  median_sig  type_s")
for cell in exp.cells:
    sig = [r.beta_hat for r in exp.significant_rows()
           if r.effect == cell.effect and r.design == cell.design]
    med = f"{np.median(sig):10.4f}" if sig else "        NA"
    print(f"{cell.effect:7.2f}  {cell.design:>6}  {cell.power:5.2f}  {len(sig):5d}  {med}"
          f"  {cell.type_s if cell.type_s is not None else float('nan'):6.3f}")
