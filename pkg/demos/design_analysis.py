"""
Power, Type S and Type M error of a small reading study
=======================================================

Simulate many 40-subject, 16-item experiments with a tiny true effect on
log reading times, fit each with crossed random intercepts, and look at
what the significant results say about the effect.
"""

import math

from freqsim import DesignSpec, GenerativeParams, design_analysis

design = DesignSpec(n_subjects=40, n_items=16)
params = GenerativeParams(effect_log=0.01)

rep = design_analysis(design, params, n_sims=1000, seed=2016)

print(f"true effect at the median: {math.exp(params.grand_mean_log) * params.effect_log:.1f} ms")
print(f"power          {rep.power:.3f}")
print(f"Type S         {rep.type_s:.3f}  (wrong sign among significant fits)")
print(f"Type M         {rep.type_m:.2f}  (exaggeration among significant fits)")
print(f"converged fits {rep.n_converged} of {rep.n_sims}")

# a well-powered design removes the exaggeration
big = design_analysis(design, params.with_effect(0.1), n_sims=200, seed=2016)
print(f"effect 0.1: power {big.power:.3f}, Type S {big.type_s:.3f}, Type M {big.type_m:.2f}")
