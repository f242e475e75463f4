"""
Significant here, not significant there
=======================================

Two nested comparisons on the same subjects: one reaches significance,
the other does not. That pattern is not evidence that the two effects
differ; the interaction test asks that question directly.
"""

from freqsim import nested_comparison_scenario

demo = nested_comparison_scenario(seed=2016)
for name, res in (("A", demo.test_a), ("B", demo.test_b), ("A - B", demo.interaction)):
    print(f"{name:>5}: estimate {res.estimate:8.4f}  t({res.df}) = {res.t_value:6.2f}  p = {res.p_value:.3f}")
