"""
A t-value from three summary numbers
====================================

A by-subject analysis only needs the mean difference, its standard
deviation and the number of subjects.
"""

from freqsim import t_from_summary

# a large sample with a noisy but positive mean difference (ms)
res = t_from_summary(257.46, 376.47, 1000)
print(f"se = {res.se:.3f}   t({res.df}) = {res.t_value:.2f}   p = {res.p_value:.2e}")

# the same mean and sd with only 12 subjects is far less convincing
small = t_from_summary(257.46, 376.47, 12)
print(f"n = 12: t({small.df}) = {small.t_value:.2f}   p = {small.p_value:.3f}")
