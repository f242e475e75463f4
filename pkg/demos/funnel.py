"""
A funnel table for a set of studies
===================================

Precision (1/se^2) against each study's estimate, plus the
inverse-variance weighted grand mean. The studies here are synthetic.
"""

from freqsim import funnel_data, synthetic_studies

fd = funnel_data(synthetic_studies(n_studies=15, true_effect=18, seed=2016))

for sid, m, p in sorted(zip(fd.study_id, fd.mean_effect, fd.precision), key=lambda r: r[2]):
    print(f"{sid}  effect {m:7.1f}  precision {p:.5f}")

gm = fd.grand_mean
print(f"weighted grand mean {gm.estimate:.2f} (se {gm.se:.2f}); unweighted {fd.unweighted_mean:.2f}")
