"""
Choosing a transformation for reading times
===========================================

Profile likelihood of the Box-Cox power for right-skewed, simulated
reading times. Lambda near 0 points to the log; near -1 to the
reciprocal. The data are lognormal within each subject, but with only 40
subject offsets the pooled sample need not look lognormal, so the
estimate can sit away from 0.
"""

from freqsim import DesignSpec, GenerativeParams, RandomStream, boxcox_profile, simulate_dataset

data = simulate_dataset(DesignSpec(40, 16), GenerativeParams(), RandomStream(3))
res = boxcox_profile(data.rt)
print(f"lambda hat {res.lambda_hat:.3f}, 95% interval ({res.ci_lambda[0]:.3f}, {res.ci_lambda[1]:.3f})")

# a coarse look at the profile
for lam, ll in zip(res.profile_lambda[::50], res.profile_loglik[::50]):
    print(f"lambda {lam:5.2f}  loglik {ll:10.2f}")
