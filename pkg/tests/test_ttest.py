import math
import os

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from freqsim.distributions import t_cdf
from freqsim.rng import RandomStream
from freqsim.ttest import (DegenerateSampleError, bonferroni, interaction_t, one_sample_t,
                           paired_t, t_from_summary)

from conftest import binomial_band


def with_summary(mean, sd, n, seed=0):
    z = np.random.default_rng(seed).standard_normal(n)
    z = (z - z.mean()) / z.std(ddof=1)
    return mean + sd * z


def test_summary_t_reported_value():
    res = t_from_summary(257.46, 376.47, 1000, 0)
    assert res.t_value == pytest.approx(21.63, abs=0.01)
    assert res.df == 999
    assert res.p_value < 1e-10


def test_vector_with_reported_summary():
    res = one_sample_t(with_summary(257.46, 376.47, 1000), 0.0)
    assert res.t_value == pytest.approx(21.63, abs=0.01)
    assert res.estimate == pytest.approx(257.46, rel=1e-12)
    assert res.sd_hat == pytest.approx(376.47, rel=1e-12)


def test_summary_examples():
    assert t_from_summary(0, 1, 100, 0).t_value == 0.0
    assert t_from_summary(10, 40, 10, 0).t_value == pytest.approx(0.7906, abs=1e-4)


def test_small_vector_against_hand_formula():
    x = [1.0, 2.0, 3.0, 4.0, 5.0]
    mean = sum(x) / 5
    sd = math.sqrt(sum((v - mean) ** 2 for v in x) / 4)
    expected = mean / (sd / math.sqrt(5))
    res = one_sample_t(x, 0.0)
    assert res.t_value == pytest.approx(expected, rel=1e-12)
    assert res.t_value == pytest.approx(4.2426, abs=1e-4)
    assert res.p_value == pytest.approx(2 * (1 - t_cdf(expected, 4)), rel=1e-10)


def test_mean_equal_to_null_gives_t_zero():
    res = one_sample_t([-2.0, -1.0, 0.0, 1.0, 2.0], 0.0)
    assert res.t_value == 0.0
    assert res.p_value == 1.0


def test_summary_matches_vector():
    x = with_summary(3.0, 2.0, 25, seed=4)
    a, b = one_sample_t(x, 1.0), t_from_summary(3.0, 2.0, 25, 1.0)
    assert a.t_value == pytest.approx(b.t_value, rel=1e-12)
    assert a.p_value == pytest.approx(b.p_value, rel=1e-10)


@pytest.mark.parametrize("x", [[1.0], [], [3.0, 3.0, 3.0]])
def test_one_sample_degenerate_inputs(x):
    with pytest.raises(ValueError):
        one_sample_t(x, 0.0)


def test_zero_variance_is_its_own_error():
    with pytest.raises(DegenerateSampleError):
        one_sample_t([2.0, 2.0, 2.0])
    with pytest.raises(DegenerateSampleError):
        t_from_summary(1.0, 0.0, 10)


def test_summary_rejects_small_n():
    with pytest.raises(ValueError):
        t_from_summary(1.0, 1.0, 1)


@settings(max_examples=50)
@given(x=hnp.arrays(float, st.integers(3, 40), elements=st.floats(-1e3, 1e3)),
       c=st.floats(1e-2, 1e2), mu0=st.floats(-10, 10))
def test_scale_shift_and_sign(x, c, mu0):
    assume(np.std(x, ddof=1) > 1e-6 * max(1.0, np.max(np.abs(x))))
    base = one_sample_t(x, mu0)
    scaled = one_sample_t(c * x, c * mu0)
    shifted = one_sample_t(x + 5.0, mu0 + 5.0)
    negated = one_sample_t(-x, -mu0)
    for other in (scaled, shifted):
        assert other.t_value == pytest.approx(base.t_value, rel=1e-6, abs=1e-9)
        assert other.p_value == pytest.approx(base.p_value, rel=1e-6, abs=1e-12)
    assert negated.t_value == pytest.approx(-base.t_value, rel=1e-12, abs=1e-12)
    assert negated.p_value == pytest.approx(base.p_value, rel=1e-12)


@settings(max_examples=50)
@given(x=hnp.arrays(float, st.integers(3, 30), elements=st.floats(-100, 100)))
def test_result_invariants(x):
    assume(np.std(x, ddof=1) > 1e-6 * max(1.0, np.max(np.abs(x))))
    r = one_sample_t(x, 0.5)
    assert r.se == pytest.approx(r.sd_hat / math.sqrt(r.n), rel=1e-12)
    assert r.t_value == pytest.approx((r.estimate - r.mu0) / r.se, rel=1e-12)
    assert r.p_value == pytest.approx(2 * (1 - t_cdf(abs(r.t_value), r.df)), abs=1e-12)


def test_paired_equals_one_sample_on_differences():
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=30), rng.normal(size=30)
    assert paired_t(x, y, 0.2) == one_sample_t(x - y, 0.2)


def test_paired_constant_shift_is_degenerate():
    x = np.random.default_rng(8).normal(500, 50, size=20)
    with pytest.raises(DegenerateSampleError):
        paired_t(x, x + 0.3)


def test_paired_length_mismatch():
    with pytest.raises(ValueError):
        paired_t([1.0, 2.0, 3.0], [1.0, 2.0])


def test_paired_null_calibration():
    reps, n = 10_000, 20
    rejections = 0
    for k in range(reps):
        g = RandomStream(77, k).generator()
        x, y = g.standard_normal(n), g.standard_normal(n)
        rejections += paired_t(x, y).p_value < 0.05
    assert abs(rejections / reps - 0.05) <= 0.007


def test_one_sample_null_calibration():
    reps, n = 10_000, 12
    rate = np.mean([one_sample_t(RandomStream(78, k).generator().normal(3.0, 2.0, n), 3.0).p_value < 0.05
                    for k in range(reps)])
    lo, hi = binomial_band(0.05, reps)
    assert lo <= rate <= hi


def test_interaction_is_test_of_difference():
    rng = np.random.default_rng(5)
    a, b = rng.normal(-0.1, 0.3, 60), rng.normal(0.03, 0.3, 60)
    assert interaction_t(a, b) == one_sample_t(a - b, 0.0)


def test_interaction_equal_diffs_degenerate():
    a = np.linspace(-1, 1, 10)
    with pytest.raises(DegenerateSampleError):
        interaction_t(a, a.copy())


def test_interaction_length_mismatch():
    with pytest.raises(ValueError):
        interaction_t([1.0, 2.0], [1.0, 2.0, 3.0])


@pytest.mark.parametrize("p, expected", [
    ([0.01], [0.01]),
    ([0.01, 0.02, 0.04], [0.03, 0.06, 0.12]),
    ([0.5, 0.9], [1.0, 1.0]),
])
def test_bonferroni(p, expected):
    assert bonferroni(p) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("p", [[-0.1], [1.2, 0.3], [np.nan]])
def test_bonferroni_rejects_non_probabilities(p):
    with pytest.raises(ValueError):
        bonferroni(p)


HUSAIN_CSV = os.environ.get("FREQSIM_HUSAIN_CSV")


@pytest.mark.skipif(not HUSAIN_CSV, reason="set FREQSIM_HUSAIN_CSV to the public E2 data to run")
def test_husain_experiment_2_interaction():
    # expected columns: subject,predicate,distance,rt with predicate complex/simple and
    # distance long/short; per-subject log-scale long - short differences
    import csv
    from collections import defaultdict

    cells = defaultdict(list)
    with open(HUSAIN_CSV, newline="") as fh:
        for row in csv.DictReader(fh):
            cells[(row["subject"], row["predicate"], row["distance"])].append(math.log(float(row["rt"])))
    subjects = sorted({k[0] for k in cells})

    def diffs(pred):
        return np.array([np.mean(cells[(s, pred, "long")]) - np.mean(cells[(s, pred, "short")])
                         for s in subjects])

    complex_, simple = diffs("complex"), diffs("simple")
    inter = interaction_t(complex_, simple)
    assert round(one_sample_t(complex_).t_value, 2) == -2.51
    assert round(one_sample_t(simple).t_value, 2) == 0.52
    assert round(inter.t_value, 2) == -1.68
    assert inter.df == 59
    assert round(inter.p_value, 1) == 0.1
