from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from scipy import stats

from freqsim.rng import RandomStream, sample_lognormal, sample_normal


def test_same_stream_is_bit_identical():
    a = sample_normal(RandomStream(1, 3), 0.0, 1.0, 1000)
    b = sample_normal(RandomStream(1, 3), 0.0, 1.0, 1000)
    assert np.array_equal(a, b)


def test_streams_are_uncorrelated():
    n = 100_000
    x = sample_normal(RandomStream(5, 0), 0, 1, n)
    for sid in (1, 2, 2**40):
        y = sample_normal(RandomStream(5, sid), 0, 1, n)
        assert abs(np.corrcoef(x, y)[0, 1]) < 0.01
    z = sample_normal(RandomStream(6, 0), 0, 1, n)
    assert abs(np.corrcoef(x, z)[0, 1]) < 0.01


def test_stream_does_not_depend_on_scheduling():
    direct = [sample_normal(RandomStream(9, k), 0, 1, 5) for k in range(20)]
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda k: sample_normal(RandomStream(9, k), 0, 1, 5),
                                 reversed(range(20))))
    for a, b in zip(direct, reversed(threaded)):
        assert np.array_equal(a, b)


@pytest.mark.parametrize("seed", [1, 2])
def test_normal_moments(seed):
    n = 100_000
    x = sample_normal(RandomStream(seed), 0.0, 1.0, n)
    assert abs(x.mean()) < 0.02
    assert abs(x.std(ddof=1) - 1.0) < 3 * np.sqrt(2 / n)


def test_normal_location_and_scale():
    n = 100_000
    x = sample_normal(RandomStream(3), 5.0, 2.5, n)
    assert abs(x.mean() - 5.0) < 3 * 2.5 / np.sqrt(n)
    assert abs(x.std(ddof=1) - 2.5) < 3 * 2.5 * np.sqrt(2 / n)


@pytest.mark.parametrize("sd", [0.0, -1.0, 1e-12, np.inf, np.nan])
def test_normal_rejects_bad_sd(sd):
    with pytest.raises(ValueError):
        sample_normal(RandomStream(1), 5.0, sd, 10)


@pytest.mark.parametrize("n", [0, -3, 2.5])
def test_normal_rejects_bad_n(n):
    with pytest.raises(ValueError):
        sample_normal(RandomStream(1), 0.0, 1.0, n)


def test_lognormal_on_log_scale():
    x = sample_lognormal(RandomStream(11), 2.0, 1.0, 100_000)
    assert np.all(x > 0)
    assert abs(np.log(x).mean() - 2.0) < 0.02
    assert stats.skew(x) > 0


def test_lognormal_rejects_bad_sdlog():
    with pytest.raises(ValueError):
        sample_lognormal(RandomStream(1), 2.0, 0.0, 10)


@pytest.mark.parametrize("seed, sid", [(-1, 0), (0, 2**64), (1.5, 0), (True, 0)])
def test_stream_key_validation(seed, sid):
    with pytest.raises((ValueError, TypeError)):
        RandomStream(seed, sid)
