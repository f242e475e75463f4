"""One-sample, paired and difference-of-differences t-tests, plus Bonferroni.

All p-values are two-sided. Degenerate samples (zero variance) raise
:class:`DegenerateSampleError` instead of producing an infinite t, so Monte
Carlo counters never absorb infinities silently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import t_sf

__all__ = [
    "DegenerateSampleError", "TTestResult", "one_sample_t", "t_from_summary",
    "paired_t", "interaction_t", "bonferroni",
]

# Sample sd at or below this fraction of the data's magnitude is treated as
# zero: it is floating point residue (e.g. from ``(x + c) - x``), not spread.
_RELATIVE_ZERO_SD = 1e-10


class DegenerateSampleError(ValueError):
    """Raised when a t statistic is undefined because the sample has no spread."""


@dataclass(frozen=True)
class TTestResult:
    estimate: float
    sd_hat: float
    se: float
    t_value: float
    df: int
    p_value: float
    mu0: float
    n: int

    def significant(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha


def _result(mean, sd, n, mu0):
    se = sd / math.sqrt(n)
    t = (mean - mu0) / se
    df = n - 1
    p = min(1.0, 2.0 * float(t_sf(abs(t), df)))
    return TTestResult(float(mean), float(sd), float(se), float(t), int(df), p, float(mu0), int(n))


def _test_vector(x, mu0, scale=None):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a one-dimensional sample")
    n = x.size
    if n < 2:
        raise ValueError(f"a t-test needs at least 2 observations, got {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    sd = float(np.std(x, ddof=1))
    if scale is None:
        scale = float(np.max(np.abs(x)))
    if sd <= _RELATIVE_ZERO_SD * scale or sd == 0.0:
        raise DegenerateSampleError("sample has zero variance; the t statistic is undefined")
    return _result(float(np.mean(x)), sd, n, mu0)


def one_sample_t(x, mu0: float = 0.0) -> TTestResult:
    """Two-sided one-sample t-test of ``H0: mean(x) == mu0``."""
    return _test_vector(x, mu0)


def t_from_summary(mean: float, sd: float, n: int, mu0: float = 0.0) -> TTestResult:
    """One-sample t-test computed from sample mean, sample sd and size."""
    if n < 2 or int(n) != n:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not (np.isfinite(sd) and sd > 0):
        raise DegenerateSampleError(f"sd must be positive, got {sd!r}")
    return _result(float(mean), float(sd), int(n), mu0)


def paired_t(x, y, mu0: float = 0.0) -> TTestResult:
    """Paired t-test on ``x - y``; identical to ``one_sample_t(x - y, mu0)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"paired samples differ in length: {x.shape} vs {y.shape}")
    scale = max(float(np.max(np.abs(x), initial=0.0)), float(np.max(np.abs(y), initial=0.0)))
    return _test_vector(x - y, mu0, scale=scale)


def interaction_t(diffs_a, diffs_b) -> TTestResult:
    """Test whether two per-participant condition differences differ.

    ``diffs_a[i]`` and ``diffs_b[i]`` must belong to the same participant.
    The null hypothesis is that the mean of ``diffs_a - diffs_b`` is zero,
    i.e. that there is no interaction between the two factors.
    """
    return paired_t(diffs_a, diffs_b, 0.0)


def bonferroni(p_values) -> np.ndarray:
    """Bonferroni-adjusted p-values, ``min(1, m * p)``, in input order."""
    p = np.asarray(p_values, dtype=float)
    if p.ndim != 1:
        raise ValueError("expected a one-dimensional vector of p-values")
    if p.size == 0:
        return p.copy()
    if np.any(~((p >= 0) & (p <= 1))):
        raise ValueError("p-values must lie in [0, 1]")
    return np.minimum(1.0, p * p.size)
