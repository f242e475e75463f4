"""Analytic power of the two-sided one-sample t-test and Type I/II regions."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy import special

from .distributions import noncentral_t_cdf, noncentral_t_sf, t_quantile

__all__ = ["PowerQuery", "PowerCurve", "Regions", "analytic_power", "power_curve",
           "type12_regions"]


@dataclass(frozen=True)
class PowerQuery:
    """A true effect (raw units), population sd, sample size and alpha."""

    effect: float
    sd: float
    n: int
    alpha: float = 0.05

    def __post_init__(self):
        if not (np.isfinite(self.sd) and self.sd > 0):
            raise ValueError(f"sd must be positive, got {self.sd!r}")
        if self.n < 2 or int(self.n) != self.n:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")

    @property
    def ncp(self) -> float:
        return self.effect * math.sqrt(self.n) / self.sd


def analytic_power(q: PowerQuery) -> float:
    """Probability that the two-sided t-test rejects when the true mean is ``q.effect``.

    ``P(|T| > c)`` with ``T`` noncentral t on ``n - 1`` df and
    ``c = t_quantile(1 - alpha / 2, n - 1)``.
    """
    df = q.n - 1
    crit = float(t_quantile(1.0 - q.alpha / 2.0, df))
    return noncentral_t_sf(crit, df, q.ncp) + noncentral_t_cdf(-crit, df, q.ncp)


class PowerCurve(NamedTuple):
    axis: str
    x: np.ndarray
    power: np.ndarray


def power_curve(base: PowerQuery, effects=None, ns=None) -> PowerCurve:
    """Power along a grid of effects or of sample sizes (exactly one of them)."""
    if (effects is None) == (ns is None):
        raise ValueError("give exactly one of effects= or ns=")
    axis, grid = ("effect", effects) if effects is not None else ("n", ns)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("the grid is empty")
    power = np.array([analytic_power(replace(base, **{axis: (int(v) if axis == "n" else float(v))}))
                      for v in grid])
    return PowerCurve(axis, grid, power)


class Regions(NamedTuple):
    lower: float
    upper: float
    type2: float
    power: float


def type12_regions(mu_alt: float, sd_sampling: float, alpha: float = 0.05) -> Regions:
    """Rejection bounds of a two-sided z-test and its Type II error at ``mu_alt``.

    ``sd_sampling`` is the standard deviation of the sampling distribution
    of the estimate (its standard error).
    """
    if not sd_sampling > 0:
        raise ValueError(f"sd_sampling must be positive, got {sd_sampling!r}")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    z = float(special.ndtri(1.0 - alpha / 2.0))
    lo, hi = -z * sd_sampling, z * sd_sampling
    type2 = float(special.ndtr((hi - mu_alt) / sd_sampling) - special.ndtr((lo - mu_alt) / sd_sampling))
    return Regions(lo, hi, type2, 1.0 - type2)
