"""Two-condition repeated-measures designs with crossed subjects and items.

Reading times are generated on the log scale::

    log rt = grand_mean_log -/+ effect_log / 2 + u[subject] + w[item] + eps

with condition ``a`` taking the minus sign and ``b`` the plus sign, so
``effect_log`` is exactly the b - a contrast. ``exp(grand_mean_log)`` is the
median reading time, not the mean.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import RandomStream

__all__ = [
    "DesignSpec", "GenerativeParams", "Dataset", "SubjectMeans",
    "latin_square_assign", "simulate_dataset", "aggregate_by_subject",
]

CONDITIONS = ("a", "b")


@dataclass(frozen=True)
class DesignSpec:
    n_subjects: int
    n_items: int

    def __post_init__(self):
        if self.n_subjects < 2:
            raise ValueError(f"need at least 2 subjects, got {self.n_subjects}")
        if self.n_items < 2 or self.n_items % 2:
            raise ValueError(f"n_items must be even and >= 2, got {self.n_items}")

    @property
    def n_obs(self) -> int:
        return self.n_subjects * self.n_items

    def label(self) -> str:
        return f"{self.n_subjects}x{self.n_items}"


@dataclass(frozen=True)
class GenerativeParams:
    """True parameters of the lognormal crossed random-intercepts model.

    The default variance components are configuration for "Gibson and
    Wu-like" runs: the subject and item sds are typical of self-paced reading
    on the log scale and the residual sd is set so that a 0.01 log-scale
    effect in a 40 x 16 design has power near 0.09 under the |t| > 2 rule.
    """

    grand_mean_log: float = math.log(550.0)
    effect_log: float = 0.01
    sd_subject: float = 0.24
    sd_item: float = 0.10
    sd_resid: float = 0.20

    def __post_init__(self):
        for name in ("sd_subject", "sd_item", "sd_resid"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be a finite value >= 0, got {value!r}")

    def with_effect(self, effect_log: float) -> "GenerativeParams":
        return GenerativeParams(self.grand_mean_log, effect_log, self.sd_subject,
                                self.sd_item, self.sd_resid)


@dataclass
class Dataset:
    """Long-format trials: one row per (subject, item) pair."""

    subject: np.ndarray
    item: np.ndarray
    condition: np.ndarray
    rt: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.subject = np.asarray(self.subject)
        self.item = np.asarray(self.item)
        self.condition = np.asarray(self.condition).astype(str)
        self.rt = np.asarray(self.rt, dtype=float)
        n = self.rt.shape[0]
        if not (self.subject.shape == self.item.shape == self.condition.shape == (n,)):
            raise ValueError("dataset columns must be one-dimensional and equally long")
        bad = ~np.isin(self.condition, CONDITIONS)
        if bad.any():
            raise ValueError(f"unknown condition label {self.condition[bad][0]!r}; expected 'a' or 'b'")
        if not np.all(np.isfinite(self.rt) & (self.rt > 0)):
            raise ValueError("reading times must be positive and finite")

    def __len__(self):
        return self.rt.shape[0]

    def response(self, log_transform: bool = True) -> np.ndarray:
        return np.log(self.rt) if log_transform else self.rt

    def condition_contrast(self, log_transform: bool = True) -> float:
        """Mean response in condition b minus mean response in condition a."""
        y = self.response(log_transform)
        is_b = self.condition == "b"
        return float(y[is_b].mean() - y[~is_b].mean())


def latin_square_assign(design: DesignSpec) -> np.ndarray:
    """Condition labels for every (subject, item) cell.

    Two counterbalanced lists alternate across subjects: even-indexed
    subjects see odd items in condition b, odd-indexed subjects the reverse.

    Returns
    -------
    ndarray of str, shape (n_subjects, n_items)
    """
    s = np.arange(design.n_subjects)[:, None]
    i = np.arange(design.n_items)[None, :]
    return np.where((s + i) % 2 == 0, "a", "b")


def simulate_dataset(design: DesignSpec, params: GenerativeParams,
                     stream: RandomStream) -> Dataset:
    """Simulate one dataset from the crossed random-intercepts model.

    Draw order is fixed (subject effects, item effects, residuals) and does
    not depend on whether any sd is zero, so a given stream always feeds the
    same normals into the same slots.
    """
    rng = stream.generator()
    ns, ni = design.n_subjects, design.n_items
    u = params.sd_subject * rng.standard_normal(ns)
    w = params.sd_item * rng.standard_normal(ni)
    eps = params.sd_resid * rng.standard_normal((ns, ni))

    cond = latin_square_assign(design)
    sign = np.where(cond == "b", 0.5, -0.5)
    log_rt = params.grand_mean_log + sign * params.effect_log + u[:, None] + w[None, :] + eps

    subject = np.repeat(np.arange(1, ns + 1), ni)
    item = np.tile(np.arange(1, ni + 1), ns)
    return Dataset(subject, item, cond.ravel(), np.exp(log_rt.ravel()))


@dataclass(frozen=True)
class SubjectMeans:
    subjects: np.ndarray
    mean_a: np.ndarray
    mean_b: np.ndarray

    @property
    def differences(self) -> np.ndarray:
        """Per-subject ``b - a`` differences."""
        return self.mean_b - self.mean_a


def aggregate_by_subject(data: Dataset, log_transform: bool = False) -> SubjectMeans:
    """Average each subject's responses per condition, over items."""
    y = data.response(log_transform)
    subjects, s_idx = np.unique(data.subject, return_inverse=True)
    is_b = (data.condition == "b").astype(int)
    sums = np.zeros((subjects.size, 2))
    counts = np.zeros((subjects.size, 2))
    np.add.at(sums, (s_idx, is_b), y)
    np.add.at(counts, (s_idx, is_b), 1)
    missing = np.flatnonzero((counts == 0).any(axis=1))
    if missing.size:
        raise ValueError(f"subject {subjects[missing[0]]!r} has no observations in one condition")
    means = sums / counts
    return SubjectMeans(subjects, means[:, 0], means[:, 1])
