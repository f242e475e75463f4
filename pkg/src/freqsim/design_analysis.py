"""Monte Carlo power, Type S and Type M error for the crossed-intercepts design.

Replicate ``k`` of a run is always simulated from stream ``(seed, k)``.
Drivers take an optional ``mapper`` with the signature of the builtin
:func:`map` (e.g. ``ProcessPoolExecutor.map``); results are collected in
stream order, so the worker count never changes a report.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Callable, Optional, Sequence

import numpy as np

from .lmm import fit_crossed_intercepts
from .rng import RandomStream
from .simulate import DesignSpec, GenerativeParams, aggregate_by_subject, simulate_dataset
from .ttest import TTestResult, interaction_t, one_sample_t

__all__ = [
    "SIGNIFICANCE_RULE", "DesignAnalysisReport", "CellSummary", "EstimateRow",
    "EstimateExperiment", "fit_replicate", "design_analysis",
    "estimate_distribution_experiment", "NestedComparison", "nested_comparison_scenario",
]

SIGNIFICANCE_RULE = "|t| > 2 on the REML fit of log rt ~ condition + (1|subject) + (1|item)"
_THRESHOLD = 2.0


def fit_replicate(design: DesignSpec, params: GenerativeParams, seed: int,
                  stream_id: int) -> tuple:
    """Simulate and fit one replicate; returns ``(beta_hat, se, t, converged)``."""
    data = simulate_dataset(design, params, RandomStream(seed, stream_id))
    fit = fit_crossed_intercepts(data, log_transform=True)
    return fit.beta_hat, fit.se_beta, fit.t_value, fit.converged


@dataclass(frozen=True)
class _ErrorRates:
    n_sims: int
    n_converged: int
    n_significant: int
    power: float
    type_s: Optional[float]
    type_m: Optional[float]
    type_s_all: float
    n_conditioned: int


def _error_rates(beta, t, converged, effect, conditioning):
    beta, t, converged = np.asarray(beta), np.asarray(t), np.asarray(converged, dtype=bool)
    beta, t = beta[converged], t[converged]
    sig = np.abs(t) > _THRESHOLD
    n_conv = int(converged.sum())
    wrong = np.sign(beta) != np.sign(effect)
    chosen = sig if conditioning == "significant" else ~sig
    n_chosen = int(chosen.sum())
    if n_chosen:
        type_s = float(np.mean(wrong[chosen]))
        type_m = float(np.mean(np.abs(beta[chosen]) / abs(effect)))
    else:
        type_s = type_m = None
    return _ErrorRates(
        n_sims=int(converged.size),
        n_converged=n_conv,
        n_significant=int(sig.sum()),
        power=float(sig.mean()) if n_conv else float("nan"),
        type_s=type_s,
        type_m=type_m,
        type_s_all=float(np.mean(sig & wrong)) if n_conv else float("nan"),
        n_conditioned=n_chosen,
    )


@dataclass(frozen=True)
class DesignAnalysisReport:
    """Outcome of a design analysis, with every input needed to reproduce it.

    ``type_s`` and ``type_m`` are conditional on ``conditioning``
    (significant or non-significant fits) and are ``None`` when no fit fell
    in that set. ``type_s_all`` is the fraction of all converged fits that
    were significant with the wrong sign.
    """

    power: float
    type_s: Optional[float]
    type_m: Optional[float]
    type_s_all: float
    n_sims: int
    n_significant: int
    n_converged: int
    n_conditioned: int
    conditioning: str
    params_used: GenerativeParams
    design: DesignSpec
    seed: int
    alpha_rule: str = SIGNIFICANCE_RULE
    estimation: str = "REML"
    grand_mean_note: str = "exp(grand_mean_log) is the median reading time in ms"

    def to_dict(self) -> dict:
        return asdict(self)


_CONDITIONINGS = ("significant", "nonsignificant")


def design_analysis(design: DesignSpec, params: GenerativeParams, n_sims: int, seed: int,
                    conditioning: str = "significant",
                    mapper: Callable = map) -> DesignAnalysisReport:
    """Estimate power, Type S and Type M error by simulating and refitting.

    Parameters
    ----------
    design, params : DesignSpec, GenerativeParams
        Design and true parameters; ``params.effect_log`` must be non-zero.
    n_sims : int
        Number of simulated experiments, at least 100.
    seed : int
        Replicate ``k`` uses stream ``(seed, k)``.
    conditioning : {"significant", "nonsignificant"}
        Which fits Type S and Type M are computed over.
    mapper : callable
        ``map``-like callable used to run replicates.
    """
    if n_sims < 100:
        raise ValueError(f"n_sims must be at least 100, got {n_sims}")
    if params.effect_log == 0:
        raise ValueError("Type S and Type M errors are undefined for a zero true effect")
    if conditioning not in _CONDITIONINGS:
        raise ValueError(f"conditioning must be one of {_CONDITIONINGS}, got {conditioning!r}")
    work = partial(fit_replicate, design, params, seed)
    results = list(mapper(work, range(n_sims)))
    beta, _, t, conv = (np.array(col) for col in zip(*results))
    rates = _error_rates(beta, t, conv, params.effect_log, conditioning)
    return DesignAnalysisReport(
        power=rates.power, type_s=rates.type_s, type_m=rates.type_m,
        type_s_all=rates.type_s_all, n_sims=n_sims, n_significant=rates.n_significant,
        n_converged=rates.n_converged, n_conditioned=rates.n_conditioned,
        conditioning=conditioning, params_used=params, design=design, seed=seed,
    )


@dataclass(frozen=True)
class EstimateRow:
    effect: float
    design: str
    replicate: int
    beta_hat: float
    se: float
    t_value: float
    significant: bool
    converged: bool


@dataclass(frozen=True)
class CellSummary:
    effect: float
    design: str
    n_sims: int
    n_converged: int
    n_significant: int
    power: float
    type_s: Optional[float]
    type_m: Optional[float]
    mean_abs_significant: Optional[float]


@dataclass
class EstimateExperiment:
    """Per-replicate estimates and per-cell summaries over an effect x design grid."""

    rows: list
    cells: list
    params: GenerativeParams
    seed: int
    n_sims_per_cell: int
    alpha_rule: str = SIGNIFICANCE_RULE

    def significant_rows(self) -> list:
        return [r for r in self.rows if r.significant]

    def cell(self, effect: float, design) -> CellSummary:
        label = design.label() if isinstance(design, DesignSpec) else design
        for c in self.cells:
            if c.effect == effect and c.design == label:
                return c
        raise KeyError((effect, label))


def _cell_stream(cell_index: int, replicate: int) -> int:
    return (cell_index << 32) | replicate


def _fit_cell_replicate(design, params, seed, cell_index, replicate):
    return fit_replicate(design, params, seed, _cell_stream(cell_index, replicate))


def estimate_distribution_experiment(effect_grid: Sequence[float],
                                     designs: Sequence[DesignSpec],
                                     n_sims_per_cell: int, seed: int,
                                     params: Optional[GenerativeParams] = None,
                                     mapper: Callable = map) -> EstimateExperiment:
    """Simulate ``n_sims_per_cell`` experiments for every (design, effect) cell.

    Cell ``j`` (designs outer, effects inner) replicate ``r`` uses stream id
    ``(j << 32) | r``, so adding replicates never reshuffles existing ones.
    """
    effect_grid = [float(e) for e in effect_grid]
    designs = list(designs)
    if not effect_grid or not designs:
        raise ValueError("effect grid and design list must be non-empty")
    if n_sims_per_cell < 1:
        raise ValueError("n_sims_per_cell must be positive")
    if n_sims_per_cell >= 2**32:
        raise ValueError("n_sims_per_cell must be below 2**32")
    params = params or GenerativeParams()

    rows, cells = [], []
    cell_index = 0
    for design in designs:
        for effect in effect_grid:
            cell_params = params.with_effect(effect)
            work = partial(_fit_cell_replicate, design, cell_params, seed, cell_index)
            results = list(mapper(work, range(n_sims_per_cell)))
            beta, se, t, conv = (np.array(col) for col in zip(*results))
            sig = conv & (np.abs(t) > _THRESHOLD)
            for r in range(n_sims_per_cell):
                rows.append(EstimateRow(effect, design.label(), r, float(beta[r]), float(se[r]),
                                        float(t[r]), bool(sig[r]), bool(conv[r])))
            if effect != 0:
                rates = _error_rates(beta, t, conv, effect, "significant")
                type_s, type_m = rates.type_s, rates.type_m
            else:
                rates = _error_rates(beta, t, conv, 1.0, "significant")
                type_s = type_m = None
            cells.append(CellSummary(
                effect=effect, design=design.label(), n_sims=n_sims_per_cell,
                n_converged=rates.n_converged, n_significant=rates.n_significant,
                power=rates.power, type_s=type_s, type_m=type_m,
                mean_abs_significant=float(np.mean(np.abs(beta[sig]))) if sig.any() else None,
            ))
            cell_index += 1
    return EstimateExperiment(rows, cells, params, seed, n_sims_per_cell)


@dataclass(frozen=True)
class NestedComparison:
    """Two nested condition comparisons and the test of their difference."""

    test_a: TTestResult
    test_b: TTestResult
    interaction: TTestResult
    diffs_a: np.ndarray = field(repr=False)
    diffs_b: np.ndarray = field(repr=False)
    stream_id: int = 0


def nested_comparison_scenario(seed: int = 1, design: DesignSpec = DesignSpec(40, 16),
                               effect_a: float = 0.04, effect_b: float = 0.01,
                               params: Optional[GenerativeParams] = None,
                               alpha: float = 0.05, max_tries: int = 1000) -> NestedComparison:
    """Find a simulated experiment where one nested test is significant, the other
    is not, and the test of their difference is not significant either.

    Each try simulates two two-condition runs on the same subjects (streams
    ``(seed, 2k)`` and ``(seed, 2k + 1)``) and compares per-subject log
    differences.
    """
    params = params or GenerativeParams()
    for k in range(max_tries):
        runs = [simulate_dataset(design, params.with_effect(eff), RandomStream(seed, 2 * k + j))
                for j, eff in enumerate((effect_a, effect_b))]
        da, db = (aggregate_by_subject(run, log_transform=True).differences for run in runs)
        ta, tb, ti = one_sample_t(da), one_sample_t(db), interaction_t(da, db)
        if ta.p_value < alpha and tb.p_value >= alpha and ti.p_value >= alpha:
            return NestedComparison(ta, tb, ti, da, db, k)
    raise RuntimeError(f"no qualifying experiment in {max_tries} tries")
