from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from freqsim.design_analysis import (design_analysis, estimate_distribution_experiment,
                                     fit_replicate, nested_comparison_scenario)
from freqsim.simulate import DesignSpec, GenerativeParams
from freqsim.ttest import one_sample_t


def test_huge_effect_has_no_selection_bias(gibson_wu_design):
    rep = design_analysis(gibson_wu_design, GenerativeParams(effect_log=1.0), 100, seed=3)
    assert rep.power > 0.99
    assert rep.type_s == 0
    assert rep.type_m == pytest.approx(1.0, abs=0.05)
    assert rep.n_converged == 100


def test_report_is_self_describing(gibson_wu_design):
    params = GenerativeParams(effect_log=0.05)
    rep = design_analysis(gibson_wu_design, params, 100, seed=9)
    assert rep.params_used == params
    assert rep.design == gibson_wu_design
    assert rep.seed == 9 and rep.n_sims == 100
    assert rep.power == pytest.approx(rep.n_significant / rep.n_converged)
    d = rep.to_dict()
    assert d["params_used"]["effect_log"] == 0.05
    assert d["estimation"] == "REML"


def test_preconditions(gibson_wu_design):
    with pytest.raises(ValueError):
        design_analysis(gibson_wu_design, GenerativeParams(effect_log=0.0), 100, seed=1)
    with pytest.raises(ValueError):
        design_analysis(gibson_wu_design, GenerativeParams(), 99, seed=1)
    with pytest.raises(ValueError):
        design_analysis(gibson_wu_design, GenerativeParams(), 100, seed=1, conditioning="all")


def test_nonsignificant_conditioning(gibson_wu_design):
    params = GenerativeParams(effect_log=0.03)
    sig = design_analysis(gibson_wu_design, params, 100, seed=5)
    non = design_analysis(gibson_wu_design, params, 100, seed=5, conditioning="nonsignificant")
    assert sig.power == non.power
    assert non.n_conditioned == non.n_converged - non.n_significant
    # non-significant estimates are shrunk toward zero, significant ones inflated
    assert non.type_m < sig.type_m


def test_worker_mapping_does_not_change_report(gibson_wu_design):
    params = GenerativeParams(effect_log=0.02)
    serial = design_analysis(gibson_wu_design, params, 100, seed=12)
    with ThreadPoolExecutor(4) as pool:
        threaded = design_analysis(gibson_wu_design, params, 100, seed=12, mapper=pool.map)
    assert serial == threaded


def test_replicate_is_pure():
    d, p = DesignSpec(20, 8), GenerativeParams()
    assert fit_replicate(d, p, 4, 17) == fit_replicate(d, p, 4, 17)


@pytest.mark.slow
def test_type_m_larger_for_smaller_effect(gibson_wu_design):
    small = design_analysis(gibson_wu_design, GenerativeParams(effect_log=0.01), 300, seed=21)
    large = design_analysis(gibson_wu_design, GenerativeParams(effect_log=0.1), 300, seed=22)
    assert small.type_m > large.type_m


@pytest.mark.slow
def test_estimate_experiment_cells():
    exp = estimate_distribution_experiment([0.01, 0.1], [DesignSpec(30, 16), DesignSpec(80, 40)],
                                           60, seed=33)
    assert len(exp.rows) == 4 * 60
    big = exp.cell(0.1, "80x40")
    assert big.type_s == 0
    sig_big = [r.beta_hat for r in exp.significant_rows() if r.design == "80x40" and r.effect == 0.1]
    assert abs(np.median(sig_big) - 0.1) < 0.02
    for effect in (0.01, 0.1):
        assert exp.cell(effect, "80x40").power >= exp.cell(effect, "30x16").power
    assert all(r.significant == (r.converged and abs(r.t_value) > 2) for r in exp.rows)


@pytest.mark.slow
def test_small_design_tiny_effect_gives_wrong_signs():
    exp = estimate_distribution_experiment([0.01], [DesignSpec(30, 16)], 1000, seed=34)
    wrong = [r for r in exp.significant_rows() if r.beta_hat < 0]
    assert wrong


def test_cell_streams_are_stable_when_adding_replicates():
    d = [DesignSpec(20, 8)]
    few = estimate_distribution_experiment([0.05], d, 3, seed=2)
    more = estimate_distribution_experiment([0.05], d, 5, seed=2)
    assert few.rows == more.rows[:3]


def test_estimate_experiment_validation():
    with pytest.raises(ValueError):
        estimate_distribution_experiment([], [DesignSpec(4, 4)], 5, seed=1)
    with pytest.raises(ValueError):
        estimate_distribution_experiment([0.1], [], 5, seed=1)


def test_nested_comparison_scenario():
    demo = nested_comparison_scenario(seed=2016)
    assert demo.test_a.p_value < 0.05
    assert demo.test_b.p_value >= 0.05
    assert demo.interaction.p_value >= 0.05
    assert demo.interaction == one_sample_t(demo.diffs_a - demo.diffs_b, 0.0)
