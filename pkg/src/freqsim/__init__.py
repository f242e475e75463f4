"""Monte Carlo design analysis for two-condition repeated-measures experiments.

t-tests, crossed random-intercepts simulation and REML fitting, power and
Type I/S/M error estimation, optional-stopping simulation, Box-Cox
selection, Bonferroni adjustment and funnel-plot tables.
"""
__version__ = "0.1.0"

from .boxcox import BoxCoxResult, boxcox_profile, boxcox_transform
from .design_analysis import (DesignAnalysisReport, design_analysis,
                              estimate_distribution_experiment, nested_comparison_scenario)
from .distributions import noncentral_t_cdf, t_cdf, t_quantile
from .funnel import StudySummary, funnel_data, synthetic_studies, weighted_grand_mean
from .lmm import LmmFit, fit_crossed_intercepts, is_significant, reml_criterion
from .power import PowerQuery, analytic_power, power_curve, type12_regions
from .rng import RandomStream, sample_lognormal, sample_normal
from .simulate import (Dataset, DesignSpec, GenerativeParams, aggregate_by_subject,
                       latin_square_assign, simulate_dataset)
from .stopping import StoppingReport, StoppingRule, stopping_simulation
from .ttest import (DegenerateSampleError, TTestResult, bonferroni, interaction_t,
                    one_sample_t, paired_t, t_from_summary)
