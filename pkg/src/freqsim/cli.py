"""Batch command-line front end.

Every report embeds the parameters that determine its content (not output
paths or the worker count), so rerunning the embedded config with the same
seed reproduces it byte for byte.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import __version__
from .boxcox import boxcox_profile
from .design_analysis import design_analysis, estimate_distribution_experiment
from .funnel import funnel_data, synthetic_studies
from .power import PowerQuery, power_curve
from .reports import (InputError, dataset_csv, dumps_report, read_column, read_dataset,
                      read_studies, table_csv, write_atomic)
from .simulate import DesignSpec, GenerativeParams, aggregate_by_subject, simulate_dataset
from .rng import RandomStream
from .stopping import DEFAULT_MAX_LOOKS, StoppingRule, stopping_simulation
from .ttest import bonferroni, interaction_t, paired_t, t_from_summary

_NOT_CONFIG = {"output", "summary", "n_workers", "handler", "format"}


class UsageError(Exception):
    pass


def parse_grid(text: str, integer: bool = False) -> np.ndarray:
    """``lo:hi:step`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            if step <= 0 or hi < lo:
                raise ValueError
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            values = lo + step * np.arange(n)
            values = np.round(values, 12)
        else:
            values = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise UsageError(f"bad grid {text!r}; use lo:hi:step or a comma-separated list") from None
    if values.size == 0:
        raise UsageError("grid is empty")
    if integer:
        if np.any(values != np.round(values)):
            raise UsageError(f"grid {text!r} must contain integers")
        values = values.astype(int)
    return values


def parse_designs(text: str) -> list:
    designs = []
    for part in text.split(","):
        try:
            s, i = part.lower().split("x")
            designs.append(DesignSpec(int(s), int(i)))
        except ValueError as exc:
            raise UsageError(f"bad design {part!r}: {exc}") from None
    return designs


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG}


@contextmanager
def _mapper(n_workers):
    if n_workers <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        yield lambda fn, it: pool.map(fn, it, chunksize=16)


def _emit(args, text, summary_text=None, summary_default=None):
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    summary_path = getattr(args, "summary", None) or summary_default
    if summary_text is not None and summary_path:
        write_atomic(summary_path, summary_text)


def _params(args, effect=None) -> GenerativeParams:
    return GenerativeParams(
        grand_mean_log=math.log(args.grand_mean_ms),
        effect_log=args.effect if effect is None else effect,
        sd_subject=args.sd_subject, sd_item=args.sd_item, sd_resid=args.sd_resid,
    )


def cmd_simulate(args):
    design = DesignSpec(args.subjects, args.items)
    data = simulate_dataset(design, _params(args), RandomStream(args.seed, args.stream))
    _emit(args, dataset_csv(data))


def _ttest_rows(res):
    return [("estimate", "sd_hat", "se", "t_value", "df", "p_value", "mu0", "n"),
            [(res.estimate, res.sd_hat, res.se, res.t_value, res.df, res.p_value, res.mu0, res.n)]]


def cmd_ttest(args):
    if args.input:
        if any(v is not None for v in (args.mean, args.sd, args.n)):
            raise UsageError("give either --input or --mean/--sd/--n, not both")
        means = aggregate_by_subject(read_dataset(args.input), log_transform=args.scale == "log")
        res = paired_t(means.mean_b, means.mean_a, args.mu0)
    else:
        if any(v is None for v in (args.mean, args.sd, args.n)):
            raise UsageError("need --input, or all of --mean, --sd and --n")
        res = t_from_summary(args.mean, args.sd, args.n, args.mu0)
    if args.format == "csv":
        _emit(args, table_csv(*_ttest_rows(res)))
    else:
        _emit(args, dumps_report("ttest", _config(args), res))


def cmd_interaction(args):
    log = args.scale == "log"
    ma = aggregate_by_subject(read_dataset(args.input_a), log_transform=log)
    mb = aggregate_by_subject(read_dataset(args.input_b), log_transform=log)
    if ma.subjects.shape != mb.subjects.shape or np.any(ma.subjects != mb.subjects):
        raise InputError("the two inputs must contain the same subjects")
    da, db = ma.differences, mb.differences
    result = {
        "comparison_a": paired_t(ma.mean_b, ma.mean_a),
        "comparison_b": paired_t(mb.mean_b, mb.mean_a),
        "interaction": interaction_t(da, db),
    }
    if args.format == "csv":
        header = ("test", "estimate", "se", "t_value", "df", "p_value")
        rows = [(k, r.estimate, r.se, r.t_value, r.df, r.p_value) for k, r in result.items()]
        _emit(args, table_csv(header, rows))
    else:
        _emit(args, dumps_report("interaction", _config(args), result))


def cmd_design_analysis(args):
    design = DesignSpec(args.subjects, args.items)
    with _mapper(args.n_workers) as mapper:
        report = design_analysis(design, _params(args), args.nsims, args.seed,
                                 conditioning=args.conditioning, mapper=mapper)
    _emit(args, dumps_report("design-analysis", _config(args), report))


def cmd_power_curve(args):
    if (args.effects is None) == (args.ns is None):
        raise UsageError("give exactly one of --effects or --ns")
    base = PowerQuery(args.effect, args.sd, args.n, args.alpha)
    if args.effects is not None:
        curve = power_curve(base, effects=parse_grid(args.effects))
    else:
        curve = power_curve(base, ns=parse_grid(args.ns, integer=True))
    x = curve.x.astype(int).tolist() if curve.axis == "n" else curve.x.tolist()
    if args.format == "csv":
        _emit(args, table_csv((curve.axis, "power"), zip(x, curve.power.tolist())))
    else:
        _emit(args, dumps_report("power-curve", _config(args),
                                 {"axis": curve.axis, "x": x, "power": curve.power}))


def cmd_estimate_experiment(args):
    effects = parse_grid(args.effects)
    designs = parse_designs(args.designs)
    with _mapper(args.n_workers) as mapper:
        exp = estimate_distribution_experiment(effects, designs, args.nsims, args.seed,
                                               params=_params(args, effect=0.0), mapper=mapper)
    result = {"cells": exp.cells, "alpha_rule": exp.alpha_rule}
    if args.format == "csv":
        rows = exp.rows if args.all_rows else exp.significant_rows()
        header = ("effect", "design", "replicate", "beta_hat", "se", "t_value", "significant",
                  "converged")
        text = table_csv(header, [tuple(vars(r).values()) for r in rows])
        _emit(args, text, dumps_report("estimate-experiment", _config(args), result))
    else:
        result["rows"] = exp.rows
        _emit(args, dumps_report("estimate-experiment", _config(args), result))


def cmd_stopping(args):
    rule = StoppingRule(args.n_initial, args.n_step, args.max_looks, args.alpha)
    with _mapper(args.n_workers) as mapper:
        rep = stopping_simulation(rule, args.nsims, args.seed, mapper=mapper)
    summary = {
        "type1_rate": rep.type1_rate,
        "fraction_beyond_critical": rep.fraction_beyond_critical(),
        "looks_used_histogram": rep.looks_used_histogram,
        "n_sims": rep.n_sims, "seed": rep.seed, "rule": rule,
    }
    if args.format == "csv":
        rows = zip(range(rep.n_sims), rep.final_n.tolist(), rep.final_t_values.tolist())
        _emit(args, table_csv(("replicate", "final_n", "final_t"), rows),
              dumps_report("stopping", _config(args), summary))
    else:
        summary["final_t_values"] = rep.final_t_values
        summary["final_n"] = rep.final_n
        _emit(args, dumps_report("stopping", _config(args), summary))


def cmd_funnel(args):
    if bool(args.input) == bool(args.synthetic):
        raise UsageError("give exactly one of --input or --synthetic")
    studies = read_studies(args.input) if args.input else synthetic_studies(seed=args.seed)
    fd = funnel_data(studies)
    summary = {
        "data": "synthetic demonstration set" if args.synthetic else "user supplied",
        "n_studies": len(studies),
        "weighted_grand_mean": fd.grand_mean.estimate,
        "weighted_grand_mean_se": fd.grand_mean.se,
        "unweighted_mean": fd.unweighted_mean,
    }
    if args.format == "csv":
        rows = zip(fd.study_id, fd.mean_effect.tolist(), fd.se.tolist(), fd.precision.tolist())
        text = table_csv(("study_id", "mean_effect", "se", "precision"), rows)
        default = f"{args.output}.json" if args.output else None
        _emit(args, text, dumps_report("funnel", _config(args), summary), summary_default=default)
    else:
        summary["studies"] = [{"study_id": s, "mean_effect": m, "se": e, "precision": p}
                              for s, m, e, p in zip(fd.study_id, fd.mean_effect.tolist(),
                                                    fd.se.tolist(), fd.precision.tolist())]
        _emit(args, dumps_report("funnel", _config(args), summary))


def cmd_boxcox(args):
    grid = args.grid.split(":")
    if len(grid) != 3:
        raise UsageError("--grid must be lo:hi:step")
    try:
        grid = tuple(float(g) for g in grid)
    except ValueError:
        raise UsageError("--grid must be lo:hi:step") from None
    res = boxcox_profile(read_column(args.input, args.column), grid=grid)
    summary = {"lambda_hat": res.lambda_hat, "ci_lambda": res.ci_lambda,
               "ci_level": 0.95, "max_loglik": res.max_loglik}
    if args.format == "csv":
        text = table_csv(("lambda", "log_likelihood"),
                         zip(res.profile_lambda.tolist(), res.profile_loglik.tolist()))
        _emit(args, text, dumps_report("boxcox", _config(args), summary))
    else:
        summary["profile"] = {"lambda": res.profile_lambda, "log_likelihood": res.profile_loglik}
        _emit(args, dumps_report("boxcox", _config(args), summary))


def cmd_bonferroni(args):
    if (args.p is None) == (args.input is None):
        raise UsageError("give exactly one of --p or --input")
    if args.p is not None:
        try:
            p = np.array([float(v) for v in args.p.split(",")])
        except ValueError:
            raise UsageError(f"bad p-value list {args.p!r}") from None
    else:
        p = read_column(args.input, args.column)
    adj = bonferroni(p)
    if args.format == "csv":
        _emit(args, table_csv(("p", "p_adjusted"), zip(p.tolist(), adj.tolist())))
    else:
        _emit(args, dumps_report("bonferroni", _config(args), {"p": p, "p_adjusted": adj}))


def _add_generative(p):
    p.add_argument("--grand-mean-ms", type=float, default=550.0,
                   help="median reading time exp(grand_mean_log), ms (default 550)")
    defaults = GenerativeParams()
    p.add_argument("--sd-subject", type=float, default=defaults.sd_subject)
    p.add_argument("--sd-item", type=float, default=defaults.sd_item)
    p.add_argument("--sd-resid", type=float, default=defaults.sd_resid)


def _add_output(p, formats, default):
    p.add_argument("--output", "-o", help="output file (default: standard output)")
    p.add_argument("--format", choices=formats, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freqsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"freqsim {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser("simulate", help="simulate one dataset as CSV")
    p.add_argument("--subjects", type=int, required=True)
    p.add_argument("--items", type=int, required=True)
    p.add_argument("--effect", type=float, default=0.01, help="b - a effect on the log scale")
    _add_generative(p)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--stream", type=_seed, default=0)
    _add_output(p, ["csv"], "csv")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("ttest", help="by-subject paired t-test (b - a) or t from summaries")
    p.add_argument("--input", help="dataset CSV subject,item,condition,rt")
    p.add_argument("--scale", choices=["raw", "log"], default="raw")
    p.add_argument("--mean", type=float)
    p.add_argument("--sd", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--mu0", type=float, default=0.0)
    _add_output(p, ["json", "csv"], "json")
    p.set_defaults(handler=cmd_ttest)

    p = sub.add_parser("interaction", help="two nested comparisons and their difference")
    p.add_argument("--input-a", required=True, help="dataset CSV for the first comparison")
    p.add_argument("--input-b", required=True, help="dataset CSV for the second comparison")
    p.add_argument("--scale", choices=["raw", "log"], default="log")
    _add_output(p, ["json", "csv"], "json")
    p.set_defaults(handler=cmd_interaction)

    p = sub.add_parser("design-analysis", help="simulated power, Type S and Type M error")
    p.add_argument("--subjects", type=int, default=40)
    p.add_argument("--items", type=int, default=16)
    p.add_argument("--effect", type=float, default=0.01)
    _add_generative(p)
    p.add_argument("--nsims", type=int, default=1000)
    p.add_argument("--conditioning", choices=["significant", "nonsignificant"],
                   default="significant")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--n-workers", type=_positive_int, default=1)
    _add_output(p, ["json"], "json")
    p.set_defaults(handler=cmd_design_analysis)

    p = sub.add_parser("power-curve", help="analytic t-test power over effects or sample sizes")
    p.add_argument("--sd", type=float, default=40.0)
    p.add_argument("--effect", type=float, default=10.0)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--effects", help="effect grid lo:hi:step or list")
    p.add_argument("--ns", help="sample-size grid lo:hi:step or list")
    _add_output(p, ["csv", "json"], "csv")
    p.set_defaults(handler=cmd_power_curve)

    p = sub.add_parser("estimate-experiment", help="estimates vs true effect over designs")
    p.add_argument("--effects", default="0.01,0.02,0.03,0.05,0.1")
    p.add_argument("--designs", default="30x16,80x40")
    _add_generative(p)
    p.add_argument("--nsims", type=int, default=200, help="experiments per cell")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--n-workers", type=_positive_int, default=1)
    p.add_argument("--all-rows", action="store_true",
                   help="CSV: include non-significant replicates too")
    p.add_argument("--summary", help="CSV mode: write per-cell JSON summary here")
    _add_output(p, ["csv", "json"], "csv")
    p.set_defaults(handler=cmd_estimate_experiment)

    p = sub.add_parser("stopping", help="Type I error under run-till-significance")
    p.add_argument("--n-initial", type=int, default=15)
    p.add_argument("--n-step", type=int, default=15)
    p.add_argument("--max-looks", type=int, default=DEFAULT_MAX_LOOKS)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--nsims", type=int, default=10000)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--n-workers", type=_positive_int, default=1)
    p.add_argument("--summary", help="CSV mode: write JSON summary here")
    _add_output(p, ["json", "csv"], "json")
    p.set_defaults(handler=cmd_stopping)

    p = sub.add_parser("funnel", help="funnel-plot table and grand means")
    p.add_argument("--input", help="studies CSV study_id,mean_effect,se")
    p.add_argument("--synthetic", action="store_true", help="use the synthetic 15-study set")
    p.add_argument("--seed", type=_seed, default=2016, help="seed of the synthetic set")
    p.add_argument("--summary", help="sidecar JSON (default: <output>.json)")
    _add_output(p, ["csv", "json"], "csv")
    p.set_defaults(handler=cmd_funnel)

    p = sub.add_parser("boxcox", help="profile-likelihood Box-Cox lambda")
    p.add_argument("--input", required=True)
    p.add_argument("--column", default="rt")
    p.add_argument("--grid", default="-2:2:0.01")
    p.add_argument("--summary", help="CSV mode: write lambda_hat and CI JSON here")
    _add_output(p, ["csv", "json"], "csv")
    p.set_defaults(handler=cmd_boxcox)

    p = sub.add_parser("bonferroni", help="Bonferroni-adjust p-values")
    p.add_argument("--p", help="comma-separated p-values")
    p.add_argument("--input", help="CSV with a p-value column")
    p.add_argument("--column", default="p")
    _add_output(p, ["csv", "json"], "csv")
    p.set_defaults(handler=cmd_bonferroni)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.handler(args)
    except UsageError as exc:
        parser.error(f"{args.command}: {exc}")
    except (InputError, ValueError, OSError) as exc:
        print(f"freqsim {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
