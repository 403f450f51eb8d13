"""Command-line entry point.

Exit codes: 0 success, 1 estimator error, 2 config/spec error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .. import baselines
from ..core import ConfigError, EstimationError, EstimatorConfig, MomentProfile, validate_config
from ..covariance import agnostic_covariance, agnostic_svd
from ..mean import agnostic_mean, refine_mean_gaussian
from ..opnorm import agnostic_opnorm
from . import experiment, rmds
from .experiment import SpecError

EXIT_OK, EXIT_ESTIMATOR, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(None), help="seed override")
    p.add_argument("--eta", type=float, default=d(0.1), help="corruption fraction")
    p.add_argument("--eps", type=float, default=d(0.1), help="statistical slack")
    p.add_argument("--mode", choices=["gaussian", "bounded"], default=d("gaussian"))
    p.add_argument("--fresh-samples", action="store_true", default=d(False))
    p.add_argument("--psd", action="store_true", default=d(False))
    p.add_argument("--out", default=d(None), help="output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agnostic", description=__doc__)
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write one RMDS file per grid cell and repeat")
    p.add_argument("spec")
    _common(p, suppress=True)

    p = sub.add_parser("estimate", help="run an agnostic estimator on an RMDS file")
    p.add_argument("kind", choices=["mean", "cov", "opnorm", "svd"])
    p.add_argument("dataset")
    p.add_argument("--k", type=int, default=1, help="rank for svd")
    p.add_argument("--refine", action="store_true", help="whitening refinement (mean, gaussian mode)")
    _common(p, suppress=True)

    p = sub.add_parser("bench", help="run an experiment grid and write a CSV report")
    p.add_argument("spec")
    p.add_argument("--workers", type=int, default=1)
    _common(p, suppress=True)

    p = sub.add_parser("baselines", help="classical estimators on an RMDS file")
    p.add_argument("dataset")
    _common(p, suppress=True)
    return parser


def _config(args) -> EstimatorConfig:
    profile = MomentProfile.gaussian() if args.mode == "gaussian" else MomentProfile.bounded()
    cfg = EstimatorConfig(args.eta, args.eps, profile, fresh_samples=args.fresh_samples,
                          seed=args.seed if args.seed is not None else 0)
    validate_config(cfg)
    return cfg


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=True, separators=(",", ":")))


def _cmd_estimate(args) -> int:
    stored = rmds.load(args.dataset)
    cfg = _config(args)
    x, truth = stored.data.rows, stored.truth
    rec: dict = {"command": "estimate", "kind": args.kind, "n": stored.data.n, "m": stored.data.m}
    if args.kind == "mean":
        if args.refine:
            res = refine_mean_gaussian(x, cfg)
        else:
            res = agnostic_mean(x, cfg)
        rec.update(estimate=res.mean.tolist(), levels=res.levels, dims=res.dims)
        metric, value = "mean_l2", res.mean
    elif args.kind == "cov":
        res = agnostic_covariance(x, cfg, psd=args.psd)
        rec.update(estimate=res.sigma_hat.tolist(), levels=res.inner.levels)
        metric, value = "cov_fro", res.sigma_hat
    elif args.kind == "svd":
        value = agnostic_svd(x, args.k, cfg)
        rec.update(estimate=value.tolist(), k=args.k)
        metric = "svd_fro"
    else:
        if not cfg.eta > 0:
            raise ConfigError("eta", "operator-norm estimation requires eta > 0")
        center = agnostic_mean(x, cfg).mean
        res = agnostic_opnorm(x - center, cfg)
        rec.update(estimate=res.lambda_hat, iterations=res.iterations,
                   removed_safe=res.removed_safe, removed_per_iter=res.removed_per_iter,
                   terminated_by=res.terminated_by.value)
        metric, value = "opnorm_rel", res.lambda_hat
    if truth is not None:
        rec.update(metric=metric, error=experiment.error_metric(metric, value, truth))
    _emit(rec)
    return EXIT_OK


def _cmd_baselines(args) -> int:
    stored = rmds.load(args.dataset)
    x, truth = stored.data.rows, stored.truth
    gm = baselines.geometric_median(x)
    ests = {"sample_mean": baselines.sample_mean(x),
            "coordinate_median": baselines.coordinate_median(x),
            "geometric_median": gm.iterate}
    rec: dict = {"command": "baselines", "n": stored.data.n, "m": stored.data.m,
                 "estimates": {k: v.tolist() for k, v in ests.items()},
                 "weiszfeld_iterations": gm.iterations, "weiszfeld_converged": gm.converged}
    if truth is not None:
        rec["errors"] = {k: float(np.linalg.norm(v - truth.mean)) for k, v in ests.items()}
        rec["errors"]["sample_cov"] = float(np.linalg.norm(baselines.sample_covariance(x) - truth.covariance))
    _emit(rec)
    return EXIT_OK


def _with_seed(spec, args):
    return spec if args.seed is None else experiment.ExperimentSpec(**{**spec.__dict__, "seed": args.seed})


def _cmd_simulate(args) -> int:
    spec = _with_seed(experiment.load_spec(args.spec), args)
    paths = experiment.simulate(spec, args.out or spec.data_dir)
    _emit({"command": "simulate", "files": [str(p) for p in paths]})
    return EXIT_OK


def _cmd_bench(args) -> int:
    spec = _with_seed(experiment.load_spec(args.spec), args)
    out = Path(args.out or spec.output)
    records, _ = experiment.bench(spec, out, workers=args.workers)
    failed = sum(r.status != "ok" for r in records)
    _emit({"command": "bench", "report": str(out), "summary": str(experiment.summary_path(out)),
           "rows": len(records), "failed": failed})
    return EXIT_OK


COMMANDS = {"simulate": _cmd_simulate, "estimate": _cmd_estimate,
            "bench": _cmd_bench, "baselines": _cmd_baselines}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (rmds.FormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, SpecError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (EstimationError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ESTIMATOR


if __name__ == "__main__":
    sys.exit(main())
