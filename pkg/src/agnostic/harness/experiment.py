"""Experiment specs, dataset generation and benchmark reports.

A spec is a JSON object::

    {
      "family":     {"kind": "gaussian", "mean": 5.0, "head_variances": [4.0], "variance": 1.0},
      "adversary":  {"kind": "point_mass", "axis": 0, "distance": 10, "distance_scale": "sqrt_n"},
      "grid":       {"n": [8, 32], "m": [20000], "eta": [0.1], "eps": [0.1]},
      "estimators": ["agnostic_mean", "sample_mean"],
      "repeats": 20,
      "seed": 1000,
      "output": "report.csv"
    }

Optional keys: ``placement`` ("exact" | "bernoulli"), ``mode`` ("gaussian" |
"bounded"), ``eps1``, ``fresh_samples``, ``psd``, ``svd_k``, ``opnorm``
(``c1``/``c2``/``c3``/``max_iter_scale``) and ``data_dir`` (for ``simulate``).

Family kinds: ``gaussian``, ``uniform_ball``, ``student_t``, ``two_point``,
``bernoulli``. Adversary kinds: ``point_mass``, ``axis_pair``,
``three_point_tail``, ``tv_swap``, ``geom_median_killer``, ``composite``.
Distances may be scaled per dimension with ``distance_scale`` of ``"one"``,
``"sqrt_n"`` or ``"n"``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .. import baselines, contamination as cm
from ..core import (
    AgnosticError,
    ConfigError,
    EstimatorConfig,
    LabeledDataset,
    MomentProfile,
    OpNormConfig,
    derive_seed,
    validate_config,
)
from ..covariance import agnostic_covariance, agnostic_svd
from ..mean import agnostic_mean, refine_mean_gaussian
from ..opnorm import agnostic_opnorm
from ..scalar import shortest_interval_mean
from ..spectral import best_rank_k
from . import rmds


class SpecError(AgnosticError, ValueError):
    def __init__(self, field: str, message: str = "", line: int | None = None):
        self.field = field
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{field}: {message}" if message else f"{where}{field}")


# ---------------------------------------------------------------- estimators


@dataclass(frozen=True)
class Estimator:
    metric: str
    run: Callable[[np.ndarray, EstimatorConfig, "ExperimentSpec"], tuple[Any, int]]


def _mean_est(fn):
    def run(x, cfg, spec):
        res = fn(x, cfg)
        return res.mean, res.levels
    return run


def _opnorm(x, cfg, spec):
    center = agnostic_mean(x, cfg).mean
    res = agnostic_opnorm(x - center, cfg)
    return res.lambda_hat, res.iterations


def _sample_opnorm(x, cfg, spec):
    return float(np.linalg.norm(baselines.sample_covariance(x), 2)), 0


def _weiszfeld(x, cfg, spec):
    st = baselines.geometric_median(x)
    return st.iterate, st.iterations


ESTIMATORS: dict[str, Estimator] = {
    "agnostic_mean": Estimator("mean_l2", _mean_est(agnostic_mean)),
    "refined_mean": Estimator("mean_l2", _mean_est(refine_mean_gaussian)),
    "sample_mean": Estimator("mean_l2", lambda x, cfg, spec: (baselines.sample_mean(x), 0)),
    "coordinate_median": Estimator("mean_l2", lambda x, cfg, spec: (baselines.coordinate_median(x), 0)),
    "geometric_median": Estimator("mean_l2", _weiszfeld),
    "shortest_interval_mean": Estimator(
        "mean_l2",
        lambda x, cfg, spec: (np.array([shortest_interval_mean(x[:, j], cfg.eta, cfg.eps)
                                        for j in range(x.shape[1])]), 0)),
    "agnostic_cov": Estimator(
        "cov_fro", lambda x, cfg, spec: (agnostic_covariance(x, cfg, psd=spec.psd).sigma_hat, 0)),
    "sample_cov": Estimator("cov_fro", lambda x, cfg, spec: (baselines.sample_covariance(x), 0)),
    "agnostic_opnorm": Estimator("opnorm_rel", _opnorm),
    "sample_opnorm": Estimator("opnorm_rel", _sample_opnorm),
    "agnostic_svd": Estimator("svd_fro", lambda x, cfg, spec: (agnostic_svd(x, spec.svd_k, cfg), 0)),
    "sample_svd": Estimator(
        "svd_fro", lambda x, cfg, spec: (best_rank_k(baselines.sample_covariance(x), spec.svd_k), 0)),
}


def error_metric(metric: str, estimate, truth) -> float:
    if metric == "mean_l2":
        return float(np.linalg.norm(np.asarray(estimate) - truth.mean))
    if metric in ("cov_fro", "svd_fro"):
        return float(np.linalg.norm(np.asarray(estimate) - truth.covariance))
    if metric == "opnorm_rel":
        norm = truth.opnorm
        return abs(float(estimate) - norm) / norm
    raise ValueError(f"unknown metric {metric!r}")


# ---------------------------------------------------------------- specs

_SCALES = {"one": lambda n: 1.0, "sqrt_n": math.sqrt, "n": float}


@dataclass(frozen=True)
class Cell:
    index: int
    n: int
    m: int
    eta: float
    eps: float


@dataclass(frozen=True)
class ExperimentSpec:
    family: dict
    adversary: dict
    grid: dict
    estimators: list[str]
    repeats: int = 1
    seed: int = 0
    output: str = "report.csv"
    placement: str = "exact"
    mode: str = "gaussian"
    eps1: float = 0.1
    fresh_samples: bool = False
    psd: bool = False
    svd_k: int = 1
    opnorm: dict = field(default_factory=dict)
    data_dir: str = "data"

    def cells(self) -> list[Cell]:
        combos = itertools.product(self.grid["n"], self.grid["m"], self.grid["eta"], self.grid["eps"])
        return [Cell(i, int(n), int(m), float(eta), float(eps)) for i, (n, m, eta, eps) in enumerate(combos)]

    def config(self, cell: Cell, seed: int = 0) -> EstimatorConfig:
        profile = MomentProfile.gaussian() if self.mode == "gaussian" else MomentProfile.bounded()
        return EstimatorConfig(cell.eta, cell.eps, profile, self.eps1, self.fresh_samples,
                               OpNormConfig(**self.opnorm), seed)

    def trial_seed(self, cell: Cell, repeat: int) -> int:
        return derive_seed(self.seed, cell.index, repeat)


def parse_spec(obj: dict) -> ExperimentSpec:
    """Validate a decoded JSON spec; raises :class:`SpecError` naming the field."""
    if not isinstance(obj, dict):
        raise SpecError("spec", "top level must be an object")
    known = {f.name for f in dataclasses.fields(ExperimentSpec)}
    for key in obj:
        if key not in known:
            raise SpecError(key, "unknown field")
    for key in ("family", "adversary", "grid", "estimators"):
        if key not in obj:
            raise SpecError(key, "missing")
    grid = obj["grid"]
    if not isinstance(grid, dict):
        raise SpecError("grid", "must be an object")
    for key in ("n", "m", "eta", "eps"):
        vals = grid.get(key)
        if not isinstance(vals, list) or not vals:
            raise SpecError(f"grid.{key}", "must be a non-empty list")
    if any(not isinstance(v, int) or v < 1 for v in grid["n"] + grid["m"]):
        raise SpecError("grid.n", "dimensions and sample counts must be positive integers")
    ests = obj["estimators"]
    if not isinstance(ests, list) or not ests:
        raise SpecError("estimators", "must be a non-empty list")
    for e in ests:
        if e not in ESTIMATORS:
            raise SpecError("estimators", f"unknown estimator {e!r}")
    spec = ExperimentSpec(**obj)
    if not isinstance(spec.repeats, int) or spec.repeats < 1:
        raise SpecError("repeats", "must be a positive integer")
    if not isinstance(spec.seed, int) or not 0 <= spec.seed < 2**64:
        raise SpecError("seed", "must be an unsigned 64-bit integer")
    if spec.placement not in ("exact", "bernoulli"):
        raise SpecError("placement", "must be 'exact' or 'bernoulli'")
    if spec.mode not in ("gaussian", "bounded"):
        raise SpecError("mode", "must be 'gaussian' or 'bounded'")
    for cell in spec.cells():
        try:
            validate_config(spec.config(cell))
        except (ConfigError, TypeError) as e:
            raise SpecError(getattr(e, "field", "opnorm"), str(e)) from None
        build_family(spec.family, cell.n)
        build_adversary(spec.adversary, build_family(spec.family, cell.n), cell)
    return spec


def load_spec(path) -> ExperimentSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError("json", e.msg, e.lineno) from None
    return parse_spec(obj)


def _get(d: dict, key: str, default=None, where: str = ""):
    if key not in d and default is None:
        raise SpecError(f"{where}.{key}", "missing")
    return d.get(key, default)


def build_family(f: dict, n: int):
    kind = f.get("kind")
    try:
        if kind == "gaussian":
            if "covariance" in f:
                return cm.Gaussian(np.broadcast_to(np.asarray(f.get("mean", 0.0), float), (n,)).copy(),
                                   np.asarray(f["covariance"], float))
            head = list(f.get("head_variances", []))
            if len(head) > n:
                raise SpecError("family.head_variances", f"longer than n={n}")
            var = head + [float(f.get("variance", 1.0))] * (n - len(head))
            return cm.Gaussian.diagonal(var, f.get("mean", 0.0))
        if kind == "uniform_ball":
            return cm.UniformBall(n, float(f.get("radius", 1.0)))
        if kind == "student_t":
            return cm.StudentT(n, float(f.get("dof", 5.0)), float(f.get("scale", 1.0)), float(f.get("loc", 0.0)))
        if kind == "two_point":
            if n != 1:
                raise SpecError("family.kind", "two_point is one-dimensional")
            return cm.TwoPoint(float(f.get("sigma", 1.0)))
        if kind == "bernoulli":
            p = np.broadcast_to(np.asarray(f.get("p", 0.5), float), (n,)).copy()
            return cm.BernoulliProduct(p, bool(f.get("centered", False)))
    except SpecError:
        raise
    except (ValueError, TypeError) as e:
        raise SpecError("family", str(e)) from None
    raise SpecError("family.kind", f"unknown family {kind!r}")


def _distance(a: dict, n: int) -> float:
    scale = a.get("distance_scale", "one")
    if scale not in _SCALES:
        raise SpecError("adversary.distance_scale", f"unknown scale {scale!r}")
    return float(_get(a, "distance", where="adversary")) * _SCALES[scale](n)


def build_adversary(a: dict, family, cell: Cell):
    kind = a.get("kind")
    n = cell.n
    try:
        if kind == "point_mass":
            if "location" in a:
                return cm.PointMass(np.broadcast_to(np.asarray(a["location"], float), (n,)).copy())
            loc = family.mean + np.broadcast_to(np.asarray(a.get("offset", 0.0), float), (n,))
            if "axis" in a:
                loc[int(a["axis"])] += _distance(a, n)
            return cm.PointMass(loc)
        if kind == "axis_pair":
            return cm.AxisPair(int(a.get("axis", 0)), _distance(a, n))
        if kind == "three_point_tail":
            return cm.ThreePointTail(float(a.get("sigma", 1.0)), cell.eta)
        if kind == "tv_swap":
            if not isinstance(family, cm.Gaussian) or family.dim != 1:
                raise SpecError("adversary.kind", "tv_swap needs a 1-d gaussian family")
            sigma = math.sqrt(float(family.covariance[0, 0]))
            mu1, mu2 = cm.tv_swap_means(cell.eta, sigma, float(family.mean[0]))
            return cm.GaussianTVSwap(mu1, mu2, sigma)
        if kind == "geom_median_killer":
            return cm.GeomMedianKiller(_distance(a, n) if "distance" in a else None)
        if kind == "composite":
            parts = [(float(fr), build_adversary(sub, family, cell)) for fr, sub in a["parts"]]
            return cm.Composite(tuple(parts))
    except SpecError:
        raise
    except (KeyError, ValueError, TypeError, IndexError) as e:
        raise SpecError("adversary", str(e)) from None
    raise SpecError("adversary.kind", f"unknown adversary {kind!r}")


def generate(spec: ExperimentSpec, cell: Cell, repeat: int) -> tuple[LabeledDataset, int]:
    seed = spec.trial_seed(cell, repeat)
    fam = build_family(spec.family, cell.n)
    adv = build_adversary(spec.adversary, fam, cell)
    return cm.sample_contaminated(fam, adv, cell.eta, cell.m, seed, spec.placement), seed


def dataset_filename(cell: Cell, repeat: int, seed: int) -> str:
    return f"c{cell.index:03d}_n{cell.n}_m{cell.m}_eta{cell.eta:g}_eps{cell.eps:g}_r{repeat:03d}_s{seed}.rmds"


def simulate(spec: ExperimentSpec, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for cell in spec.cells():
        for r in range(spec.repeats):
            ld, seed = generate(spec, cell, r)
            paths.append(rmds.save(out_dir / dataset_filename(cell, r, seed), ld))
    return paths


# ---------------------------------------------------------------- bench

COLUMNS = ["cell", "n", "m", "eta", "eps", "repeat", "seed", "estimator", "metric",
           "error", "iterations", "status", "message", "seconds"]


@dataclass(frozen=True)
class TrialRecord:
    cell: int
    n: int
    m: int
    eta: float
    eps: float
    repeat: int
    seed: int
    estimator: str
    metric: str
    error: float | None
    iterations: int
    status: str = "ok"
    message: str = ""
    seconds: float = 0.0

    def to_row(self) -> list[str]:
        vals = dataclasses.astuple(self)
        return ["" if v is None else repr(v) if isinstance(v, float) else str(v) for v in vals]

    @classmethod
    def from_row(cls, row: dict) -> "TrialRecord":
        return cls(int(row["cell"]), int(row["n"]), int(row["m"]), float(row["eta"]), float(row["eps"]),
                   int(row["repeat"]), int(row["seed"]), row["estimator"], row["metric"],
                   float(row["error"]) if row["error"] else None, int(row["iterations"]),
                   row["status"], row["message"], float(row["seconds"]))


def run_trial(spec: ExperimentSpec, cell: Cell, repeat: int) -> list[TrialRecord]:
    ld, seed = generate(spec, cell, repeat)
    cfg = spec.config(cell, seed)
    out = []
    for name in spec.estimators:
        est = ESTIMATORS[name]
        t0 = time.perf_counter()
        try:
            value, iters = est.run(ld.rows, cfg, spec)
            err, status, msg = error_metric(est.metric, value, ld.truth), "ok", ""
        except AgnosticError as e:
            err, iters, status, msg = None, 0, "error", f"{type(e).__name__}: {e}"
        out.append(TrialRecord(cell.index, cell.n, cell.m, cell.eta, cell.eps, repeat, seed, name,
                               est.metric, err, int(iters), status, msg, time.perf_counter() - t0))
    return out


def _run_job(args):
    spec, cell, repeat = args
    return run_trial(spec, cell, repeat)


def bench(spec: ExperimentSpec, out_path=None, workers: int = 1) -> tuple[list[TrialRecord], dict]:
    """Run the grid and write the CSV report plus its ``.summary.json`` sibling."""
    jobs = [(spec, c, r) for c in spec.cells() for r in range(spec.repeats)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_run_job, jobs))
    else:
        chunks = [_run_job(j) for j in jobs]
    order = {name: i for i, name in enumerate(spec.estimators)}
    records = sorted((r for ch in chunks for r in ch), key=lambda r: (r.cell, r.repeat, order[r.estimator]))
    summary = aggregate(spec, records)
    out_path = Path(out_path or spec.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(format_csv(records), encoding="utf-8")
    summary_path(out_path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return records, summary


def summary_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".summary.json")


def format_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow(r.to_row())
    return buf.getvalue()


def read_csv(path) -> list[TrialRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if rows and list(rows[0].keys()) != COLUMNS:
        raise SpecError("report", "column set differs from the current schema")
    return [TrialRecord.from_row(r) for r in rows]


def aggregate(spec: ExperimentSpec, records) -> dict:
    """Median and interquartile range of the error per (cell, estimator)."""
    blocks = []
    first_median: dict[str, float] = {}
    for c in spec.cells():
        for name in spec.estimators:
            errs = [r.error for r in records
                    if r.cell == c.index and r.estimator == name and r.error is not None]
            failures = sum(1 for r in records if r.cell == c.index and r.estimator == name and r.status != "ok")
            block = {"cell": c.index, "n": c.n, "m": c.m, "eta": c.eta, "eps": c.eps,
                     "estimator": name, "count": len(errs), "failures": failures}
            if errs:
                q1, med, q3 = (float(v) for v in np.percentile(errs, [25, 50, 75]))
                first_median.setdefault(name, med)
                base = first_median[name]
                block.update(median=med, q1=q1, q3=q3, iqr=q3 - q1,
                             ratio_to_first_cell=med / base if base > 0 else None)
            blocks.append(block)
    return {"seed": spec.seed, "repeats": spec.repeats, "cells": blocks}
