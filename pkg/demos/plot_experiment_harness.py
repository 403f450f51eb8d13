"""
Running an experiment grid
==========================

A spec names a clean family, an adversary, a grid and the estimators. The
bench writes one CSV row per trial and estimator plus a JSON summary.
"""

import json
import tempfile
from pathlib import Path

from agnostic.harness import experiment, rmds

spec = experiment.parse_spec({
    "family": {"kind": "gaussian", "mean": 1.0},
    "adversary": {"kind": "point_mass", "axis": 0, "distance": 10, "distance_scale": "sqrt_n"},
    "grid": {"n": [4, 16], "m": [5000], "eta": [0.1], "eps": [0.1]},
    "estimators": ["agnostic_mean", "sample_mean", "geometric_median"],
    "repeats": 3,
    "seed": 1000,
})

out = Path(tempfile.mkdtemp())
files = experiment.simulate(spec, out / "data")
print("datasets:", [p.name for p in files][:2], "...")
print("first file holds", rmds.load(files[0]).data.m, "rows")

records, summary = experiment.bench(spec, out / "report.csv")
print((out / "report.csv").read_text().splitlines()[0])
for block in summary["cells"]:
    print(f"n={block['n']:>2} {block['estimator']:>17}: median {block['median']:.3f}")
print(json.dumps(summary["cells"][0], indent=1))
