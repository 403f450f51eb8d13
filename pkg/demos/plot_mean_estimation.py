"""
Mean estimation with a point-mass adversary
===========================================

Ten percent of the rows are moved to one far point. The sample mean follows
them; the recursive estimator does not.
"""

import math

import numpy as np

from agnostic import (
    EstimatorConfig,
    Gaussian,
    PointMass,
    agnostic_mean,
    coordinate_median,
    geometric_median,
    sample_contaminated,
    sample_mean,
)

n, m, eta = 32, 20000, 0.1
mu = np.full(n, 5.0)
adversary = PointMass(mu + 10 * math.sqrt(n) * np.eye(n)[0])
data = sample_contaminated(Gaussian.isotropic(n, 5.0), adversary, eta, m, seed=1)
print(f"{data.n_corrupt} of {m} rows corrupted")

# %%
# Every estimator sees the same rows.
est = agnostic_mean(data, EstimatorConfig(eta=eta, eps=0.1))
for name, value in [("agnostic", est.mean), ("sample mean", sample_mean(data)),
                    ("coordinate median", coordinate_median(data)),
                    ("geometric median", geometric_median(data).iterate)]:
    print(f"{name:>18}: error {np.linalg.norm(value - mu):.3f}")

# %%
# The recursion halves the dimension each level and records what it kept.
for rec in est.diagnostics:
    print(f"dim {rec.dim:>3}  retained weight {rec.weight_mass:9.1f}  s^2 {rec.scale2:8.1f}")
