"""
Covariance and rank-one approximation
=====================================

Pairs of rows are differenced to remove the mean, and the agnostic mean of
the flattened outer products gives the covariance.
"""

import numpy as np

from agnostic import (
    EstimatorConfig,
    Gaussian,
    PointMass,
    agnostic_covariance,
    agnostic_svd,
    best_rank_k,
    sample_contaminated,
    sample_covariance,
)

variances = [4.0] + [1.0] * 7
sigma = np.diag(variances)
data = sample_contaminated(Gaussian.diagonal(variances), PointMass(np.full(8, 50.0)), 0.05, 100000, seed=2)
cfg = EstimatorConfig(eta=0.05, eps=0.05)

est = agnostic_covariance(data, cfg)
print("agnostic  ||S - Sigma||_F =", round(float(np.linalg.norm(est.sigma_hat - sigma)), 3))
print("sample    ||S - Sigma||_F =", round(float(np.linalg.norm(sample_covariance(data) - sigma)), 1))
print("diagonal of the estimate:", np.round(np.diag(est.sigma_hat), 2))

# %%
# Best rank-one approximation: compare with the optimum ``||Sigma - Sigma_1||_F``.
s1 = agnostic_svd(data, 1, cfg)
print("rank-1 error", round(float(np.linalg.norm(sigma - s1)), 3),
      "vs optimum", round(float(np.linalg.norm(sigma - best_rank_k(sigma, 1))), 3))
