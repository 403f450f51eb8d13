"""
Geometric median versus the recursive estimator as n grows
==========================================================

The clean data has zero variance along ``e_1`` and unit variance elsewhere;
the corrupted mass sits at ``n * e_1``. The geometric median drifts by an
amount that grows like ``sqrt(n)``.
"""

import numpy as np

from agnostic import EstimatorConfig, agnostic_mean, geom_median_instance, geometric_median

cfg = EstimatorConfig(eta=0.1, eps=0.1)
print(" n   agnostic  geometric-median")
for n in (8, 32, 128):
    errs = []
    for seed in range(5):
        data = geom_median_instance(n, 0.1, 20000, seed)
        errs.append((np.linalg.norm(agnostic_mean(data, cfg).mean),
                     np.linalg.norm(geometric_median(data).iterate)))
    a, g = np.median(np.array(errs), axis=0)
    print(f"{n:>3}   {a:.3f}     {g:.3f}")
