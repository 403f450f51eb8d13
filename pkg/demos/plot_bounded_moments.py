"""
One-dimensional rate under bounded fourth moments
=================================================

A two-point clean distribution plus a third atom at ``eta^(-1/4)`` keeps the
fourth-moment ratio small yet moves the mean by ``eta^(3/4)``. No estimator
can tell the two apart, so the shortest-interval mean is off by that much.
"""

import numpy as np

from agnostic import ThreePointTail, TwoPoint, sample_contaminated, shortest_interval_mean
from agnostic.contamination import fourth_moment_ratio

for eta in (0.01, 0.05, 0.1):
    atom = ThreePointTail(1.0, eta).atom
    c4 = fourth_moment_ratio([-1, 1, atom], [(1 - eta) / 2, (1 - eta) / 2, eta])
    errs = [abs(shortest_interval_mean(
        sample_contaminated(TwoPoint(1.0), ThreePointTail(1.0, eta), eta, 50000, s).rows[:, 0], eta, 0.05))
        for s in range(10)]
    print(f"eta={eta:<5} C4={c4:.2f}  error={np.median(errs):.4f}  eta^0.75={eta ** 0.75:.4f}")
