"""One-dimensional robust estimators.

These are the base cases of the recursive mean estimator and the variance
oracles used by outlier removal and the operator-norm search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DataLike,
    EmptyInput,
    EstimatorConfig,
    InsufficientSamples,
    Mode,
    as_rows,
    window_count,
)

# Phi(1): mass of N(0, 1) below one standard deviation
GAUSS_SIGMA_QUANTILE = 0.8413447460685429


@dataclass(frozen=True)
class ScalarEstimate:
    value: float
    method: str


def _values(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise EmptyInput("empty input")
    if not np.all(np.isfinite(v)):
        raise ValueError("values contain NaN or Inf")
    return v


def median1d(values) -> float:
    """Sample median; the mean of the two middle order statistics for even length."""
    v = np.sort(_values(values))
    n = v.size
    if n % 2:
        return float(v[n // 2])
    return float((v[n // 2 - 1] + v[n // 2]) / 2)


def quantile_nearest_rank(values, p: float) -> float:
    """Nearest-rank quantile: the ``ceil(p * len)``-th smallest value (1-based)."""
    v = np.sort(_values(values))
    idx = min(max(math.ceil(p * v.size), 1), v.size)
    return float(v[idx - 1])


def shortest_window(values, eta: float, eps: float) -> tuple[int, int, np.ndarray]:
    """Locate the narrowest window of ``k`` consecutive sorted values.

    Returns ``(start, k, sorted_values)``. Ties go to the smallest left endpoint.
    """
    v = np.sort(_values(values))
    k = window_count(v.size, eta, eps)
    if k < 1:
        raise InsufficientSamples(f"window size {k} < 1 for {v.size} values")
    widths = v[k - 1:] - v[: v.size - k + 1]
    start = int(np.argmin(widths))
    return start, k, v


def shortest_interval_mean(values, eta: float, eps: float) -> float:
    """Mean of the smallest interval holding a ``(1-eta-eps)(1-eta)`` fraction of the values."""
    start, k, v = shortest_window(values, eta, eps)
    return float(np.mean(v[start:start + k]))


def var1d_gaussian(values, eta: float = 0.0) -> float:
    """Variance from the gap between the Phi(1) quantile and the median.

    ``eta`` is accepted for a uniform signature; the estimator does not need it.
    """
    v = _values(values)
    if v.size < 2:
        raise InsufficientSamples("need at least two values")
    sigma = quantile_nearest_rank(v, GAUSS_SIGMA_QUANTILE) - median1d(v)
    return max(sigma, 0.0) ** 2


def var1d_general(values, eta: float, eps: float) -> float:
    """Robust mean of squared deviations from the robust 1-d mean."""
    v = _values(values)
    center = shortest_interval_mean(v, eta, eps)
    return max(shortest_interval_mean((v - center) ** 2, eta, eps), 0.0)


def var1d(values, cfg: EstimatorConfig) -> float:
    """Mode-appropriate 1-d variance estimate."""
    if cfg.mode is Mode.GAUSSIAN:
        return var1d_gaussian(values, cfg.eta)
    return var1d_general(values, cfg.eta, cfg.eps)


def trace_estimate(d: DataLike, cfg: EstimatorConfig) -> float:
    """Estimate ``Tr(Sigma)`` as the sum of robust variances along the coordinate axes."""
    x = as_rows(d)
    if x.shape[0] < 2:
        raise InsufficientSamples("need at least two rows")
    return float(sum(var1d(x[:, j], cfg) for j in range(x.shape[1])))
