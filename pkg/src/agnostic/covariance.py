"""Agnostic covariance estimation and rank-k approximation.

Samples are paired off and differenced to cancel the unknown mean; the mean
of the flattened outer products, estimated agnostically in ``R^(n^2)``, is
the covariance estimate.

The guarantee assumes the clean distribution is an affine image of a 4-wise
independent one (true for Gaussians). That cannot be checked from samples and
is left to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ETA_CAP,
    ConfigError,
    DataLike,
    Dataset,
    EstimatorConfig,
    InsufficientSamples,
    Mode,
    as_rows,
    validate_config,
)
from .mean import MeanEstimate, agnostic_mean
from .spectral import best_rank_k, project_psd, sym

DEFAULT_MAX_DIM = 96
# largest corruption rate handed to the inner run after doubling
PAIRED_ETA_LIMIT = 0.45 / 1.05


class DimensionCap(ConfigError):
    def __init__(self, n: int, cap: int):
        super().__init__("n", f"dimension {n} exceeds the covariance cap {cap} ({n * n} flattened)")


@dataclass(frozen=True)
class CovEstimate:
    sigma_hat: np.ndarray
    psd_projected: bool
    inner: MeanEstimate


def symmetrize_pairs(d: DataLike) -> Dataset:
    """Rows ``(x_i - x_{i + m//2}) / sqrt(2)`` for ``i < m//2``; an odd last row is dropped."""
    x = as_rows(d)
    half = x.shape[0] // 2
    if half < 1:
        raise InsufficientSamples("need at least two rows")
    return Dataset((x[:half] - x[half:2 * half]) / math.sqrt(2.0))


def flatten_outer(d: DataLike) -> Dataset:
    """Map each row ``x`` to the row-major flattening of ``x x^T``."""
    x = as_rows(d)
    m, n = x.shape
    return Dataset((x[:, :, None] * x[:, None, :]).reshape(m, n * n))


def unflatten(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise ValueError(f"length {v.size} is not a perfect square")
    return v.reshape(n, n)


def paired_config(cfg: EstimatorConfig) -> EstimatorConfig:
    """Config for the inner run: doubled eta, bounded-moment mode."""
    eta2 = 2.0 * cfg.eta
    if eta2 >= ETA_CAP:
        raise ConfigError("eta", f"2 * eta = {eta2:.4g} exceeds the cap 1/2.1 after pairing")
    eta2 = min(eta2, PAIRED_ETA_LIMIT)
    if eta2 + cfg.eps >= 1:
        raise ConfigError("eps", "2 * eta + eps must be below 1")
    return cfg.replace(eta=eta2, mode=Mode.BOUNDED)


def agnostic_covariance(d: DataLike, cfg: EstimatorConfig, psd: bool = False,
                        max_dim: int = DEFAULT_MAX_DIM) -> CovEstimate:
    validate_config(cfg)
    x = as_rows(d)
    m, n = x.shape
    if n > max_dim:
        raise DimensionCap(n, max_dim)
    if m < 4:
        raise InsufficientSamples("need at least four rows")
    inner_cfg = paired_config(cfg)
    inner = agnostic_mean(flatten_outer(symmetrize_pairs(x)), inner_cfg)
    sigma = sym(unflatten(inner.mean))
    if psd:
        sigma = project_psd(sigma)
    return CovEstimate(sigma, psd, inner)


def agnostic_svd(d: DataLike, k: int, cfg: EstimatorConfig, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Best rank-``k`` approximation of the agnostic covariance estimate."""
    x = as_rows(d)
    if not 0 <= k <= x.shape[1]:
        raise ValueError(f"k must lie in [0, {x.shape[1]}], got {k}")
    return best_rank_k(agnostic_covariance(x, cfg, max_dim=max_dim).sigma_hat, k)
