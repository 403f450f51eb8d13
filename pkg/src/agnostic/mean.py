"""Recursive agnostic mean estimation.

Each level removes outliers, takes the top half of the principal subspace of
the reweighted sample and trusts the plain (weighted) mean on the bottom half.
The top half is handled by recursing on the projection of the full sample.
A 1-d problem is solved with a median (Gaussian) or shortest-interval mean
(bounded moments).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ConfigError,
    DataLike,
    EstimationError,
    EstimatorConfig,
    InsufficientSamples,
    Mode,
    as_rows,
    rng,
    split_dataset,
    validate_config,
)
from .outliers import outlier_damping, outlier_truncation
from .scalar import median1d, shortest_interval_mean
from .spectral import (
    SingularMatrix,
    eigensystem,
    inverse_sqrt,
    split_top_bottom,
    sqrt_psd,
    weighted_covariance,
)


class DegradedRegime(EstimationError):
    """``eta * ln(n)`` is too large for the whitening refinement to help."""


@dataclass(frozen=True)
class LevelRecord:
    dim: int
    m: int
    weight_mass: float
    scale2: float
    basis: np.ndarray = field(repr=False)
    top_basis: np.ndarray | None = field(default=None, repr=False)
    bottom_basis: np.ndarray | None = field(default=None, repr=False)
    mean_bottom: np.ndarray | None = field(default=None, repr=False)


@dataclass(frozen=True)
class MeanEstimate:
    mean: np.ndarray
    levels: int
    diagnostics: list[LevelRecord]

    @property
    def dims(self) -> list[int]:
        return [rec.dim for rec in self.diagnostics]


def recursion_depth(n: int) -> int:
    """``ceil(log2 n) + 1``: the number of levels for dimensions n, ceil(n/2), ..., 1."""
    return (n - 1).bit_length() + 1


def agnostic_mean(d: DataLike, cfg: EstimatorConfig) -> MeanEstimate:
    validate_config(cfg)
    x = as_rows(d)
    m, n = x.shape
    levels = recursion_depth(n)
    if cfg.fresh_samples:
        if m < 4 * levels:
            raise InsufficientSamples(f"fresh_samples needs at least {4 * levels} rows, got {m}")
        chunks = [c.rows for c in split_dataset(x, levels)]
    else:
        chunks = [x] * levels
    remove = outlier_damping if cfg.mode is Mode.GAUSSIAN else outlier_truncation

    basis = np.eye(n)  # columns span the current subspace, in the original frame
    mu = np.zeros(n)
    records = []
    for level in range(levels):
        y = chunks[level] @ basis
        dim = y.shape[1]
        if dim == 1:
            if cfg.mode is Mode.GAUSSIAN:
                value = median1d(y[:, 0])
            else:
                value = shortest_interval_mean(y[:, 0], cfg.eta, cfg.eps)
            mu = mu + basis[:, 0] * value
            records.append(LevelRecord(1, y.shape[0], float(y.shape[0]), 0.0, basis))
            break
        res = remove(y, cfg)
        wmean, wcov = weighted_covariance(y, res.weights)
        split = split_top_bottom(wcov, math.ceil(dim / 2))
        mean_w = split.bottom_basis.T @ wmean
        mu = mu + basis @ (split.bottom_basis @ mean_w)
        records.append(LevelRecord(dim, y.shape[0], res.mass, res.scale2, basis,
                                   split.top_basis, split.bottom_basis, mean_w))
        basis = basis @ split.top_basis
    return MeanEstimate(mu, len(records), records)


def refine_mean_gaussian(d: DataLike, cfg: EstimatorConfig, threshold: float = 0.2) -> MeanEstimate:
    """Mean estimate with improved dependence on ``eta`` for non-spherical Gaussians.

    Adds isotropic noise at the scale of ``||Sigma||_2`` so that the covariance
    is well conditioned, whitens with a robust covariance estimate of the
    noisy sample, runs :func:`agnostic_mean` in the whitened frame and maps
    the result back.
    """
    from .covariance import agnostic_covariance

    validate_config(cfg)
    if cfg.mode is not Mode.GAUSSIAN:
        raise ConfigError("profile.mode", "refinement is defined for Gaussian data")
    x = as_rows(d)
    m, n = x.shape
    if n > 1 and cfg.eta * math.log(n) >= threshold:
        raise DegradedRegime(f"eta * ln(n) = {cfg.eta * math.log(n):.3g} >= {threshold}")

    sigma_hat = agnostic_covariance(x, cfg).sigma_hat
    s2 = max(float(eigensystem(sigma_hat).eigenvalues[0]), 0.0)
    noise = rng(cfg.seed, 0xF00D).standard_normal((m, n)) * math.sqrt(s2)
    xp = x + noise
    cov_p = agnostic_covariance(xp, cfg, psd=True).sigma_hat
    try:
        white = inverse_sqrt(cov_p)
    except SingularMatrix:
        # zero spread: nothing to whiten
        return agnostic_mean(x, cfg)
    inner = agnostic_mean(xp @ white, cfg)  # white is symmetric
    return MeanEstimate(sqrt_psd(cov_p) @ inner.mean, inner.levels, inner.diagnostics)
