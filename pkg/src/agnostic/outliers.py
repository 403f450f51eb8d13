"""Outlier removal: exponential damping, ball truncation and safe truncation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DataLike,
    EstimatorConfig,
    InsufficientSamples,
    Mode,
    as_rows,
    window_count,
)
from .scalar import median1d, shortest_interval_mean, trace_estimate


class RemovalKind(str, enum.Enum):
    DAMPING = "damping"
    TRUNCATION = "truncation"
    SAFE_TRUNCATION = "safe_truncation"


@dataclass(frozen=True)
class RemovalResult:
    """Per-sample weights from one outlier-removal pass.

    ``scale2`` is ``s^2`` for damping and the squared radius otherwise.
    """

    weights: np.ndarray
    center: np.ndarray
    scale2: float
    kind: RemovalKind

    @property
    def retained(self) -> np.ndarray:
        return self.weights > 0

    @property
    def mass(self) -> float:
        return float(self.weights.sum())


def robust_center(d: DataLike, cfg: EstimatorConfig) -> np.ndarray:
    """Coordinate-wise median (Gaussian mode) or shortest-interval mean (bounded mode)."""
    x = as_rows(d)
    if cfg.mode is Mode.GAUSSIAN:
        return np.array([median1d(x[:, j]) for j in range(x.shape[1])])
    return np.array([shortest_interval_mean(x[:, j], cfg.eta, cfg.eps) for j in range(x.shape[1])])


def damping_weights(d: DataLike, center, scale2: float) -> np.ndarray:
    """``exp(-||x - a||^2 / s^2)`` for every row, with the zero-spread guard."""
    x = as_rows(d)
    dist2 = np.sum((x - np.asarray(center)) ** 2, axis=1)
    if scale2 <= 1e-12 * dist2.max():
        return np.ones(x.shape[0])
    # clamp keeps weights in (0, 1] where exp underflows
    return np.maximum(np.exp(-dist2 / scale2), np.finfo(np.float64).tiny)


def outlier_damping(d: DataLike, cfg: EstimatorConfig) -> RemovalResult:
    x = as_rows(d)
    if x.shape[1] < 2:
        raise ValueError("damping is defined for n >= 2; the 1-d case is a median")
    if x.shape[0] < 2:
        raise InsufficientSamples("need at least two rows")
    gauss = cfg if cfg.mode is Mode.GAUSSIAN else cfg.replace(mode=Mode.GAUSSIAN)
    a = robust_center(x, gauss)
    s2 = trace_estimate(x, cfg) / cfg.eps1
    return RemovalResult(damping_weights(x, a, s2), a, s2, RemovalKind.DAMPING)


def outlier_truncation(d: DataLike, cfg: EstimatorConfig) -> RemovalResult:
    """Keep the smallest ball around the robust center holding ``k`` points.

    Every point at distance exactly ``r`` is kept, so at least ``k`` survive.
    """
    x = as_rows(d)
    m = x.shape[0]
    k = window_count(m, cfg.eta, cfg.eps)
    if k < 1:
        raise InsufficientSamples(f"truncation keeps {k} < 1 points")
    bounded = cfg if cfg.mode is Mode.BOUNDED else cfg.replace(mode=Mode.BOUNDED)
    a = robust_center(x, bounded)
    dist = np.sqrt(np.sum((x - a) ** 2, axis=1))
    r = float(np.partition(dist, k - 1)[k - 1])
    w = (dist <= r).astype(np.float64)
    return RemovalResult(w, a, r * r, RemovalKind.TRUNCATION)


def safe_radius(t: float, n: int, eta: float, c1: float, gamma: float) -> float:
    """``c1 * sqrt(t) * ln(n / eta)^(1/gamma)``."""
    return c1 * math.sqrt(max(t, 0.0)) * math.log(n / eta) ** (1.0 / gamma)


def safe_outlier_truncation(d: DataLike, cfg: EstimatorConfig) -> RemovalResult:
    """Drop points outside a generous origin-centered ball. Data must be centered first."""
    x = as_rows(d)
    if x.shape[0] < 2:
        raise InsufficientSamples("need at least two rows")
    if not cfg.eta > 0:
        raise ValueError("safe truncation requires eta > 0")
    n = x.shape[1]
    t = trace_estimate(x, cfg)
    r = safe_radius(t, n, cfg.eta, cfg.opnorm.c1, cfg.profile.gamma)
    w = (np.sqrt(np.sum(x * x, axis=1)) <= r).astype(np.float64)
    return RemovalResult(w, np.zeros(n), r * r, RemovalKind.SAFE_TRUNCATION)
