"""Classical comparison estimators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DataLike, as_rows

_COINCIDE = 1e-12


def sample_mean(d: DataLike) -> np.ndarray:
    return as_rows(d).mean(axis=0)


def sample_covariance(d: DataLike) -> np.ndarray:
    """Sample covariance with divisor ``m``."""
    x = as_rows(d)
    xc = x - x.mean(axis=0)
    c = xc.T @ xc / x.shape[0]
    return (c + c.T) / 2


def coordinate_median(d: DataLike) -> np.ndarray:
    return np.median(as_rows(d), axis=0)


@dataclass(frozen=True)
class WeiszfeldState:
    iterate: np.ndarray
    objective: float
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list, repr=False)


def geometric_objective(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.linalg.norm(x - y, axis=1).sum())


def geometric_median(d: DataLike, tol: float = 1e-9, max_iter: int = 10000) -> WeiszfeldState:
    """Geometric median by Weiszfeld iteration started at the coordinate-wise median.

    When the iterate sits on data points, the Vardi-Zhang rule either certifies
    it as optimal (residual pull no larger than the multiplicity) or steps off.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    x = as_rows(d)
    y = coordinate_median(x)
    obj = geometric_objective(x, y)
    history = [obj]
    for it in range(1, max_iter + 1):
        diff = x - y
        dist = np.linalg.norm(diff, axis=1)
        away = dist > _COINCIDE
        mult = int((~away).sum())
        inv = 1.0 / dist[away]
        t = inv @ x[away] / inv.sum() if away.any() else y
        if mult == 0:
            y_new = t
        else:
            pull = float(np.linalg.norm(inv @ diff[away]))
            if pull <= mult:
                return WeiszfeldState(y, obj, it, True, history)
            frac = mult / pull
            y_new = (1 - frac) * t + frac * y
        new_obj = geometric_objective(x, y_new)
        step = float(np.linalg.norm(y_new - y))
        if new_obj > obj:
            # rounding at the optimum; keep the better point
            return WeiszfeldState(y, obj, it, True, history)
        y, obj = y_new, new_obj
        history.append(obj)
        if step <= tol * (1 + float(np.linalg.norm(y))):
            return WeiszfeldState(y, obj, it, True, history)
    return WeiszfeldState(y, obj, max_iter, False, history)
