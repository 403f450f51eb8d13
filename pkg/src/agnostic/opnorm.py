"""Agnostic estimation of the operator norm ``||Sigma||_2``.

Repeatedly take the top eigenpair of the uncentered second moment of the
surviving points. If the top eigenvalue agrees with a robust 1-d variance
estimate along the eigenvector, stop; otherwise drop the points with large
projections on it and try again. The input must already be centered.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigError, DataLike, EstimationError, EstimatorConfig, as_rows, validate_config
from .outliers import safe_outlier_truncation
from .scalar import var1d
from .spectral import eigensystem


class EmptySurvivorSet(EstimationError):
    pass


class StalledProgress(EstimationError):
    """A non-terminal iteration removed nothing; the constants are mis-set."""


class Termination(str, enum.Enum):
    THRESHOLD = "threshold"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class OpNormResult:
    lambda_hat: float
    iterations: int
    removed_per_iter: list[int]
    terminated_by: Termination
    removed_safe: int = 0
    direction: np.ndarray | None = field(default=None, repr=False)
    sigma_v2: float = 0.0
    survivors: np.ndarray | None = field(default=None, repr=False)

    @property
    def total_removed(self) -> int:
        return self.removed_safe + sum(self.removed_per_iter)


def iteration_cap(n: int, cfg: EstimatorConfig) -> int:
    log_term = math.log(n / cfg.eta) ** (2.0 / cfg.profile.gamma)
    return max(1, math.ceil(cfg.opnorm.max_iter_scale * n * log_term))


def agnostic_opnorm(d: DataLike, cfg: EstimatorConfig) -> OpNormResult:
    validate_config(cfg)
    if not cfg.eta > 0:
        raise ConfigError("eta", "operator-norm estimation requires eta > 0")
    x = as_rows(d)
    n = x.shape[1]
    gamma = cfg.profile.gamma
    log_n_eta = math.log(n / cfg.eta)
    slack = 1.0 + cfg.opnorm.c3 * cfg.eta * log_n_eta ** (2.0 / gamma)
    band = cfg.opnorm.c2 * log_n_eta ** (1.0 / gamma) / 2.0
    cap = iteration_cap(n, cfg)

    keep = safe_outlier_truncation(x, cfg).retained
    removed_safe = int((~keep).sum())
    idx = np.flatnonzero(keep)
    removed = []
    sigma2, v, sv2 = 0.0, None, 0.0
    for it in range(1, cap + 1):
        if idx.size == 0:
            raise EmptySurvivorSet("every point was truncated")
        s = x[idx]
        second = s.T @ s / idx.size
        eig = eigensystem(second)
        sigma2 = max(float(eig.eigenvalues[0]), 0.0)
        v = eig.top_basis[:, 0]
        proj = s @ v
        sv2 = var1d(proj, cfg) if proj.size >= 2 else 0.0
        if sigma2 <= slack * sv2:
            return OpNormResult(sigma2, it, removed, Termination.THRESHOLD, removed_safe, v, sv2, idx)
        drop = np.abs(proj) > band * math.sqrt(sv2)
        if not drop.any():
            raise StalledProgress(
                f"iteration {it}: sigma^2 = {sigma2:.4g} exceeds {slack:.4g} * {sv2:.4g} "
                "but no projection lies outside the truncation band")
        removed.append(int(drop.sum()))
        idx = idx[~drop]
    return OpNormResult(sigma2, cap, removed, Termination.ITERATION_CAP, removed_safe, v, sv2, idx)
