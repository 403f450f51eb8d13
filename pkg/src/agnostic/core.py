"""Shared data types, configuration and validation.

Everything here is immutable after construction. Sample matrices are stored
as read-only ``float64`` arrays of shape ``(m, n)``.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np

# eta must stay strictly below this for the analysis of the damping step
ETA_CAP = 1.0 / 2.1


class AgnosticError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(AgnosticError, ValueError):
    """An estimator configuration violates one of its constraints."""

    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


class EstimationError(AgnosticError):
    """An estimator could not produce a result from the given data."""


class InsufficientSamples(EstimationError, ValueError):
    pass


class EmptyInput(InsufficientSamples):
    pass


class Mode(str, enum.Enum):
    """Distribution assumption driving the choice of outlier removal."""

    GAUSSIAN = "gaussian"
    BOUNDED = "bounded"


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """``m`` samples in ``R^n``, one per row, in a fixed order."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.float64)
        if rows.ndim == 1:
            rows = rows[:, None]
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise ValueError(f"rows must be a non-empty (m, n) array, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise ValueError("rows contain NaN or Inf")
        object.__setattr__(self, "rows", _freeze(rows))

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.rows.shape == other.rows.shape and bool(np.array_equal(self.rows, other.rows))

    __hash__ = None  # type: ignore[assignment]


DataLike = Union[Dataset, np.ndarray, Any]


def as_rows(d: DataLike) -> np.ndarray:
    """Return the ``(m, n)`` sample matrix of a Dataset or array-like."""
    if isinstance(d, Dataset):
        return d.rows
    if isinstance(d, LabeledDataset):
        return d.data.rows
    return Dataset(d).rows


@dataclass(frozen=True)
class GroundTruth:
    """Mean and covariance of the clean distribution, for evaluation."""

    mean: np.ndarray
    covariance: np.ndarray
    family: str = ""

    def __post_init__(self):
        mean = np.atleast_1d(np.array(self.mean, dtype=np.float64))
        cov = np.atleast_2d(np.array(self.covariance, dtype=np.float64))
        n = mean.shape[0]
        if mean.ndim != 1 or cov.shape != (n, n):
            raise ValueError(f"mean shape {mean.shape} and covariance shape {cov.shape} disagree")
        scale = max(np.max(np.abs(cov)), 1e-300)
        if np.max(np.abs(cov - cov.T)) > 1e-12 * scale:
            raise ValueError("covariance is not symmetric")
        cov = (cov + cov.T) / 2
        if n and np.min(np.linalg.eigvalsh(cov)) < -1e-10 * np.linalg.norm(cov, 2):
            raise ValueError("covariance is not positive semidefinite")
        object.__setattr__(self, "mean", _freeze(mean))
        object.__setattr__(self, "covariance", _freeze(cov))

    @property
    def opnorm(self) -> float:
        return float(np.linalg.norm(self.covariance, 2))


@dataclass(frozen=True)
class LabeledDataset:
    """A dataset together with corruption labels and the clean ground truth."""

    data: Dataset
    labels: np.ndarray
    truth: GroundTruth
    requested_corrupt: int | None = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=bool).reshape(-1).copy()
        if labels.shape[0] != self.data.m:
            raise ValueError(f"{labels.shape[0]} labels for {self.data.m} rows")
        if self.requested_corrupt is not None and int(labels.sum()) != self.requested_corrupt:
            raise ValueError("corrupted label count differs from the requested count")
        if self.truth.mean.shape[0] != self.data.n:
            raise ValueError("ground truth dimension differs from data dimension")
        object.__setattr__(self, "labels", _freeze(labels))

    @property
    def rows(self) -> np.ndarray:
        return self.data.rows

    @property
    def n_corrupt(self) -> int:
        return int(self.labels.sum())


@dataclass(frozen=True)
class MomentProfile:
    """Moment assumptions on the clean distribution.

    ``c4`` and ``c42`` are the fourth-moment ratios of ``x`` and of its squared
    deviations; they document the regime and are not read by the estimators.
    ``gamma`` is the tail exponent used by the operator-norm radii.
    """

    mode: Mode = Mode.GAUSSIAN
    c4: float = 3.0
    c42: float = 3.0
    gamma: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))

    @classmethod
    def gaussian(cls) -> "MomentProfile":
        return cls(Mode.GAUSSIAN, 3.0, 3.0, 2.0)

    @classmethod
    def bounded(cls, c4: float = 3.0, c42: float = 3.0, gamma: float = 2.0) -> "MomentProfile":
        return cls(Mode.BOUNDED, c4, c42, gamma)


@dataclass(frozen=True)
class OpNormConfig:
    c1: float = 4.0  # safe truncation radius
    c2: float = 4.0  # per-direction truncation
    c3: float = 8.0  # termination slack
    max_iter_scale: float = 4.0


@dataclass(frozen=True)
class EstimatorConfig:
    """Parameters shared by all agnostic estimators.

    ``eta`` is the (known) corruption fraction and ``eps`` the statistical
    slack. ``eps1`` sets the damping scale ``s^2 = Tr(Sigma) / eps1``.
    """

    eta: float = 0.1
    eps: float = 0.1
    profile: MomentProfile = field(default_factory=MomentProfile.gaussian)
    eps1: float = 0.1
    fresh_samples: bool = False
    opnorm: OpNormConfig = field(default_factory=OpNormConfig)
    seed: int = 0

    @property
    def mode(self) -> Mode:
        return self.profile.mode

    def replace(self, **changes) -> "EstimatorConfig":
        if "mode" in changes:
            mode = Mode(changes.pop("mode"))
            if mode is Mode.GAUSSIAN:
                changes["profile"] = MomentProfile.gaussian()
            else:
                p = self.profile
                changes["profile"] = MomentProfile.bounded(p.c4, p.c42, p.gamma)
        return dataclasses.replace(self, **changes)


def _finite(x) -> bool:
    return isinstance(x, (int, float, np.integer, np.floating)) and math.isfinite(x)


def validate_config(cfg: EstimatorConfig) -> None:
    """Raise :class:`ConfigError` naming the first violated constraint."""
    if not _finite(cfg.eta) or not 0 <= cfg.eta < ETA_CAP:
        raise ConfigError("eta", f"must lie in [0, 1/2.1), got {cfg.eta!r}")
    if not _finite(cfg.eps) or not 0 < cfg.eps < 1:
        raise ConfigError("eps", f"must lie in (0, 1), got {cfg.eps!r}")
    if cfg.eta + cfg.eps >= 1:
        raise ConfigError("eps", "eta + eps must be below 1")
    if not _finite(cfg.eps1) or not 0 < cfg.eps1 <= 1:
        raise ConfigError("eps1", f"must lie in (0, 1], got {cfg.eps1!r}")
    p = cfg.profile
    if not isinstance(p.mode, Mode):
        raise ConfigError("profile.mode")
    if p.mode is Mode.GAUSSIAN and (p.c4 != 3 or p.gamma != 2):
        raise ConfigError("profile", "gaussian mode requires c4 = 3 and gamma = 2")
    for name in ("c4", "c42"):
        v = getattr(p, name)
        if not _finite(v) or v < 1:
            raise ConfigError(f"profile.{name}", f"must be >= 1, got {v!r}")
    if not _finite(p.gamma) or p.gamma <= 0:
        raise ConfigError("profile.gamma", f"must be > 0, got {p.gamma!r}")
    for name in ("c1", "c2", "c3", "max_iter_scale"):
        v = getattr(cfg.opnorm, name)
        if not _finite(v) or v <= 0:
            raise ConfigError(f"opnorm.{name}", f"must be > 0, got {v!r}")
    if not isinstance(cfg.seed, (int, np.integer)) or not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed", "must be an unsigned 64-bit integer")


def split_dataset(d: DataLike, levels: int) -> list[Dataset]:
    """Split rows into ``levels`` contiguous chunks whose sizes differ by at most one.

    The remainder goes to the earliest chunks, so ``m=10, levels=3`` gives
    sizes ``(4, 3, 3)``.
    """
    rows = as_rows(d)
    m = rows.shape[0]
    if levels < 1:
        raise ValueError("levels must be positive")
    if m < levels:
        raise InsufficientSamples(f"cannot split {m} rows into {levels} chunks")
    base, extra = divmod(m, levels)
    out, start = [], 0
    for i in range(levels):
        size = base + (1 if i < extra else 0)
        out.append(Dataset(rows[start:start + size]))
        start += size
    return out


def window_count(length: int, eta: float, eps: float) -> int:
    """Number of points kept by the truncation rules: ``ceil((1-eta-eps)(1-eta) * length)``."""
    x = (1.0 - eta - eps) * (1.0 - eta) * length
    # guard against 0.72 * 100 evaluating to 72.00000000000001
    k = math.ceil(x - 1e-9 * max(1.0, abs(x)))
    return min(k, length)


def rng(seed: int, *key: int) -> np.random.Generator:
    """Independent PCG64 stream for ``seed`` and an optional spawn key."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def derive_seed(seed: int, *key: int) -> int:
    """Deterministic 64-bit child seed of ``seed`` at position ``key``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
