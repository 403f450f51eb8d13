"""Seeded clean distributions, adversaries and labeled contaminated datasets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Sequence, Union

import numpy as np

from .core import Dataset, GroundTruth, LabeledDataset, rng

_STD = NormalDist()


def _vec(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=np.float64))


# ---------------------------------------------------------------- clean families


@dataclass(frozen=True)
class Gaussian:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = _vec(self.mean)
        cov = np.atleast_2d(np.asarray(self.covariance, dtype=np.float64))
        if cov.shape != (mean.size, mean.size):
            raise ValueError("mean and covariance dimensions disagree")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", (cov + cov.T) / 2)

    @classmethod
    def isotropic(cls, n: int, mean=0.0, variance: float = 1.0) -> "Gaussian":
        return cls(np.broadcast_to(_vec(mean), (n,)).copy(), variance * np.eye(n))

    @classmethod
    def diagonal(cls, variances, mean=0.0) -> "Gaussian":
        var = _vec(variances)
        return cls(np.broadcast_to(_vec(mean), var.shape).copy(), np.diag(var))

    @property
    def dim(self) -> int:
        return self.mean.size

    def sample(self, g: np.random.Generator, m: int) -> np.ndarray:
        cov = self.covariance
        if np.count_nonzero(cov - np.diag(np.diag(cov))) == 0:
            # diagonal fast path keeps zero-variance coordinates exactly constant
            return self.mean + g.standard_normal((m, self.dim)) * np.sqrt(np.diag(cov))
        vals, vecs = np.linalg.eigh(cov)
        root = vecs * np.sqrt(np.maximum(vals, 0.0))
        return self.mean + g.standard_normal((m, self.dim)) @ root.T

    def describe(self) -> str:
        return f"gaussian(n={self.dim})"


@dataclass(frozen=True)
class BernoulliProduct:
    p: np.ndarray
    centered: bool = False

    def __post_init__(self):
        p = _vec(self.p)
        if np.any((p <= 0) | (p >= 1)):
            raise ValueError("probabilities must lie in (0, 1)")
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return self.p.size

    @property
    def mean(self) -> np.ndarray:
        return np.zeros(self.dim) if self.centered else self.p.copy()

    @property
    def covariance(self) -> np.ndarray:
        return np.diag(self.p * (1 - self.p))

    def sample(self, g, m):
        x = (g.random((m, self.dim)) < self.p).astype(np.float64)
        return x - self.p if self.centered else x

    def describe(self):
        return f"bernoulli(n={self.dim})"


@dataclass(frozen=True)
class UniformBall:
    n: int
    radius: float = 1.0
    center: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.n

    @property
    def mean(self) -> np.ndarray:
        return np.zeros(self.n) if self.center is None else _vec(self.center)

    @property
    def covariance(self) -> np.ndarray:
        return self.radius ** 2 / (self.n + 2) * np.eye(self.n)

    def sample(self, g, m):
        z = g.standard_normal((m, self.n))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        r = self.radius * g.random(m) ** (1.0 / self.n)
        return self.mean + z * r[:, None]

    def describe(self):
        return f"uniform_ball(n={self.n}, r={self.radius:g})"


@dataclass(frozen=True)
class TwoPoint:
    """1-d, ``+-sigma`` with probability 1/2 each."""

    sigma: float = 1.0

    dim = 1

    @property
    def mean(self):
        return np.zeros(1)

    @property
    def covariance(self):
        return np.array([[self.sigma ** 2]])

    def sample(self, g, m):
        return np.where(g.random(m) < 0.5, -self.sigma, self.sigma)[:, None]

    def describe(self):
        return f"two_point(sigma={self.sigma:g})"


@dataclass(frozen=True)
class StudentT:
    """Independent Student-t coordinates; ``dof > 4`` keeps fourth moments finite."""

    n: int
    dof: float = 5.0
    scale: float = 1.0
    loc: float = 0.0

    def __post_init__(self):
        if self.dof <= 4:
            raise ValueError("dof must exceed 4")

    @property
    def dim(self):
        return self.n

    @property
    def mean(self):
        return np.full(self.n, float(self.loc))

    @property
    def covariance(self):
        return self.scale ** 2 * self.dof / (self.dof - 2) * np.eye(self.n)

    def sample(self, g, m):
        return self.loc + self.scale * g.standard_t(self.dof, (m, self.n))

    def describe(self):
        return f"student_t(n={self.n}, dof={self.dof:g})"


CleanFamily = Union[Gaussian, BernoulliProduct, UniformBall, TwoPoint, StudentT]


# ---------------------------------------------------------------- adversaries


@dataclass(frozen=True)
class PointMass:
    location: np.ndarray

    def sample(self, g, count, family):
        loc = np.broadcast_to(_vec(self.location), (family.dim,))
        return np.tile(loc, (count, 1))


@dataclass(frozen=True)
class AxisPair:
    """Points at ``mean +- distance * e_axis``, alternating signs."""

    axis: int
    distance: float

    def sample(self, g, count, family):
        out = np.tile(family.mean, (count, 1))
        signs = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
        out[:, self.axis] += signs * self.distance
        return out


@dataclass(frozen=True)
class ThreePointTail:
    """All corrupted mass at ``sigma / eta^(1/4)``.

    Mixed with a :class:`TwoPoint` clean family at rate ``eta`` this gives the
    three-point distribution whose mean is off by ``eta^(3/4) sigma`` while its
    fourth-moment ratio stays bounded.
    """

    sigma: float
    eta: float

    @property
    def atom(self) -> float:
        return self.sigma / self.eta ** 0.25

    def sample(self, g, count, family):
        return np.full((count, 1), self.atom)


@dataclass(frozen=True)
class GaussianTVSwap:
    """1-d noise ``q1 ~ (phi2 - phi1)_+`` that makes N(mu1) and N(mu2) indistinguishable.

    Requires the clean family to be ``N(mu1, sigma^2)``; use :func:`tv_swap_means`
    to pick ``mu2`` so that ``q1`` has the right mass.
    """

    mu1: float
    mu2: float
    sigma: float = 1.0

    def pdf_clean(self, t):
        return _normal_pdf(t, self.mu1, self.sigma)

    def pdf_alt(self, t):
        return _normal_pdf(t, self.mu2, self.sigma)

    def noise_pdf(self, t, eta):
        """Density of Q1, ``(1-eta)/eta * (phi2 - phi1)_+``."""
        return (1 - eta) / eta * np.maximum(self.pdf_alt(t) - self.pdf_clean(t), 0.0)

    def alt_noise_pdf(self, t, eta):
        """Density of Q2, ``(1-eta)/eta * (phi1 - phi2)_+``."""
        return (1 - eta) / eta * np.maximum(self.pdf_clean(t) - self.pdf_alt(t), 0.0)

    def sample(self, g, count, family):
        # rejection from N(mu2): accept with probability (phi2 - phi1)_+ / phi2
        out = np.empty(0)
        while out.size < count:
            t = self.mu2 + self.sigma * g.standard_normal(max(4 * (count - out.size), 64))
            accept = g.random(t.size) < np.maximum(1 - self.pdf_clean(t) / self.pdf_alt(t), 0.0)
            out = np.concatenate([out, t[accept]])
        return out[:count, None]


def _normal_pdf(t, mu, sigma):
    t = np.asarray(t, dtype=np.float64)
    return np.exp(-0.5 * ((t - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))


def tv_swap_means(eta: float, sigma: float = 1.0, mu1: float = 0.0) -> tuple[float, float]:
    """Means at total-variation distance ``eta / (1 - eta)``."""
    tv = eta / (1 - eta)
    gap = 2 * sigma * _STD.inv_cdf((1 + tv) / 2)
    return mu1, mu1 + gap


@dataclass(frozen=True)
class GeomMedianKiller:
    """Point mass at ``distance * e_1``; ``distance`` defaults to the dimension."""

    distance: float | None = None

    def sample(self, g, count, family):
        out = np.zeros((count, family.dim))
        out[:, 0] = family.dim if self.distance is None else self.distance
        return out


@dataclass(frozen=True)
class Composite:
    """Split the corrupted rows between strategies according to ``fractions``.

    E.g. a small ``AxisPair`` share that inflates one direction plus a
    ``PointMass`` carrying the actual mean shift.
    """

    parts: Sequence[tuple[float, object]] = field(default_factory=tuple)

    def sample(self, g, count, family):
        fr = np.array([f for f, _ in self.parts], dtype=np.float64)
        counts = np.floor(fr / fr.sum() * count + 1e-9).astype(int)
        counts[-1] = count - counts[:-1].sum()
        blocks = [s.sample(g, int(c), family) for (_, s), c in zip(self.parts, counts) if c > 0]
        return np.concatenate(blocks) if blocks else np.zeros((0, family.dim))


AdversaryStrategy = Union[PointMass, AxisPair, ThreePointTail, GaussianTVSwap, GeomMedianKiller, Composite]


# ---------------------------------------------------------------- sampling


def corrupt_count(eta: float, m: int) -> int:
    return int(math.floor(eta * m + 1e-9))


def sample_contaminated(family: CleanFamily, adv: AdversaryStrategy, eta: float, m: int,
                        seed: int, placement: str = "exact") -> LabeledDataset:
    """Draw ``m`` rows, replacing an ``eta`` share with adversarial points.

    ``placement="exact"`` corrupts exactly ``floor(eta * m)`` rows at shuffled
    positions; ``"bernoulli"`` corrupts each row independently with
    probability ``eta``.
    """
    if not 0 <= eta < 1:
        raise ValueError("eta must lie in [0, 1)")
    if m < 1:
        raise ValueError("m must be positive")
    g_place, g_clean, g_adv = (rng(seed, i) for i in range(3))
    if placement == "exact":
        k = corrupt_count(eta, m)
        labels = np.zeros(m, dtype=bool)
        labels[g_place.permutation(m)[:k]] = True
    elif placement == "bernoulli":
        labels = g_place.random(m) < eta
        k = int(labels.sum())
    else:
        raise ValueError(f"unknown placement {placement!r}")
    rows = family.sample(g_clean, m)
    if k:
        rows[labels] = adv.sample(g_adv, k, family)
    truth = GroundTruth(family.mean, family.covariance, family.describe())
    return LabeledDataset(Dataset(rows), labels, truth, requested_corrupt=k)


def geom_median_instance(n: int, eta: float, m: int, seed: int) -> LabeledDataset:
    """Clean ``N(0, diag(0, 1, ..., 1))`` with the corrupted mass at ``n * e_1``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    var = np.ones(n)
    var[0] = 0.0
    return sample_contaminated(Gaussian.diagonal(var), GeomMedianKiller(), eta, m, seed)


def fourth_moment_ratio(atoms, probs) -> float:
    """``E(x - mu)^4 / Var(x)^2`` of a finite discrete distribution."""
    a, p = _vec(atoms), _vec(probs)
    mu = p @ a
    var = p @ (a - mu) ** 2
    return float(p @ (a - mu) ** 4 / var ** 2)
