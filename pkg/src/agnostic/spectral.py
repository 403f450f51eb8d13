"""Symmetric-matrix kernel: weighted covariance, eigensystems, rank-k truncation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AgnosticError, DataLike, EstimationError, as_rows


class ZeroWeightMass(EstimationError, ValueError):
    pass


class ConvergenceFailure(EstimationError):
    pass


class SingularMatrix(AgnosticError, ValueError):
    pass


def sym(m) -> np.ndarray:
    """Return ``(M + M^T) / 2`` as a float64 array."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return (m + m.T) / 2


@dataclass(frozen=True)
class SubspaceSplit:
    """Orthonormal bases of the top-``k`` eigenspace and its complement.

    Columns of ``top_basis`` and ``bottom_basis`` are eigenvectors;
    ``eigenvalues`` lists all ``n`` eigenvalues in nonincreasing order.
    """

    top_basis: np.ndarray
    bottom_basis: np.ndarray
    eigenvalues: np.ndarray

    @property
    def k(self) -> int:
        return self.top_basis.shape[1]

    def projector_top(self) -> np.ndarray:
        return self.top_basis @ self.top_basis.T

    def projector_bottom(self) -> np.ndarray:
        return self.bottom_basis @ self.bottom_basis.T


def weighted_covariance(d: DataLike, w) -> tuple[np.ndarray, np.ndarray]:
    """Weighted mean and weighted covariance, both normalized by ``sum(w)``."""
    x = as_rows(d)
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if w.shape[0] != x.shape[0]:
        raise ValueError(f"{w.shape[0]} weights for {x.shape[0]} rows")
    total = w.sum()
    if not total > 0:
        raise ZeroWeightMass("weights sum to zero")
    mean = w @ x / total
    xc = x - mean
    cov = sym((xc * w[:, None]).T @ xc / total)
    return mean, cov


def _canonical_signs(q: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of each column made positive; argmax picks the lowest index on ties
    idx = np.argmax(np.abs(q), axis=0)
    signs = np.sign(q[idx, np.arange(q.shape[1])])
    signs[signs == 0] = 1.0
    return q * signs


def eigensystem(m) -> SubspaceSplit:
    """Full eigendecomposition with eigenvalues in nonincreasing order.

    Eigenvectors follow a sign convention (largest entry positive) so that the
    result is reproducible; the order among equal eigenvalues is the LAPACK
    order, kept stable.
    """
    m = sym(m)
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(str(e)) from e
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], _canonical_signs(vecs[:, order])
    n = m.shape[0]
    return SubspaceSplit(vecs, np.zeros((n, 0)), vals)


def split_top_bottom(m, k: int) -> SubspaceSplit:
    """Split the eigenbasis into the top ``k`` eigenvectors and the remaining ``n - k``."""
    full = eigensystem(m)
    n = full.eigenvalues.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    q = full.top_basis
    return SubspaceSplit(q[:, :k], q[:, k:], full.eigenvalues)


def best_rank_k(m, k: int) -> np.ndarray:
    """Frobenius-optimal symmetric rank-``k`` approximation.

    Keeps the ``k`` eigenvalues of largest magnitude, so small negative
    eigenvalues of noisy estimates are the first to go.
    """
    full = eigensystem(m)
    n = full.eigenvalues.shape[0]
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    vals, q = full.eigenvalues, full.top_basis
    keep = np.argsort(-np.abs(vals), kind="stable")[:k]
    qk = q[:, keep]
    return sym((qk * vals[keep]) @ qk.T)


def _spectral_power(m, power: float, floor: float | None) -> np.ndarray:
    full = eigensystem(m)
    vals, q = full.eigenvalues, full.top_basis
    norm = float(np.max(np.abs(vals))) if vals.size else 0.0
    if norm == 0.0:
        raise SingularMatrix("matrix is zero")
    if floor is None:
        floor = 1e-10 * norm
    return sym((q * np.maximum(vals, floor) ** power) @ q.T)


def inverse_sqrt(m, floor: float | None = None) -> np.ndarray:
    """``Q diag(max(lambda, floor)^(-1/2)) Q^T``; ``floor`` defaults to ``1e-10 * ||M||_2``."""
    return _spectral_power(m, -0.5, floor)


def sqrt_psd(m, floor: float | None = None) -> np.ndarray:
    """Matrix square root with the same eigenvalue floor as :func:`inverse_sqrt`."""
    return _spectral_power(m, 0.5, floor)


def project_psd(m) -> np.ndarray:
    """Clamp negative eigenvalues at zero."""
    full = eigensystem(m)
    q = full.top_basis
    return sym((q * np.maximum(full.eigenvalues, 0.0)) @ q.T)
