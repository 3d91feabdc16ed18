"""Truncated SVD and rank-K pseudo-inverse."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RankKFactorization:
    """Rank-K factorization ``u @ diag(d) @ v.T``.

    Parameters
    ----------
    u : (p, K) array with orthonormal columns
    d : (K,) nonnegative singular values, nonincreasing
    v : (q, K) array with orthonormal columns
    """

    u: np.ndarray
    d: np.ndarray
    v: np.ndarray

    @property
    def rank(self) -> int:
        return self.d.shape[0]

    @property
    def shape(self) -> tuple:
        return (self.u.shape[0], self.v.shape[0])

    def truncate(self, k: int) -> "RankKFactorization":
        """Leading ``k`` triplets; cheap way to sweep ranks off one SVD."""
        if not 1 <= k <= self.rank:
            raise ValueError(f"k must be in [1, {self.rank}], got {k}")
        return RankKFactorization(self.u[:, :k], self.d[:k], self.v[:, :k])


def full_svd(m) -> RankKFactorization:
    """Thin SVD keeping all ``min(p, q)`` triplets."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    u, d, vt = np.linalg.svd(m, full_matrices=False)
    return RankKFactorization(u, d, vt.T)


def truncated_svd(m, k: int) -> RankKFactorization:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not 1 <= k <= min(m.shape):
        raise ValueError(f"k must be in [1, {min(m.shape)}], got {k}")
    return full_svd(m).truncate(k)


def svd_of_product(basis, coef, k: int) -> RankKFactorization:
    """Rank-``k`` SVD of ``basis @ coef`` where ``basis`` has orthonormal columns.

    Only the small ``coef`` matrix is decomposed, so this costs
    O(q r^2) instead of a full decomposition of the ``p x q`` product.
    """
    inner = truncated_svd(coef, k)
    return RankKFactorization(np.asarray(basis, dtype=float) @ inner.u, inner.d, inner.v)


def reconstruct(f: RankKFactorization) -> np.ndarray:
    return (f.u * f.d) @ f.v.T


def pinv_rank_k(f: RankKFactorization, rel_tol: float = 1e-12) -> np.ndarray:
    """Moore-Penrose inverse ``v @ diag(1/d) @ u.T`` of a factorization.

    Singular values at or below ``rel_tol * d[0]`` are treated as zero.
    """
    d = f.d
    inv = np.zeros_like(d)
    if d.size and d[0] > 0:
        keep = d > rel_tol * d[0]
        inv[keep] = 1.0 / d[keep]
    return (f.v * inv) @ f.u.T
