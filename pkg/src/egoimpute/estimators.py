"""Imputation of the missing block of an egocentrically sampled network.

Three estimators of ``P22`` are provided:

* ``le`` -- smooth ``A11`` by its rank-K truncated SVD, then
  ``P22_hat = A12.T @ pinv(P11_tilde) @ A12``.
* ``se`` -- smooth the whole observed row block ``[A11 | A12]`` at rank K
  and use its first ``n`` columns in place of ``P11_tilde``.
* ``le_plus`` -- elementwise mean of the two (before clamping).

For an exactly rank-K probability matrix with ``rank(P11) = K`` the
identity ``P22 = P21 @ pinv(P11) @ P12`` holds, which is what makes the
plug-in construction work.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph_core import EgoView
from .spectral import RankKFactorization, full_svd, svd_of_product

ESTIMATOR_NAMES = ("le", "se", "le_plus")


@dataclass(frozen=True)
class ImputationResult:
    p22_hat: np.ndarray
    rank_used: int
    truncated: bool
    estimator: str = "le"


@dataclass(frozen=True)
class FullRecoveryResult:
    """Estimate of the whole probability matrix.

    ``p_hat`` is laid out in block order (observed nodes first, hidden nodes
    after); ``node_order[i]`` is the original index of row ``i``.
    """

    p_hat: np.ndarray
    rank_used: int
    node_order: np.ndarray
    truncated: bool = True

    def in_original_order(self) -> np.ndarray:
        inv = np.argsort(self.node_order)
        return self.p_hat[np.ix_(inv, inv)]


def clamp01(x):
    return np.clip(x, 0.0, 1.0)


def _sandwich(left: np.ndarray, f: RankKFactorization, right: np.ndarray, rel_tol: float) -> np.ndarray:
    # left.T @ pinv(f) @ right without forming the n x n pseudo-inverse
    d = f.d
    inv = np.zeros_like(d)
    if d.size and d[0] > 0:
        keep = d > rel_tol * d[0]
        inv[keep] = 1.0 / d[keep]
    return (f.v.T @ left).T @ ((f.u.T @ right) * inv[:, None])


class ImputationSweep:
    """Raw (unclamped) estimates of ``P22`` for any rank from one set of SVDs.

    Both decompositions are computed lazily and at most once, so sweeping
    over candidate ranks costs a single SVD per estimator family.
    """

    def __init__(self, a11, a12, rel_tol: float = 1e-12):
        self.a11 = np.asarray(a11, dtype=float)
        self.a12 = np.asarray(a12, dtype=float)
        self.rel_tol = rel_tol
        self.n = self.a11.shape[0]

    @classmethod
    def from_view(cls, view: EgoView, rel_tol: float = 1e-12) -> "ImputationSweep":
        return cls(view.a11, view.a12, rel_tol)

    @cached_property
    def a11_svd(self) -> RankKFactorization:
        return full_svd(self.a11)

    @cached_property
    def obs_svd(self) -> RankKFactorization:
        return full_svd(np.hstack([self.a11, self.a12]))

    @property
    def max_rank(self) -> int:
        return self.n

    def check_rank(self, k: int) -> None:
        if not 1 <= k <= self.n:
            raise ValueError(f"rank k must be in [1, n={self.n}], got {k}")

    def le(self, k: int) -> np.ndarray:
        self.check_rank(k)
        return _sandwich(self.a12, self.a11_svd.truncate(k), self.a12, self.rel_tol)

    def se_p11(self, k: int) -> RankKFactorization:
        """Rank-k factorization of the first n columns of the smoothed ``[A11 | A12]``."""
        self.check_rank(k)
        f = self.obs_svd.truncate(k)
        # first n columns of U D V^T are U @ (D V[:n]^T); U has orthonormal columns
        return svd_of_product(f.u, f.d[:, None] * f.v[: self.n].T, k)

    def se(self, k: int) -> np.ndarray:
        return _sandwich(self.a12, self.se_p11(k), self.a12, self.rel_tol)

    def le_plus(self, k: int) -> np.ndarray:
        return 0.5 * (self.le(k) + self.se(k))

    def predict(self, estimator: str, k: int) -> np.ndarray:
        if estimator not in ESTIMATOR_NAMES:
            raise ValueError(f"unknown estimator {estimator!r}; choose from {ESTIMATOR_NAMES}")
        return getattr(self, estimator)(k)


def _impute(view: EgoView, k: int, truncate: bool, estimator: str) -> ImputationResult:
    raw = ImputationSweep.from_view(view).predict(estimator, k)
    return ImputationResult(clamp01(raw) if truncate else raw, k, bool(truncate), estimator)


def le_impute(view: EgoView, k: int, truncate: bool = True) -> ImputationResult:
    """Low-rank estimate of the missing block ``P22``."""
    return _impute(view, k, truncate, "le")


def se_impute(view: EgoView, k: int, truncate: bool = True) -> ImputationResult:
    return _impute(view, k, truncate, "se")


def le_plus_impute(view: EgoView, k: int, truncate: bool = True) -> ImputationResult:
    return _impute(view, k, truncate, "le_plus")


IMPUTERS = {"le": le_impute, "se": se_impute, "le_plus": le_plus_impute}


def impute(view: EgoView, k: int, estimator: str = "le", truncate: bool = True) -> ImputationResult:
    if estimator not in IMPUTERS:
        raise ValueError(f"unknown estimator {estimator!r}; choose from {ESTIMATOR_NAMES}")
    return IMPUTERS[estimator](view, k, truncate)


def recover_full(view: EgoView, k: int, truncate: bool = True) -> FullRecoveryResult:
    """Estimate every block of P, with the LE estimate for the missing block.

    The observed blocks come from the rank-k smoothing of ``[A11 | A12]``;
    the ``P11`` estimate is symmetrized as ``(C + C.T) / 2``.
    """
    sweep = ImputationSweep.from_view(view)
    sweep.check_rank(k)
    n = view.n_observed
    f = sweep.obs_svd.truncate(k)
    smoothed = (f.u * f.d) @ f.v.T
    c = smoothed[:, :n]
    p11 = 0.5 * (c + c.T)
    p12 = smoothed[:, n:]
    p22 = sweep.le(k)
    p22 = 0.5 * (p22 + p22.T)
    p_hat = np.block([[p11, p12], [p12.T, p22]])
    if truncate:
        p_hat = clamp01(p_hat)
    order = np.concatenate([np.asarray(view.observed, dtype=int), np.asarray(view.hidden, dtype=int)])
    return FullRecoveryResult(p_hat, k, order, bool(truncate))
