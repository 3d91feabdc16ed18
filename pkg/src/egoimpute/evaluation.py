"""Accuracy and timing metrics for imputed blocks."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import rankdata


class UndefinedAUCError(ValueError):
    """Raised when the truth has no positives or no negatives."""


@dataclass(frozen=True)
class RocCurve:
    """ROC points from a descending threshold sweep, plus the exact AUC.

    ``fpr``/``tpr`` start at (0, 0) and end at (1, 1). Tied scores move
    diagonally, so the trapezoidal area under the points equals ``auc``.
    """

    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    @property
    def points(self) -> list:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))

    def trapezoid_area(self) -> float:
        return float(np.trapezoid(self.tpr, self.fpr))


@dataclass
class MetricReport:
    mse: float
    auc: Optional[float] = None
    wall_time: float = 0.0  # seconds

    @property
    def wall_time_ms(self) -> float:
        return 1000.0 * self.wall_time


def mse_block(p22_hat, p22_true) -> float:
    """Mean squared error over all ``m x m`` entries, diagonal included."""
    a = np.asarray(p22_hat, dtype=float)
    b = np.asarray(p22_true, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("empty block")
    return float(np.sum((a - b) ** 2) / a.size)


def auc_score(scores, labels) -> float:
    """Mann-Whitney AUC for flat score and 0/1 label vectors; ties count 1/2."""
    s = np.asarray(scores, dtype=float).ravel()
    y = np.asarray(labels).ravel()
    if s.shape != y.shape:
        raise ValueError(f"shape mismatch: {s.shape} vs {y.shape}")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be binary")
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAUCError(f"AUC undefined with {n_pos} positives and {n_neg} negatives")
    ranks = rankdata(s)
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def roc_curve(scores, labels) -> RocCurve:
    s = np.asarray(scores, dtype=float).ravel()
    y = np.asarray(labels).ravel()
    auc = auc_score(s, y)
    order = np.argsort(-s, kind="mergesort")
    s_sorted, y_sorted = s[order], y[order]
    # last index of each run of equal scores
    cut = np.flatnonzero(np.diff(s_sorted) != 0)
    cut = np.append(cut, s_sorted.size - 1)
    tp = np.cumsum(y_sorted)[cut]
    fp = (cut + 1) - tp
    n_pos, n_neg = tp[-1], fp[-1]
    fpr = np.concatenate([[0.0], fp / n_neg])
    tpr = np.concatenate([[0.0], tp / n_pos])
    return RocCurve(fpr, tpr, auc)


def upper_triangle_pairs(scores, truth):
    scores = np.asarray(scores, dtype=float)
    truth = np.asarray(truth)
    if scores.shape != truth.shape:
        raise ValueError(f"shape mismatch: {scores.shape} vs {truth.shape}")
    if scores.ndim != 2 or scores.shape[0] != scores.shape[1]:
        raise ValueError("expected square blocks")
    iu = np.triu_indices(scores.shape[0], 1)
    return scores[iu], truth[iu]


def auc_link_prediction(scores, truth) -> RocCurve:
    """ROC/AUC over the dyads of a square block, each dyad counted once.

    Only the strict upper triangle enters: the diagonal is structurally
    zero and the lower triangle duplicates it.
    """
    s, y = upper_triangle_pairs(scores, truth)
    return roc_curve(s, y)


def time_fit(fn, *args, **kwargs):
    """Call ``fn`` and return ``(result, elapsed_seconds)`` on a monotonic clock."""
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - start
