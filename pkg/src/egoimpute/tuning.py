"""Cross-validated choice of the rank K.

Each repeat hides a random subset ``V`` of the observed nodes, treats the
rest as a smaller egocentric sample, imputes the ``V x V`` block for every
candidate rank and keeps the rank with the best AUC against the known
links inside ``V``. The final rank is the rounded mean over repeats.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .estimators import ESTIMATOR_NAMES, ImputationSweep
from .evaluation import UndefinedAUCError, auc_score
from .generators import derive_seed, make_rng
from .graph_core import EgoView
from .sampling import round_half_up

MAX_ATTEMPTS = 10


@dataclass
class RankSelection:
    candidate_ranks: list
    holdout_fraction: float
    repeats: int
    chosen_rank: int
    per_rank_auc: np.ndarray  # repeats x candidates
    seed: int
    estimator: str = "le"
    selected: list = field(default_factory=list)
    holdouts: list = field(default_factory=list, repr=False)

    def trace_rows(self) -> list:
        rows = []
        for r, aucs in enumerate(self.per_rank_auc):
            for k, auc in zip(self.candidate_ranks, aucs):
                rows.append({
                    "estimator": self.estimator,
                    "repeat": r,
                    "rank": k,
                    "auc": float(auc),
                    "selected": int(k == self.selected[r]),
                })
        return rows

    def write_trace(self, path) -> None:
        rows = self.trace_rows()
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["estimator", "repeat", "rank", "auc", "selected"])
            writer.writeheader()
            writer.writerows(rows)


def default_candidates(n: int, holdout_fraction: float) -> list:
    upper = min(20, n // 4, n - round_half_up(holdout_fraction * n))
    return list(range(1, max(upper, 1) + 1))


def _draw_holdout(a11: np.ndarray, size: int, seed: int, repeat: int):
    n = a11.shape[0]
    for attempt in range(MAX_ATTEMPTS):
        rng = make_rng(derive_seed(seed, repeat, attempt))
        held = np.sort(rng.choice(n, size=size, replace=False))
        truth = a11[np.ix_(held, held)][np.triu_indices(size, 1)]
        if 0 < truth.sum() < truth.size:
            return held, truth
    raise UndefinedAUCError(
        f"no usable holdout after {MAX_ATTEMPTS} attempts: held-out links are all 0 or all 1"
    )


def select_ranks(
    view: EgoView,
    estimators: Sequence[str] = ("le",),
    candidates: Optional[Sequence[int]] = None,
    holdout_fraction: float = 0.1,
    repeats: int = 5,
    seed: int = 0,
    truncate: bool = False,
) -> dict:
    """Run one cross-validation and select a rank for each estimator.

    All estimators see the same holdout sets.
    """
    a11 = np.asarray(view.a11, dtype=float)
    n = a11.shape[0]
    if not 0.0 < holdout_fraction < 1.0:
        raise ValueError("holdout_fraction must lie in (0, 1)")
    if repeats < 1:
        raise ValueError("repeats must be positive")
    for est in estimators:
        if est not in ESTIMATOR_NAMES:
            raise ValueError(f"unknown estimator {est!r}")
    size = round_half_up(holdout_fraction * n)
    if size < 2 or size >= n:
        raise ValueError(f"holdout of {size} of {n} observed nodes leaves no usable validation block")
    if candidates is None:
        candidates = default_candidates(n, holdout_fraction)
    candidates = sorted(int(k) for k in candidates)
    if not candidates or candidates[0] < 1 or candidates[-1] > n - size:
        raise ValueError(f"candidate ranks must lie in [1, {n - size}]")
    if not np.all((a11 == 0) | (a11 == 1)):
        raise ValueError("rank selection needs a binary a11 to score held-out links")

    aucs = {est: np.empty((repeats, len(candidates))) for est in estimators}
    holdouts = []
    iu = np.triu_indices(size, 1)
    for r in range(repeats):
        held, truth = _draw_holdout(a11, size, seed, r)
        holdouts.append(held)
        kept = np.setdiff1d(np.arange(n), held)
        sweep = ImputationSweep(a11[np.ix_(kept, kept)], a11[np.ix_(kept, held)])
        for est in estimators:
            for j, k in enumerate(candidates):
                scores = sweep.predict(est, k)[iu]
                if truncate:
                    scores = np.clip(scores, 0.0, 1.0)
                aucs[est][r, j] = auc_score(scores, truth)

    out = {}
    for est in estimators:
        # argmax takes the first maximum, i.e. the smallest tied rank
        selected = [candidates[int(np.argmax(row))] for row in aucs[est]]
        out[est] = RankSelection(
            candidate_ranks=list(candidates),
            holdout_fraction=holdout_fraction,
            repeats=repeats,
            chosen_rank=round_half_up(float(np.mean(selected))),
            per_rank_auc=aucs[est],
            seed=seed,
            estimator=est,
            selected=selected,
            holdouts=holdouts,
        )
    return out


def select_rank(
    view: EgoView,
    candidates: Optional[Sequence[int]] = None,
    holdout_fraction: float = 0.1,
    repeats: int = 5,
    seed: int = 0,
    estimator: str = "le",
) -> RankSelection:
    return select_ranks(view, (estimator,), candidates, holdout_fraction, repeats, seed)[estimator]
