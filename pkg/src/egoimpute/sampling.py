"""Egocentric node sampling: uniform (MCAR) and degree-driven (MNAR)."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .generators import make_rng
from .graph_core import AdjacencyMatrix

MECHANISMS = ("mcar", "mnar_positive", "mnar_negative")
DELTA_POSITIVE = (1.5, 1.0, 0.5)
DELTA_NEGATIVE = (0.5, 1.0, 1.5)
GROUP_FRACTIONS = (0.33, 0.34, 0.33)


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass
class SamplingPlan:
    mechanism: str = "mcar"
    rho: float = 0.5
    deltas: tuple = None
    group_fractions: tuple = GROUP_FRACTIONS
    seed: int = 0

    def __post_init__(self):
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"unknown mechanism {self.mechanism!r}; choose from {MECHANISMS}")
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if self.deltas is None:
            self.deltas = DELTA_NEGATIVE if self.mechanism == "mnar_negative" else DELTA_POSITIVE
        self.deltas = tuple(float(d) for d in self.deltas)
        self.group_fractions = tuple(float(g) for g in self.group_fractions)
        if len(self.deltas) != len(self.group_fractions):
            raise ValueError("deltas and group_fractions must have the same length")
        if any(d <= 0 for d in self.deltas):
            raise ValueError("deltas must be positive")
        if abs(sum(self.group_fractions) - 1.0) > 1e-9:
            raise ValueError("group_fractions must sum to 1")

    def group_rates(self) -> list:
        return [d * self.rho for d in self.deltas]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["deltas"] = list(self.deltas)
        d["group_fractions"] = list(self.group_fractions)
        return d


@dataclass
class MnarSample:
    """Result of a degree-driven draw; ``capped`` flags groups whose rate exceeded 1."""

    indices: np.ndarray
    groups: list = field(default_factory=list)
    rates: list = field(default_factory=list)
    capped: bool = False


def sample_mcar(n_total: int, rho: float, seed) -> np.ndarray:
    """Exactly ``round(rho * N)`` distinct nodes, uniformly at random, ascending."""
    size = round_half_up(rho * n_total)
    if not 1 <= size <= n_total - 1:
        raise ValueError(f"round(rho*N) = {size} leaves no observed or no hidden node (N={n_total})")
    rng = make_rng(seed)
    return np.sort(rng.choice(n_total, size=size, replace=False))


def degree_groups(degrees, fractions=GROUP_FRACTIONS) -> list:
    """Split nodes into groups by descending degree (ties by ascending index)."""
    degrees = np.asarray(degrees)
    n = degrees.size
    order = np.lexsort((np.arange(n), -degrees))
    sizes = [round_half_up(f * n) for f in fractions[:-1]]
    sizes.append(n - sum(sizes))
    bounds = np.cumsum([0] + sizes)
    return [order[bounds[g]: bounds[g + 1]] for g in range(len(sizes))]


def sample_mnar_detailed(adjacency: AdjacencyMatrix, plan: SamplingPlan, seed=None) -> MnarSample:
    values = adjacency.values if isinstance(adjacency, AdjacencyMatrix) else np.asarray(adjacency)
    rng = make_rng(plan.seed if seed is None else seed)
    groups = degree_groups(values.sum(axis=1), plan.group_fractions)
    rates, capped, picked = [], False, []
    for group, rate in zip(groups, plan.group_rates()):
        if rate > 1.0:
            rate, capped = 1.0, True
        rates.append(rate)
        take = round_half_up(rate * group.size)
        if take:
            picked.append(rng.choice(group, size=take, replace=False))
    if capped:
        warnings.warn("MNAR group rate exceeded 1 and was capped", RuntimeWarning, stacklevel=2)
    indices = np.sort(np.concatenate(picked)) if picked else np.array([], dtype=int)
    if indices.size == 0:
        raise ValueError("MNAR plan produced an empty sample")
    if indices.size >= values.shape[0]:
        raise ValueError("MNAR plan observed every node; nothing left to impute")
    return MnarSample(indices, groups, rates, capped)


def sample_mnar(adjacency: AdjacencyMatrix, plan: SamplingPlan, seed=None) -> np.ndarray:
    """Degree-stratified fixed-size sample.

    Group ``g`` (by descending degree, sized 33/34/33%) contributes
    ``round(delta_g * rho * |group|)`` nodes; rates above 1 are capped.
    """
    return sample_mnar_detailed(adjacency, plan, seed).indices


def sample_nodes(plan: SamplingPlan, adjacency: AdjacencyMatrix, seed=None) -> np.ndarray:
    seed = plan.seed if seed is None else seed
    if plan.mechanism == "mcar":
        n = adjacency.n_nodes if isinstance(adjacency, AdjacencyMatrix) else np.asarray(adjacency).shape[0]
        return sample_mcar(n, plan.rho, seed)
    return sample_mnar(adjacency, plan, seed)
