"""Dense matrix containers and the egocentric block layout.

Observed ("ego") nodes are permuted to the front, so a network over ``N``
nodes with ``n`` observed splits into::

    A = [[A11, A12],
         [A21, A22]]

where ``A11`` is ``n x n``, ``A12`` is ``n x (N - n)`` and ``A22`` is the
missing block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SYMMETRY_TOL = 1e-10


def _as_square(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ProbabilityMatrix:
    """Symmetric matrix of edge probabilities.

    ``info`` carries generator/scaling metadata (e.g. the scale factor
    and whether clamping saturated any entries).
    """

    values: np.ndarray
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        arr = _as_square(self.values, "probability matrix")
        if np.max(np.abs(arr - arr.T), initial=0.0) > SYMMETRY_TOL:
            raise ValueError("probability matrix must be symmetric")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("probability matrix entries must lie in [0, 1]")
        object.__setattr__(self, "values", arr)

    @property
    def n_nodes(self) -> int:
        return self.values.shape[0]

    @property
    def max_prob(self) -> float:
        """Largest entry of P."""
        return float(self.values.max())

    def expected_degree(self) -> float:
        """Average expected degree, sum of off-diagonal entries over N."""
        p = self.values
        return float((p.sum() - np.trace(p)) / self.n_nodes)


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Symmetric 0/1 adjacency matrix with an empty diagonal."""

    values: np.ndarray

    def __post_init__(self):
        arr = _as_square(self.values, "adjacency matrix")
        if not np.all((arr == 0.0) | (arr == 1.0)):
            raise ValueError("adjacency matrix must be binary")
        if not np.array_equal(arr, arr.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(arr) != 0.0):
            raise ValueError("adjacency matrix must have a zero diagonal")
        object.__setattr__(self, "values", arr)

    @property
    def n_nodes(self) -> int:
        return self.values.shape[0]

    def degrees(self) -> np.ndarray:
        return self.values.sum(axis=1)

    @property
    def n_edges(self) -> int:
        return int(self.values.sum() // 2)


@dataclass(frozen=True)
class BlockPartition:
    m11: np.ndarray
    m12: np.ndarray
    m21: np.ndarray
    m22: np.ndarray

    def reassemble(self) -> np.ndarray:
        return np.block([[self.m11, self.m12], [self.m21, self.m22]])


@dataclass(frozen=True)
class EgoView:
    """What an egocentric sample reveals.

    ``a11`` holds links among the observed nodes (in the order given by
    ``observed``) and ``a12`` the links from observed nodes to the hidden
    ones, hidden nodes sorted by ascending original index.

    Blocks may be real-valued so that noiseless probability blocks can be
    fed through the estimators; :func:`extract_ego_view` always produces
    binary blocks.
    """

    observed: tuple
    a11: np.ndarray
    a12: np.ndarray
    n_total: int

    def __post_init__(self):
        observed = tuple(int(i) for i in self.observed)
        n, n_total = len(observed), int(self.n_total)
        if not 1 <= n < n_total:
            raise ValueError(f"need 1 <= n < N, got n={n}, N={n_total}")
        if len(set(observed)) != n:
            raise ValueError("observed indices must be distinct")
        if min(observed) < 0 or max(observed) >= n_total:
            raise ValueError(f"observed indices must lie in [0, {n_total})")
        a11 = np.array(self.a11, dtype=float)
        a12 = np.array(self.a12, dtype=float)
        if a11.shape != (n, n):
            raise ValueError(f"a11 must be {n}x{n}, got {a11.shape}")
        if a12.shape != (n, n_total - n):
            raise ValueError(f"a12 must be {n}x{n_total - n}, got {a12.shape}")
        if not (np.all(np.isfinite(a11)) and np.all(np.isfinite(a12))):
            raise ValueError("blocks contain non-finite entries")
        if np.max(np.abs(a11 - a11.T), initial=0.0) > SYMMETRY_TOL:
            raise ValueError("a11 must be symmetric")
        a11.setflags(write=False)
        a12.setflags(write=False)
        object.__setattr__(self, "observed", observed)
        object.__setattr__(self, "n_total", n_total)
        object.__setattr__(self, "a11", a11)
        object.__setattr__(self, "a12", a12)

    @classmethod
    def from_blocks(cls, a11, a12) -> "EgoView":
        """View over nodes ``0..N-1`` whose first ``n`` nodes are observed."""
        a12 = np.asarray(a12, dtype=float)
        n, m = a12.shape
        return cls(tuple(range(n)), a11, a12, n + m)

    @property
    def n_observed(self) -> int:
        return len(self.observed)

    @property
    def n_hidden(self) -> int:
        return self.n_total - len(self.observed)

    @property
    def hidden(self) -> tuple:
        return tuple(hidden_nodes(self.n_total, self.observed))

    @property
    def a_obs(self) -> np.ndarray:
        """Observed rows ``[A11 | A12]``."""
        return np.hstack([self.a11, self.a12])


def hidden_nodes(n_total: int, observed: Sequence[int]) -> np.ndarray:
    mask = np.ones(n_total, dtype=bool)
    mask[list(observed)] = False
    return np.flatnonzero(mask)


def front_permutation(n_total: int, observed: Sequence[int]) -> np.ndarray:
    """Node order with ``observed`` first, then hidden nodes ascending."""
    return np.concatenate([np.asarray(observed, dtype=int), hidden_nodes(n_total, observed)])


def partition(matrix, n: int) -> BlockPartition:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not 1 <= n < m.shape[0]:
        raise ValueError(f"need 1 <= n < N, got n={n}, N={m.shape[0]}")
    return BlockPartition(m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:])


def extract_ego_view(adjacency: AdjacencyMatrix, observed: Sequence[int]) -> EgoView:
    a = adjacency.values if isinstance(adjacency, AdjacencyMatrix) else np.asarray(adjacency, dtype=float)
    n_total = a.shape[0]
    obs = [int(i) for i in observed]
    if len(set(obs)) != len(obs):
        raise ValueError("observed indices must be distinct")
    if any(i < 0 or i >= n_total for i in obs):
        raise ValueError(f"observed indices must lie in [0, {n_total})")
    if not 1 <= len(obs) < n_total:
        raise ValueError(f"need 1 <= n < N, got n={len(obs)}, N={n_total}")
    hid = hidden_nodes(n_total, obs)
    return EgoView(tuple(obs), a[np.ix_(obs, obs)], a[np.ix_(obs, hid)], n_total)
