"""Synthetic probability matrices and Bernoulli network draws.

All randomness flows through :func:`make_rng`, a PCG64 generator keyed by a
``numpy.random.SeedSequence``; :func:`derive_seed` splits a master seed into
independent 64-bit per-replication seeds.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .graph_core import AdjacencyMatrix, ProbabilityMatrix

logger = logging.getLogger(__name__)

MODEL_KINDS = ("sbm", "dcbm", "rdpg", "distance")


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def derive_seed(master_seed: int, *path: int) -> int:
    """Independent 64-bit seed for the stream ``(master_seed, *path)``."""
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, *map(int, path)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def planted_partition(k: int, within: float = 0.6, between: float = 0.1) -> np.ndarray:
    b = np.full((k, k), float(between))
    np.fill_diagonal(b, within)
    return b


@dataclass
class ModelSpec:
    """Parameters of one synthetic network model.

    ``b_matrix`` defaults to the planted partition ``within``/``between``
    (0.6/0.1); for the DCBM the between-block value is ``out_in_ratio``
    times the within-block value, and ``out_in_ratio`` defaults to the
    SBM's between/within ratio.
    """

    kind: str = "sbm"
    n_nodes: int = 500
    k: int = 5
    b_matrix: Optional[list] = None
    within: float = 0.6
    between: float = 0.1
    out_in_ratio: Optional[float] = None
    degree_power_alpha: float = 0.1
    target_degree: Optional[float] = 20.0
    seed: int = 0
    labels: Optional[list] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; choose from {MODEL_KINDS}")
        if self.n_nodes < 2:
            raise ValueError("n_nodes must be at least 2")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.target_degree is not None and self.target_degree <= 0:
            raise ValueError("target_degree must be positive")
        if self.b_matrix is not None:
            b = np.asarray(self.b_matrix, dtype=float)
            if b.shape != (self.k, self.k) or not np.allclose(b, b.T):
                raise ValueError("b_matrix must be a symmetric k x k matrix")
            if b.min() < 0 or b.max() > 1:
                raise ValueError("b_matrix entries must lie in [0, 1]")

    @property
    def beta(self) -> float:
        if self.out_in_ratio is not None:
            return float(self.out_in_ratio)
        return self.between / self.within

    def block_matrix(self) -> np.ndarray:
        if self.b_matrix is not None:
            return np.asarray(self.b_matrix, dtype=float)
        if self.kind == "dcbm":
            return planted_partition(self.k, self.within, self.beta * self.within)
        return planted_partition(self.k, self.within, self.between)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("labels")
        return d


def _labels(spec: ModelSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.labels is not None:
        z = np.asarray(spec.labels, dtype=int)
        if z.shape != (spec.n_nodes,) or z.min() < 0 or z.max() >= spec.k:
            raise ValueError("labels must be n_nodes integers in [0, k)")
        return z
    return rng.integers(0, spec.k, size=spec.n_nodes)


def _finish(raw: np.ndarray, spec: ModelSpec, info: dict) -> ProbabilityMatrix:
    raw = 0.5 * (raw + raw.T)
    info = dict(info, model=spec.kind, clamped_before_scaling=bool(raw.max() > 1.0 or raw.min() < 0.0))
    p = ProbabilityMatrix(np.clip(raw, 0.0, 1.0), info)
    if spec.target_degree is None:
        return p
    return scale_to_degree(p, spec.target_degree)


def gen_sbm(spec: ModelSpec, rng=None) -> ProbabilityMatrix:
    """``P = Z B Z^T`` with uniformly random community labels."""
    rng = make_rng(spec.seed if rng is None else rng)
    z = _labels(spec, rng)
    b = spec.block_matrix()
    return _finish(b[np.ix_(z, z)], spec, {"labels": z})


def gen_dcbm(spec: ModelSpec, rng=None, theta=None) -> ProbabilityMatrix:
    """``P_ij = theta_i theta_j B[z_i, z_j]``.

    Degree parameters are Pareto(alpha) draws with lower bound 1, divided
    by their community maximum so that every theta lies in (0, 1].
    """
    rng = make_rng(spec.seed if rng is None else rng)
    z = _labels(spec, rng)
    if theta is None:
        # numpy's pareto is Lomax; shift by 1 for the classical Pareto with x_m = 1
        theta = 1.0 + rng.pareto(spec.degree_power_alpha, size=spec.n_nodes)
        for g in np.unique(z):
            members = z == g
            theta[members] /= theta[members].max()
    theta = np.asarray(theta, dtype=float)
    b = spec.block_matrix()
    raw = np.outer(theta, theta) * b[np.ix_(z, z)]
    return _finish(raw, spec, {"labels": z, "theta": theta})


def gen_rdpg(spec: ModelSpec, rng=None, latent=None) -> ProbabilityMatrix:
    """Random dot product graph, ``P = Z Z^T`` with Beta(0.5, 1) coordinates."""
    rng = make_rng(spec.seed if rng is None else rng)
    z = rng.beta(0.5, 1.0, size=(spec.n_nodes, spec.k)) if latent is None else np.asarray(latent, dtype=float)
    return _finish(z @ z.T, spec, {"latent": z})


def gen_distance(spec: ModelSpec, rng=None, latent=None) -> ProbabilityMatrix:
    """Latent distance model ``P_ij = 1 / (1 + exp(||Z_i - Z_j||))``, ``Z_i ~ N(0, I)``.

    The latent dimension is ``spec.k``. Not low rank.
    """
    rng = make_rng(spec.seed if rng is None else rng)
    z = rng.standard_normal((spec.n_nodes, spec.k)) if latent is None else np.asarray(latent, dtype=float)
    sq = np.sum(z * z, axis=1)
    dist = np.sqrt(np.maximum(sq[:, None] + sq[None, :] - 2.0 * z @ z.T, 0.0))
    np.fill_diagonal(dist, 0.0)
    return _finish(1.0 / (1.0 + np.exp(dist)), spec, {"latent": z})


GENERATORS = {"sbm": gen_sbm, "dcbm": gen_dcbm, "rdpg": gen_rdpg, "distance": gen_distance}


def generate(spec: ModelSpec, rng=None) -> ProbabilityMatrix:
    return GENERATORS[spec.kind](spec, rng)


def scale_to_degree(p: ProbabilityMatrix, target_degree: float) -> ProbabilityMatrix:
    """Rescale P so the average expected degree is ``target_degree``.

    Entries pushed above 1 are clamped; ``info["saturated"]`` records
    whether that happened and ``info["achieved_degree"]`` the degree
    actually attained after clamping.
    """
    if target_degree <= 0:
        raise ValueError("target_degree must be positive")
    values = p.values if isinstance(p, ProbabilityMatrix) else np.asarray(p, dtype=float)
    n = values.shape[0]
    off_mass = values.sum() - np.trace(values)
    if off_mass <= 0:
        raise ValueError("cannot scale a matrix with no positive off-diagonal entry")
    c = target_degree * n / off_mass
    scaled = c * values
    over = scaled > 1.0
    clipped_mass = float((scaled[over] - 1.0).sum())
    scaled = np.clip(scaled, 0.0, 1.0)
    info = dict(p.info) if isinstance(p, ProbabilityMatrix) else {}
    out = ProbabilityMatrix(scaled, info)
    achieved = out.expected_degree()
    info.update(
        scale=float(c),
        target_degree=float(target_degree),
        achieved_degree=achieved,
        saturated=bool(over.any()),
        saturated_fraction=float(over.mean()),
        clipped_mass_fraction=clipped_mass / float(c * values.sum()),
    )
    if over.any():
        logger.debug("degree scaling saturated %.3g%% of entries", 100 * over.mean())
    return out


def sample_adjacency(p: ProbabilityMatrix, seed) -> AdjacencyMatrix:
    """One inhomogeneous Erdos-Renyi draw, independent over the upper triangle."""
    rng = make_rng(seed)
    values = p.values if isinstance(p, ProbabilityMatrix) else np.asarray(p, dtype=float)
    n = values.shape[0]
    iu = np.triu_indices(n, 1)
    draws = (rng.random(iu[0].size) < values[iu]).astype(float)
    a = np.zeros((n, n))
    a[iu] = draws
    a += a.T
    return AdjacencyMatrix(a)
