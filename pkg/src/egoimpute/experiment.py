"""Monte-Carlo experiment harness.

A configuration describes a grid of cells (model x mechanism x rho x
degree). Every replication of every cell gets its own 64-bit seed derived
from the master seed, so a record can be regenerated from its ``seed``
column alone and results do not depend on thread scheduling.
"""
from __future__ import annotations

import configparser
import csv
import io
import itertools
import json
import logging
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .estimators import ESTIMATOR_NAMES, impute
from .evaluation import UndefinedAUCError, auc_link_prediction, mse_block, time_fit
from .formats import ParseError, load_edge_list
from .generators import MODEL_KINDS, ModelSpec, derive_seed, generate, make_rng, sample_adjacency
from .graph_core import extract_ego_view
from .sampling import MECHANISMS, SamplingPlan, sample_nodes
from .tuning import select_ranks

logger = logging.getLogger(__name__)

RECORD_FIELDS = [
    "model", "mechanism", "rho", "degree", "estimator", "replication", "seed",
    "mse", "auc", "wall_time_ms", "rank",
]
SUMMARY_FIELDS = [
    "model", "mechanism", "rho", "degree", "estimator", "replications",
    "mse_mean", "mse_se", "auc_mean", "auc_se", "wall_time_ms_mean", "rank_mean",
]
STREAM_GENERATE, STREAM_EDGES, STREAM_NODES, STREAM_TUNE = range(4)


@dataclass
class ExperimentConfig:
    model: Optional[ModelSpec] = field(default_factory=ModelSpec)
    edge_list: Optional[str] = None
    one_based: bool = False
    sampling: SamplingPlan = field(default_factory=SamplingPlan)
    estimators: list = field(default_factory=lambda: ["le"])
    rank: Union[int, str] = "cv"
    truncate: bool = True
    replications: int = 100
    master_seed: int = 0
    output: Optional[str] = None
    threads: Optional[int] = None
    cv_holdout: float = 0.5
    cv_repeats: int = 5
    cv_candidates: Optional[list] = None
    # grid axes; empty lists mean "use the value from model/sampling"
    kinds: list = field(default_factory=list)
    degrees: list = field(default_factory=list)
    rhos: list = field(default_factory=list)
    mechanisms: list = field(default_factory=list)

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not self.estimators:
            raise ValueError("select at least one estimator")
        for est in self.estimators:
            if est not in ESTIMATOR_NAMES:
                raise ValueError(f"unknown estimator {est!r}; choose from {ESTIMATOR_NAMES}")
        if self.rank != "cv":
            self.rank = int(self.rank)
            if self.rank < 1:
                raise ValueError("rank must be a positive integer or 'cv'")
        if self.model is None and self.edge_list is None:
            raise ValueError("configure either a synthetic model or an edge list")
        for kind in self.kinds:
            if kind not in MODEL_KINDS:
                raise ValueError(f"unknown model kind {kind!r}")
        for mech in self.mechanisms:
            if mech not in MECHANISMS:
                raise ValueError(f"unknown mechanism {mech!r}")

    @property
    def is_synthetic(self) -> bool:
        return self.edge_list is None

    def cells(self) -> list:
        """Expand the grid into ``(model_spec_or_None, sampling_plan)`` pairs."""
        plans = [
            replace(self.sampling, mechanism=m, rho=r, deltas=None if m != self.sampling.mechanism else self.sampling.deltas)
            for m, r in itertools.product(
                self.mechanisms or [self.sampling.mechanism], self.rhos or [self.sampling.rho]
            )
        ]
        if not self.is_synthetic:
            return [(None, plan) for plan in plans]
        specs = [
            replace(self.model, kind=kind, target_degree=deg)
            for kind, deg in itertools.product(
                self.kinds or [self.model.kind], self.degrees or [self.model.target_degree]
            )
        ]
        return [(spec, plan) for spec in specs for plan in plans]


def cell_key(spec: Optional[ModelSpec], plan: SamplingPlan, edge_list: Optional[str] = None) -> dict:
    if spec is None:
        model, degree = f"edgelist:{Path(edge_list).name}" if edge_list else "edgelist", None
    else:
        model, degree = spec.kind, spec.target_degree
    return {"model": model, "mechanism": plan.mechanism, "rho": plan.rho, "degree": degree}


def _cell_id(key: dict) -> int:
    text = f"{key['model']}|{key['mechanism']}|{key['rho']!r}|{key['degree']!r}"
    return zlib.crc32(text.encode())


def replication_seed(master_seed: int, key: dict, replication: int) -> int:
    return derive_seed(master_seed, _cell_id(key), replication)


def run_replication(config: ExperimentConfig, spec, plan, key: dict, replication: int, adjacency=None) -> list:
    """One draw of network and sample, every configured estimator on it."""
    seed = replication_seed(config.master_seed, key, replication)
    p = None
    if spec is not None:
        p = generate(spec, make_rng(derive_seed(seed, STREAM_GENERATE)))
        adjacency = sample_adjacency(p, derive_seed(seed, STREAM_EDGES))
    observed = sample_nodes(plan, adjacency, derive_seed(seed, STREAM_NODES))
    view = extract_ego_view(adjacency, observed)
    hidden = np.asarray(view.hidden)

    if config.rank == "cv":
        try:
            chosen = select_ranks(
                view, config.estimators, config.cv_candidates, config.cv_holdout,
                config.cv_repeats, derive_seed(seed, STREAM_TUNE),
            )
        except UndefinedAUCError as exc:
            # too sparse to cross-validate: keep the row, leave the metrics empty
            logger.warning("%s replication %d: rank selection failed (%s)", key, replication, exc)
            return [dict(key, estimator=est, replication=replication, seed=seed, mse=None,
                         auc=None, wall_time_ms=None, rank=None) for est in config.estimators]
        ranks = {est: sel.chosen_rank for est, sel in chosen.items()}
    else:
        ranks = {est: min(config.rank, view.n_observed) for est in config.estimators}

    a22 = adjacency.values[np.ix_(hidden, hidden)]
    records = []
    for est in config.estimators:
        result, elapsed = time_fit(impute, view, ranks[est], est, config.truncate)
        mse = mse_block(result.p22_hat, p.values[np.ix_(hidden, hidden)]) if p is not None else None
        try:
            auc = auc_link_prediction(result.p22_hat, a22).auc
        except UndefinedAUCError:
            auc = None
        records.append(dict(key, estimator=est, replication=replication, seed=seed,
                            mse=mse, auc=auc, wall_time_ms=1000.0 * elapsed, rank=ranks[est]))
    return records


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def run_experiment(config: ExperimentConfig, write: bool = True) -> list:
    """Run every cell of the grid; returns records sorted by cell and replication."""
    adjacency = None
    if not config.is_synthetic:
        adjacency = load_edge_list(config.edge_list, one_based=config.one_based)
    jobs = []
    for spec, plan in config.cells():
        key = cell_key(spec, plan, config.edge_list)
        jobs.extend((spec, plan, key, rep) for rep in range(config.replications))

    threads = config.threads or default_threads()

    def work(job):
        spec, plan, key, rep = job
        return run_replication(config, spec, plan, key, rep, adjacency)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, jobs))
    else:
        chunks = [work(job) for job in jobs]
    records = [rec for chunk in chunks for rec in chunk]
    if write and config.output:
        write_records(records, config.output)
        write_summary(summarize(records), summary_path(config.output))
    return records


def summary_path(output) -> str:
    p = Path(output)
    return str(p.with_name(p.stem + ".summary" + (p.suffix or ".csv")))


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def records_to_csv(records: list, fields=RECORD_FIELDS, exclude=()) -> str:
    cols = [f for f in fields if f not in exclude]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for rec in records:
        writer.writerow([_fmt(rec.get(c)) for c in cols])
    return buf.getvalue()


def write_records(records: list, path, fields=RECORD_FIELDS) -> None:
    Path(path).write_text(records_to_csv(records, fields))


def _mean_se(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    arr = np.asarray(vals, dtype=float)
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return float(arr.mean()), se


def summarize(records: list) -> list:
    """Mean and standard error (sample sd / sqrt(reps)) per cell and estimator."""
    groups = {}
    for rec in records:
        gk = (rec["model"], rec["mechanism"], rec["rho"], rec["degree"], rec["estimator"])
        groups.setdefault(gk, []).append(rec)
    rows = []
    for gk, recs in groups.items():
        mse_mean, mse_se = _mean_se(r["mse"] for r in recs)
        auc_mean, auc_se = _mean_se(r["auc"] for r in recs)
        rows.append(dict(zip(("model", "mechanism", "rho", "degree", "estimator"), gk),
                         replications=len(recs), mse_mean=mse_mean, mse_se=mse_se,
                         auc_mean=auc_mean, auc_se=auc_se,
                         wall_time_ms_mean=_mean_se(r["wall_time_ms"] for r in recs)[0],
                         rank_mean=_mean_se(r["rank"] for r in recs)[0]))
    return rows


def write_summary(rows: list, path) -> None:
    Path(path).write_text(records_to_csv(rows, SUMMARY_FIELDS))


def format_summary(rows: list) -> str:
    """Fixed-width table: MSE x 1e3 and AUC, standard errors in parentheses."""
    lines = [f"{'model':<10}{'mech':<15}{'rho':>5}{'deg':>6}  {'est':<8}{'MSE(1e-3)':>20}{'AUC':>18}{'ms':>9}"]
    for r in rows:
        mse = "" if r["mse_mean"] is None else f"{1e3 * r['mse_mean']:.3g} ({1e3 * r['mse_se']:.2g})"
        auc = "" if r["auc_mean"] is None else f"{r['auc_mean']:.3f} ({r['auc_se']:.2g})"
        deg = "" if r["degree"] is None else f"{r['degree']:g}"
        ms = "" if r["wall_time_ms_mean"] is None else f"{r['wall_time_ms_mean']:.2f}"
        lines.append(f"{r['model']:<10}{r['mechanism']:<15}{r['rho']:>5g}{deg:>6}  {r['estimator']:<8}"
                     f"{mse:>20}{auc:>18}{ms:>9}")
    return "\n".join(lines)


# --- configuration files -------------------------------------------------

def _split(value) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    return [t.strip() for t in str(value).split(",") if t.strip()]


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def config_from_dict(d: dict) -> ExperimentConfig:
    """Build a config from nested sections ``model``, ``sampling``, ``estimation``, ``experiment``."""
    model_d = dict(d.get("model", {}))
    samp_d = dict(d.get("sampling", {}))
    est_d = dict(d.get("estimation", {}))
    exp_d = dict(d.get("experiment", {}))

    edge_list = model_d.pop("edge_list", None)
    one_based = _bool(model_d.pop("one_based", False))
    kinds = _split(model_d.pop("kind", "sbm"))
    degrees = [float(x) for x in _split(model_d.pop("target_degree", 20))]
    spec = None
    if edge_list is None:
        kw = {}
        for name, conv in (("n_nodes", int), ("k", int), ("within", float), ("between", float),
                           ("out_in_ratio", float), ("degree_power_alpha", float)):
            if name in model_d:
                kw[name] = conv(model_d.pop(name))
        if "b_matrix" in model_d:
            b = model_d.pop("b_matrix")
            kw["b_matrix"] = json.loads(b) if isinstance(b, str) else b
        if model_d:
            raise ValueError(f"unknown model options: {sorted(model_d)}")
        spec = ModelSpec(kind=kinds[0], target_degree=degrees[0], **kw)

    mechanisms = _split(samp_d.pop("mechanism", "mcar"))
    rhos = [float(x) for x in _split(samp_d.pop("rho", 0.5))]
    plan_kw = {}
    if "deltas" in samp_d:
        plan_kw["deltas"] = tuple(float(x) for x in _split(samp_d.pop("deltas")))
    if samp_d:
        raise ValueError(f"unknown sampling options: {sorted(samp_d)}")
    plan = SamplingPlan(mechanism=mechanisms[0], rho=rhos[0], **plan_kw)

    rank = est_d.pop("rank", 5)
    rank = "cv" if str(rank).strip().lower() == "cv" else int(rank)
    candidates = est_d.pop("cv_candidates", None)
    if candidates is not None:
        candidates = [int(x) for x in _split(candidates)]
    cfg = ExperimentConfig(
        model=spec,
        edge_list=edge_list,
        one_based=one_based,
        sampling=plan,
        estimators=_split(est_d.pop("estimators", "le")),
        rank=rank,
        truncate=_bool(est_d.pop("truncate", True)),
        cv_holdout=float(est_d.pop("cv_holdout", 0.5)),
        cv_repeats=int(est_d.pop("cv_repeats", 5)),
        cv_candidates=candidates,
        replications=int(exp_d.pop("replications", 100)),
        master_seed=int(exp_d.pop("master_seed", 0)),
        output=exp_d.pop("output", None),
        threads=int(exp_d["threads"]) if exp_d.get("threads") not in (None, "") else None,
        kinds=kinds if len(kinds) > 1 else [],
        degrees=degrees if len(degrees) > 1 else [],
        rhos=rhos if len(rhos) > 1 else [],
        mechanisms=mechanisms if len(mechanisms) > 1 else [],
    )
    exp_d.pop("threads", None)
    for leftover, name in ((est_d, "estimation"), (exp_d, "experiment")):
        if leftover:
            raise ValueError(f"unknown {name} options: {sorted(leftover)}")
    return cfg


def load_config(path) -> ExperimentConfig:
    """Read an INI-style config (sections/key = value) or, for ``.json``, JSON."""
    text = Path(path).read_text()
    if str(path).endswith(".json") or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
        return config_from_dict(data)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ParseError(path, getattr(exc, "lineno", 0) or 0, exc.message.splitlines()[0]) from None
    return config_from_dict({s: dict(parser[s]) for s in parser.sections()})
