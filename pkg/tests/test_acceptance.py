"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` (the lines are also
repeated in the terminal summary) or as ``python3 tests/test_acceptance.py``.

The simulation criteria use one fixed protocol chosen before looking at the
results: N = 500, 100 replications, rank chosen by cross-validation (half of
the observed nodes held out, 5 repeats, default candidate ranks), clamped
estimates and master seed 2024.
"""
import time
from dataclasses import replace

import numpy as np
import pytest

from egoimpute.estimators import clamp01, le_impute
from egoimpute.evaluation import auc_link_prediction
from egoimpute.experiment import ExperimentConfig, records_to_csv, run_experiment, summarize
from egoimpute.generators import ModelSpec, derive_seed, generate, make_rng, sample_adjacency
from egoimpute.graph_core import EgoView, extract_ego_view
from egoimpute.sampling import SamplingPlan, sample_mcar

MASTER_SEED = 2024
REPS = 100
RESULTS = {}


def report(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    return ok


def cell_config(kind, rho, degrees, estimators=("le",), mechanism="mcar"):
    return ExperimentConfig(
        model=ModelSpec(kind=kind, n_nodes=500, k=5, target_degree=degrees[0]),
        sampling=SamplingPlan(mechanism, rho),
        estimators=list(estimators),
        rank="cv",
        truncate=True,
        replications=REPS,
        master_seed=MASTER_SEED,
        cv_holdout=0.5,
        cv_repeats=5,
        degrees=list(degrees) if len(degrees) > 1 else [],
    )


def mean_mse(records, estimator="le", degree=None):
    rows = [r for r in summarize(records)
            if r["estimator"] == estimator and (degree is None or r["degree"] == degree)]
    (row,) = rows
    return row["mse_mean"], row["mse_se"]


def brute_auc(scores, truth):
    iu = np.triu_indices(scores.shape[0], 1)
    s, y = scores[iu], truth[iu]
    pos, neg = s[y == 1], s[y == 0]
    wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
    return wins / (pos.size * neg.size)


def test_criterion_01_exactness():
    rng = np.random.default_rng(MASTER_SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        k = int(rng.integers(1, 6))
        n_total = int(rng.integers(2 * k + 1, 101))
        n = int(rng.integers(k, n_total))
        z = rng.standard_normal((n_total, k))
        p = z @ z.T
        assert np.linalg.matrix_rank(p[:n, :n]) == k
        view = EgoView.from_blocks(p[:n, :n], p[:n, n:])
        got = le_impute(view, k, truncate=False).p22_hat
        p22 = p[n:, n:]
        worst = max(worst, np.linalg.norm(got - p22) / np.linalg.norm(p22))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 5
    assert report(1, ok, f"max relative error {worst:.2e} (< 1e-8), {elapsed:.2f} s (< 5 s)")


@pytest.mark.slow
def test_criterion_02_sbm_mse():
    start = time.perf_counter()
    mse, se = mean_mse(run_experiment(cell_config("sbm", 0.5, [20.0]), write=False))
    elapsed = time.perf_counter() - start
    ok = 1.15e-3 <= mse <= 1.55e-3 and elapsed < 300
    assert report(2, ok, f"SBM (0.5,20) LE MSE {1e3 * mse:.3f}e-3 (se {1e3 * se:.3f}e-3) "
                         f"in [1.15, 1.55]e-3, {elapsed:.0f} s (< 300 s)")


@pytest.mark.slow
def test_criterion_03_product_mse():
    start = time.perf_counter()
    mse, se = mean_mse(run_experiment(cell_config("rdpg", 0.5, [20.0]), write=False))
    elapsed = time.perf_counter() - start
    ok = 0.50e-3 <= mse <= 0.67e-3 and elapsed < 300
    assert report(3, ok, f"product (0.5,20) LE MSE {1e3 * mse:.3f}e-3 (se {1e3 * se:.3f}e-3) "
                         f"in [0.50, 0.67]e-3, {elapsed:.0f} s (< 300 s)")


@pytest.mark.slow
def test_criterion_04_le_beats_se_at_high_rho():
    records = run_experiment(cell_config("sbm", 0.9, [20.0, 50.0], estimators=("le", "se")), write=False)
    parts, ok = [], True
    for degree in (20.0, 50.0):
        le, _ = mean_mse(records, "le", degree)
        se, _ = mean_mse(records, "se", degree)
        ok &= le < se
        parts.append(f"deg {degree:g}: LE {1e3 * le:.3f}e-3 vs SE {1e3 * se:.3f}e-3")
    assert report(4, ok, "; ".join(parts))


@pytest.mark.slow
def test_criterion_05_mnar_positive_mse():
    records = run_experiment(cell_config("sbm", 0.2, [20.0], mechanism="mnar_positive"), write=False)
    mse, se = mean_mse(records)
    ok = 1.75e-3 <= mse <= 2.35e-3
    assert report(5, ok, f"SBM MNAR+ (0.2,20) LE MSE {1e3 * mse:.3f}e-3 (se {1e3 * se:.3f}e-3) "
                         f"in [1.75, 2.35]e-3")


@pytest.mark.slow
def test_criterion_06_consistency():
    start = time.perf_counter()
    medians = []
    for n_total in (200, 400, 800, 1600):
        errors = []
        spec = ModelSpec(kind="sbm", n_nodes=n_total, k=3, target_degree=np.log(n_total) ** 2)
        for rep in range(20):
            seed = derive_seed(MASTER_SEED, n_total, rep)
            p = generate(spec, make_rng(derive_seed(seed, 0)))
            a = sample_adjacency(p, derive_seed(seed, 1))
            view = extract_ego_view(a, sample_mcar(n_total, 0.5, derive_seed(seed, 2)))
            hidden = np.asarray(view.hidden)
            p22 = p.values[np.ix_(hidden, hidden)]
            p22_hat = le_impute(view, 3).p22_hat
            errors.append(np.linalg.norm(p22_hat - p22) / np.linalg.norm(p22))
        medians.append(float(np.median(errors)))
    elapsed = time.perf_counter() - start
    ok = all(a > b for a, b in zip(medians, medians[1:])) and elapsed < 600
    assert report(6, ok, "median relative errors " + ", ".join(f"{m:.4f}" for m in medians)
                  + f" strictly decreasing, {elapsed:.0f} s (< 600 s)")


def test_criterion_07_auc_oracle():
    rng = np.random.default_rng(MASTER_SEED)
    worst, done = 0.0, 0
    while done < 200:
        m = int(rng.integers(2, 21))
        truth = np.triu((rng.random((m, m)) < rng.random()).astype(int), 1)
        truth = truth + truth.T
        y = truth[np.triu_indices(m, 1)]
        if y.min() == y.max():
            continue
        scores = rng.random((m, m))
        if done % 2:
            scores = np.round(scores, 1)  # exercise ties
        worst = max(worst, abs(auc_link_prediction(scores, truth).auc - brute_auc(scores, truth)))
        done += 1
    assert report(7, worst < 1e-12, f"max |AUC - brute force| {worst:.1e} over 200 instances (< 1e-12)")


def test_criterion_08_clamp_monotone():
    rng = np.random.default_rng(MASTER_SEED)
    x = rng.normal(0.5, 2.0, 100_000)
    p = rng.random(100_000)
    violations = int(np.sum(np.abs(clamp01(x) - p) > np.abs(x - p)))
    assert report(8, violations == 0, f"{violations} violations in 1e5 pairs")


def test_criterion_09_performance():
    p = generate(ModelSpec(kind="sbm", n_nodes=500, k=5, target_degree=20.0, seed=MASTER_SEED))
    a = sample_adjacency(p, MASTER_SEED)
    view = extract_ego_view(a, sample_mcar(500, 0.5, MASTER_SEED))
    start = time.perf_counter()
    le_impute(view, 5)
    elapsed = time.perf_counter() - start
    assert report(9, elapsed < 1.0, f"LE at N=500, n=250, K=5 took {1e3 * elapsed:.1f} ms (< 1000 ms)")


def test_criterion_10_determinism(tmp_path):
    config = ExperimentConfig(
        model=ModelSpec(n_nodes=80, k=3, target_degree=10.0),
        sampling=SamplingPlan("mcar", 0.5),
        estimators=["le", "se", "le_plus"],
        rank="cv",
        replications=3,
        master_seed=MASTER_SEED,
        cv_holdout=0.5,
        cv_repeats=2,
        kinds=["sbm", "dcbm", "rdpg", "distance"],
        degrees=[10.0, 15.0],
        rhos=[0.3, 0.6],
        mechanisms=["mcar", "mnar_positive", "mnar_negative"],
    )
    runs = []
    for threads, name in ((1, "a.csv"), (4, "b.csv")):
        out = tmp_path / name
        records = run_experiment(replace(config, threads=threads, output=str(out)))
        runs.append(records_to_csv(records, exclude=("wall_time_ms",)))
    same = runs[0] == runs[1]
    rows = runs[0].count("\n") - 1
    assert report(10, same, f"two grid runs ({rows} records, 1 and 4 threads) byte-identical excluding wall time")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
