"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import replace

import numpy as np

from . import formats
from .estimators import ESTIMATOR_NAMES, impute, recover_full
from .evaluation import UndefinedAUCError, auc_link_prediction, mse_block
from .experiment import (
    ExperimentConfig,
    _bool,
    format_summary,
    load_config,
    run_experiment,
    summarize,
)
from .generators import MODEL_KINDS, ModelSpec, generate, make_rng, sample_adjacency
from .graph_core import AdjacencyMatrix, extract_ego_view
from .sampling import MECHANISMS, SamplingPlan, sample_nodes
from .tuning import select_rank

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("egoimpute")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rank_arg(text: str):
    if text.strip().lower() == "cv":
        return "cv"
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("rank must be a positive integer or 'cv'") from None
    if k < 1:
        raise argparse.ArgumentTypeError("rank must be a positive integer or 'cv'")
    return k


def _bool_arg(text: str) -> bool:
    try:
        return _bool(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list:
    """``1,2,5`` or ``1-10``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _load_adjacency(args) -> AdjacencyMatrix:
    if getattr(args, "edge_list", None):
        return formats.load_edge_list(args.edge_list, one_based=args.one_based)
    if getattr(args, "adjacency", None):
        return AdjacencyMatrix(formats.read_matrix(args.adjacency))
    raise UsageError("give --adjacency or --edge-list")


def cmd_generate(args) -> int:
    spec = ModelSpec(kind=args.model, n_nodes=args.nodes, k=args.k, target_degree=args.degree,
                     within=args.within, between=args.between, seed=args.seed)
    if args.config:
        cfg = load_config(args.config)
        if cfg.model is None:
            raise UsageError("config describes an edge list, not a synthetic model")
        spec = replace(cfg.model, seed=args.seed)
    rng = make_rng(args.seed)
    p = generate(spec, rng)
    a = sample_adjacency(p, rng)
    formats.write_matrix(p.values, args.out_p)
    formats.write_matrix(a.values, args.out_a)
    print(f"N={p.n_nodes} expected degree={p.expected_degree():.3f} edges={a.n_edges}")
    return EXIT_OK


def cmd_sample(args) -> int:
    a = _load_adjacency(args)
    plan = SamplingPlan(mechanism=args.mechanism, rho=args.rho, seed=args.seed)
    observed = sample_nodes(plan, a, args.seed)
    view = extract_ego_view(a, observed)
    formats.write_view(view, args.out)
    print(f"observed {view.n_observed} of {view.n_total} nodes")
    return EXIT_OK


def _resolve_rank(view, args, estimator: str) -> int:
    if args.rank == "cv":
        sel = select_rank(view, args.candidates, args.holdout, args.repeats, args.seed, estimator)
        log.info("cross-validated rank: %d (per repeat %s)", sel.chosen_rank, sel.selected)
        return sel.chosen_rank
    return args.rank


def cmd_impute(args) -> int:
    view = formats.read_view(args.view)
    k = _resolve_rank(view, args, args.estimator)
    if args.full:
        res = recover_full(view, k, args.truncate)
        formats.write_matrix(res.in_original_order(), args.out)
    else:
        res = impute(view, k, args.estimator, args.truncate)
        formats.write_matrix(res.p22_hat, args.out)
    print(f"rank={k}")
    return EXIT_OK


def cmd_tune_rank(args) -> int:
    view = formats.read_view(args.view)
    sel = select_rank(view, args.candidates, args.holdout, args.repeats, args.seed, args.estimator)
    if args.out:
        sel.write_trace(args.out)
    print(sel.chosen_rank)
    return EXIT_OK


def _hidden_block(view, path):
    m = formats.read_matrix(path)
    hid = np.asarray(view.hidden)
    if m.shape == (view.n_total, view.n_total):
        return m[np.ix_(hid, hid)]
    if m.shape == (hid.size, hid.size):
        return m
    raise UsageError(f"{path}: shape {m.shape} fits neither the full network nor the hidden block")


def cmd_evaluate(args) -> int:
    view = formats.read_view(args.view)
    est = formats.read_matrix(args.estimate)
    if args.probability:
        print(f"mse {mse_block(est, _hidden_block(view, args.probability))!r}")
    if args.adjacency:
        try:
            print(f"auc {auc_link_prediction(est, _hidden_block(view, args.adjacency)).auc!r}")
        except UndefinedAUCError as exc:
            print(f"auc undefined: {exc}")
    if not (args.probability or args.adjacency):
        raise UsageError("give --probability and/or --adjacency to evaluate against")
    return EXIT_OK


def cmd_roc(args) -> int:
    view = formats.read_view(args.view)
    est = formats.read_matrix(args.estimate)
    curve = auc_link_prediction(est, _hidden_block(view, args.adjacency))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["fpr", "tpr"])
        w.writerows(curve.points)
    print(f"auc {curve.auc!r}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.out is not None:
        overrides["output"] = args.out
    if args.rank is not None:
        overrides["rank"] = args.rank
    if args.truncate is not None:
        overrides["truncate"] = args.truncate
    if args.replications is not None:
        overrides["replications"] = args.replications
    if args.one_based:
        overrides["one_based"] = True
    cfg = replace(cfg, **overrides)
    records = run_experiment(cfg)
    print(format_summary(summarize(records)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="egoimpute", description="Impute the missing block of an egocentrically sampled network.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_rank_opts(sp, rank_default):
        sp.add_argument("--rank", type=_rank_arg, default=rank_default, help="fixed rank K or 'cv'")
        sp.add_argument("--candidates", type=_int_list, default=None, help="candidate ranks, e.g. 1-10")
        sp.add_argument("--holdout", type=float, default=0.1, help="fraction of observed nodes held out")
        sp.add_argument("--repeats", type=int, default=5)
        sp.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("generate", help="draw P and A from a synthetic model")
    g.add_argument("--config")
    g.add_argument("--model", choices=MODEL_KINDS, default="sbm")
    g.add_argument("--nodes", type=int, default=500)
    g.add_argument("--k", type=int, default=5)
    g.add_argument("--degree", type=float, default=20.0)
    g.add_argument("--within", type=float, default=0.6)
    g.add_argument("--between", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out-p", required=True)
    g.add_argument("--out-a", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("sample", help="egocentric sample of a network, written as a view file")
    s.add_argument("--adjacency")
    s.add_argument("--edge-list")
    s.add_argument("--one-based", action="store_true")
    s.add_argument("--mechanism", choices=MECHANISMS, default="mcar")
    s.add_argument("--rho", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)

    i = sub.add_parser("impute", help="estimate the missing block from a view")
    i.add_argument("--view", required=True)
    i.add_argument("--estimator", choices=ESTIMATOR_NAMES, default="le")
    i.add_argument("--truncate", type=_bool_arg, default=True)
    i.add_argument("--full", action="store_true", help="estimate the whole matrix (original node order)")
    i.add_argument("--out", required=True)
    add_rank_opts(i, 5)
    i.set_defaults(func=cmd_impute)

    t = sub.add_parser("tune-rank", help="cross-validated rank selection")
    t.add_argument("--view", required=True)
    t.add_argument("--estimator", choices=ESTIMATOR_NAMES, default="le")
    t.add_argument("--out", help="CSV trace of per-repeat AUCs")
    add_rank_opts(t, "cv")
    t.set_defaults(func=cmd_tune_rank)

    e = sub.add_parser("evaluate", help="MSE against P22 and/or AUC against A22")
    e.add_argument("--view", required=True)
    e.add_argument("--estimate", required=True)
    e.add_argument("--probability", help="full P or its hidden block")
    e.add_argument("--adjacency", help="full A or its hidden block")
    e.set_defaults(func=cmd_evaluate)

    r = sub.add_parser("roc", help="ROC curve points of an estimate")
    r.add_argument("--view", required=True)
    r.add_argument("--estimate", required=True)
    r.add_argument("--adjacency", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_roc)

    x = sub.add_parser("experiment", help="run a Monte-Carlo experiment grid")
    x.add_argument("--config")
    x.add_argument("--seed", type=int)
    x.add_argument("--threads", type=int)
    x.add_argument("--out")
    x.add_argument("--rank", type=_rank_arg)
    x.add_argument("--truncate", type=_bool_arg)
    x.add_argument("--replications", type=int)
    x.add_argument("--one-based", action="store_true")
    x.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        # parse errors carry a file position, so they are I/O failures
        if isinstance(exc, formats.ParseError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        if isinstance(exc, (UndefinedAUCError, np.linalg.LinAlgError)):
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
