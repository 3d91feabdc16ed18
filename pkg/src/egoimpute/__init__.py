"""Low-rank imputation of egocentrically sampled networks."""
from .estimators import (
    FullRecoveryResult,
    ImputationResult,
    ImputationSweep,
    impute,
    le_impute,
    le_plus_impute,
    recover_full,
    se_impute,
)
from .evaluation import MetricReport, RocCurve, auc_link_prediction, mse_block, time_fit
from .generators import (
    ModelSpec,
    gen_dcbm,
    gen_distance,
    gen_rdpg,
    gen_sbm,
    generate,
    sample_adjacency,
    scale_to_degree,
)
from .graph_core import AdjacencyMatrix, BlockPartition, EgoView, ProbabilityMatrix, extract_ego_view, partition
from .sampling import SamplingPlan, sample_mcar, sample_mnar
from .spectral import RankKFactorization, pinv_rank_k, reconstruct, truncated_svd
from .tuning import RankSelection, select_rank

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix", "BlockPartition", "EgoView", "FullRecoveryResult", "ImputationResult",
    "ImputationSweep", "MetricReport", "ModelSpec", "ProbabilityMatrix", "RankKFactorization",
    "RankSelection", "RocCurve", "SamplingPlan", "auc_link_prediction", "extract_ego_view",
    "gen_dcbm", "gen_distance", "gen_rdpg", "gen_sbm", "generate", "impute", "le_impute",
    "le_plus_impute", "mse_block", "partition", "pinv_rank_k", "recover_full", "reconstruct",
    "sample_adjacency", "sample_mcar", "sample_mnar", "scale_to_degree", "se_impute",
    "select_rank", "time_fit", "truncated_svd",
]
