"""Direct Normalized-Cut clustering.

Coordinate descent on the discrete objective with deterministic
nearest-neighbor hierarchical initialization, plus graph construction,
cluster-count estimation and evaluation utilities.
"""

__version__ = "0.1.0"

from .errors import (
    AllZeroRow,
    AsymmetricInput,
    ConsistencyError,
    DomainError,
    EmptyCluster,
    FastNcutError,
    InputError,
    InstanceTooLarge,
    InvalidIndex,
    IsolatedNode,
    KTooLarge,
    LengthMismatch,
    ParseError,
    TargetTooLarge,
    TooFewCandidates,
    ZeroSigma,
)
from .graph import SparseSymGraph, check_symmetric, from_arrays, from_dense, from_edges, neighbors
from .mmio import read_matrix_market, write_matrix_market
from .build import knn_index, self_tuning_affinity
from .solver import (
    ClusterResult,
    Labeling,
    SolverConfig,
    SolverState,
    apply_move,
    cluster_affinity,
    init_state,
    ncut_objective,
    score_candidates,
    solve,
    sweep,
)
from .n2hi import ClusterHierarchy, build_hierarchy, coarsen, first_neighbor_partition, initialize, refine
from .model_select import GapProfile, profile, select
from .metrics import accuracy, ari, nmi
from .oracle import check_coordinatewise_optimal, exhaustive_best


def cluster(graph, c, config=None):
    """Initialize with the nearest-neighbor hierarchy and solve."""
    return solve(graph, initialize(graph, c), config)
