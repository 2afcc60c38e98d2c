"""Bandwidth-delay-hop constrained routing: solver, baselines and instance generator."""

from .baselines import (
    BaselineStrategy,
    KspaConfig,
    Objective,
    constrained_path,
    k_shortest_paths,
    kspa_solve,
    sequential_solve,
)
from .errors import (
    EndpointMismatch,
    FormatError,
    GenerationFailure,
    InsufficientResidual,
    InvalidInstance,
    NoSuchEdge,
    NotSimple,
    RoutingError,
    TooLarge,
    UnknownDemand,
    ZeroResidual,
)
from .generator import INSTANCES_A, INSTANCES_B, GeneratorConfig, PlantedInstance, generate_instance, plant_path
from .model import (
    Demand,
    Edge,
    Network,
    Path,
    ResidualState,
    Solution,
    VerificationReport,
    is_locally_feasible,
    path_from_edges,
    path_metrics,
    total_throughput,
    verify_solution,
)
from .oracle import brute_force_optimum
from .ordering import SortRule, order_demands, sort_key
from .paths import BfsTree, CandidateSet, Direction, compute_candidates, half_bfs
from .selection import RankedCandidates, Selection, alt_select, path_weight, select_and_rank
from .solver import IterationTrace, SolverConfig, commit_path, solve

__version__ = "0.1.0"
