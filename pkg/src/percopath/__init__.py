"""Lazy edge-percolation of minimum-degree-k hosts.

DFS exploration with tested/untested bookkeeping, long path and long cycle
constructions, pseudo-clique set machinery, and a Monte Carlo harness with an
exact small-instance oracle.
"""

from .graphs import (
    GraphError,
    GenerationError,
    GraphView,
    ExplicitGraph,
    GeneratorSpec,
    build_explicit,
    gen_complete,
    gen_complete_bipartite,
    gen_clique_chain,
    gen_random_regular,
    gen_pseudo_clique,
    min_degree,
    load_edge_list,
    save_edge_list,
)
from .oracle import (
    OracleError,
    PercolationOracle,
    SprinkleSet,
    split_sprinkle,
    materialize,
    untested_incident,
    derive_seed,
)
from .dfs import (
    RootPolicy,
    StopCondition,
    RootedForest,
    DfsTrace,
    run_dfs,
    check_properties,
    stack_path,
    export_trace,
    import_trace,
)
from .forest import (
    ancestor_at,
    height,
    heights_all,
    tree_distance,
    desc_within_batch,
    VertexClassification,
    classify,
    back_edge_sets,
)
from .bounds import chernoff_bound, eval_bound, brute_longest
from .results import CycleResult, PathResult
from .cycles import find_long_cycle, select_vertical_path, zigzag_splice
from .paths import path_from_set, bipartite_long_path, find_long_path
from .pseudoclique import (
    degree_classes,
    compute_W,
    compute_X,
    two_core,
    compute_A,
    check_lemma51,
    analyze_pseudo_clique,
    PseudoCliqueReport,
)
from .validate import validate_cycle, validate_path
from .harness import ExperimentConfig, TrialRecord, run_trials

__version__ = "0.1.0"
