"""Weighted tardiness scheduling on identical parallel machines.

A library and benchmark harness around one family of iterated local
search algorithms: pairwise interchange neighborhoods on priority
sequences, per-machine dynasearch, and a matching-based neighborhood
moving jobs between machine pairs simultaneously.
"""

from .model import Instance, Job, Schedule, dispatch, edd_sequence, evaluate
from .instances import (
    GRID,
    GenParams,
    InstanceFormatError,
    SplitMix64,
    adapt_to_parallel,
    due_date_interval,
    format_instance,
    format_orlib,
    generate,
    generate_instance,
    instance_seeds,
    load_orlib,
    parse_instance,
    read_instance,
    write_instance,
)
from .gpi import (
    BACKWARD,
    FORWARD,
    OPS_ALL,
    OPS_BASIC,
    SWAP,
    TWIST,
    GpiMove,
    apply_gpi,
    explore_n1,
    full_descent_n1,
)
from .dynasearch import dynasearch_descent, dynasearch_step
from .machine_pairs import (
    ImprovementGraph,
    PairMove,
    best_matching,
    best_pair_move,
    build_improvement_graph,
    full_descent_n2,
    matching_weight,
    n2_step,
)
from .ils import (
    MODES,
    RunReport,
    SearchConfig,
    kick,
    linearize,
    run_a1,
    run_a2,
    run_a3,
    search_n3,
    solve,
)
from .exact import (
    OracleResult,
    enumerate_independent_move_sets,
    enumerate_pair_moves,
    solve_exact,
)

__version__ = "0.1.0"

__all__ = [
    "Instance", "Job", "Schedule", "dispatch", "edd_sequence", "evaluate",
    "GRID", "GenParams", "InstanceFormatError", "SplitMix64",
    "adapt_to_parallel", "due_date_interval", "format_instance",
    "format_orlib", "generate", "generate_instance", "instance_seeds",
    "load_orlib", "parse_instance", "read_instance", "write_instance",
    "SWAP", "FORWARD", "BACKWARD", "TWIST", "OPS_BASIC", "OPS_ALL",
    "GpiMove", "apply_gpi", "explore_n1", "full_descent_n1",
    "dynasearch_step", "dynasearch_descent",
    "PairMove", "ImprovementGraph", "best_pair_move",
    "build_improvement_graph", "best_matching", "matching_weight",
    "n2_step", "full_descent_n2",
    "MODES", "SearchConfig", "RunReport", "kick", "linearize",
    "search_n3", "run_a1", "run_a2", "run_a3", "solve",
    "OracleResult", "solve_exact", "enumerate_independent_move_sets",
    "enumerate_pair_moves",
    "__version__",
]
