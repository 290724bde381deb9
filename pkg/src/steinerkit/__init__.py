"""Steiner tree approximation toolkit.

Parsing, safe reductions, star-contraction heuristics with early-stopping
best-star search, terminal-MST and triple-improvement finishers, an exact
solver for few terminals, and a checkpointed experiment harness.
"""
from .exact import dreyfus_wagner
from .graph import (
    GraphError, InfeasibleError, Instance, SolutionTree, WorkingGraph,
    finalize_solution, terminals_connected,
)
from .harness import CheckpointRecord, aggregate, run_experiment
from .mst import mst_plus, mst_terminals
from .paths import WorkCounter, dijkstra_stream, dijkstra_tree, voronoi_partition
from .reductions import (
    ReductionReport, contract_cheapest_terminal_edge, contract_terminal_pendant,
    contract_zero_edges, preprocessing, quick_heuristics,
    remove_degree_low_steiner, spt_full, spt_two_edges, tdt,
)
from .solve import FINISHERS, run_meta
from .stars import (
    Star, StarCache, contract_all_stars, contract_star, find_best_star,
    find_best_star_at, find_improved_star_at, star_ratio,
)
from .stp import ParseError, hanan_grid_instance, parse_stp, write_solution, write_stp
from .zelikovsky import precompute_triples, zelikovsky, zelikovsky_minus, zelikovsky_plus

__all__ = [name for name in dir() if not name.startswith("_")]
