"""End-to-end solving: preprocess, optionally contract stars, finish, and
map everything back to original edges."""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Instance, SolutionTree, WorkingGraph, finalize_solution
from .mst import mst_plus, mst_terminals
from .paths import WorkCounter
from .reductions import ReductionReport, preprocessing
from .stars import RoundRecord, contract_all_stars
from .zelikovsky import provenance, zelikovsky, zelikovsky_minus, zelikovsky_plus


def finish_mst(g: WorkingGraph) -> set[int]:
    _w, keys = mst_terminals(g)
    return provenance(g, keys)


def finish_mst_plus(g: WorkingGraph) -> set[int]:
    _w, keys = mst_plus(g)
    return provenance(g, keys)


FINISHERS = {
    "mst": finish_mst,
    "mst_plus": finish_mst_plus,
    "zelikovsky": zelikovsky,
    "zelikovsky_minus": zelikovsky_minus,
    "zelikovsky_plus": zelikovsky_plus,
}


@dataclass
class MetaStats:
    report: ReductionReport | None
    rounds: list[RoundRecord] = field(default_factory=list)
    counter: WorkCounter = field(default_factory=WorkCounter)


def run_meta(inst: Instance, finisher: str = "mst", mode: str = "basic",
             k: int | None = None, tau: int = 1, contract: bool = True,
             preprocess: bool = True, use_cache: bool = True,
             g: WorkingGraph | None = None) -> tuple[SolutionTree, MetaStats]:
    """Solve an instance: reduce, contract best stars, finish, finalize.

    ``contract=False`` runs the finisher directly on the reduced graph; ``g``
    lets callers supply an already-built working graph (it is mutated)."""
    if finisher not in FINISHERS:
        raise ValueError(f"unknown finisher {finisher!r}")
    if g is None:
        inst.validate()
        g = WorkingGraph.from_instance(inst)
    report = preprocessing(g) if preprocess else None
    stats = MetaStats(report)
    if contract:
        stats.rounds = contract_all_stars(
            g, mode=mode, k=k, tau=tau,
            counter=stats.counter, use_cache=use_cache,
        )
    added = FINISHERS[finisher](g)
    sol = finalize_solution(inst, g.bought | added)
    return sol, stats
