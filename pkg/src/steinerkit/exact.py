"""Exact Steiner trees by dynamic programming over terminal subsets.

Classic Dreyfus-Wagner: cost[S][v] is the weight of an optimal tree spanning
the terminal subset S plus vertex v.  Subsets combine by splitting at a
branch vertex and closing under shortest paths; the closure runs as a
Dijkstra seeded with the split costs, so only per-terminal distance rows are
ever materialized.  Exponential in the terminal count, which is capped."""
from __future__ import annotations

import heapq

from .graph import GraphError, InfeasibleError, Instance, SolutionTree, WorkingGraph, finalize_solution
from .paths import dijkstra_tree, walk_to_source

MAX_TERMINALS = 14

INF = float("inf")


def dreyfus_wagner(inst: Instance) -> SolutionTree:
    """Optimal Steiner tree; raises for more than MAX_TERMINALS terminals."""
    terms = sorted(inst.terminals)
    if len(terms) > MAX_TERMINALS:
        raise GraphError(
            f"exact solver handles at most {MAX_TERMINALS} terminals, got {len(terms)}"
        )
    if len(terms) == 1:
        return SolutionTree((), 0)
    g = WorkingGraph.from_instance(inst)
    n = inst.vertex_count
    t0, others = terms[0], terms[1:]

    rows: dict[int, dict[int, int]] = {}
    row_parent: dict[int, dict] = {}
    for t in terms:
        dist, parent = dijkstra_tree(g, t)
        rows[t] = dist
        row_parent[t] = parent

    full = (1 << len(others)) - 1
    cost: dict[int, list[float]] = {}
    closure_parent: dict[int, dict[int, tuple[int, int] | None]] = {}
    split_at: dict[int, dict[int, int]] = {}
    for i, t in enumerate(others):
        mask = 1 << i
        col = [INF] * n
        for v, d in rows[t].items():
            col[v] = d
        cost[mask] = col

    for mask in range(1, full + 1):
        if mask.bit_count() < 2:
            continue
        base = [INF] * n
        chosen: dict[int, int] = {}
        sub = (mask - 1) & mask
        while sub:
            comp = mask ^ sub
            if sub <= comp:
                ca, cb = cost[sub], cost[comp]
                for v in range(n):
                    c = ca[v] + cb[v]
                    if c < base[v]:
                        base[v] = c
                        chosen[v] = sub
            sub = (sub - 1) & mask
        col, parent = _metric_closure(g, base)
        cost[mask] = col
        closure_parent[mask] = parent
        split_at[mask] = chosen

    answer = cost[full][t0]
    if answer == INF:
        raise InfeasibleError("terminals are not connected")

    bought: set[int] = set()

    def collect(mask: int, v: int) -> None:
        if mask.bit_count() == 1:
            t = others[mask.bit_length() - 1]
            for key in walk_to_source(row_parent[t], v):
                bought.update(g.edges[key].prov)
            return
        cur = v
        parent = closure_parent[mask]
        while parent[cur] is not None:
            prev, key = parent[cur]
            bought.update(g.edges[key].prov)
            cur = prev
        sub = split_at[mask][cur]
        collect(sub, cur)
        collect(mask ^ sub, cur)

    collect(full, t0)
    sol = finalize_solution(inst, bought)
    assert sol.weight == answer, "reconstructed tree does not match the optimum"
    return sol


def _metric_closure(g: WorkingGraph, base: list[float]):
    """Dijkstra seeded with the base costs; returns (costs, parents)."""
    n = len(base)
    best = list(base)
    parent: dict[int, tuple[int, int] | None] = {
        v: None for v in range(n) if base[v] < INF
    }
    heap = [(base[v], v) for v in range(n) if base[v] < INF]
    heapq.heapify(heap)
    done: set[int] = set()
    out = [INF] * n
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        out[v] = d
        for x, key in g.adj[v].items():
            nd = d + g.edges[key].weight
            if x not in done and nd < best[x]:
                best[x] = nd
                parent[x] = (v, key)
                heapq.heappush(heap, (nd, x))
    return out, parent
