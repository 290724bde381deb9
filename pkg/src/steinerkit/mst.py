"""Terminal spanning tree heuristics on the working graph.

``mst_terminals`` realizes the classic 2-approximation: grow closest-terminal
regions, build the auxiliary terminal graph whose edge weights are shortest
region-to-region routes, take its MST, expand every auxiliary edge back into
graph edges, take the MST of the expansion, and prune nonterminal leaves.
``mst_plus`` re-runs it with the solution's branch vertices added as
terminals while that strictly improves the weight.
"""
from __future__ import annotations

from .graph import InfeasibleError, UnionFind, WorkingGraph
from .paths import voronoi_partition, walk_to_source


def _aux_edges(g: WorkingGraph, vor) -> list[tuple[int, int, int, int]]:
    """Deduplicated auxiliary edges (weight, t1, t2, crossing edge key)."""
    best: dict[tuple[int, int], tuple[int, int]] = {}
    for key in sorted(g.edges):
        e = g.edges[key]
        if e.u not in vor.region or e.v not in vor.region:
            continue
        a, b = vor.region[e.u], vor.region[e.v]
        if a == b:
            continue
        pair = (a, b) if a < b else (b, a)
        w = vor.dist[e.u] + e.weight + vor.dist[e.v]
        cand = (w, key)
        if pair not in best or cand < best[pair]:
            best[pair] = cand
    return sorted((w, a, b, key) for (a, b), (w, key) in best.items())


def _expand(g: WorkingGraph, vor, crossing_key: int) -> list[int]:
    """Graph edge keys realizing one auxiliary edge."""
    e = g.edges[crossing_key]
    keys = [crossing_key]
    keys.extend(walk_to_source(vor.parent, e.u))
    keys.extend(walk_to_source(vor.parent, e.v))
    return keys


def _prune_tree(g: WorkingGraph, keys: set[int], keep_vertices) -> set[int]:
    degree: dict[int, int] = {}
    adj: dict[int, list[tuple[int, int]]] = {}
    for k in keys:
        e = g.edges[k]
        degree[e.u] = degree.get(e.u, 0) + 1
        degree[e.v] = degree.get(e.v, 0) + 1
        adj.setdefault(e.u, []).append((e.v, k))
        adj.setdefault(e.v, []).append((e.u, k))
    leaves = [v for v, d in degree.items() if d == 1 and v not in keep_vertices]
    while leaves:
        v = leaves.pop()
        for x, k in adj[v]:
            if k in keys:
                keys.discard(k)
                degree[x] -= 1
                degree[v] -= 1
                if degree[x] == 1 and x not in keep_vertices:
                    leaves.append(x)
    return keys


def mst_terminals(g: WorkingGraph, terminals=None) -> tuple[int, set[int]]:
    """Steiner tree from the auxiliary terminal MST.

    Returns (weight, set of working edge keys).  ``terminals`` overrides the
    graph's terminal set (used by improvement rounds and Zelikovsky
    finishes).  Raises if the terminals are not all connected."""
    terms = sorted(g.terminals if terminals is None else terminals)
    if len(terms) <= 1:
        return 0, set()
    vor = voronoi_partition(g, terms)
    for t in terms:
        if t not in vor.region:
            raise InfeasibleError("terminals are not connected")
    aux = _aux_edges(g, vor)
    uf = UnionFind(terms)
    joined = 0
    union_keys: set[int] = set()
    for w, a, b, key in aux:
        if uf.union(a, b):
            joined += 1
            union_keys.update(_expand(g, vor, key))
    if joined != len(terms) - 1:
        raise InfeasibleError("terminals are not connected")
    tree = _spanning_subtree(g, union_keys)
    tree = _prune_tree(g, tree, set(terms))
    return g.total_weight(tree), tree


def _spanning_subtree(g: WorkingGraph, keys: set[int]) -> set[int]:
    """MST of the subgraph given by ``keys`` (ties toward smaller keys)."""
    uf = UnionFind()
    tree: set[int] = set()
    for k in sorted(keys, key=lambda k: (g.edges[k].weight, k)):
        e = g.edges[k]
        uf.add(e.u)
        uf.add(e.v)
        if uf.union(e.u, e.v):
            tree.add(k)
    return tree


def mst_plus(g: WorkingGraph, terminals=None) -> tuple[int, set[int]]:
    """Iterate the terminal MST with branch vertices pinned as terminals.

    Each round marks the current solution's nonterminal vertices of degree
    at least 3, reruns the construction with them added, and keeps the
    result only if strictly lighter."""
    real = set(g.terminals if terminals is None else terminals)
    weight, tree = mst_terminals(g, real)
    while True:
        marked = _branch_vertices(g, tree, real)
        if not marked:
            return weight, tree
        try:
            new_weight, new_tree = mst_terminals(g, real | marked)
        except InfeasibleError:
            return weight, tree
        new_tree = _prune_tree(g, new_tree, real)
        new_weight = g.total_weight(new_tree)
        if new_weight < weight:
            weight, tree = new_weight, new_tree
        else:
            return weight, tree


def _branch_vertices(g: WorkingGraph, tree, real) -> set[int]:
    degree: dict[int, int] = {}
    for k in tree:
        e = g.edges[k]
        degree[e.u] = degree.get(e.u, 0) + 1
        degree[e.v] = degree.get(e.v, 0) + 1
    return {v for v, d in degree.items() if d >= 3 and v not in real}
