"""Shortest-path scans over working graphs.

All scans settle vertices in lexicographic (distance, vertex id) order so
equal-weight runs are reproducible, and optionally count settled vertices
into a :class:`WorkCounter`.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass


@dataclass
class WorkCounter:
    visited_vertices: int = 0
    ratios_recalculated: int = 0

    def merge(self, other: "WorkCounter") -> None:
        self.visited_vertices += other.visited_vertices
        self.ratios_recalculated += other.ratios_recalculated


def _source_map(sources) -> dict[int, int]:
    if isinstance(sources, dict):
        return sources
    if isinstance(sources, int):
        return {sources: 0}
    return {s: 0 for s in sources}


def dijkstra_stream(g, sources, cutoff=None, counter: WorkCounter | None = None):
    """Yield (vertex, distance) pairs in nondecreasing distance order.

    ``sources`` is a vertex, an iterable of vertices, or a mapping
    vertex -> starting offset.  Settling stops after the cutoff is exceeded
    (vertices at exactly the cutoff are still yielded).
    """
    src = _source_map(sources)
    best: dict[int, int] = dict(src)
    heap = sorted((d, v) for v, d in src.items())
    heapq.heapify(heap)
    done: set[int] = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        if cutoff is not None and d > cutoff:
            return
        done.add(v)
        if counter is not None:
            counter.visited_vertices += 1
        yield v, d
        for x, key in g.adj[v].items():
            nd = d + g.edges[key].weight
            if nd < best.get(x, nd + 1):
                best[x] = nd
                heapq.heappush(heap, (nd, x))


def dijkstra_tree(g, sources, cutoff=None, counter: WorkCounter | None = None):
    """Full scan with parents: returns (dist, parent) dicts.

    parent[v] = (previous vertex, working edge key); sources have parent
    None.  Parents update only on strict improvement, so among equal-length
    paths the one through the earliest-settled predecessor wins.
    """
    src = _source_map(sources)
    best: dict[int, int] = dict(src)
    parent: dict[int, tuple[int, int] | None] = {v: None for v in src}
    heap = sorted((d, v) for v, d in src.items())
    heapq.heapify(heap)
    dist: dict[int, int] = {}
    while heap:
        d, v = heapq.heappop(heap)
        if v in dist:
            continue
        if cutoff is not None and d > cutoff:
            break
        dist[v] = d
        if counter is not None:
            counter.visited_vertices += 1
        for x, key in g.adj[v].items():
            nd = d + g.edges[key].weight
            if x not in dist and nd < best.get(x, nd + 1):
                best[x] = nd
                parent[x] = (v, key)
                heapq.heappush(heap, (nd, x))
    return dist, parent


def walk_to_source(parent, v) -> list[int]:
    """Edge keys of the parent path from ``v`` back to its source."""
    keys = []
    while True:
        p = parent[v]
        if p is None:
            return keys
        v, key = p
        keys.append(key)


@dataclass
class VoronoiPartition:
    """Closest-terminal regions: assignment, distances, and parent paths."""

    region: dict[int, int]
    dist: dict[int, int]
    parent: dict[int, tuple[int, int] | None]


def voronoi_partition(g, terminals=None, counter: WorkCounter | None = None) -> VoronoiPartition:
    """Assign every reachable vertex to its closest terminal.

    Ties go to the smaller terminal id: the scan settles by lexicographic
    (distance, region label, vertex id) and relaxes with (distance, label)
    pairs, updating parents only on strict improvement.
    """
    terms = sorted(g.terminals if terminals is None else terminals)
    best: dict[int, tuple[int, int]] = {t: (0, t) for t in terms}
    parent: dict[int, tuple[int, int] | None] = {t: None for t in terms}
    heap = [(0, t, t) for t in terms]
    heapq.heapify(heap)
    region: dict[int, int] = {}
    dist: dict[int, int] = {}
    while heap:
        d, lbl, v = heapq.heappop(heap)
        if v in region:
            continue
        region[v] = lbl
        dist[v] = d
        if counter is not None:
            counter.visited_vertices += 1
        for x, key in g.adj[v].items():
            cand = (d + g.edges[key].weight, lbl)
            if x not in region and cand < best.get(x, (cand[0] + 1, 0)):
                best[x] = cand
                parent[x] = (v, key)
                heapq.heappush(heap, (cand[0], lbl, x))
    return VoronoiPartition(region, dist, parent)
