"""Best-star search with caching, star contraction, and the contraction loop.

A star is a center vertex with two or more terminals, rated by the sum of
its center-terminal connection costs divided by (terminal count - 1); lower
is better.  Ties prefer more terminals, then the smaller center id, then the
lexicographically smallest terminal tuple.  The per-vertex search follows a
single distance scan and stops as soon as the running ratio can no longer
improve; a scan whose distance exceeds twice the best ratio found so far
aborts early and records that distance as a certified lower bound for the
vertex.  Results persist between rounds and are invalidated by one truncated
scan around each contraction.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .graph import WorkingGraph
from .paths import WorkCounter, dijkstra_stream, dijkstra_tree, walk_to_source


@dataclass(frozen=True)
class Star:
    center: int
    terminals: tuple[int, ...]
    legs: tuple[int, ...]
    weight: int
    ratio: Fraction
    tree: tuple[int, ...] | None = None

    def sort_key(self):
        return (self.ratio, -len(self.terminals), self.center,
                tuple(sorted(self.terminals)))


def star_ratio(g: WorkingGraph, center: int, terminals) -> Fraction:
    """Ratio of one explicit star, from a plain distance scan."""
    terms = sorted(terminals)
    if len(terms) < 2:
        raise ValueError("a star needs at least two terminals")
    dist, _ = dijkstra_tree(g, center)
    total = 0
    for t in terms:
        if t not in dist:
            raise ValueError(f"terminal {t} unreachable from {center}")
        total += dist[t]
    return Fraction(total, len(terms) - 1)


@dataclass
class CacheEntry:
    kind: str  # "star", "bound", or "none"
    star: Star | None
    bound: int
    radius: int


class StarCache:
    """Per-vertex search results kept across contraction rounds.

    A "star" entry is reused directly; a "bound" entry skips the rescan while
    the bound exceeds what could still win; a "none" entry (fewer than two
    reachable terminals) stays valid forever, since contractions never add
    terminals to a component.
    """

    def __init__(self) -> None:
        self.entries: dict[int, CacheEntry] = {}

    def invalidate(self, g: WorkingGraph, z: int, removed,
                   counter: WorkCounter | None = None) -> None:
        """Drop entries whose scan region the contraction into z touched."""
        for v in removed:
            self.entries.pop(v, None)
        radii = [e.radius for v, e in self.entries.items()
                 if e.kind != "none" and v in g.adj]
        if not radii:
            self.entries.pop(z, None)
            return
        cutoff = max(radii)
        for x, d in dijkstra_stream(g, z, cutoff=cutoff, counter=counter):
            entry = self.entries.get(x)
            if entry is not None and entry.kind != "none" and entry.radius >= d:
                del self.entries[x]


def find_best_star_at(g: WorkingGraph, v: int, current: Fraction | None,
                      counter: WorkCounter | None = None,
                      k: int | None = None) -> CacheEntry:
    """Scan outward from v for the best star centred there.

    Pops vertices in distance order, accepting every settled terminal; stops
    once the running ratio beats the next distance (no extension can help),
    or returns a lower bound when the distance passes twice the round's best
    ratio.  With a cap k the star is cut off at k terminals."""
    if counter is not None:
        counter.ratios_recalculated += 1
    terms: list[int] = []
    legs: list[int] = []
    weight = 0
    ratio: Fraction | None = None
    last_d = 0

    def as_star(radius: int) -> CacheEntry:
        star = Star(v, tuple(terms), tuple(legs), weight, ratio)
        return CacheEntry("star", star, 0, radius)

    for x, d in dijkstra_stream(g, v, counter=counter):
        last_d = d
        if ratio is not None and ratio < d:
            return as_star(d)
        if current is not None and d > 2 * current:
            return CacheEntry("bound", None, d, d)
        if x in g.terminals:
            terms.append(x)
            legs.append(d)
            weight += d
            if len(terms) >= 2:
                ratio = Fraction(weight, len(terms) - 1)
                if k is not None and len(terms) == k:
                    return as_star(d)
    if ratio is not None:
        return as_star(last_d)
    return CacheEntry("none", None, 0, 0)


def find_improved_star_at(g: WorkingGraph, v: int, current: Fraction | None,
                          counter: WorkCounter | None = None,
                          k: int | None = None) -> CacheEntry:
    """Best star centred at v where each accepted terminal is connected to
    the whole tree built so far, not just to the center.

    After each acceptance the scan restarts with the grown tree as source,
    so later terminals pay only their marginal connection cost.  A terminal
    is accepted while that marginal cost does not exceed the current ratio
    (the first two are always accepted)."""
    if counter is not None:
        counter.ratios_recalculated += 1
    tree_vertices = {v}
    tree_keys: list[int] = []
    terms: list[int] = []
    legs: list[int] = []
    weight = 0
    max_pop = 0
    if v in g.terminals:
        terms.append(v)
        legs.append(0)

    def as_star(ratio: Fraction, radius: int) -> CacheEntry:
        star = Star(v, tuple(terms), tuple(legs), weight, ratio,
                    tree=tuple(tree_keys))
        return CacheEntry("star", star, 0, radius)

    while True:
        best = {x: 0 for x in tree_vertices}
        parent: dict[int, tuple[int, int] | None] = {x: None for x in tree_vertices}
        heap = [(0, x) for x in sorted(tree_vertices)]
        heapq.heapify(heap)
        done: set[int] = set()
        grew = False
        while heap:
            d, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            if counter is not None:
                counter.visited_vertices += 1
            max_pop = max(max_pop, d)
            ratio = Fraction(weight, len(terms) - 1) if len(terms) >= 2 else None
            if ratio is not None and ratio < d:
                return as_star(ratio, weight + max_pop)
            if current is not None and d > 2 * current:
                return CacheEntry("bound", None, d, weight + max_pop)
            if x in g.terminals and x not in tree_vertices:
                path = walk_back(parent, x)
                tree_keys.extend(key for _p, key in path)
                tree_vertices.add(x)
                tree_vertices.update(p for p, _key in path)
                terms.append(x)
                legs.append(d)
                weight += d
                if k is not None and len(terms) == k:
                    return as_star(Fraction(weight, len(terms) - 1),
                                   weight + max_pop)
                grew = True
                break
            for y, key in g.adj[x].items():
                nd = d + g.edges[key].weight
                if y not in done and nd < best.get(y, nd + 1):
                    best[y] = nd
                    parent[y] = (x, key)
                    heapq.heappush(heap, (nd, y))
        if not grew:
            if len(terms) >= 2:
                return as_star(Fraction(weight, len(terms) - 1),
                               weight + max_pop)
            return CacheEntry("none", None, 0, 0)


def walk_back(parent, x) -> list[tuple[int, int]]:
    """(vertex, edge key) steps from x back to a scan source."""
    steps = []
    while True:
        entry = parent[x]
        if entry is None:
            return steps
        x, key = entry
        steps.append((x, key))


def _bound_skips(mode: str, bound: int, best: Star | None) -> bool:
    if best is None:
        return False
    if mode == "basic":
        return bound > best.ratio
    return 2 * best.ratio < bound


def find_best_star(g: WorkingGraph, cache: StarCache | None = None,
                   counter: WorkCounter | None = None, mode: str = "basic",
                   k: int | None = None) -> Star | None:
    """Best star over all centers, reusing cached per-vertex results."""
    search = find_best_star_at if mode == "basic" else find_improved_star_at
    best: Star | None = None
    for v in sorted(g.adj):
        entry = cache.entries.get(v) if cache is not None else None
        if entry is not None:
            if entry.kind == "none":
                continue
            if entry.kind == "star":
                if best is None or entry.star.sort_key() < best.sort_key():
                    best = entry.star
                continue
            if _bound_skips(mode, entry.bound, best):
                continue
        current = best.ratio if best is not None else None
        entry = search(g, v, current, counter, k)
        if cache is not None:
            cache.entries[v] = entry
        if entry.kind == "star":
            if best is None or entry.star.sort_key() < best.sort_key():
                best = entry.star
    return best


def star_tree_keys(g: WorkingGraph, star: Star) -> list[int]:
    """Working edge keys realizing the star's connections as one tree."""
    if star.tree is not None:
        return sorted(set(star.tree))
    _dist, parent = dijkstra_tree(g, star.center, cutoff=max(star.legs))
    keys: set[int] = set()
    for t in star.terminals:
        keys.update(walk_to_source(parent, t))
    return _kruskal_keys(g, keys)


def _kruskal_keys(g: WorkingGraph, keys) -> list[int]:
    from .graph import UnionFind

    uf = UnionFind()
    tree = []
    for key in sorted(keys, key=lambda kk: (g.edges[kk].weight, kk)):
        e = g.edges[key]
        uf.add(e.u)
        uf.add(e.v)
        if uf.union(e.u, e.v):
            tree.append(key)
    return tree


def apply_star_tree(g: WorkingGraph, keys) -> tuple[int, list[int]]:
    """Buy the tree edges' provenance and merge their span into one vertex.

    Returns the surviving vertex and the ids merged away.  Works from
    recorded keys, so a later replay on an equal copy reproduces the same
    state."""
    pairs = []
    for key in sorted(keys):
        e = g.edges[key]
        g.bought.update(e.prov)
        pairs.append((e.u, e.v))
    live: dict[int, int] = {}

    def resolve(x: int) -> int:
        while x in live:
            x = live[x]
        return x

    removed: list[int] = []
    z = None
    for u0, v0 in pairs:
        u, v = resolve(u0), resolve(v0)
        if u == v:
            z = u
            continue
        key = g.edge_between(u, v)
        z = g.contract_edge(key, buy=False)
        gone = u if z == v else v
        live[gone] = z
        removed.append(gone)
    return z, removed


def contract_star(g: WorkingGraph, star: Star) -> tuple[int, list[int], list[int]]:
    """Realize the star as a tree, buy it, and contract it into one terminal."""
    keys = star_tree_keys(g, star)
    z, removed = apply_star_tree(g, keys)
    return z, removed, keys


@dataclass
class RoundRecord:
    star: Star
    tree_keys: tuple[int, ...]
    merged_into: int
    visited_after: int
    recalculated_after: int


def contract_all_stars(g: WorkingGraph, mode: str = "basic",
                       k: int | None = None, tau: int = 1,
                       counter: WorkCounter | None = None,
                       use_cache: bool = True) -> list[RoundRecord]:
    """Contract best stars until at most tau terminals remain or none exists.

    Mutates g (contractions buy into g.bought) and returns one record per
    round; the records replay deterministically via apply_star_tree.  The
    final counter state includes the closing search that found no star."""
    if counter is None:
        counter = WorkCounter()
    cache = StarCache() if use_cache else None
    records: list[RoundRecord] = []
    while len(g.terminals) > tau:
        star = find_best_star(g, cache, counter, mode, k)
        if star is None:
            break
        z, removed, keys = contract_star(g, star)
        if cache is not None:
            cache.invalidate(g, z, removed, counter)
        records.append(RoundRecord(star, tuple(keys), z,
                                   counter.visited_vertices,
                                   counter.ratios_recalculated))
    if records:
        records[-1].visited_after = counter.visited_vertices
        records[-1].recalculated_after = counter.ratios_recalculated
    return records
