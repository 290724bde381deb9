"""Weighted undirected graphs with terminals, contraction, and provenance.

The working graph is the mutable object every reduction and contraction
operates on.  Each working edge remembers the original edge ids whose path it
represents, so any set of working edges maps back to edges of the parsed
instance.  Bought original edges accumulate in ``bought`` and are turned into
a tree by :func:`finalize_solution`.
"""
from __future__ import annotations

from dataclasses import dataclass


class GraphError(ValueError):
    pass


class InfeasibleError(GraphError):
    """The bought edges cannot span all terminals."""


@dataclass(frozen=True)
class Instance:
    """Immutable parsed instance: vertices 0..n-1, simple edges, terminals."""

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    terminals: frozenset[int]

    def validate(self) -> None:
        n = self.vertex_count
        if n < 1:
            raise GraphError("instance needs at least one vertex")
        seen: set[tuple[int, int]] = set()
        for u, v, w in self.edges:
            if not (0 <= u < v < n):
                raise GraphError(f"bad edge endpoints ({u}, {v})")
            if w < 0:
                raise GraphError(f"negative edge weight {w}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if not self.terminals:
            raise GraphError("instance needs at least one terminal")
        for t in self.terminals:
            if not 0 <= t < n:
                raise GraphError(f"terminal {t} out of range")

    def weight_of(self, edge_ids) -> int:
        return sum(self.edges[i][2] for i in edge_ids)


@dataclass
class WorkingEdge:
    u: int
    v: int
    weight: int
    prov: tuple[int, ...]

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u

    def tie_key(self) -> tuple[int, tuple[int, ...]]:
        # provenance sets of live edges are disjoint, so this is a total order
        return (self.weight, tuple(sorted(self.prov)))


class UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


class WorkingGraph:
    """Simple graph under vertex merges, suppressions, and deletions.

    Parallel edges created by a merge are deduplicated immediately, keeping
    the one with the smaller (weight, sorted provenance); a merged vertex
    takes the smaller of the two ids and is a terminal if either side was.
    """

    __slots__ = ("adj", "edges", "terminals", "groups", "bought", "_next_key")

    def __init__(self) -> None:
        self.adj: dict[int, dict[int, int]] = {}
        self.edges: dict[int, WorkingEdge] = {}
        self.terminals: set[int] = set()
        self.groups: dict[int, tuple[int, ...]] = {}
        self.bought: set[int] = set()
        self._next_key = 0

    @classmethod
    def from_instance(cls, inst: Instance) -> "WorkingGraph":
        g = cls()
        g.adj = {v: {} for v in range(inst.vertex_count)}
        g.groups = {v: (v,) for v in range(inst.vertex_count)}
        g.terminals = set(inst.terminals)
        for key, (u, v, w) in enumerate(inst.edges):
            g.edges[key] = WorkingEdge(u, v, w, (key,))
            g.adj[u][v] = key
            g.adj[v][u] = key
        g._next_key = len(inst.edges)
        return g

    def copy(self) -> "WorkingGraph":
        g = WorkingGraph()
        g.adj = {v: dict(nbrs) for v, nbrs in self.adj.items()}
        g.edges = {k: WorkingEdge(e.u, e.v, e.weight, e.prov)
                   for k, e in self.edges.items()}
        g.terminals = set(self.terminals)
        g.groups = dict(self.groups)
        g.bought = set(self.bought)
        g._next_key = self._next_key
        return g

    # -- queries ------------------------------------------------------------

    def vertices(self):
        return self.adj.keys()

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_between(self, u: int, v: int) -> int | None:
        return self.adj[u].get(v)

    def is_terminal(self, v: int) -> bool:
        return v in self.terminals

    def total_weight(self, keys) -> int:
        return sum(self.edges[k].weight for k in keys)

    def bought_weight(self, inst: Instance) -> int:
        return inst.weight_of(self.bought)

    # -- mutations ----------------------------------------------------------

    def delete_edge(self, key: int) -> None:
        e = self.edges.pop(key)
        del self.adj[e.u][e.v]
        del self.adj[e.v][e.u]

    def delete_vertex(self, v: int) -> None:
        for x in list(self.adj[v]):
            self.delete_edge(self.adj[v][x])
        del self.adj[v]
        self.terminals.discard(v)
        self.groups.pop(v, None)

    def buy_edge(self, key: int) -> None:
        self.bought.update(self.edges[key].prov)

    def contract_edge(self, key: int, buy: bool = False) -> int:
        """Merge the endpoints of ``key`` into the smaller id; return it."""
        e = self.edges[key]
        z, gone = (e.u, e.v) if e.u < e.v else (e.v, e.u)
        if buy:
            self.bought.update(e.prov)
        self.delete_edge(key)
        for x in sorted(self.adj[gone]):
            f = self.adj[gone].pop(x)
            del self.adj[x][gone]
            ef = self.edges[f]
            existing = self.adj[z].get(x)
            if existing is not None:
                if ef.tie_key() < self.edges[existing].tie_key():
                    self.delete_edge(existing)
                else:
                    del self.edges[f]
                    continue
            if ef.u == gone:
                ef.u = z
            else:
                ef.v = z
            self.adj[z][x] = f
            self.adj[x][z] = f
        del self.adj[gone]
        if gone in self.terminals:
            self.terminals.discard(gone)
            self.terminals.add(z)
        self.groups[z] = self.groups[z] + self.groups.pop(gone)
        return z

    def to_instance(self) -> tuple["Instance", dict[int, int]]:
        """Export the live graph as a fresh instance.

        Returns (instance, old id -> new id map).  Provenance and bought
        edges are not part of the export."""
        order = sorted(self.adj)
        remap = {v: i for i, v in enumerate(order)}
        edges = tuple(sorted(
            (min(remap[e.u], remap[e.v]), max(remap[e.u], remap[e.v]), e.weight)
            for e in self.edges.values()
        ))
        inst = Instance(len(order), edges, frozenset(remap[t] for t in self.terminals))
        inst.validate()
        return inst, remap

    def suppress_vertex(self, v: int) -> int:
        """Replace a degree-2 nonterminal by one edge joining its neighbours."""
        if v in self.terminals or self.degree(v) != 2:
            raise GraphError(f"vertex {v} is not a suppressible degree-2 Steiner vertex")
        x, y = sorted(self.adj[v])
        ex = self.edges[self.adj[v][x]]
        ey = self.edges[self.adj[v][y]]
        weight = ex.weight + ey.weight
        prov = ex.prov + ey.prov
        self.delete_vertex(v)
        key = self._next_key
        self._next_key += 1
        new = WorkingEdge(x, y, weight, prov)
        existing = self.adj[x].get(y)
        if existing is not None:
            if new.tie_key() < self.edges[existing].tie_key():
                self.delete_edge(existing)
            else:
                return existing
        self.edges[key] = new
        self.adj[x][y] = key
        self.adj[y][x] = key
        return key


@dataclass(frozen=True)
class SolutionTree:
    edge_ids: tuple[int, ...]
    weight: int


def terminals_connected(inst: Instance) -> bool:
    uf = UnionFind(range(inst.vertex_count))
    for u, v, _w in inst.edges:
        uf.union(u, v)
    roots = {uf.find(t) for t in inst.terminals}
    return len(roots) == 1


def finalize_solution(inst: Instance, bought) -> SolutionTree:
    """Reduce a bought edge set to a tree spanning all terminals.

    Takes a minimum spanning forest of the bought subgraph, drops components
    without terminals, prunes nonterminal leaves, and checks that one
    component contains every terminal.
    """
    uf = UnionFind()
    kept: list[int] = []
    adj: dict[int, list[tuple[int, int]]] = {}
    for key in sorted(bought, key=lambda k: (inst.edges[k][2], k)):
        u, v, _w = inst.edges[key]
        uf.add(u)
        uf.add(v)
        if uf.union(u, v):
            kept.append(key)
            adj.setdefault(u, []).append((v, key))
            adj.setdefault(v, []).append((u, key))

    terminals = sorted(inst.terminals)
    for t in terminals:
        uf.add(t)
    root = uf.find(terminals[0])
    for t in terminals[1:]:
        if uf.find(t) != root:
            raise InfeasibleError("bought edges do not connect all terminals")

    keep = {k for k in kept if uf.find(inst.edges[k][0]) == root}
    degree: dict[int, int] = {}
    for k in keep:
        u, v, _w = inst.edges[k]
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    leaves = [v for v, d in degree.items() if d == 1 and v not in inst.terminals]
    removed: set[int] = set()
    while leaves:
        v = leaves.pop()
        for x, k in adj.get(v, ()):
            if k in keep and k not in removed:
                removed.add(k)
                keep.discard(k)
                degree[x] -= 1
                degree[v] -= 1
                if degree[x] == 1 and x not in inst.terminals:
                    leaves.append(x)
    ids = tuple(sorted(keep))
    return SolutionTree(ids, inst.weight_of(ids))
