"""Instance reductions: degree rules, shortest-path edge tests, and the
terminal-distance test.

Every rule either removes provably useless structure or buys provably safe
edges (recorded through the working graph's provenance), so the optimum of
the original instance equals the bought weight plus the optimum of the
reduced instance.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import UnionFind, WorkingGraph
from .paths import dijkstra_stream, dijkstra_tree

RULE_NAMES = (
    "zero_edge",
    "steiner_degree",
    "terminal_pendant",
    "terminal_edge",
    "spt_two_edges",
    "spt_full",
    "tdt",
)


@dataclass
class ReductionReport:
    applications: dict[str, int] = field(default_factory=dict)
    edges_bought: dict[str, int] = field(default_factory=dict)
    rounds: int = 0
    vertices_removed: int = 0
    edges_removed: int = 0

    def note(self, rule: str, bought: int = 0) -> None:
        self.applications[rule] = self.applications.get(rule, 0) + 1
        if bought:
            self.edges_bought[rule] = self.edges_bought.get(rule, 0) + bought

    def total_applications(self) -> int:
        return sum(self.applications.values())

    def csv_rows(self) -> list[str]:
        rows = ["rule,applications,edges_bought"]
        for rule in RULE_NAMES:
            rows.append(
                f"{rule},{self.applications.get(rule, 0)},{self.edges_bought.get(rule, 0)}"
            )
        return rows


def contract_zero_edges(g: WorkingGraph, report: ReductionReport | None = None) -> int:
    """Contract (and buy) every zero-weight edge."""
    count = 0
    while True:
        key = next(
            (k for k in sorted(g.edges) if g.edges[k].weight == 0),
            None,
        )
        if key is None:
            return count
        bought = len(g.edges[key].prov)
        g.contract_edge(key, buy=True)
        count += 1
        if report is not None:
            report.note("zero_edge", bought)


def remove_degree_low_steiner(g: WorkingGraph, report: ReductionReport | None = None) -> int:
    """Delete degree-<=1 Steiner vertices and suppress degree-2 ones."""
    count = 0
    changed = True
    while changed:
        changed = False
        for v in sorted(g.vertices()):
            if v not in g.adj or v in g.terminals:
                continue
            d = g.degree(v)
            if d <= 1:
                g.delete_vertex(v)
            elif d == 2:
                g.suppress_vertex(v)
            else:
                continue
            count += 1
            changed = True
            if report is not None:
                report.note("steiner_degree")
    return count


def contract_terminal_pendant(g: WorkingGraph, report: ReductionReport | None = None) -> int:
    """Contract (and buy) the unique edge at each degree-1 terminal."""
    count = 0
    changed = True
    while changed and len(g.terminals) >= 2:
        changed = False
        for t in sorted(g.terminals):
            if t in g.adj and g.degree(t) == 1 and len(g.terminals) >= 2:
                key = next(iter(g.adj[t].values()))
                bought = len(g.edges[key].prov)
                g.contract_edge(key, buy=True)
                count += 1
                changed = True
                if report is not None:
                    report.note("terminal_pendant", bought)
                break
    return count


def contract_cheapest_terminal_edge(g: WorkingGraph, report: ReductionReport | None = None) -> int:
    """Contract (and buy) a terminal-terminal edge strictly cheaper than
    every other edge at either endpoint; repeat until none qualifies."""
    count = 0
    while len(g.terminals) >= 2:
        candidates = sorted(
            (e.weight, min(e.u, e.v), max(e.u, e.v), k)
            for k, e in g.edges.items()
            if e.u in g.terminals and e.v in g.terminals
        )
        applied = False
        for w, u, v, key in candidates:
            others = [
                g.edges[f].weight
                for x in (u, v)
                for f in g.adj[x].values()
                if f != key
            ]
            if all(w < ow for ow in others):
                bought = len(g.edges[key].prov)
                g.contract_edge(key, buy=True)
                count += 1
                applied = True
                if report is not None:
                    report.note("terminal_edge", bought)
                break
        if not applied:
            return count
    return count


def quick_heuristics(g: WorkingGraph, report: ReductionReport | None = None) -> int:
    """Run the four degree/contraction rules to a common fixpoint."""
    total = 0
    while True:
        applied = contract_zero_edges(g, report)
        applied += remove_degree_low_steiner(g, report)
        applied += contract_terminal_pendant(g, report)
        applied += contract_cheapest_terminal_edge(g, report)
        total += applied
        if not applied:
            return total


def spt_two_edges(g: WorkingGraph, report: ReductionReport | None = None) -> int:
    """Delete every edge strictly longer than some two-edge detour."""
    doomed: set[int] = set()
    for x in sorted(g.vertices()):
        nbrs = sorted(g.adj[x])
        for i, u in enumerate(nbrs):
            wu = g.edges[g.adj[x][u]].weight
            for v in nbrs[i + 1:]:
                key = g.adj[u].get(v)
                if key is None or key in doomed:
                    continue
                if wu + g.edges[g.adj[x][v]].weight < g.edges[key].weight:
                    doomed.add(key)
    for key in sorted(doomed):
        g.delete_edge(key)
        if report is not None:
            report.note("spt_two_edges")
    return len(doomed)


def spt_full(g: WorkingGraph, report: ReductionReport | None = None) -> int:
    """Delete every edge strictly longer than a shortest path between its
    endpoints.  No shortest path uses such an edge, so batch deletion keeps
    all distances intact."""
    doomed: set[int] = set()
    for u in sorted(g.vertices()):
        dist, _parent = dijkstra_tree(g, u)
        for v, key in g.adj[u].items():
            if key not in doomed and dist[v] < g.edges[key].weight:
                doomed.add(key)
    for key in sorted(doomed):
        g.delete_edge(key)
        if report is not None:
            report.note("spt_full")
    return len(doomed)


class BridgeForest:
    """Connectivity and two-edge-connectivity under edge insertions.

    Tracks a forest over two-edge-connected components.  Inserting an edge
    inside one component reports nothing new; an edge between components of
    the same tree closes a cycle and reports the former bridges on it; an
    edge between trees links them as a new bridge.
    """

    def __init__(self, vertices=()):
        self.conn = UnionFind()
        self.comp = UnionFind()
        self.parent: dict[int, tuple[int, int] | None] = {}
        for v in vertices:
            self.add_vertex(v)

    def add_vertex(self, v: int) -> None:
        self.conn.add(v)
        self.comp.add(v)
        self.parent.setdefault(v, None)

    def _parent_of(self, rep: int) -> tuple[int, int] | None:
        entry = self.parent.get(rep)
        if entry is None:
            return None
        return (self.comp.find(entry[0]), entry[1])

    def _reroot(self, rep: int) -> None:
        chain = []
        cur: int | None = rep
        while cur is not None:
            entry = self._parent_of(cur)
            chain.append((cur, entry))
            cur = entry[0] if entry is not None else None
        for (child, entry), (above, _e) in zip(chain, chain[1:]):
            self.parent[above] = (child, entry[1])
        self.parent[rep] = None

    def add_edge(self, eid: int, u: int, v: int) -> list[int] | None:
        """None for a fresh bridge; else sorted former-bridge ids now on a cycle."""
        ru, rv = self.comp.find(u), self.comp.find(v)
        if self.conn.find(u) != self.conn.find(v):
            self._reroot(rv)
            self.parent[rv] = (ru, eid)
            self.conn.union(u, v)
            return None
        if ru == rv:
            return []
        up: dict[int, tuple[int, int] | None] = {}
        cur: int | None = ru
        while cur is not None:
            entry = self._parent_of(cur)
            up[cur] = entry
            cur = entry[0] if entry is not None else None
        path: list[int] = []
        merged = [rv]
        cur = rv
        while cur not in up:
            entry = self._parent_of(cur)
            assert entry is not None, "components connected but no common ancestor"
            path.append(entry[1])
            cur = entry[0]
            merged.append(cur)
        lca = cur
        cur = ru
        while cur != lca:
            entry = up[cur]
            path.append(entry[1])
            merged.append(cur)
            cur = entry[0]
        above_lca = self.parent.get(lca)
        for rep in merged[1:]:
            self.parent.pop(rep, None)
            self.comp.union(merged[0], rep)
        root = self.comp.find(merged[0])
        for rep in merged:
            self.parent.pop(rep, None)
        self.parent[root] = above_lca
        return sorted(path)


def tdt(g: WorkingGraph, report: ReductionReport | None = None) -> int:
    """Terminal-distance test: buy and contract tree edges that provably lie
    on an optimal solution.

    Edges arrive in ascending (weight, id).  When an edge f closes a cycle,
    each strictly lighter former bridge b on that cycle is tested: with b
    removed, find the nearest terminal to each endpoint; if the terminal-
    to-terminal route through b is no longer than f, b is bought.  All
    purchases are contracted after the pass."""
    if len(g.terminals) < 2:
        return 0
    bf = BridgeForest(sorted(g.vertices()))
    chosen: list[int] = []
    seen: set[int] = set()
    for w, key in sorted((e.weight, k) for k, e in g.edges.items()):
        e = g.edges[key]
        cycle = bf.add_edge(key, e.u, e.v)
        if not cycle:
            continue
        for b_key in cycle:
            if b_key in seen:
                continue
            b = g.edges[b_key]
            if w <= b.weight:
                continue
            slack = w - b.weight
            du = _nearest_terminal(g, b, b.u, slack)
            if du is None:
                continue
            dv = _nearest_terminal(g, b, b.v, slack - du)
            if dv is None:
                continue
            seen.add(b_key)
            chosen.append(b_key)
    count = 0
    for b_key in sorted(chosen, key=lambda k: (g.edges[k].weight if k in g.edges else 0, k)):
        if b_key not in g.edges:
            continue
        bought = len(g.edges[b_key].prov)
        g.contract_edge(b_key, buy=True)
        count += 1
        if report is not None:
            report.note("tdt", bought)
    return count


def _nearest_terminal(g: WorkingGraph, skip_edge, source: int, budget: int):
    """Distance from source to its nearest terminal ignoring one edge, or
    None if that distance exceeds the budget."""
    if budget < 0:
        return None
    su, sv = skip_edge.u, skip_edge.v
    for v, d in dijkstra_stream(_EdgeMasked(g, su, sv), source, cutoff=budget):
        if v in g.terminals:
            return d
    return None


class _EdgeMasked:
    """Read-only adjacency view hiding the edge between two vertices."""

    __slots__ = ("edges", "_adj")

    def __init__(self, g: WorkingGraph, u: int, v: int):
        self.edges = g.edges
        self._adj = _MaskedAdj(g.adj, u, v)

    @property
    def adj(self):
        return self._adj


class _MaskedAdj:
    __slots__ = ("base", "u", "v")

    def __init__(self, base, u, v):
        self.base = base
        self.u = u
        self.v = v

    def __getitem__(self, x):
        nbrs = self.base[x]
        if x == self.u and self.v in nbrs:
            return {y: k for y, k in nbrs.items() if y != self.v}
        if x == self.v and self.u in nbrs:
            return {y: k for y, k in nbrs.items() if y != self.u}
        return nbrs


def preprocessing(g: WorkingGraph) -> ReductionReport:
    """Full reduction schedule: quick rules, shortest-path tests, the
    terminal-distance test, and quick rules between every phase."""
    report = ReductionReport()
    vertices_before = len(g.adj)
    edges_before = len(g.edges)

    def quick():
        quick_heuristics(g, report)
        report.rounds += 1

    def spt():
        spt_two_edges(g, report)
        spt_full(g, report)
        report.rounds += 1

    quick()
    spt()
    quick()
    tdt(g, report)
    report.rounds += 1
    quick()
    spt()
    quick()

    report.vertices_removed = vertices_before - len(g.adj)
    report.edges_removed = edges_before - len(g.edges)
    return report
