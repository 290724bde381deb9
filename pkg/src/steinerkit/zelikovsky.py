"""Triple-based improvement of the terminal MST heuristic.

Each round evaluates full 3-terminal stars (triples): contracting a triple
whose connection cost is smaller than the MST edges it makes redundant wins.
The classic variant contracts a shadow terminal metric and keeps the
original triple table; the minus variant recomputes triples from the real
graph and contracts the actual stars; the plus variant additionally finishes
with the iterated terminal MST.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .graph import UnionFind, WorkingGraph
from .mst import mst_plus, mst_terminals
from .paths import dijkstra_tree
from .stars import Star, contract_star

Triple = tuple[int, int, int]


def precompute_triples(g: WorkingGraph, terminals=None):
    """Candidate triples and the terminal metric, via one scan per vertex.

    Each vertex proposes triples made of its closest terminal and two
    others, weighted by its three connection distances; per triple the
    lightest proposal wins (ties to the smaller center id).  Returns
    (triples, metric) where triples maps a sorted terminal triple to
    (weight, center, legs) and metric holds terminal-to-terminal distances.
    """
    terms = sorted(g.terminals if terminals is None else terminals)
    term_set = set(terms)
    triples: dict[Triple, tuple[int, int, tuple[int, ...]]] = {}
    metric: dict[int, dict[int, int]] = {}
    for v in sorted(g.adj):
        dist, _ = dijkstra_tree(g, v)
        if v in term_set:
            metric[v] = {t: dist[t] for t in terms if t in dist}
        reach = [t for t in terms if t in dist]
        if len(reach) < 3:
            continue
        closest = min(reach, key=lambda t: (dist[t], t))
        rest = [t for t in reach if t != closest]
        for u1, u2 in combinations(rest, 2):
            trio = tuple(sorted((closest, u1, u2)))
            w = dist[closest] + dist[u1] + dist[u2]
            old = triples.get(trio)
            if old is None or (w, v) < (old[0], old[1]):
                legs = tuple(dist[t] for t in trio)
                triples[trio] = (w, v, legs)
    return triples, metric


def _metric_mst(pairs: dict[tuple[int, int], int], reps: list[int]):
    """Kruskal over rep pairs; returns adjacency {rep: [(other, w)]}."""
    uf = UnionFind(reps)
    adj: dict[int, list[tuple[int, int]]] = {r: [] for r in reps}
    for w, a, b in sorted((w, a, b) for (a, b), w in pairs.items()):
        if uf.union(a, b):
            adj[a].append((b, w))
            adj[b].append((a, w))
    return adj


def _max_edge_table(adj: dict[int, list[tuple[int, int]]]):
    """maxedge[a][b] = heaviest edge on the tree path from a to b."""
    table: dict[int, dict[int, int]] = {}
    for root in adj:
        row: dict[int, int] = {root: 0}
        stack = [(root, 0)]
        while stack:
            x, mx = stack.pop()
            for y, w in adj[x]:
                if y not in row:
                    row[y] = max(mx, w)
                    stack.append((y, max(mx, w)))
        table[root] = row
    return table


def _mst_weight(adj) -> int:
    return sum(w for x, nbrs in adj.items() for y, w in nbrs if x < y)


def _best_win(triples, find, maxedge):
    """Highest-win triple under the current contraction state.

    Iterates triples in sorted order and replaces only on a strictly larger
    win, so ties resolve toward the smallest (triple, center)."""
    best = None
    for trio in sorted(triples):
        w, center, legs = triples[trio]
        ra, rb, rc = (find(t) for t in trio)
        if len({ra, rb, rc}) < 3:
            continue
        try:
            m = (maxedge[ra][rb], maxedge[ra][rc], maxedge[rb][rc])
        except KeyError:
            continue
        win = m[0] + m[1] + m[2] - max(m) - w
        if win > 0 and (best is None or win > best[0]):
            best = (win, trio, center, legs, w)
    return best


def zelikovsky(g: WorkingGraph, terminals=None) -> set[int]:
    """Classic variant: pick winning triples against a shadow metric, then
    connect terminals plus the chosen centers with the terminal MST.

    Returns the original edge ids of the produced tree."""
    terms = sorted(g.terminals if terminals is None else terminals)
    if len(terms) < 3:
        _w, keys = mst_terminals(g, terms)
        return provenance(g, keys)
    triples, metric = precompute_triples(g, terms)
    dist: dict[tuple[int, int], int] = {}
    for a, b in combinations(terms, 2):
        d = metric.get(a, {}).get(b)
        if d is not None:
            dist[(a, b)] = d
    uf = UnionFind(terms)
    centers: set[int] = set()
    max_rounds = (len(terms) - 1) // 2
    for _ in range(max_rounds + 1):
        reps = sorted({uf.find(t) for t in terms})
        if len(reps) < 3:
            break
        adj = _metric_mst(dist, reps)
        maxedge = _max_edge_table(adj)
        best = _best_win(triples, uf.find, maxedge)
        if best is None:
            break
        _win, trio, center, _legs, _w = best
        ra, rb, rc = (uf.find(t) for t in trio)
        uf.union(ra, rb)
        uf.union(ra, rc)
        merged = uf.find(ra)
        dist = _contract_metric(dist, (ra, rb, rc), merged)
        centers.add(center)
    _w, keys = mst_terminals(g, set(terms) | centers)
    return provenance(g, keys)


def _contract_metric(dist, group, merged):
    """Merge the group's rows into one rep, keeping minimum distances."""
    out: dict[tuple[int, int], int] = {}
    for (a, b), w in dist.items():
        na = merged if a in group else a
        nb = merged if b in group else b
        if na == nb:
            continue
        pair = (na, nb) if na < nb else (nb, na)
        if pair not in out or w < out[pair]:
            out[pair] = w
    return out


def _zelikovsky_real(g: WorkingGraph, plus: bool) -> set[int]:
    h = g.copy()
    before = set(h.bought)
    max_rounds = (len(h.terminals) - 1) // 2
    for _ in range(max_rounds + 1):
        terms = sorted(h.terminals)
        if len(terms) < 3:
            break
        triples, metric = precompute_triples(h, terms)
        dist: dict[tuple[int, int], int] = {}
        for a, b in combinations(terms, 2):
            d = metric.get(a, {}).get(b)
            if d is not None:
                dist[(a, b)] = d
        adj = _metric_mst(dist, terms)
        maxedge = _max_edge_table(adj)
        best = _best_win(triples, lambda t: t, maxedge)
        if best is None:
            break
        _win, trio, center, legs, w = best
        star = Star(center, trio, legs, w, Fraction(w, 2))
        contract_star(h, star)
    finish = mst_plus if plus else mst_terminals
    _w, keys = finish(h)
    added = h.bought - before
    added.update(provenance(h, keys))
    return added


def zelikovsky_minus(g: WorkingGraph) -> set[int]:
    """Per-round variant: recompute triples from the current graph and
    contract the winning star for real; finish with the terminal MST."""
    return _zelikovsky_real(g, plus=False)


def zelikovsky_plus(g: WorkingGraph) -> set[int]:
    """Like the per-round variant but finished with the iterated terminal
    MST."""
    return _zelikovsky_real(g, plus=True)


def provenance(g: WorkingGraph, keys) -> set[int]:
    out: set[int] = set()
    for k in keys:
        out.update(g.edges[k].prov)
    return out
