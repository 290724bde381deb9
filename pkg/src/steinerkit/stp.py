"""Reading and writing STP files, solutions, and rectilinear instances."""
from __future__ import annotations

from .graph import GraphError, Instance, SolutionTree

HEADER = "33D32945 STP File, STP Format Version 1.0"


class ParseError(GraphError):
    pass


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def parse_stp(text: str) -> Instance:
    """Parse STP text: Graph and Terminals sections, 1-based vertex ids.

    The magic header is optional, comment and coordinate sections are
    skipped, duplicate edges keep the smallest weight, and errors name the
    offending line.
    """
    nodes = None
    edge_count = None
    term_count = None
    edge_lines = 0
    term_lines = 0
    edges: dict[tuple[int, int], int] = {}
    terminals: set[int] = set()
    section = None
    saw_graph = saw_terminals = False

    def fail(lineno: int, msg: str):
        raise ParseError(f"line {lineno}: {msg}")

    for lineno, tok in _tokens(text):
        word = tok[0].upper()
        if word == "33D32945" or word == "EOF":
            continue
        if word == "SECTION":
            if len(tok) < 2:
                fail(lineno, "SECTION without a name")
            section = tok[1].upper()
            if section == "GRAPH":
                saw_graph = True
            elif section == "TERMINALS":
                saw_terminals = True
            continue
        if word == "END":
            section = None
            continue
        if section == "GRAPH":
            if word == "NODES":
                nodes = _int_field(tok, 1, lineno, fail)
            elif word == "EDGES":
                edge_count = _int_field(tok, 1, lineno, fail)
            elif word == "E":
                if len(tok) != 4:
                    fail(lineno, "edge line needs: E <u> <v> <weight>")
                try:
                    u, v, w = int(tok[1]), int(tok[2]), int(tok[3])
                except ValueError:
                    fail(lineno, "edge line needs integer fields")
                if nodes is None:
                    fail(lineno, "edge before Nodes count")
                if not (1 <= u <= nodes and 1 <= v <= nodes):
                    fail(lineno, f"edge endpoint out of range 1..{nodes}")
                if u == v:
                    fail(lineno, "self-loop edge")
                if w < 0:
                    fail(lineno, f"negative weight {w}")
                edge_lines += 1
                a, b = (u - 1, v - 1) if u < v else (v - 1, u - 1)
                prev = edges.get((a, b))
                if prev is None or w < prev:
                    edges[(a, b)] = w
            elif word in ("OBSTACLES",):
                continue
            else:
                fail(lineno, f"unknown graph line {tok[0]!r}")
        elif section == "TERMINALS":
            if word == "TERMINALS":
                term_count = _int_field(tok, 1, lineno, fail)
            elif word == "T":
                t = _int_field(tok, 1, lineno, fail)
                if nodes is None or not 1 <= t <= nodes:
                    fail(lineno, f"terminal {t} out of range")
                term_lines += 1
                terminals.add(t - 1)
            else:
                fail(lineno, f"unknown terminal line {tok[0]!r}")
        # other sections (Comment, Coordinates, ...) are skipped

    if not saw_graph:
        raise ParseError("missing SECTION Graph")
    if not saw_terminals:
        raise ParseError("missing SECTION Terminals")
    if nodes is None:
        raise ParseError("missing Nodes count")
    if edge_count is not None and edge_count != edge_lines:
        raise ParseError(f"edge count mismatch ({edge_lines} != {edge_count})")
    if term_count is not None and term_count != term_lines:
        raise ParseError(f"terminal count mismatch ({term_lines} != {term_count})")
    if not terminals:
        raise ParseError("no terminals")

    inst = Instance(
        vertex_count=nodes,
        edges=tuple((u, v, edges[(u, v)]) for u, v in sorted(edges)),
        terminals=frozenset(terminals),
    )
    inst.validate()
    return inst


def _int_field(tok, idx, lineno, fail):
    if len(tok) <= idx:
        fail(lineno, f"{tok[0]} line needs a value")
    try:
        return int(tok[idx])
    except ValueError:
        fail(lineno, f"{tok[0]} value must be an integer")


def write_stp(inst: Instance) -> str:
    lines = [HEADER, "", "SECTION Graph"]
    lines.append(f"Nodes {inst.vertex_count}")
    lines.append(f"Edges {len(inst.edges)}")
    for u, v, w in inst.edges:
        lines.append(f"E {u + 1} {v + 1} {w}")
    lines.append("END")
    lines.append("")
    lines.append("SECTION Terminals")
    lines.append(f"Terminals {len(inst.terminals)}")
    for t in sorted(inst.terminals):
        lines.append(f"T {t + 1}")
    lines.append("END")
    lines.append("")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def write_solution(inst: Instance, sol: SolutionTree) -> str:
    lines = [f"VALUE {sol.weight}"]
    for key in sol.edge_ids:
        u, v, _w = inst.edges[key]
        lines.append(f"{u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


def hanan_grid_instance(points) -> Instance:
    """Grid instance over the distinct x/y coordinates of integer points.

    Grid vertices are all (x, y) combinations; axis-neighbouring vertices are
    joined by edges weighted with the coordinate difference; the input points
    become the terminals.
    """
    pts = sorted(set((int(x), int(y)) for x, y in points))
    if not pts:
        raise GraphError("need at least one point")
    xs = sorted({x for x, _ in pts})
    ys = sorted({y for _, y in pts})
    index = {}
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            index[(x, y)] = i * len(ys) + j
    edges = []
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            v = index[(x, y)]
            if j + 1 < len(ys):
                edges.append((v, index[(x, ys[j + 1])], ys[j + 1] - y))
            if i + 1 < len(xs):
                edges.append((v, index[(xs[i + 1], y)], xs[i + 1] - x))
    edges = tuple(sorted((min(u, v), max(u, v), w) for u, v, w in edges))
    inst = Instance(
        vertex_count=len(xs) * len(ys),
        edges=edges,
        terminals=frozenset(index[p] for p in pts),
    )
    inst.validate()
    return inst
