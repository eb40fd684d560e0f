"""Independent reference computations used to derive expected values.

Nothing here calls the package's own tracing code: words are read
directly as event lists and diagrams as raw dart tables.
"""

from __future__ import annotations

import itertools

import networkx as nx

ARITY = {"cup": (0, 2), "cap": (2, 0), "x+": (2, 2), "x-": (2, 2), "y": (1, 2), "l": (2, 1)}


def events(text: str) -> list[tuple[str, int]]:
    out = []
    for tok in text.split(";"):
        k, p = tok.strip().split("@")
        out.append((k, int(p)))
    return out


def ok(evs: list[tuple[str, int]]) -> bool:
    n = 0
    for k, p in evs:
        a, b = ARITY[k]
        if k == "cup":
            if not 1 <= p <= n + 1:
                return False
        elif p < 1 or p + a - 1 > n:
            return False
        n += b - a
    return n == 0


def strand_graph(text: str) -> nx.MultiGraph:
    """Every strand segment between consecutive slices is a node; vertex
    events add a node of degree 3."""
    g = nx.MultiGraph()
    n = 0
    for s, (k, p) in enumerate(events(text), start=1):
        a, b = ARITY[k]
        lo, hi = (s - 1, s)
        # strands left of the event keep their index, those right shift
        for i in range(1, p):
            g.add_edge((lo, i), (hi, i))
        for i in range(p + a, n + 1):
            g.add_edge((lo, i), (hi, i - a + b))
        if k == "cup":
            g.add_edge((hi, p), (hi, p + 1))
        elif k == "cap":
            g.add_edge((lo, p), (lo, p + 1))
        elif k in ("x+", "x-"):
            g.add_edge((lo, p), (hi, p + 1))
            g.add_edge((lo, p + 1), (hi, p))
        elif k == "y":
            g.add_edges_from([(("v", s), (lo, p)), (("v", s), (hi, p)), (("v", s), (hi, p + 1))])
        else:
            g.add_edges_from([(("v", s), (lo, p)), (("v", s), (lo, p + 1)), (("v", s), (hi, p))])
        n += b - a
    return g


def smooth(g: nx.MultiGraph) -> tuple[nx.MultiGraph, int]:
    """Suppress degree-2 nodes; return (trivalent multigraph, free circles)."""
    h = nx.MultiGraph(g)
    circles = 0
    for comp in list(nx.connected_components(h)):
        if all(h.degree(v) == 2 for v in comp):
            circles += 1
            h.remove_nodes_from(comp)
    changed = True
    while changed:
        changed = False
        for v in list(h.nodes):
            if h.degree(v) != 2:
                continue
            nbrs = [u for _, u in h.edges(v)]
            if v in nbrs:  # a loop through a degree-2 node cannot occur here
                continue
            h.remove_node(v)
            h.add_edge(nbrs[0], nbrs[1])
            changed = True
    return h, circles


def components_genus(text: str) -> tuple[int, int]:
    g = strand_graph(text)
    c = nx.number_connected_components(g)
    return c, g.number_of_edges() - g.number_of_nodes() + c


def same_graph(t1: str, t2: str) -> bool:
    (g1, c1), (g2, c2) = smooth(strand_graph(t1)), smooth(strand_graph(t2))
    return c1 == c2 and nx.is_isomorphic(g1, g2)


def diagram_graph(nodes, pair, loops) -> tuple[nx.MultiGraph, int]:
    """Abstract graph of a diagram given as raw (kind, darts) and pairing:
    crossings are resolved by joining opposite darts."""
    g = nx.MultiGraph()
    for d, e in enumerate(pair):
        if d < e:
            g.add_edge(("d", d), ("d", e))
    for i, (kind, ds) in enumerate(nodes):
        if kind == "X":
            g.add_edge(("d", ds[0]), ("d", ds[2]))
            g.add_edge(("d", ds[1]), ("d", ds[3]))
        else:
            for d in ds:
                g.add_edge(("v", i), ("d", d))
    h, circles = smooth(g)
    return h, circles + loops


def brute_words(max_slices: int, max_width: int) -> list[str]:
    """All valid closed words by exhaustive product over event tokens."""
    toks = [(k, p) for k in ARITY for p in range(1, max_width + 2)]
    out = []
    for n in range(1, max_slices + 1):
        for combo in itertools.product(toks, repeat=n):
            if not ok(list(combo)):
                continue
            w, bad = 0, False
            for k, _ in combo:
                a, b = ARITY[k]
                w += b - a
                if w > max_width:
                    bad = True
                    break
            if not bad:
                out.append(" ; ".join(f"{k}@{p}" for k, p in combo))
    return out
