"""Spherical diagrams as combinatorial maps.

A :class:`Diagram` stores nodes with counter-clockwise dart rotations and
an involution pairing darts into arcs.  Crossing nodes have four darts,
with ``darts[0]``/``darts[2]`` the over strand and ``darts[1]``/``darts[3]``
the under strand.  Graph vertices have three darts.  Components that carry
no node at all (crossingless circles) are only counted, in ``loops``.

Text format (one record per line, ``#`` comments allowed)::

    diagram v1
    loops <k>
    node X <d0> <d1> <d2> <d3>
    node V <d0> <d1> <d2>
    arc <d> <e>
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import CalculusError, NotPlatNormal
from .words import CROSSINGS, Kind, SlicedWord, is_plat_normal, validate


class DiagramError(CalculusError):
    name = "DiagramError"


@dataclass(frozen=True)
class Node:
    kind: str  # "X" or "V"
    darts: tuple[int, ...]


@dataclass(frozen=True)
class Diagram:
    nodes: tuple[Node, ...]
    pair: tuple[int, ...]
    loops: int = 0

    # lookups are rebuilt on demand; diagrams are small
    def node_of(self) -> dict[int, tuple[int, int]]:
        where = {}
        for ni, node in enumerate(self.nodes):
            for slot, d in enumerate(node.darts):
                where[d] = (ni, slot)
        return where

    @property
    def n_darts(self) -> int:
        return len(self.pair)

    def crossings(self) -> int:
        return sum(1 for n in self.nodes if n.kind == "X")

    def vertices(self) -> int:
        return sum(1 for n in self.nodes if n.kind == "V")

    def arcs(self) -> list[tuple[int, int]]:
        return [(d, e) for d, e in enumerate(self.pair) if d < e]

    def sigma(self) -> list[int]:
        """Counter-clockwise successor of every dart at its node."""
        succ = [0] * self.n_darts
        for node in self.nodes:
            k = len(node.darts)
            for i, d in enumerate(node.darts):
                succ[d] = node.darts[(i + 1) % k]
        return succ

    def faces(self) -> list[list[int]]:
        """Face boundaries; the face lies to the left of each listed dart."""
        succ = self.sigma()
        pred = [0] * self.n_darts
        for d, s in enumerate(succ):
            pred[s] = d
        seen = [False] * self.n_darts
        out = []
        for start in range(self.n_darts):
            if seen[start]:
                continue
            face = []
            d = start
            while not seen[d]:
                seen[d] = True
                face.append(d)
                d = pred[self.pair[d]]
            out.append(face)
        return out

    def components(self) -> list[list[int]]:
        """Node indices of each connected component (loops excluded)."""
        where = self.node_of()
        seen: set[int] = set()
        comps = []
        for start in range(len(self.nodes)):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                ni = stack.pop()
                comp.append(ni)
                for d in self.nodes[ni].darts:
                    m = where[self.pair[d]][0]
                    if m not in seen:
                        seen.add(m)
                        stack.append(m)
            comps.append(sorted(comp))
        return comps

    def check(self) -> None:
        """Raise DiagramError unless the map is a valid union of spheres."""
        n = self.n_darts
        all_darts = sorted(d for node in self.nodes for d in node.darts)
        if all_darts != list(range(n)):
            raise DiagramError("darts must be 0..n-1, each at exactly one node")
        for node in self.nodes:
            if (node.kind, len(node.darts)) not in (("X", 4), ("V", 3)):
                raise DiagramError(f"bad node {node}")
        for d in range(n):
            if self.pair[d] == d or self.pair[self.pair[d]] != d:
                raise DiagramError("pairing must be a fixed-point-free involution")
        where = self.node_of()
        faces = self.faces()
        for comp in self.components():
            cs = set(comp)
            v = len(comp)
            darts = [d for ni in comp for d in self.nodes[ni].darts]
            e = len(darts) // 2
            f = sum(1 for face in faces if where[face[0]][0] in cs)
            if v - e + f != 2:
                raise DiagramError(f"component {comp} violates V-E+F=2 ({v}-{e}+{f})")


# --- construction from words -------------------------------------------


class _Builder:
    def __init__(self) -> None:
        self.nodes: list[list] = []  # [kind, darts]
        self.n = 0

    def darts(self, k: int) -> list[int]:
        out = list(range(self.n, self.n + k))
        self.n += k
        return out


def draw(word: SlicedWord) -> Diagram:
    """Diagram drawn by any valid word: cups and caps are absorbed into arcs."""
    validate(word)
    b = _Builder()
    parent: list[int] = []
    ends: dict[int, list[int]] = {}

    def piece(first_end: int | None = None) -> int:
        parent.append(len(parent))
        ends[len(parent) - 1] = [] if first_end is None else [first_end]
        return len(parent) - 1

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    strands: list[int] = []
    for k, p in word.slices:
        j = p - 1
        if k is Kind.CUP:
            s = piece()
            strands[j:j] = [s, s]
        elif k is Kind.CAP:
            a, c = find(strands[j]), find(strands[j + 1])
            if a != c:
                parent[a] = c
                ends[c] += ends.pop(a)
            del strands[j : j + 2]
        elif k in CROSSINGS:
            dl, dr, ul, ur = b.darts(4)
            ends[find(strands[j])].append(dl)
            ends[find(strands[j + 1])].append(dr)
            # ccw order is ur, ul, dl, dr; start at the over strand
            rot = [dl, dr, ur, ul] if k is Kind.XPOS else [dr, ur, ul, dl]
            b.nodes.append(["X", rot])
            strands[j : j + 2] = [piece(ul), piece(ur)]
        elif k is Kind.Y:
            dn, ul, ur = b.darts(3)
            ends[find(strands[j])].append(dn)
            b.nodes.append(["V", [ur, ul, dn]])
            strands[j : j + 1] = [piece(ul), piece(ur)]
        else:
            dl, dr, up = b.darts(3)
            ends[find(strands[j])].append(dl)
            ends[find(strands[j + 1])].append(dr)
            b.nodes.append(["V", [up, dl, dr]])
            strands[j : j + 2] = [piece(up)]
    pair = [0] * b.n
    loops = 0
    for root, es in ends.items():
        if find(root) != root:
            continue
        if not es:
            loops += 1
            continue
        if len(es) != 2:
            raise DiagramError("internal: arc with %d ends" % len(es))
        pair[es[0]], pair[es[1]] = es[1], es[0]
    return Diagram(tuple(Node(k, tuple(ds)) for k, ds in b.nodes), tuple(pair), loops)


def project(word: SlicedWord) -> Diagram:
    if not is_plat_normal(word):
        validate(word)
        raise NotPlatNormal("word is not plat-normal")
    return draw(word)


# --- canonical codes ----------------------------------------------------


def _rooted_code(d: Diagram, where, root: int) -> tuple:
    nodes = d.nodes
    label: dict[int, int] = {}
    start: dict[int, int] = {}
    ni, slot = where[root]
    label[ni], start[ni] = 0, slot
    order = [ni]
    out: list = []
    qi = 0
    while qi < len(order):
        ni = order[qi]
        qi += 1
        node = nodes[ni]
        k = len(node.darts)
        s = start[ni]
        out.append(0 if node.kind == "V" else (1 if s % 2 == 0 else 2))
        for t in range(k):
            mate = d.pair[node.darts[(s + t) % k]]
            mi, mslot = where[mate]
            if mi not in label:
                label[mi] = len(order)
                start[mi] = mslot
                order.append(mi)
            out.append(label[mi])
            out.append((mslot - start[mi]) % len(nodes[mi].darts))
    return tuple(out)


def _render(code: tuple) -> str:
    parts = []
    i = 0
    while i < len(code):
        tag = code[i]
        deg = 3 if tag == 0 else 4
        body = code[i + 1 : i + 1 + 2 * deg]
        parts.append("VOU"[tag] + ".".join(f"{body[j]}:{body[j + 1]}" for j in range(0, len(body), 2)))
        i += 1 + 2 * deg
    return "|".join(parts)


def canonical_code(d: Diagram) -> str:
    """Isomorphism-invariant code of an oriented spherical diagram.

    Each component is coded by the lexicographically least breadth-first
    traversal over all root darts; components are sorted.  Only
    orientation-preserving isomorphisms are quotiented, so mirror images
    get different codes.
    """
    where = d.node_of()
    comp_codes = []
    for comp in d.components():
        roots = [dd for ni in comp for dd in d.nodes[ni].darts]
        best = min(_rooted_code(d, where, r) for r in roots)
        comp_codes.append(_render(best))
    comp_codes.sort()
    return f"L{d.loops}/" + "/".join(comp_codes)


def relabel(d: Diagram, perm: list[int], node_order: list[int] | None = None, rotate: Iterable[int] | None = None) -> Diagram:
    """Rename darts by ``perm`` (old -> new), reorder nodes, and rotate
    vertex rotations (crossings may only rotate by an even amount)."""
    order = node_order if node_order is not None else list(range(len(d.nodes)))
    shifts = list(rotate) if rotate is not None else [0] * len(d.nodes)
    nodes = []
    for ni in order:
        node = d.nodes[ni]
        s = shifts[ni]
        ds = node.darts[s:] + node.darts[:s]
        nodes.append(Node(node.kind, tuple(perm[x] for x in ds)))
    pair = [0] * d.n_darts
    for a, b in enumerate(d.pair):
        pair[perm[a]] = perm[b]
    return Diagram(tuple(nodes), tuple(pair), d.loops)


def mirror(d: Diagram) -> Diagram:
    """Switch every crossing."""
    nodes = tuple(
        Node(n.kind, n.darts[1:] + n.darts[:1]) if n.kind == "X" else n for n in d.nodes
    )
    return Diagram(nodes, d.pair, d.loops)


def normalize(nodes: list[tuple[str, list[int]]], pair: dict[int, int], loops: int) -> Diagram:
    """Compact arbitrary dart ids into 0..n-1 in node order."""
    ren: dict[int, int] = {}
    for _, ds in nodes:
        for x in ds:
            ren[x] = len(ren)
    out_nodes = tuple(Node(k, tuple(ren[x] for x in ds)) for k, ds in nodes)
    out_pair = [0] * len(ren)
    for x, y in pair.items():
        out_pair[ren[x]] = ren[y]
    return Diagram(out_nodes, tuple(out_pair), loops)


# --- serialization ------------------------------------------------------


def dumps(d: Diagram) -> str:
    lines = ["diagram v1", f"loops {d.loops}"]
    for node in d.nodes:
        lines.append(f"node {node.kind} " + " ".join(map(str, node.darts)))
    for a, b in d.arcs():
        lines.append(f"arc {a} {b}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Diagram:
    nodes = []
    pair: dict[int, int] = {}
    loops = 0
    header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            if line[0] == "diagram":
                if line[1:] != ["v1"]:
                    raise DiagramError(f"unsupported version at line {lineno}")
                header = True
            elif line[0] == "loops":
                loops = int(line[1])
            elif line[0] == "node":
                nodes.append(Node(line[1], tuple(int(x) for x in line[2:])))
            elif line[0] == "arc":
                a, b = int(line[1]), int(line[2])
                pair[a], pair[b] = b, a
            else:
                raise DiagramError(f"unknown record {line[0]!r} at line {lineno}")
        except (IndexError, ValueError):
            raise DiagramError(f"malformed line {lineno}") from None
    if not header:
        raise DiagramError("missing 'diagram v1' header")
    n = len(pair)
    if sorted(pair) != list(range(n)):
        raise DiagramError("arcs must cover darts 0..n-1")
    d = Diagram(tuple(nodes), tuple(pair[i] for i in range(n)), loops)
    d.check()
    return d
