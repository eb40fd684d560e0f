"""Sliced words: bottom-to-top sequences of elementary events.

A word presents a trivalent graph in Morse position.  Strands are numbered
from 1 at every level and renumbered after each slice.  An event at
position ``p`` acts on the strands entering that slice:

====== ===== ====== =============================================
token   in    out    effect
====== ===== ====== =============================================
cup     0     2      new strands p, p+1 (1 <= p <= n+1)
cap     2     0      strands p, p+1 end in a maximum
x+      2     2      strands p, p+1 swap, the one entering at p over
x-      2     2      strands p, p+1 swap, the one entering at p under
y       1     2      strand p splits (Y-vertex)
l       2     1      strands p, p+1 merge (lambda-vertex)
====== ===== ====== =============================================
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Sequence

import networkx as nx

from .errors import (
    NonzeroBoundary,
    PositionOutOfRange,
    StrandUnderflow,
    UnknownEvent,
    WidthUndefined,
    WordSyntaxError,
)


class Kind(str, Enum):
    CUP = "cup"
    CAP = "cap"
    XPOS = "x+"
    XNEG = "x-"
    Y = "y"
    LAMBDA = "l"

    def __str__(self) -> str:
        return self.value


ARITY = {
    Kind.CUP: (0, 2),
    Kind.CAP: (2, 0),
    Kind.XPOS: (2, 2),
    Kind.XNEG: (2, 2),
    Kind.Y: (1, 2),
    Kind.LAMBDA: (2, 1),
}

_DELTA = {k: b - a for k, (a, b) in ARITY.items()}

MIN_TYPE = frozenset({Kind.CUP, Kind.Y})
MAX_TYPE = frozenset({Kind.CAP, Kind.LAMBDA})
CROSSINGS = frozenset({Kind.XPOS, Kind.XNEG})

_FLIP = {
    Kind.CUP: Kind.CAP,
    Kind.CAP: Kind.CUP,
    Kind.XPOS: Kind.XNEG,
    Kind.XNEG: Kind.XPOS,
    Kind.Y: Kind.LAMBDA,
    Kind.LAMBDA: Kind.Y,
}


class Event(NamedTuple):
    kind: Kind
    pos: int

    def __str__(self) -> str:
        return f"{self.kind.value}@{self.pos}"

    @property
    def delta(self) -> int:
        a, b = ARITY[self.kind]
        return b - a


@dataclass(frozen=True)
class SlicedWord:
    slices: tuple[Event, ...] = ()

    @classmethod
    def of(cls, events: Iterable[Event | tuple]) -> "SlicedWord":
        return cls(tuple(Event(Kind(k), int(p)) for k, p in events))

    def __len__(self) -> int:
        return len(self.slices)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.slices)

    def __getitem__(self, i):
        return self.slices[i]

    def __str__(self) -> str:
        return format_word(self)

    def replace(self, start: int, stop: int, events: Sequence[Event]) -> "SlicedWord":
        return SlicedWord(self.slices[:start] + tuple(events) + self.slices[stop:])


@dataclass(frozen=True)
class StrandProfile:
    counts: tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.counts)) + ")"


@dataclass(frozen=True)
class AbstractGraph:
    """Trivalent multigraph presented by a word.

    ``edges`` lists vertex pairs (loops appear as ``(v, v)``); vertices are
    numbered by the slice that creates them.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    circles: int

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def components(self) -> int:
        if not self.vertices:
            return self.circles
        return nx.number_connected_components(self.to_networkx()) + self.circles

    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components()

    def isomorphic(self, other: "AbstractGraph") -> bool:
        if (self.circles, len(self.vertices), len(self.edges)) != (
            other.circles,
            len(other.vertices),
            len(other.edges),
        ):
            return False
        return nx.is_isomorphic(self.to_networkx(), other.to_networkx())


@dataclass(frozen=True)
class Invariants:
    components: int
    genus: int
    width: int | None
    event_counts: dict = field(hash=False, compare=True)


@dataclass(frozen=True)
class Classification:
    is_morse: bool
    is_bridge: bool
    is_plat_normal: bool


# --- notation -----------------------------------------------------------

_TOKEN = re.compile(r"(?P<kind>[A-Za-z][A-Za-z+\-]*)@(?P<pos>\d+)$")


def parse_word(text: str) -> SlicedWord:
    """Parse word notation into a SlicedWord (strand arithmetic unchecked)."""
    events: list[Event] = []
    for lineno, raw in enumerate(text.splitlines() or [""], start=1):
        line = raw.split("#", 1)[0]
        col = 0
        for chunk in line.split(";"):
            start = col + 1 + (len(chunk) - len(chunk.lstrip()))
            col += len(chunk) + 1
            token = chunk.strip()
            if not token:
                continue
            m = _TOKEN.match(token)
            if m is None:
                raise WordSyntaxError(f"malformed token {token!r}", lineno, start)
            try:
                kind = Kind(m.group("kind"))
            except ValueError:
                raise UnknownEvent(f"unknown event {m.group('kind')!r}", lineno, start) from None
            pos = int(m.group("pos"))
            if pos < 1:
                raise WordSyntaxError("position must be positive", lineno, start)
            events.append(Event(kind, pos))
    return SlicedWord(tuple(events))


def format_word(word: SlicedWord) -> str:
    return " ; ".join(str(e) for e in word.slices)


def W(text: str) -> SlicedWord:
    """Shorthand used throughout the tests and procedures."""
    return parse_word(text)


# --- strand arithmetic --------------------------------------------------


def event_fits(e: Event, n: int) -> bool:
    k, p = e
    if k is Kind.CUP:
        return 1 <= p <= n + 1
    a = ARITY[k][0]
    return 1 <= p and p + a - 1 <= n


def counts(word: SlicedWord) -> list[int]:
    """Strand counts at every gap, without checking positions."""
    out = [0]
    n = 0
    for e in word.slices:
        n += _DELTA[e[0]]
        out.append(n)
    return out


def validate(word: SlicedWord) -> StrandProfile:
    n = 0
    prof = [0]
    for i, e in enumerate(word.slices, start=1):
        need = ARITY[e.kind][0]
        if n < need:
            raise StrandUnderflow(i)
        if not event_fits(e, n):
            raise PositionOutOfRange(i)
        n += e.delta
        prof.append(n)
    if n != 0:
        raise NonzeroBoundary("top")
    return StrandProfile(tuple(prof))


def is_valid(word: SlicedWord) -> bool:
    n = 0
    for e in word.slices:
        if not event_fits(e, n):
            return False
        n += e.delta
    return n == 0


# --- graph reconstruction -----------------------------------------------


class _DSU:
    def __init__(self) -> None:
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def reconstruct_graph(word: SlicedWord) -> AbstractGraph:
    validate(word)
    dsu = _DSU()
    ends: list[tuple[int, int]] = []  # (piece, vertex)
    strands: list[int] = []
    vertices: list[int] = []
    for i, (k, p) in enumerate(word.slices):
        j = p - 1
        if k is Kind.CUP:
            s = dsu.make()
            strands[j:j] = [s, s]
        elif k is Kind.CAP:
            dsu.union(strands[j], strands[j + 1])
            del strands[j : j + 2]
        elif k in CROSSINGS:
            strands[j], strands[j + 1] = strands[j + 1], strands[j]
        elif k is Kind.Y:
            a, b = dsu.make(), dsu.make()
            vertices.append(i)
            ends += [(strands[j], i), (a, i), (b, i)]
            strands[j : j + 1] = [a, b]
        else:
            c = dsu.make()
            vertices.append(i)
            ends += [(strands[j], i), (strands[j + 1], i), (c, i)]
            strands[j : j + 2] = [c]
    by_class: dict[int, list[int]] = {}
    for piece, v in ends:
        by_class.setdefault(dsu.find(piece), []).append(v)
    roots = {dsu.find(x) for x in range(len(dsu.parent))}
    circles = sum(1 for r in roots if r not in by_class)
    edges = []
    for r in sorted(by_class):
        vs = by_class[r]
        assert len(vs) == 2, "every edge piece meets exactly two vertex ends"
        edges.append((min(vs), max(vs)))
    return AbstractGraph(tuple(vertices), tuple(sorted(edges)), circles)


def _edge_pieces(word: SlicedWord) -> tuple[list[tuple[int, int]], int, int]:
    """Unvalidated trace: (edges between vertex ranks, circles, vertex count)."""
    parent: list[int] = []

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ends: list[tuple[int, int]] = []
    strands: list[int] = []
    nv = 0
    for k, p in word.slices:
        j = p - 1
        if k is Kind.CUP:
            parent.append(len(parent))
            strands[j:j] = [len(parent) - 1] * 2
        elif k is Kind.CAP:
            parent[find(strands[j])] = find(strands[j + 1])
            del strands[j : j + 2]
        elif k is Kind.XPOS or k is Kind.XNEG:
            strands[j], strands[j + 1] = strands[j + 1], strands[j]
        elif k is Kind.Y:
            a = len(parent)
            parent += [a, a + 1]
            ends += [(strands[j], nv), (a, nv), (a + 1, nv)]
            strands[j : j + 1] = [a, a + 1]
            nv += 1
        else:
            c = len(parent)
            parent.append(c)
            ends += [(strands[j], nv), (strands[j + 1], nv), (c, nv)]
            strands[j : j + 2] = [c]
            nv += 1
    by_class: dict[int, list[int]] = {}
    for piece, v in ends:
        by_class.setdefault(find(piece), []).append(v)
    roots = {find(x) for x in range(len(parent))}
    circles = len(roots) - len(by_class)
    edges = sorted((min(vs), max(vs)) for vs in by_class.values())
    return edges, circles, nv


_CLASS_CACHE: dict[tuple, int] = {}
_CLASS_REPS: dict[tuple, list[tuple[nx.MultiGraph, int]]] = {}


def graph_class(word: SlicedWord) -> tuple[int, int]:
    """(circles, class id) of the abstract graph of a valid word.

    Two words get the same pair exactly when their graphs are isomorphic
    (ids are assigned per process).  Labelled graphs are memoized, so the
    isomorphism test runs once per new labelled graph.
    """
    return _class_of(*_edge_pieces(word))


def _class_of(edges: list[tuple[int, int]], circles: int, nv: int) -> tuple[int, int]:
    key = (nv, tuple(edges))
    cid = _CLASS_CACHE.get(key)
    if cid is None:
        g = nx.MultiGraph()
        g.add_nodes_from(range(nv))
        g.add_edges_from(edges)
        loops = sorted(sum(1 for a, b in edges if a == b == v) for v in range(nv))
        sig = (nv, len(edges), tuple(loops))
        reps = _CLASS_REPS.setdefault(sig, [])
        for h, hid in reps:
            if nx.is_isomorphic(g, h):
                cid = hid
                break
        else:
            cid = len(_CLASS_CACHE) + 1
            reps.append((g, cid))
        _CLASS_CACHE[key] = cid
    return circles, cid


def fast_components(word: SlicedWord) -> tuple[int, int]:
    """(components, genus) of a valid word without building a networkx graph."""
    c, g, _ = graph_summary(word)
    return c, g


def graph_summary(word: SlicedWord) -> tuple[int, int, tuple[int, int]]:
    """(components, genus, graph_class) of a valid word in one trace."""
    edges, circles, nv = _edge_pieces(word)
    parent = list(range(nv))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        parent[find(a)] = find(b)
    comps = len({find(v) for v in range(nv)}) + circles
    return comps, len(edges) - nv + comps, _class_of(edges, circles, nv)


# --- classification and invariants --------------------------------------


def _bridge_gaps(word: SlicedWord) -> tuple[int, int]:
    """(gap after the last min-type event, gap before the first max-type)."""
    last_min = max((i for i, e in enumerate(word.slices) if e.kind in MIN_TYPE), default=-1)
    first_max = min((i for i, e in enumerate(word.slices) if e.kind in MAX_TYPE), default=len(word))
    return last_min + 1, first_max


def middle_gap(word: SlicedWord) -> int:
    lo, hi = _bridge_gaps(word)
    if lo > hi:
        raise WidthUndefined("word is not in bridge position")
    return lo


def classify(word: SlicedWord) -> Classification:
    validate(word)
    lo, hi = _bridge_gaps(word)
    return Classification(True, lo <= hi, is_plat_normal(word))


def is_bridge(word: SlicedWord) -> bool:
    lo, hi = _bridge_gaps(word)
    return lo <= hi


def is_plat_normal(word: SlicedWord) -> bool:
    """Word factors as (cup|y)* (x+|x-)* (cap|l)*."""
    phase = 0
    for e in word.slices:
        k = e.kind
        rank = 0 if k in MIN_TYPE else 1 if k in CROSSINGS else 2
        if rank < phase:
            return False
        phase = rank
    return True


def event_counts(word: SlicedWord) -> dict[str, int]:
    c = Counter(e.kind.value for e in word.slices)
    return {k.value: c.get(k.value, 0) for k in Kind}


def width(word: SlicedWord) -> int:
    return counts(word)[middle_gap(word)]


def invariants(word: SlicedWord) -> Invariants:
    g = reconstruct_graph(word)
    w = width(word) if is_bridge(word) else None
    return Invariants(g.components(), g.betti(), w, event_counts(word))


def inversions(word: SlicedWord) -> int:
    """Number of (max-type, min-type) pairs with the max-type event lower."""
    seen_max = 0
    total = 0
    for e in word.slices:
        if e.kind in MAX_TYPE:
            seen_max += 1
        elif e.kind in MIN_TYPE:
            total += seen_max
    return total


def reflect(word: SlicedWord) -> SlicedWord:
    """Turn a word upside down (h -> -h).

    Positions are preserved; crossing signs flip because the strand that
    entered a crossing at ``p`` leaves it at ``p + 1``.
    """
    return SlicedWord(tuple(Event(_FLIP[e.kind], e.pos) for e in reversed(word.slices)))


def flip_kind(k: Kind) -> Kind:
    return _FLIP[k]
