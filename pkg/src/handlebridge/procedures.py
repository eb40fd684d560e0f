"""Constructive procedures between Morse, bridge and plat-normal words.

Every procedure returns a :class:`~handlebridge.moves.Certificate` whose
replay from the input word reproduces the output word.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .diagram import canonical_code, draw, project
from .errors import (
    CalculusError,
    CompileFailed,
    DiagramsDiffer,
    InvalidSite,
    NotBridge,
    NotPlatNormal,
    RSeqInvalid,
    SiteMismatch,
)
from .moves import (
    Certificate,
    Move,
    _apply_or_none,
    _back,
    _s2_down,
    _s3_sites,
    enumerate_sites,
    fingerprint,
    s3_steps,
)
from .rmoves import RSite, apply_r, enumerate_r_sites
from .search import b1_normal
from .words import (
    CROSSINGS,
    MAX_TYPE,
    MIN_TYPE,
    Kind,
    SlicedWord,
    _bridge_gaps,
    counts,
    format_word,
    inversions,
    is_bridge,
    is_plat_normal,
    reflect,
    validate,
)

DEFAULT_DEPTH = 16
LEVELS = 3


@dataclass(frozen=True)
class _Path:
    """A word together with the moves that produced it."""

    word: SlicedWord
    steps: tuple[Move, ...] = ()

    def then(self, move: Move) -> "_Path | None":
        w = _apply_or_none(self.word, move)
        return None if w is None else _Path(w, self.steps + (move,))

    def chain(self, moves: Iterable[Move]) -> "_Path | None":
        p: _Path | None = self
        for m in moves:
            p = p.then(m)
            if p is None:
                return None
        return p

    def cert(self, start: SlicedWord) -> Certificate:
        return Certificate(fingerprint(start), self.steps, self.word)


def _rank(k: Kind) -> int:
    return 0 if k in MIN_TYPE else 1 if k in CROSSINGS else 2


def _b1(path: _Path, i: int) -> _Path | None:
    """Swap 0-based slices i, i+1 by far commutativity."""
    w = path.word
    if not 0 <= i < len(w) - 1:
        return None
    return path.then(Move("B1", "forward", "", i + 1, w.slices[i].pos))


def _move_event(path: _Path, i: int, j: int) -> _Path | None:
    """Carry slice i to index j by B1 swaps only."""
    p: _Path | None = path
    while p is not None and i != j:
        if i < j:
            p, i = _b1(p, i), i + 1
        else:
            p, i = _b1(p, i - 1), i - 1
    return p


# --- local progress engine --------------------------------------------


def _near_sites(word: SlicedWord, names: Sequence[str], lo: int, hi: int) -> list[Move]:
    """Sites of the given kinds whose window starts at a 1-based slice in [lo, hi]."""
    out = []
    for name in names:
        for m in enumerate_sites(word, name):
            if lo <= m.slice <= hi:
                out.append(m)
    return out


def _advance(path: _Path, key: Callable[[SlicedWord], tuple], i: int, names: Sequence[str]) -> _Path | None:
    """First one- or two-move combination around slice i (0-based) that
    lowers ``key``; moves of kinds ``names`` plus B1 follow-ups."""
    k0 = key(path.word)
    firsts = _near_sites(path.word, ["B1"], i + 1, i + 1) + _near_sites(path.word, names, i - 1, i + 3)
    seen = set()
    for m in firsts:
        if m in seen:
            continue
        seen.add(m)
        p = path.then(m)
        if p is None:
            continue
        if key(p.word) < k0:
            return p
    for m in firsts:
        p = path.then(m)
        if p is None:
            continue
        for m2 in _near_sites(p.word, ["B1"], i - 1, i + 3):
            q = p.then(m2)
            if q is not None and key(q.word) < k0:
                return q
    return None


# --- to_bridge ----------------------------------------------------------


def _first_offender(word: SlicedWord) -> int | None:
    """Index of the lowest min-type slice lying above some max-type slice."""
    seen_max = False
    for i, e in enumerate(word.slices):
        if e.kind in MAX_TYPE:
            seen_max = True
        elif e.kind in MIN_TYPE and seen_max:
            return i
    return None


def _bridge_key(word: SlicedWord) -> tuple:
    j = _first_offender(word)
    return (inversions(word), -1 if j is None else j)


def _iedge(path: _Path, k: int) -> _Path | None:
    """Resolve lambda@p directly below y@p (slices k, k+1) when the plain
    S3 expansion does not fit: S2 down a free leg, M2, sink the freed Y
    to the new vertex, B5, S2^-1."""
    w = path.word
    p = w.slices[k].pos
    for leg in (0, 1):
        if _s2_down(w, k, leg) is None:
            continue
        q = path.then(Move("S2", "forward", "down", k + 1, p, (leg,)))
        if q is None:
            continue
        # the lambda became a cap at k+1 and the Y sits at k+2
        q = _advance_m2(q, k + 1)
        if q is None:
            continue
        y_at = k + 1
        while q is not None and q.word.slices[y_at - 1].kind not in MIN_TYPE:
            nxt = _sink_one(q, y_at, ("M1", "M2", "M3"))
            if nxt is None:
                q = None
                break
            q, y_at = nxt, y_at - 1
        if q is None:
            continue
        for m in enumerate_sites(q.word, "B5"):
            if m.slice != y_at:
                continue
            r = q.then(m)
            if r is None:
                continue
            for m2 in enumerate_sites(r.word, "S2", "reverse"):
                if m2.variant != "down":
                    continue
                s = r.then(m2)
                if s is not None and inversions(s.word) < inversions(path.word):
                    return s
    return None


def _mirrored_s3(path: _Path, k: int) -> _Path | None:
    """S3 on the upside-down word (where the Y becomes a lambda fed by a
    minimum), carried back move by move."""
    w = path.word
    rw = reflect(w)
    rk = len(w) - 2 - k
    site = Move("S3", "forward", "", rk + 1, rw.slices[rk].pos)
    if site not in _s3_sites(rw):
        return None
    q: _Path | None = path
    for m in s3_steps(rw, site):
        nrw = _apply_or_none(rw, m)
        if nrw is None:
            return None
        target = reflect(nrw)
        d = m.direction
        cand = [c for c in enumerate_sites(q.word, m.name, d) if _apply_or_none(q.word, c) == target]
        if not cand:
            return None
        q, rw = q.then(cand[0]), nrw
    return q if inversions(q.word) < inversions(w) else None


def _advance_m2(path: _Path, i: int) -> _Path | None:
    for m in enumerate_sites(path.word, "M2"):
        if m.slice == i + 1:
            return path.then(m)
    return None


def _sink_one(path: _Path, j: int, names: Sequence[str]) -> _Path | None:
    """Move the event at j one slot down by B1 or one of ``names``."""
    p = _b1(path, j - 1)
    if p is not None:
        return p
    for m in _near_sites(path.word, names, j, j):
        p = path.then(m)
        if p is not None:
            return p
    return None


def to_bridge(word: SlicedWord) -> Certificate:
    """Move every min-type event below every max-type event.

    The lowest offending minimum or Y-vertex sinks one slot at a time;
    crossings are passed with B-moves, extrema and vertices with M-moves,
    and a lambda feeding straight into a Y is resolved by the four-step
    S3 expansion.
    """
    validate(word)
    path = _Path(word)
    guard = 0
    while not is_bridge(path.word):
        guard += 1
        if guard > 10_000:
            raise CompileFailed("to_bridge did not converge")
        w = path.word
        j = _first_offender(w)
        a = w.slices[j - 1]
        nxt = None
        if a.kind is Kind.LAMBDA and w.slices[j].kind is Kind.Y and a.pos == w.slices[j].pos:
            site = Move("S3", "forward", "", j, a.pos)
            if site in _s3_sites(w):
                nxt = path.chain(s3_steps(w, site))
            if nxt is None:
                nxt = _iedge(path, j - 1)
            if nxt is None:
                nxt = _mirrored_s3(path, j - 1)
        if nxt is None:
            nxt = _advance(path, _bridge_key, j - 1, ("M1", "M2", "M3", "B2", "B3"))
        if nxt is None:
            nxt = _local_search(path, _bridge_key, ("M1", "M2", "M3", "B1", "B2", "B3", "B5"), 4)
        if nxt is None:
            raise CompileFailed(f"to_bridge stuck at {format_word(w)!r}")
        path = nxt
    return path.cert(word)


def _local_search(path: _Path, key, names: Sequence[str], depth: int, limit: int = 20_000) -> _Path | None:
    """Breadth-first search for any path that lowers ``key``."""
    k0 = key(path.word)
    seen = {path.word}
    frontier = deque([(path, 0)])
    while frontier and len(seen) < limit:
        p, d = frontier.popleft()
        if d >= depth:
            continue
        for name in names:
            for m in enumerate_sites(p.word, name):
                q = p.then(m)
                if q is None or q.word in seen:
                    continue
                if key(q.word) < k0:
                    return q
                seen.add(q.word)
                frontier.append((q, d + 1))
    return None


# --- plat_normalize -----------------------------------------------------


def _plat_key(word: SlicedWord) -> tuple:
    """Lexicographic progress measure toward (min)*(x)*(max)*."""
    ev = word.slices
    run = 0
    while run < len(ev) and ev[run].kind in MIN_TYPE:
        run += 1
    loose_min = [i for i in range(run, len(ev)) if ev[i].kind in MIN_TYPE]
    top = len(ev)
    while top > 0 and ev[top - 1].kind in MAX_TYPE:
        top -= 1
    loose_max = [i for i in range(top) if ev[i].kind in MAX_TYPE]
    # distance of the nearest loose extremum from its block, in foreign events
    below = sum(1 for e in ev[: loose_min[0]] if e.kind not in MIN_TYPE) if loose_min else 0
    above = sum(1 for e in ev[loose_max[-1] + 1 :] if e.kind not in MAX_TYPE) if loose_max else 0
    return (len(loose_min), below, len(loose_max), above, len(ev))


def plat_normalize(word: SlicedWord) -> Certificate:
    """Sort a bridge word into cups/Ys, crossings, caps/lambdas by B1-B3."""
    validate(word)
    if not is_bridge(word):
        raise NotBridge("word is not in bridge position")
    path = _Path(word)
    guard = 0
    while not is_plat_normal(path.word):
        guard += 1
        if guard > 10_000:
            raise CompileFailed("plat_normalize did not converge")
        w = path.word
        ev = w.slices
        run = 0
        while ev[run].kind in MIN_TYPE:
            run += 1
        loose = [i for i in range(run, len(ev)) if ev[i].kind in MIN_TYPE]
        if loose:
            i = loose[0] - 1
        else:
            top = len(ev)
            while ev[top - 1].kind in MAX_TYPE:
                top -= 1
            i = max(i for i in range(top) if ev[i].kind in MAX_TYPE)
        nxt = _advance(path, _plat_key, i, ("B2", "B3"))
        if nxt is None:
            nxt = _local_search(path, _plat_key, ("B1", "B2", "B3"), 4)
        if nxt is None:
            raise CompileFailed(f"plat_normalize stuck at {format_word(w)!r}")
        path = nxt
    return path.cert(word)


# --- saturate -----------------------------------------------------------


def _blocks(word: SlicedWord) -> tuple[int, int]:
    """(lo, hi): crossings occupy slices lo..hi-1 of a plat-normal word."""
    return _bridge_gaps(word)


def _trace_down(word: SlicedWord, k: int, x: int, stop: int) -> list[int] | None:
    """Positions of the strand entering slice k at x, at gaps k, k-1, ...,
    stop; None if an event below ends it first."""
    out = [x]
    for j in range(k - 1, stop - 1, -1):
        x = _back(word.slices[j], x)
        if x is None:
            return None
        out.append(x)
    return out


def _dirty_legs(word: SlicedWord) -> list[tuple[str, int, int]]:
    """Vertex legs that meet a crossing before reaching the middle gap:
    ("l", slice, leg) for lambdas and ("y", slice, leg) for Ys."""
    lo, hi = _blocks(word)
    out = []
    for k, e in enumerate(word.slices):
        if e.kind is Kind.LAMBDA:
            for leg in (0, 1):
                tr = _trace_down(word, k, e.pos + leg, hi)
                if tr is None:
                    continue
                x = tr[-1]
                for j in range(hi - 1, lo - 1, -1):
                    c = word.slices[j]
                    if c.pos <= x <= c.pos + 1:
                        out.append(("l", k, leg))
                        break
        elif e.kind is Kind.Y:
            rw = reflect(word)
            kr = len(word) - 1 - k
            for leg in (0, 1):
                tr = _trace_down(rw, kr, e.pos + leg, len(word) - lo)
                if tr is None:
                    continue
                x = tr[-1]
                for j in range(len(word) - lo - 1, len(word) - hi - 1, -1):
                    c = rw.slices[j]
                    if c.pos <= x <= c.pos + 1:
                        out.append(("y", k, leg))
                        break
    return out


def _finger(path: _Path, side: str, g: int, i: int, variant: str) -> _Path | None:
    """S1 at gap g on strand i, then carry the new cup down to the middle
    gap (side "l") or the new cap up to the top of the crossings ("y")."""
    p = path.then(Move("S1", "forward", variant, g, i))
    if p is None:
        return None
    lo, hi = _blocks(path.word)
    if side == "l":
        p = _move_event(p, g, lo)
        if p is None:
            return None
        return _move_event(p, g + 1, hi + 1)
    p = _move_event(p, g + 1, hi + 1)
    if p is None:
        return None
    return _move_event(p, g, lo)


def saturate(word: SlicedWord) -> Certificate:
    """Make every vertex leg run crossing-free to the middle gap.

    For each offending lambda leg a zigzag (S1) is inserted on the leg just
    below the vertex side of the crossings and its minimum is carried down
    to the middle gap through a region free of crossings; Y legs are
    treated upside down.  The projected diagram never changes.
    """
    validate(word)
    if not is_plat_normal(word):
        raise NotPlatNormal("saturate needs a plat-normal word")
    path = _Path(word)
    failed: set = set()
    while True:
        dirty = [d for d in _dirty_legs(path.word) if _leg_id(path.word, d) not in failed]
        if not dirty:
            break
        side, k, leg = dirty[0]
        nxt = _clean_leg(path, side, k, leg)
        if nxt is None:
            failed.add(_leg_id(path.word, dirty[0]))
            continue
        path = nxt
    return path.cert(word)


def _leg_id(word: SlicedWord, d) -> tuple:
    return (d, format_word(word))


def _leg_gap(word: SlicedWord, side: str, k: int, leg: int) -> int | None:
    """Position of a vertex leg where it enters the crossing block."""
    lo, hi = _blocks(word)
    e = word.slices[k]
    if side == "l":
        tr = _trace_down(word, k, e.pos + leg, hi)
    else:
        n = len(word)
        tr = _trace_down(reflect(word), n - 1 - k, e.pos + leg, n - lo)
    return None if tr is None else tr[-1]


def _clean_leg(path: _Path, side: str, k: int, leg: int) -> _Path | None:
    w = path.word
    lo, hi = _blocks(w)
    x = _leg_gap(w, side, k, leg)
    before = len(_dirty_legs(w))
    # gaps the leg reaches before its first crossing; crossings elsewhere
    # leave its position unchanged
    if side == "l":
        gaps = [(hi, x)]
        for j in range(hi - 1, lo - 1, -1):
            if w.slices[j].pos <= x <= w.slices[j].pos + 1:
                break
            gaps.append((j, x))
    else:
        gaps = [(lo, x)]
        for j in range(lo, hi):
            if w.slices[j].pos <= x <= w.slices[j].pos + 1:
                break
            gaps.append((j + 1, x))
    for g, i in gaps:
        for v in ("", "z"):
            p = _finger(path, side, g, i, v)
            if p is None or not is_plat_normal(p.word):
                continue
            if len(_dirty_legs(p.word)) < before:
                return p
    return None


# --- S3 -----------------------------------------------------------------


def expand_s3(word: SlicedWord, site: Move) -> Certificate:
    """The fixed decomposition S2, M2, B5, S2^-1 of an S3 site."""
    validate(word)
    steps = s3_steps(word, site)
    p = _Path(word).chain(steps)
    if p is None:
        raise InvalidSite(f"{site} does not expand on this word")
    return p.cert(word)


# --- compile_r ----------------------------------------------------------

_REALIZERS = {
    "R1": [("B2", "twist")],
    "R2": [("B2", "pass")],
    "R3": [("B1", "braid")],
    "R4": [("B3", "twist")],
    "R5": [("B3", "slide")],
    "R6": [("B5", "")],
}


def r4_case(word: SlicedWord, site: RSite) -> int:
    """Case 1, 2 or 3 of a vertex twist: the over germ, the under germ or
    the third germ is the one on the other side of the vertex from the
    remaining two."""
    d = project(word)
    where = d.node_of()
    vi, vj = site.anchors
    ni, si = where[vi]
    node = d.nodes[ni]
    if site.direction == "forward":
        over, under = (vi, vj) if site.variant == "first" else (vj, vi)
    else:
        c, s = where[d.pair[vi]]
        over, under = (vi, vj) if s % 2 == 0 else (vj, vi)
    third = [x for x in node.darts if x not in (vi, vj)][0]
    # darts[0] of a lambda node is its stem; darts[2] for a Y
    events = [e for e in word.slices if e.kind not in (Kind.CUP, Kind.CAP)]
    single = node.darts[0] if events[ni].kind is Kind.LAMBDA else node.darts[2]
    return {over: 1, under: 2, third: 3}[single]


def _recipe(kind: str, case: int | None, direction: str) -> dict:
    """Allowed preparation moves and the required step-kind profile."""
    prep = ["bubble"]
    need: dict[str, tuple[int, int]] = {}
    if kind in ("R1", "R2", "R5"):
        prep += ["finger", "B2"]
        need = {"S1": (0, 2)}
    elif kind == "R3":
        prep += ["finger", "gather", "B2"]
        need = {"S1": (1, 1)}
    elif kind == "R4":
        if case == 3:
            need = {}
        elif direction == "forward":
            prep += ["B4", "S2"] if case == 1 else ["B4"]
            need = {"B4": (1, 4)} if case == 2 else {}
        else:
            prep += ["S2", "B4"] if case == 1 else ["S2"]
            need = {"S2": (1, 2)} if case == 2 else {}
    elif kind == "R6":
        prep += ["S2", "B4"]
    return {"prep": prep, "need": need}


def profile_ok(kind: str, steps: Sequence[Move], case: int | None = None, direction: str = "forward") -> bool:
    """Does a compiled certificate follow its case recipe?"""
    names = [m.name for m in steps]
    real = {n for n, _ in _REALIZERS[kind]}
    iso = {"B1", "B2", "B3"}
    if any(m.direction == "reverse" and m.name in ("S1", "S2") for m in steps):
        return False
    if kind in ("R1", "R2", "R5"):
        return set(names) <= iso | {"S1"}
    if kind == "R3":
        return set(names) <= iso | {"S1"} and names.count("S1") == 1
    if kind == "R4":
        allowed = iso | {"B4", "S2"} if case == 1 else iso | ({"B4"} if direction == "forward" else {"S2"}) if case == 2 else iso
        if not set(names) <= allowed:
            return False
        if case == 2:
            return ("B4" in names) if direction == "forward" else ("S2" in names)
        return True
    if kind == "R6":
        if names.count("B5") != 1:
            return False
        i = names.index("B5")
        return set(names[:i]) <= {"S2", "B4", "B1", "B2"} and set(names[i + 1 :]) <= iso | {"B4"}
    return real <= set(names)


def _preparations(path: _Path, prep: Sequence[str]) -> list[_Path]:
    """One-step diagram-preserving rearrangements of a plat-normal word."""
    w = path.word
    lo, hi = _blocks(w)
    out: list[_Path] = []
    if "bubble" in prep:
        for i in range(lo):
            p = _move_event(path, i, lo - 1)
            if p is not None and p.steps != path.steps:
                out.append(p)
        for i in range(hi, len(w)):
            p = _move_event(path, i, hi)
            if p is not None and p.steps != path.steps:
                out.append(p)
        for i in range(lo, hi):
            for j in (lo, hi - 1):
                p = _move_event(path, i, j)
                if p is not None and p.steps != path.steps:
                    out.append(p)
    if "gather" in prep:
        for i in range(lo, hi):
            for j in range(lo, hi):
                if abs(i - j) > 1:
                    p = _move_event(path, i, j)
                    if p is not None and p.steps != path.steps:
                        out.append(p)
    if "finger" in prep:
        c = counts(w)
        for g in range(lo, hi + 1):
            for i in range(1, c[g] + 1):
                for v in ("", "z"):
                    p = _finger(path, "l", g, i, v)
                    if p is not None and is_plat_normal(p.word):
                        out.append(p)
    for name in ("S2", "B4"):
        if name in prep:
            dirs = ("forward",) if name == "S2" else ("forward", "reverse")
            for d in dirs:
                for m in enumerate_sites(w, name, d):
                    p = path.then(m)
                    if p is not None:
                        out.append(p)
    if "B2" in prep:
        for m in enumerate_sites(w, "B2"):
            if not m.variant.startswith("slide"):
                continue
            p = path.then(m)
            if p is not None and is_plat_normal(p.word):
                out.append(p)
    return out


def _cleanup(path: _Path, limit: int = 400) -> _Path | None:
    """Back to plat-normal form by diagram-preserving moves: greedy B1
    bubbling first, then a best-first search over B1 swaps and B2 slides
    ordered by the number of out-of-phase pairs."""
    p = _bubble_phases(path)
    if p is not None:
        return p
    tick = 0
    heap = [(_plat_rank_sum(path.word), 0, tick, path)]
    seen = {path.word}
    while heap and len(seen) < limit:
        _, n, _, q = heapq.heappop(heap)
        if n >= 8:
            continue
        for m in enumerate_sites(q.word, "B1") + enumerate_sites(q.word, "B2"):
            if m.name == "B2" and not m.variant.startswith("slide"):
                continue
            r = q.then(m)
            if r is None or r.word in seen:
                continue
            seen.add(r.word)
            done = _bubble_phases(r)
            if done is not None:
                return done
            tick += 1
            heapq.heappush(heap, (_plat_rank_sum(r.word), n + 1, tick, r))
    return None


def _bubble_phases(path: _Path) -> _Path | None:
    """Bubble-sort by phase with B1 swaps; None if a swap is blocked."""
    p = path
    while not is_plat_normal(p.word):
        ev = p.word.slices
        i = next(i for i in range(len(ev) - 1) if _rank(ev[i].kind) > _rank(ev[i + 1].kind))
        p = _b1(p, i)
        if p is None:
            return None
    return p


def _plat_rank_sum(word: SlicedWord) -> int:
    ev = word.slices
    return sum(1 for i in range(len(ev)) for j in range(i + 1, len(ev)) if _rank(ev[i].kind) > _rank(ev[j].kind))


def compile_r(word: SlicedWord, rsite: RSite, max_depth: int = DEFAULT_DEPTH, budget: int = 4000) -> Certificate:
    """Realize one R-move on the projection by moves on the word.

    Diagram-preserving preparations (B1 rearrangements, S1 zigzags carried
    to the ends of the crossing block, S2 and B4 as the case recipe allows)
    are explored breadth first; at every prepared word each realizing site
    of the matching B-move is tried, followed by a B1 clean-up back to
    plat-normal form.  The first candidate whose projection has the target
    canonical code and whose steps follow the recipe is returned.
    """
    validate(word)
    if not is_plat_normal(word):
        raise NotPlatNormal("compile_r needs a plat-normal word")
    d0 = project(word)
    target = canonical_code(apply_r(d0, rsite))
    case = r4_case(word, rsite) if rsite.kind == "R4" else None
    rec = _recipe(rsite.kind, case, rsite.direction)
    realizers = _REALIZERS[rsite.kind]
    levels = max(1, min(max_depth, LEVELS))
    start = _Path(word)
    frontier = [start]
    seen = {format_word(word)}
    explored = 0
    for depth in range(levels + 1):
        nxt_frontier: list[_Path] = []
        for p in frontier:
            hit = _try_realize(p, realizers, target, rsite, case)
            if hit is not None:
                return hit.cert(word)
            explored += 1
            if explored > budget or depth == levels:
                continue
            for q in _preparations(p, rec["prep"]):
                if len(q.steps) > max_depth * 4:
                    continue
                key = format_word(b1_normal(q.word)[0])
                if key in seen:
                    continue
                seen.add(key)
                nxt_frontier.append(q)
        frontier = nxt_frontier
        if not frontier:
            break
    raise CompileFailed(f"no realization of {rsite} found within the search budget")


def _try_realize(path: _Path, realizers, target: str, rsite: RSite, case) -> _Path | None:
    w = path.word
    for name, var in realizers:
        for m in enumerate_sites(w, name):
            if var and not m.variant.startswith(var):
                continue
            q = path.then(m)
            if q is None:
                continue
            q = _cleanup(q)
            if q is None:
                continue
            if canonical_code(draw(q.word)) != target:
                continue
            q = _fit_recipe(q, rsite, case)
            if q is not None:
                return q
    return None


def _fit_recipe(path: _Path, rsite: RSite, case) -> _Path | None:
    """Top up a realization to the recipe's mandatory stabilization count
    (R3 always carries exactly one S1)."""
    steps = path.steps
    if rsite.kind == "R3" and not any(m.name == "S1" for m in steps):
        path = _append_outer_s1(path)
        if path is None:
            return None
    if profile_ok(rsite.kind, path.steps, case, rsite.direction):
        return path
    return None


def _append_outer_s1(path: _Path) -> _Path | None:
    """A zigzag on the rightmost strand at the top of the crossing block,
    carried down through the outer region (no crossing can block it)."""
    w = path.word
    lo, hi = _blocks(w)
    n = counts(w)[hi]
    if n == 0:
        return None
    p = _finger(path, "l", hi, n, "")
    if p is None or not is_plat_normal(p.word):
        return None
    return p


# --- align --------------------------------------------------------------

_ALIGN_KINDS = (("S1", "forward"), ("S2", "forward"), ("B4", None), ("B2", None))


def _align_succ(word: SlicedWord) -> list[tuple[Move, SlicedWord]]:
    out = []
    for name, d in _ALIGN_KINDS:
        for m in enumerate_sites(word, name, d):
            if name == "B2" and not m.variant.startswith("slide"):
                continue
            w = _apply_or_none(word, m)
            if w is not None:
                out.append((m, w))
    return out


def _key(word: SlicedWord) -> str:
    return format_word(b1_normal(word)[0])


def align(a: SlicedWord, b: SlicedWord, max_depth: int = 4, limit: int = 60_000) -> tuple[Certificate, Certificate]:
    """Stabilize two plat-normal words with one projection to a common word.

    Bidirectional breadth-first search over S1, S2, B4 and extremum slides,
    with words identified up to far commutativity; the meeting point is
    reached exactly by explicit B1 swaps on both sides.
    """
    for w in (a, b):
        validate(w)
        if not is_plat_normal(w):
            raise NotPlatNormal("align needs plat-normal words")
    if canonical_code(project(a)) != canonical_code(project(b)):
        raise DiagramsDiffer("the two words project to different diagrams")
    parents = [{_key(a): (None, None, a)}, {_key(b): (None, None, b)}]
    frontiers = [[a], [b]]
    meet = _key(a) if _key(a) in parents[1] else None
    depth = [0, 0]
    while meet is None:
        side = 0 if (len(frontiers[0]) <= len(frontiers[1]) and depth[0] <= depth[1]) or depth[1] >= max_depth else 1
        if depth[side] >= max_depth or not frontiers[side]:
            side = 1 - side
            if depth[side] >= max_depth or not frontiers[side]:
                raise CompileFailed("no common stabilization within the search bound")
        nxt = []
        par, other = parents[side], parents[1 - side]
        for w in frontiers[side]:
            kw = _key(w)
            for m, v in _align_succ(w):
                kv = _key(v)
                if kv in par:
                    continue
                par[kv] = (kw, m, v)
                if kv in other:
                    meet = kv
                    break
                nxt.append(v)
                if len(par) > limit:
                    raise CompileFailed("align search budget exhausted")
            if meet is not None:
                break
        frontiers[side] = nxt
        depth[side] += 1
    paths = []
    for side, start in ((0, a), (1, b)):
        steps: list[Move] = []
        key = meet
        par = parents[side]
        while par[key][0] is not None:
            pk, m, _ = par[key]
            steps.append(m)
            key = pk
        steps.reverse()
        paths.append(_Path(start).chain(steps))
    target = b1_normal(paths[0].word)[0]
    certs = []
    for p, start in zip(paths, (a, b)):
        nf, moves = b1_normal(p.word)
        q = p.chain(moves)
        if q is None or q.word != target:
            raise CompileFailed("internal: far-commutation normal forms disagree")
        # the normal form may lift a crossing past a cap; sort phases back
        q = _bubble_phases(q) or q
        certs.append(q.cert(start))
    return certs[0], certs[1]


# --- common stabilization ----------------------------------------------


def transport_site(word: SlicedWord, running, rsite: RSite):
    """A site on project(word) whose move yields the same diagram, up to
    isomorphism, as ``rsite`` on the running diagram ``running``."""
    target = canonical_code(apply_r(running, rsite))
    dirs = "forward" if rsite.kind in ("R3", "R6") else rsite.direction
    d = project(word)
    for s in enumerate_r_sites(d, rsite.kind, dirs):
        if s.variant != rsite.variant:
            continue
        try:
            if canonical_code(apply_r(d, s)) == target:
                return s
        except CalculusError:
            continue
    return None


def common_stabilization(
    a: SlicedWord, b: SlicedWord, rseq: Sequence[RSite], max_depth: int = DEFAULT_DEPTH
) -> tuple[Certificate, Certificate, SlicedWord]:
    """Saturate, compile each R-move on the a-side, then align with b."""
    for w in (a, b):
        validate(w)
        if not is_plat_normal(w):
            raise NotPlatNormal("common_stabilization needs plat-normal words")
    path = _Path(a)
    running = project(a)
    for idx, rs in enumerate(rseq):
        try:
            nxt_diagram = apply_r(running, rs)
        except SiteMismatch:
            raise RSeqInvalid(idx, "site does not match the running diagram") from None
        sat = saturate(path.word)
        path = path.chain(sat.steps)
        site = transport_site(path.word, running, rs)
        if site is None:
            raise RSeqInvalid(idx, "site has no counterpart on the saturated word")
        cert = compile_r(path.word, site, max_depth)
        path = path.chain(cert.steps)
        running = nxt_diagram
    if canonical_code(running) != canonical_code(project(b)):
        raise DiagramsDiffer("rseq does not carry a's diagram to b's")
    ca, cb = align(path.word, b)
    full = path.chain(ca.steps)
    return full.cert(a), cb, full.word
