"""Bounded enumeration of words and breadth-first search over moves."""

from __future__ import annotations

import random
from collections import deque
from typing import Callable, Iterable, Iterator

from .moves import (
    NAMES,
    Certificate,
    Move,
    _apply_or_none,
    _kind_class,
    _swap,
    apply,
    enumerate_sites,
    fingerprint,
    inverse,
)
from .words import ARITY, Event, Kind, SlicedWord, format_word

_ORDER = list(Kind)


def enum_words(max_slices: int, max_width: int) -> Iterator[SlicedWord]:
    """Every closed valid word with 1..max_slices slices whose strand count
    never exceeds max_width; ordered by length, then lexicographically by
    (kind, position)."""
    if max_slices < 1 or max_width < 1:
        raise ValueError("bounds must be at least 1")
    for length in range(1, max_slices + 1):
        yield from _words_of_length(length, max_width)


def _words_of_length(length: int, max_width: int) -> Iterator[SlicedWord]:
    prefix: list[Event] = []

    def rec(n: int) -> Iterator[SlicedWord]:
        left = length - len(prefix)
        if left == 0:
            if n == 0:
                yield SlicedWord(tuple(prefix))
            return
        # each remaining slice lowers the count by at most 2
        if n > 2 * left:
            return
        for k in _ORDER:
            a, b = ARITY[k]
            m = n - a + b
            if n < a or m > max_width or m < 0:
                continue
            top = n + 1 if k is Kind.CUP else n - a + 1
            for p in range(1, top + 1):
                prefix.append(Event(k, p))
                yield from rec(m)
                prefix.pop()

    yield from rec(0)


def random_word(rng: random.Random, length: int, max_width: int = 6) -> SlicedWord:
    """A uniformly stepped random closed word with exactly ``length`` slices."""
    if length < 2:
        raise ValueError("a closed word needs at least 2 slices")
    while True:
        ev: list[Event] = []
        n = 0
        for left in range(length, 0, -1):
            opts = []
            for k in _ORDER:
                a, b = ARITY[k]
                m = n - a + b
                if n < a or m > max_width or m > 2 * (left - 1):
                    continue
                top = n + 1 if k is Kind.CUP else n - a + 1
                opts += [Event(k, p) for p in range(1, top + 1)]
            if not opts:
                break
            e = rng.choice(opts)
            ev.append(e)
            n += ARITY[e.kind][1] - ARITY[e.kind][0]
        if len(ev) == length and n == 0:
            return SlicedWord(tuple(ev))


def parse_kinds(spec: str | Iterable[str]) -> list[tuple[str, str | None]]:
    """``"B1,S1,S2^-1"`` -> [(name, direction)]; a bare name means both
    directions for B-moves and forward otherwise."""
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out = []
    for raw in items:
        t = raw.strip()
        if not t:
            continue
        if t.endswith("^-1"):
            name, d = t[:-3], "reverse"
        elif t in ("B1-B3", "B1-B5", "M1-M3"):
            lo, hi = int(t[1]), int(t[-1])
            out += [(f"{t[0]}{i}", None) for i in range(lo, hi + 1)]
            continue
        else:
            name, d = t, None
        if name not in NAMES:
            raise ValueError(f"unknown move kind {name!r}")
        out.append((name, d))
    return out


def successors(word: SlicedWord, kinds: list[tuple[str, str | None]]) -> list[tuple[Move, SlicedWord]]:
    out = []
    for name, d in kinds:
        for m in enumerate_sites(word, name, d):
            w = _apply_or_none(word, m)
            if w is not None:
                out.append((m, w))
    return out


def b1_normal(word: SlicedWord) -> tuple[SlicedWord, list[Move]]:
    """Bubble commuting neighbours (B1 swaps) toward the smallest word."""
    steps: list[Move] = []
    ev = list(word.slices)
    changed = True
    while changed:
        changed = False
        for i in range(len(ev) - 1):
            a, b = ev[i], ev[i + 1]
            if {_kind_class(a.kind), _kind_class(b.kind)} == {"min", "max"}:
                continue
            opts = _swap(a, b)
            if not opts:
                continue
            _, b2, a2 = opts[0]
            if (b2, a2) < (a, b):
                steps.append(Move("B1", "forward", "", i + 1, a.pos))
                ev[i], ev[i + 1] = b2, a2
                changed = True
    return SlicedWord(tuple(ev)), steps


def bfs(
    start: SlicedWord,
    goal: SlicedWord | Callable[[SlicedWord], bool],
    kinds: str | Iterable[str],
    max_depth: int,
    quotient_b1: bool = False,
) -> Certificate | None:
    """Shortest certificate from ``start`` to ``goal`` within ``max_depth``
    moves (ties broken by enumeration order), or None."""
    return search(start, goal, kinds, max_depth, quotient_b1)[0]


def search(
    start: SlicedWord,
    goal: SlicedWord | Callable[[SlicedWord], bool],
    kinds: str | Iterable[str],
    max_depth: int,
    quotient_b1: bool = False,
) -> tuple[Certificate | None, bool]:
    """Like :func:`bfs`, also reporting whether a miss is final: True when
    the reachable set closed before the depth bound was hit."""
    ks = parse_kinds(kinds)
    if isinstance(goal, SlicedWord):
        target = goal
        goal_key = _key(target, quotient_b1)
        hit = lambda w: _key(w, quotient_b1) == goal_key  # noqa: E731
    else:
        target = None
        hit = goal
    parent: dict[str, tuple[str | None, Move | None, SlicedWord]] = {}
    k0 = _key(start, quotient_b1)
    parent[k0] = (None, None, start)
    frontier = deque([(start, 0)])
    found = start if hit(start) else None
    cut = False
    while frontier and found is None:
        w, depth = frontier.popleft()
        if depth >= max_depth:
            cut = True
            continue
        kw = _key(w, quotient_b1)
        for m, nxt in successors(w, ks):
            key = _key(nxt, quotient_b1)
            if key in parent:
                continue
            parent[key] = (kw, m, nxt)
            if hit(nxt):
                found = nxt
                break
            frontier.append((nxt, depth + 1))
    if found is None:
        return None, not cut
    steps: list[Move] = []
    key = _key(found, quotient_b1)
    while parent[key][0] is not None:
        pk, m, _ = parent[key]
        steps.append(m)
        key = pk
    steps.reverse()
    end = found
    if quotient_b1 and target is not None and found != target:
        # walk found -> normal form -> target with explicit B1 swaps
        nf, there = b1_normal(found)
        _, back = b1_normal(target)
        w = found
        for m in there:
            w = apply(w, m)
            steps.append(m)
        chain = [target]
        for m in back:
            chain.append(apply(chain[-1], m))
        for i in range(len(back) - 1, -1, -1):
            m = inverse(chain[i], back[i])
            w = apply(w, m)
            steps.append(m)
        end = w
    return Certificate(fingerprint(start), tuple(steps), end), True


def _key(w: SlicedWord, quotient: bool) -> str:
    return format_word(b1_normal(w)[0] if quotient else w)
