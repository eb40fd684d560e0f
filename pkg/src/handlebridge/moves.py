"""Word-level move catalog, site enumeration, application and certificates.

Moves are addressed by :class:`Move`, which bundles the kind (``name``,
``direction``, ``variant``) with the site (``slice``, ``position``,
``aux``).  ``slice`` is the 1-based index of the first slice of the
rewritten window, except for S1 where it is the gap (0..n) receiving the
new zigzag.  ``position`` is the leftmost strand of the window.

Local templates are written in window coordinates (offset 0 is strand
``position``).  Every template is closed under the two symmetries of the
plane picture: vertical reflection (:func:`reflect`) and left-right
mirroring; both flip crossing signs.  Mirrored variants carry the
suffixes ``.v``, ``.h`` and ``.hv``.

Catalog (forward direction):

B1   ``""``: adjacent slices with disjoint supports swap, except a
     min-type/max-type pair.  ``braid...``: the crossing triple relation.
B2   ``slide``: a cup slides past a crossing with one of its arms;
     ``twist``: a crossing on the two arms of a cup is absorbed (kink);
     ``pass``: a strand passing over (under) both arms of a cup is pulled off.
B3   ``twist``: a crossing on the two branches of a Y is absorbed;
     ``slide``/``slide2``: a strand passes a Y from stem side to branch side.
B4   a λ feeding a cap re-attaches to the other side of the cap.
B5   two stacked λ (or Y) vertices re-associate (IH on a flat edge).
S1   a zigzag (one new cup and cap) on a strand of the middle region.
S2   ``down``: a λ is pushed down one leg to the middle gap, becoming a Y
     and a cap; ``up`` is the vertical mirror (Y pushed up).
S3   a λ feeding a Y directly (above a min-type slice); applied through
     its four-step expansion.
M1   cap below cup interchange; M2 λ/cup or cap/Y; M3 λ/Y.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from typing import Iterable

from .errors import (
    CalculusError,
    EndMismatch,
    FingerprintMismatch,
    InvalidSite,
    StepFailed,
)
from .words import (
    ARITY,
    MAX_TYPE,
    MIN_TYPE,
    Event,
    Kind,
    SlicedWord,
    _bridge_gaps,
    counts,
    flip_kind,
    format_word,
    parse_word,
    reflect,
)

NAMES = ("B1", "B2", "B3", "B4", "B5", "S1", "S2", "S3", "M1", "M2", "M3")
REVERSIBLE = frozenset({"B1", "B2", "B3", "B4", "B5"})
DESTABILIZABLE = frozenset({"S1", "S2"})


@dataclass(frozen=True, order=True)
class Move:
    name: str
    direction: str = "forward"
    variant: str = ""
    slice: int = 0
    position: int = 0
    aux: tuple[int, ...] = ()

    @property
    def kind(self) -> tuple[str, str, str]:
        return (self.name, self.direction, self.variant)

    @property
    def site(self) -> tuple[int, int, tuple[int, ...]]:
        return (self.slice, self.position, self.aux)

    def __str__(self) -> str:
        v = f"[{self.variant}]" if self.variant else ""
        r = "^-1" if self.direction == "reverse" else ""
        a = "," + ",".join(map(str, self.aux)) if self.aux else ""
        return f"{self.name}{r}{v}@{self.slice}:{self.position}{a}"

    def to_dict(self) -> dict:
        return {
            "kind": self.name,
            "direction": self.direction,
            "variant": self.variant,
            "slice": self.slice,
            "position": self.position,
            "aux": list(self.aux),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Move":
        return cls(d["kind"], d["direction"], d["variant"], int(d["slice"]), int(d["position"]), tuple(d["aux"]))


def _sort_key(m: Move):
    return (m.slice, m.position, m.variant, m.direction, m.aux)


# --- local templates ----------------------------------------------------

Local = tuple[tuple[Kind, int], ...]


@dataclass(frozen=True)
class Rule:
    name: str
    variant: str
    lhs: Local
    rhs: Local
    width: int  # strands entering the window


def _flip_sign(k: Kind) -> Kind:
    return {Kind.XPOS: Kind.XNEG, Kind.XNEG: Kind.XPOS}.get(k, k)


def _hmirror(seq: Local, width: int) -> Local:
    out = []
    c = width
    for k, o in seq:
        a, b = ARITY[k]
        out.append((_flip_sign(k), c - o if k is Kind.CUP else c - o - a))
        c += b - a
    return tuple(out)


def _vreflect(seq: Local) -> Local:
    return tuple((flip_kind(k), o) for k, o in reversed(seq))


def _out_width(seq: Local, width: int) -> int:
    return width + sum(ARITY[k][1] - ARITY[k][0] for k, _ in seq)


def _close(name: str, variant: str, lhs: Local, rhs: Local, width: int) -> list[Rule]:
    out = []
    for tag, (l, r, w) in (
        ("", (lhs, rhs, width)),
        (".h", (_hmirror(lhs, width), _hmirror(rhs, width), width)),
        (".v", (_vreflect(lhs), _vreflect(rhs), _out_width(lhs, width))),
    ):
        out.append(Rule(name, variant + tag, l, r, w))
    vl, vr, vw = _vreflect(lhs), _vreflect(rhs), _out_width(lhs, width)
    out.append(Rule(name, variant + ".hv", _hmirror(vl, vw), _hmirror(vr, vw), vw))
    return out


def _x(sign: str) -> Kind:
    return Kind.XPOS if sign == "+" else Kind.XNEG


def _neg(sign: str) -> str:
    return "-" if sign == "+" else "+"


def _build_rules() -> list[Rule]:
    C, Y, L, P = Kind.CUP, Kind.Y, Kind.LAMBDA, Kind.CAP
    raw: list[Rule] = []
    for a in "+-":
        for b in "+-":
            for c in "+-":
                if (a, b, c) in (("+", "-", "+"), ("-", "+", "-")):
                    continue
                raw += _close(
                    "B1",
                    f"braid{a}{b}{c}",
                    ((_x(a), 0), (_x(b), 1), (_x(c), 0)),
                    ((_x(c), 1), (_x(b), 0), (_x(a), 1)),
                    3,
                )
    for e in "+-":
        raw += _close("B2", f"slide{e}", ((C, 0), (_x(e), 1)), ((C, 1), (_x(_neg(e)), 0)), 1)
        raw += _close("B2", f"twist{e}", ((C, 0), (_x(e), 0)), ((C, 0),), 0)
        raw += _close("B2", f"pass{e}", ((C, 1), (_x(e), 0), (_x(e), 1)), ((C, 0),), 1)
        raw += _close("B3", f"twist{e}", ((Y, 0), (_x(e), 0)), ((Y, 0),), 1)
        raw += _close("B3", f"slide{e}", ((_x(e), 0), (Y, 0)), ((Y, 1), (_x(e), 0), (_x(e), 1)), 2)
        s, ns = e, _neg(e)
        raw += _close("B3", f"slide2{e}", ((Y, 0), (_x(ns), 1)), ((_x(ns), 0), (Y, 1), (_x(s), 0)), 2)
    raw += _close("B4", "", ((L, 0), (P, 0)), ((L, 1), (P, 0)), 3)
    raw += _close("B5", "", ((L, 0), (L, 0)), ((L, 1), (L, 0)), 3)
    rules: list[Rule] = []
    seen: set = set()
    for r in raw:
        key = (r.lhs, r.rhs, r.width)
        back = (r.rhs, r.lhs, r.width)
        if key in seen or back in seen:
            continue
        seen.add(key)
        rules.append(r)
    return rules


RULES: list[Rule] = _build_rules()
_RULES_BY_NAME: dict[str, list[Rule]] = {}
for _r in RULES:
    _RULES_BY_NAME.setdefault(_r.name, []).append(_r)
_RULE_INDEX = {(r.name, r.variant): r for r in RULES}
# rules keyed by the kind of their first slice, per direction
_RULES_BY_HEAD: dict[tuple[str, str], dict[Kind, list[Rule]]] = {}
for _r in RULES:
    for _d, _seq in (("forward", _r.lhs), ("reverse", _r.rhs)):
        _RULES_BY_HEAD.setdefault((_r.name, _d), {}).setdefault(_seq[0][0], []).append(_r)
for _n in ("B1", "B2", "B3", "B4", "B5"):
    for _d in ("forward", "reverse"):
        _RULES_BY_HEAD.setdefault((_n, _d), {})


def _match(word: SlicedWord, ncount: list[int], i: int, seq: Local, width: int) -> int | None:
    """Base strand p if ``seq`` matches the slices starting at index i."""
    if i + len(seq) > len(word):
        return None
    ev = word.slices[i : i + len(seq)]
    if any(e.kind is not k for e, (k, _) in zip(ev, seq)):
        return None
    p = ev[0].pos - seq[0][1]
    if p < 1 or any(e.pos - p != o for e, (_, o) in zip(ev, seq)):
        return None
    if ncount[i] < p + width - 1:
        return None
    return p


def _emit(seq: Local, p: int) -> list[Event]:
    return [Event(k, p + o) for k, o in seq]


# --- B1 and M interchanges ----------------------------------------------


def _swap(a: Event, b: Event) -> tuple[list[tuple[str, Event, Event]]]:
    """Possible interchanges of adjacent a (lower), b (upper) with disjoint
    supports, as (side, b', a') triples."""
    ia, oa = ARITY[a.kind]
    ib, ob = ARITY[b.kind]
    p, q = a.pos, b.pos
    out = []
    left = q <= p if b.kind is Kind.CUP else q + ib <= p
    right = q >= p + oa
    if left:
        out.append(("L", Event(b.kind, q), Event(a.kind, p + ob - ib)))
    if right:
        out.append(("R", Event(b.kind, q - oa + ia), Event(a.kind, p)))
    return out


def _kind_class(k: Kind) -> str:
    return "min" if k in MIN_TYPE else "max" if k in MAX_TYPE else "x"


def _m_name(a: Event, b: Event) -> str | None:
    if a.kind not in MAX_TYPE or b.kind not in MIN_TYPE:
        return None
    if a.kind is Kind.CAP and b.kind is Kind.CUP:
        return "M1"
    if a.kind is Kind.LAMBDA and b.kind is Kind.Y:
        return "M3"
    return "M2"


def _b1_sites(word: SlicedWord) -> list[Move]:
    out = []
    for i in range(len(word) - 1):
        a, b = word.slices[i], word.slices[i + 1]
        if {_kind_class(a.kind), _kind_class(b.kind)} == {"min", "max"}:
            continue
        if _swap(a, b):
            out.append(Move("B1", "forward", "", i + 1, a.pos))
    return out


def _m_sites(word: SlicedWord, name: str) -> list[Move]:
    out = []
    for i in range(len(word) - 1):
        a, b = word.slices[i], word.slices[i + 1]
        if _m_name(a, b) != name:
            continue
        opts = _swap(a, b)
        if not opts:
            continue
        variants = [s for s, _, _ in opts] if len(opts) > 1 else [""]
        for v in variants:
            out.append(Move(name, "forward", v, i + 1, a.pos))
    return out


def _apply_swap(word: SlicedWord, i: int, side: str) -> SlicedWord:
    a, b = word.slices[i], word.slices[i + 1]
    opts = _swap(a, b)
    if side:
        opts = [o for o in opts if o[0] == side]
    _, b2, a2 = opts[0]
    return word.replace(i, i + 2, [b2, a2])


# --- S1 -----------------------------------------------------------------


def _s1_gaps(word: SlicedWord) -> range:
    lo, hi = _bridge_gaps(word)
    if lo <= hi:
        return range(lo, hi + 1)
    return range(0, len(word) + 1)


S1_VARIANTS = ("", "z")


def _s1_sites(word: SlicedWord, forms: tuple[str, ...] = ("",)) -> list[Move]:
    c = counts(word)
    return [Move("S1", "forward", v, g, i) for g in _s1_gaps(word) for i in range(1, c[g] + 1) for v in forms]


def _s1_pair(i: int, variant: str) -> list[Event]:
    # "" turns the strand to the right, "z" to the left
    if variant == "z":
        return [Event(Kind.CUP, i), Event(Kind.CAP, i + 1)]
    return [Event(Kind.CUP, i + 1), Event(Kind.CAP, i)]


def _s1_apply(word: SlicedWord, g: int, i: int, variant: str = "") -> SlicedWord:
    return word.replace(g, g, _s1_pair(i, variant))


def _s1_reverse_sites(word: SlicedWord) -> list[Move]:
    out = []
    for j in range(len(word) - 1):
        a, b = word.slices[j], word.slices[j + 1]
        if a.kind is not Kind.CUP or b.kind is not Kind.CAP:
            continue
        for v in S1_VARIANTS:
            i = min(a.pos, b.pos)
            if [a, b] != _s1_pair(i, v):
                continue
            reduced = word.replace(j, j + 2, [])
            if j in _s1_gaps(reduced) and i <= counts(reduced)[j]:
                out.append(Move("S1", "reverse", v, j + 1, i))
    return out


# --- S2 -----------------------------------------------------------------


def _back(e: Event, x: int) -> int | None:
    """Position before event e of an untouched strand at x after it."""
    a, b = ARITY[e.kind]
    if b == 0:
        return x if x < e.pos else x + a
    if x < e.pos:
        return x
    if x > e.pos + b - 1:
        return x - b + a
    return None


def _g0(word: SlicedWord, k: int) -> int:
    return 1 + max((i for i in range(k) if word.slices[i].kind in MIN_TYPE), default=-1)


def _s2_down(word: SlicedWord, k: int, leg: int) -> SlicedWord | None:
    lam = word.slices[k]
    if lam.kind is not Kind.LAMBDA:
        return None
    g0 = _g0(word, k)
    if g0 == 0:
        return None
    q = lam.pos
    d = q + leg
    track = {k: d}
    for j in range(k - 1, g0 - 1, -1):
        d = _back(word.slices[j], d)
        if d is None:
            return None
        track[j] = d
    ev = list(word.slices[:g0]) + [Event(Kind.Y, track[g0])]
    for j in range(g0, k):
        e = word.slices[j]
        ev.append(Event(e.kind, e.pos + 1) if e.pos > track[j] else e)
    ev.append(Event(Kind.CAP, q + 1) if leg == 0 else Event(Kind.CAP, q))
    ev += word.slices[k + 1 :]
    return SlicedWord(tuple(ev))


def _s2_down_sites(word: SlicedWord) -> list[tuple[int, int]]:
    return [
        (k, leg)
        for k, e in enumerate(word.slices)
        if e.kind is Kind.LAMBDA
        for leg in (0, 1)
        if _s2_down(word, k, leg) is not None
    ]


def _s2_down_inverse(word: SlicedWord, k: int, leg: int) -> SlicedWord | None:
    """Undo an S2 whose new cap is slice k; None unless it is an exact inverse."""
    cap = word.slices[k]
    if cap.kind is not Kind.CAP:
        return None
    c = cap.pos
    n = counts(word)
    pa = c - 1 if leg == 0 else c + 1
    if pa < 1 or pa + 1 > n[k]:
        return None
    track = {k: pa}
    g = None
    for j in range(k - 1, -1, -1):
        e = word.slices[j]
        if e.kind is Kind.Y and e.pos == track[j + 1]:
            g = j
            break
        x, y = _back(e, track[j + 1]), _back(e, track[j + 1] + 1)
        if x is None or y is None or y != x + 1:
            return None
        track[j] = x
    if g is None:
        return None
    ev = list(word.slices[:g])
    for j in range(g + 1, k):
        e = word.slices[j]
        ev.append(Event(e.kind, e.pos - 1) if e.pos > track[j] + 1 else e)
    ev.append(Event(Kind.LAMBDA, c - 1 if leg == 0 else c))
    ev += word.slices[k + 1 :]
    reduced = SlicedWord(tuple(ev))
    if _s2_down(reduced, k - 1, leg) != word:
        return None
    return reduced


def _s2_sites(word: SlicedWord, direction: str) -> list[Move]:
    out = []
    n = len(word)
    if direction == "forward":
        for k, leg in _s2_down_sites(word):
            out.append(Move("S2", "forward", "down", k + 1, word.slices[k].pos, (leg,)))
        rw = reflect(word)
        for k, leg in _s2_down_sites(rw):
            out.append(Move("S2", "forward", "up", n - k, rw.slices[k].pos, (leg,)))
    else:
        for k, e in enumerate(word.slices):
            for leg in (0, 1):
                if e.kind is Kind.CAP and _s2_down_inverse(word, k, leg) is not None:
                    out.append(Move("S2", "reverse", "down", k + 1, e.pos, (leg,)))
        rw = reflect(word)
        for k, e in enumerate(rw.slices):
            for leg in (0, 1):
                if e.kind is Kind.CAP and _s2_down_inverse(rw, k, leg) is not None:
                    out.append(Move("S2", "reverse", "up", n - k, e.pos, (leg,)))
    return out


def _s2_apply(word: SlicedWord, m: Move) -> SlicedWord | None:
    if len(m.aux) != 1 or m.aux[0] not in (0, 1) or not 1 <= m.slice <= len(word):
        return None
    leg = m.aux[0]
    n = len(word)
    if m.variant == "down":
        k, w = m.slice - 1, word
    elif m.variant == "up":
        k, w = n - m.slice, reflect(word)
    else:
        return None
    if w.slices[k].pos != m.position:
        return None
    res = _s2_down(w, k, leg) if m.direction == "forward" else _s2_down_inverse(w, k, leg)
    if res is None:
        return None
    return res if m.variant == "down" else reflect(res)


# --- S3 -----------------------------------------------------------------


def _s3_sites(word: SlicedWord) -> list[Move]:
    out = []
    for k in range(1, len(word) - 1):
        a, b = word.slices[k], word.slices[k + 1]
        if (
            a.kind is Kind.LAMBDA
            and b.kind is Kind.Y
            and a.pos == b.pos
            and word.slices[k - 1].kind in MIN_TYPE
        ):
            out.append(Move("S3", "forward", "", k + 1, a.pos))
    return out


def s3_steps(word: SlicedWord, site: Move) -> list[Move]:
    """The four moves S2, M2, B5, S2^-1 realizing S3 at ``site``."""
    if site.name != "S3" or Move("S3", "forward", "", site.slice, site.position) not in _s3_sites(word):
        raise InvalidSite(f"{site} is not an S3 site")
    k, p = site.slice, site.position  # 1-based slice of the lambda
    return [
        Move("S2", "forward", "down", k, p, (0,)),
        Move("M2", "forward", "", k + 1, p + 1),
        Move("B5", "forward", _B5_Y, k, p),
        Move("S2", "reverse", "down", k + 2, p + 2, (0,)),
    ]


_B5_Y = next(r.variant for r in _RULES_BY_NAME["B5"] if r.lhs == ((Kind.Y, 0), (Kind.Y, 0)))


# --- public API ---------------------------------------------------------


def _directions(name: str, direction: str | None) -> tuple[str, ...]:
    if direction is not None:
        return (direction,)
    return ("forward", "reverse") if name in REVERSIBLE else ("forward",)


def enumerate_sites(
    word: SlicedWord, name: str, direction: str | None = None, variant: str | None = None
) -> list[Move]:
    """All sites of one move kind, sorted by slice, position, variant.

    ``direction=None`` gives both directions for B-moves and only forward
    stabilizations; destabilizations must be requested explicitly.
    """
    if name not in NAMES:
        raise ValueError(f"unknown move kind {name!r}")
    out: list[Move] = []
    for d in _directions(name, direction):
        if name == "B1" and d == "forward":
            out += _b1_sites(word)
        if name in ("B1", "B2", "B3", "B4", "B5"):
            out += _template_sites(word, name, d)
        elif name == "S1":
            # the left-turning "z" form is listed only on request
            forms = ("z",) if variant == "z" else ("",)
            out += _s1_sites(word, forms) if d == "forward" else _s1_reverse_sites(word)
        elif name == "S2":
            out += _s2_sites(word, d)
        elif name == "S3" and d == "forward":
            out += _s3_sites(word)
        elif name in ("M1", "M2", "M3") and d == "forward":
            out += _m_sites(word, name)
    if variant is not None:
        # a bare family name ("slide") also selects its signed mirrors
        out = [m for m in out if variant in (m.variant, m.variant.split(".")[0], m.variant.split(".")[0].rstrip("+-"))]
    return sorted(set(out), key=_sort_key)


def _template_sites(word: SlicedWord, name: str, direction: str) -> list[Move]:
    c = counts(word)
    out = []
    by_head = _RULES_BY_HEAD[(name, direction)]
    for i, e in enumerate(word.slices):
        for r in by_head.get(e.kind, ()):
            seq = r.lhs if direction == "forward" else r.rhs
            p = _match(word, c, i, seq, r.width)
            if p is not None:
                out.append(Move(name, direction, r.variant, i + 1, p))
    return out


def all_sites(word: SlicedWord, names: Iterable[str] = NAMES, directions: Iterable[str] | None = None) -> list[Move]:
    out = []
    for name in names:
        if directions is None:
            out += enumerate_sites(word, name)
        else:
            for d in directions:
                out += enumerate_sites(word, name, d)
    return out


def _apply_or_none(word: SlicedWord, m: Move) -> SlicedWord | None:
    name = m.name
    if name in ("B1", "B2", "B3", "B4", "B5") and (name, m.variant) in _RULE_INDEX:
        r = _RULE_INDEX[(name, m.variant)]
        seq, new = (r.lhs, r.rhs) if m.direction == "forward" else (r.rhs, r.lhs)
        i = m.slice - 1
        if i < 0:
            return None
        p = _match(word, counts(word), i, seq, r.width)
        if p is None or p != m.position:
            return None
        return word.replace(i, i + len(seq), _emit(new, p))
    if name == "B1" and m.variant == "":
        if m.direction != "forward" or not 1 <= m.slice < len(word):
            return None
        i = m.slice - 1
        a, b = word.slices[i], word.slices[i + 1]
        if a.pos != m.position or {_kind_class(a.kind), _kind_class(b.kind)} == {"min", "max"}:
            return None
        if not _swap(a, b):
            return None
        return _apply_swap(word, i, "")
    if name in ("M1", "M2", "M3"):
        if m.direction != "forward" or not 1 <= m.slice < len(word):
            return None
        i = m.slice - 1
        a, b = word.slices[i], word.slices[i + 1]
        if a.pos != m.position or _m_name(a, b) != name:
            return None
        opts = _swap(a, b)
        if not opts or (m.variant == "" and len(opts) > 1) or (m.variant and m.variant not in [s for s, _, _ in opts]):
            return None
        return _apply_swap(word, i, m.variant)
    if name == "S1":
        if m.direction == "forward":
            if m.aux or m.variant not in S1_VARIANTS:
                return None
            if m.slice not in _s1_gaps(word) or not 1 <= m.position <= counts(word)[m.slice]:
                return None
            return _s1_apply(word, m.slice, m.position, m.variant)
        if m not in _s1_reverse_sites(word):
            return None
        return word.replace(m.slice - 1, m.slice + 1, [])
    if name == "S2":
        return _s2_apply(word, m)
    if name == "S3":
        try:
            steps = s3_steps(word, m)
        except InvalidSite:
            return None
        for s in steps:
            word = _apply_or_none(word, s)
            if word is None:
                return None
        return word
    return None


def apply(word: SlicedWord, move: Move) -> SlicedWord:
    """Apply one move; raises InvalidSite unless the site matches."""
    out = _apply_or_none(word, move)
    if out is None:
        raise InvalidSite(f"{move} does not match the word")
    return out


def inverse(word: SlicedWord, move: Move) -> Move:
    """The move undoing ``move`` on ``apply(word, move)``."""
    name = move.name
    if name in ("B2", "B3", "B4", "B5") or (name == "B1" and move.variant):
        d = "reverse" if move.direction == "forward" else "forward"
        return replace(move, direction=d)
    if name == "B1":
        after = apply(word, move)
        return replace(move, position=after.slices[move.slice - 1].pos)
    if name == "S1":
        if move.direction == "forward":
            return Move("S1", "reverse", move.variant, move.slice + 1, move.position)
        return Move("S1", "forward", move.variant, move.slice - 1, move.position)
    if name == "S2":
        after = apply(word, move)
        if move.direction == "forward":
            k = move.slice + 1 if move.variant == "down" else move.slice
            pos = after.slices[k - 1].pos
            return replace(move, direction="reverse", slice=k, position=pos)
        k = move.slice - 1 if move.variant == "down" else move.slice
        pos = after.slices[k - 1].pos
        return replace(move, direction="forward", slice=k, position=pos)
    raise InvalidSite(f"{name} has no inverse")


# --- certificates -------------------------------------------------------

CERT_VERSION = 1


def fingerprint(word: SlicedWord) -> str:
    return hashlib.blake2b(format_word(word).encode(), digest_size=8).hexdigest()


@dataclass(frozen=True)
class Certificate:
    start_fingerprint: str
    steps: tuple[Move, ...]
    end_word: SlicedWord

    def kinds(self) -> list[str]:
        return [m.name + ("^-1" if m.direction == "reverse" else "") for m in self.steps]

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": CERT_VERSION,
                "start_fingerprint": self.start_fingerprint,
                "steps": [m.to_dict() for m in self.steps],
                "end_word": format_word(self.end_word),
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        d = json.loads(text)
        if d.get("version") != CERT_VERSION:
            raise ValueError(f"unsupported certificate version {d.get('version')!r}")
        return cls(d["start_fingerprint"], tuple(Move.from_dict(s) for s in d["steps"]), parse_word(d["end_word"]))


def replay(start: SlicedWord, steps: Iterable[Move]) -> list[SlicedWord]:
    """All intermediate words, start included."""
    out = [start]
    for i, m in enumerate(steps, start=1):
        try:
            out.append(apply(out[-1], m))
        except CalculusError as e:
            raise StepFailed(i, e.name) from None
    return out


def verify(cert: Certificate, start: SlicedWord) -> SlicedWord:
    if fingerprint(start) != cert.start_fingerprint:
        raise FingerprintMismatch("start word does not match the certificate")
    end = replay(start, cert.steps)[-1]
    if end != cert.end_word:
        raise EndMismatch(f"replay ends at {format_word(end)!r}")
    return end


class Tracer:
    """Accumulates moves from a start word into a certificate."""

    def __init__(self, start: SlicedWord):
        self.start = start
        self.word = start
        self.steps: list[Move] = []

    def do(self, move: Move) -> SlicedWord:
        self.word = apply(self.word, move)
        self.steps.append(move)
        return self.word

    def extend(self, moves: Iterable[Move]) -> SlicedWord:
        for m in moves:
            self.do(m)
        return self.word

    def certificate(self) -> Certificate:
        return Certificate(fingerprint(self.start), tuple(self.steps), self.word)


def empty_certificate(word: SlicedWord) -> Certificate:
    return Certificate(fingerprint(word), (), word)
