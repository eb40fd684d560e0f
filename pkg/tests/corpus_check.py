"""Per-site soundness checks shared by the move tests and the acceptance run."""

from __future__ import annotations

from handlebridge.moves import NAMES, REVERSIBLE, _apply_or_none, enumerate_sites, inverse
from handlebridge.words import (
    Kind,
    SlicedWord,
    _bridge_gaps,
    counts,
    graph_summary,
    is_valid,
)

CRITICAL = (Kind.CUP, Kind.CAP, Kind.Y, Kind.LAMBDA)
ZERO = {k: 0 for k in CRITICAL}

# directions examined for each kind; destabilizations are requested explicitly
DIRECTIONS = {n: ("forward", "reverse") if n in REVERSIBLE or n in ("S1", "S2") else ("forward",) for n in NAMES}
CLASS_KEPT = frozenset({"B1", "B2", "B3", "S1", "S2", "M1", "M2", "M3"})


def _critical(word: SlicedWord) -> dict[Kind, int]:
    c = dict(ZERO)
    for e in word.slices:
        if e.kind in c:
            c[e.kind] += 1
    return c


def _width(word: SlicedWord) -> int | None:
    lo, hi = _bridge_gaps(word)
    return counts(word)[lo] if lo <= hi else None


def expected(name: str, direction: str, variant: str) -> tuple[dict[Kind, int] | None, int | None]:
    """Critical-event deltas and width delta; None means not constrained."""
    sign = 1 if direction == "forward" else -1
    if name == "S1":
        return {**ZERO, Kind.CUP: sign, Kind.CAP: sign}, 2 * sign
    if name == "S2":
        if variant.startswith("down"):
            d = {**ZERO, Kind.LAMBDA: -sign, Kind.Y: sign, Kind.CAP: sign}
        else:
            d = {**ZERO, Kind.Y: -sign, Kind.LAMBDA: sign, Kind.CUP: sign}
        return d, sign
    if name in ("B1", "B2", "B3", "M1", "M2", "M3"):
        return dict(ZERO), None
    return None, None


def check_site(word: SlicedWord, m, before, out: SlicedWord | None = None) -> list[str]:
    crit, comps, cls, wid = before
    if out is None:
        out = _apply_or_none(word, m)
    if out is None:
        return [f"{m}: enumerated site does not apply"]
    errs = []
    if not is_valid(out):
        errs.append(f"{m}: invalid output")
        return errs
    dcount, dwidth = expected(m.name, m.direction, m.variant)
    if dcount is not None:
        after = _critical(out)
        got = {k: after[k] - crit[k] for k in CRITICAL}
        if got != dcount:
            errs.append(f"{m}: counts delta {got}")
    if dwidth is not None and wid is not None:
        # width is only defined on bridge words; a bridge input must stay bridge
        w2 = _width(out)
        if w2 is None or w2 - wid != dwidth:
            errs.append(f"{m}: width {wid} -> {w2}")
    c2, g2, cls2 = graph_summary(out)
    if (c2, g2) != comps:
        errs.append(f"{m}: genus/components changed")
    if m.name in CLASS_KEPT and cls2 != cls:
        errs.append(f"{m}: graph class changed")
    return errs


def check_inverse(word: SlicedWord, m, out: SlicedWord | None = None) -> list[str]:
    if out is None:
        out = _apply_or_none(word, m)
    try:
        back = _apply_or_none(out, inverse(word, m))
    except Exception as e:  # noqa: BLE001 - report any failure as a finding
        return [f"{m}: inverse failed ({type(e).__name__})"]
    if back != word:
        return [f"{m}: inverse does not restore the word"]
    return []


def check_word(word: SlicedWord, reversibility: bool = True) -> tuple[int, list[str]]:
    """(sites examined, failures) over every kind, direction and site."""
    c, g, cls = graph_summary(word)
    before = (_critical(word), (c, g), cls, _width(word))
    n = 0
    errs: list[str] = []
    for name in NAMES:
        for d in DIRECTIONS[name]:
            for m in enumerate_sites(word, name, d):
                n += 1
                out = _apply_or_none(word, m)
                e = check_site(word, m, before, out)
                if not e and reversibility and (name in REVERSIBLE or name in ("S1", "S2")):
                    e = check_inverse(word, m, out)
                errs += [f"{word}: {x}" for x in e]
    return n, errs
