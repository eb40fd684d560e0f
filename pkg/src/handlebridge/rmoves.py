"""Local moves R1-R6 on spherical diagrams of trivalent graphs.

Templates (``forward`` adds structure, ``reverse`` removes it):

* R1  add/remove a kink on an arc.  Forward variants ``a+ a- b+ b-``
  pick the side of the loop and whether the first pass is over.
* R2  poke one arc across another arc of a common face (creates a bigon);
  variant ``first``/``second`` names the arc that goes over.
* R3  slide a strand across the crossing opposite a triangle face.
  Self-inverse, so only ``forward`` is enumerated.
* R4  twist two adjacent edge-germs at a vertex, creating a crossing next
  to the vertex; variant names the germ that goes over.
* R5  pass a strand across a vertex: one crossing on one edge becomes two
  crossings on the other two edges (forward), and back (reverse).
* R6  the IH move on an edge joining two distinct vertices (self-inverse).

Sites are addressed by darts of the diagram they apply to.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram, normalize
from .errors import SiteMismatch

KINDS = ("R1", "R2", "R3", "R4", "R5", "R6")


@dataclass(frozen=True, order=True)
class RSite:
    kind: str
    direction: str
    anchors: tuple[int, ...] = ()
    variant: str = ""

    def __str__(self) -> str:
        parts = [self.kind, self.direction, *map(str, self.anchors)]
        if self.variant:
            parts.append(self.variant)
        return " ".join(parts)

    @classmethod
    def parse(cls, line: str) -> "RSite":
        toks = line.split()
        if len(toks) < 2 or toks[0] not in KINDS or toks[1] not in ("forward", "reverse"):
            raise ValueError(f"bad RSite line {line!r}")
        anchors, variant = [], ""
        for t in toks[2:]:
            if t.lstrip("-").isdigit():
                anchors.append(int(t))
            else:
                variant = t
        return cls(toks[0], toks[1], tuple(anchors), variant)


class _Map:
    def __init__(self, d: Diagram):
        self.nodes: list[list | None] = [[n.kind, list(n.darts)] for n in d.nodes]
        self.pair: dict[int, int] = dict(enumerate(d.pair))
        self.loops = d.loops
        self.next = d.n_darts
        self.where: dict[int, int] = {x: i for i, n in enumerate(d.nodes) for x in n.darts}

    def fresh(self, k: int) -> list[int]:
        out = list(range(self.next, self.next + k))
        self.next += k
        return out

    def add(self, kind: str, darts: list[int]) -> int:
        self.nodes.append([kind, list(darts)])
        for x in darts:
            self.where[x] = len(self.nodes) - 1
        return len(self.nodes) - 1

    def remove(self, ni: int) -> None:
        for x in self.nodes[ni][1]:
            self.pair.pop(x, None)
            self.where.pop(x, None)
        self.nodes[ni] = None

    def join(self, a: int, b: int) -> None:
        self.pair[a] = b
        self.pair[b] = a

    def replace(self, old: list[int], new: list[int], removed: list[int] = (), internal=()) -> None:
        """Swap boundary darts ``old`` for ``new``: each new dart is joined to
        whatever its old counterpart was joined to, resolving old-to-old
        joins through the replacement."""
        mates = [self.pair[o] for o in old]
        rep = dict(zip(old, new))
        for ni in sorted(set(removed)):
            self.remove(ni)
        for n_, m in zip(new, mates):
            self.join(n_, rep.get(m, m))
        for a, b in internal:
            self.join(a, b)

    def excise(self, removed: list[int], through: dict[int, int]) -> None:
        """Delete nodes, letting strands run straight through them."""
        dead = {x for ni in removed for x in self.nodes[ni][1]}
        seen: set[int] = set()
        joins = []
        for x in sorted(self.pair):
            if x in dead or self.pair[x] not in dead or x in seen:
                continue
            t = self.pair[x]
            while True:
                seen.add(t)
                t2 = through[t]
                seen.add(t2)
                y = self.pair[t2]
                if y not in dead:
                    joins.append((x, y))
                    seen.update((x, y))
                    break
                t = y
        for r in sorted(dead):
            if r in seen:
                continue
            t = r
            while t not in seen:
                seen.add(t)
                t2 = through[t]
                seen.add(t2)
                t = self.pair[t2]
            self.loops += 1
        for ni in removed:
            self.remove(ni)
        for a, b in joins:
            self.join(a, b)

    def diagram(self) -> Diagram:
        live = [(k, ds) for k, ds in (n for n in self.nodes if n is not None)]
        return normalize(live, self.pair, self.loops)


def _slot(d: Diagram, where, x: int) -> tuple[int, int]:
    return where[x]


def _is_x(d: Diagram, ni: int) -> bool:
    return d.nodes[ni].kind == "X"


# --- enumeration --------------------------------------------------------


def enumerate_r_sites(d: Diagram, kind: str, direction: str | None = None) -> list[RSite]:
    """All sites of ``kind`` (both directions unless one is given), sorted."""
    where = d.node_of()
    out: list[RSite] = []
    dirs = ("forward", "reverse") if direction is None else (direction,)
    if kind == "R1":
        if "forward" in dirs:
            for a, b in d.arcs():
                for v in ("a+", "a-", "b+", "b-"):
                    out.append(RSite("R1", "forward", (a, b), v))
            if d.loops:
                for v in ("a+", "a-", "b+", "b-"):
                    out.append(RSite("R1", "forward", (), v))
        if "reverse" in dirs:
            for ni, node in enumerate(d.nodes):
                if node.kind != "X":
                    continue
                for i in range(4):
                    if d.pair[node.darts[i]] == node.darts[(i + 1) % 4]:
                        out.append(RSite("R1", "reverse", (node.darts[i],)))
    elif kind == "R2":
        if "forward" in dirs:
            for face in d.faces():
                for i in range(len(face)):
                    for j in range(len(face)):
                        a, b = face[i], face[j]
                        if i != j and d.pair[a] != b:
                            for v in ("first", "second"):
                                out.append(RSite("R2", "forward", (a, b), v))
                        else:
                            for v in ("first.near", "first.far", "second.near", "second.far"):
                                out.append(RSite("R2", "forward", (a, b), v))
        if "reverse" in dirs:
            for face in d.faces():
                if len(face) != 2:
                    continue
                if _bigon_ok(d, where, face[0], face[1]):
                    f = min(face)
                    g = face[1] if f == face[0] else face[0]
                    out.append(RSite("R2", "reverse", (f, g)))
    elif kind == "R3":
        if "forward" in dirs:
            for face in d.faces():
                if len(face) == 3 and _triangle_ok(d, where, face):
                    i = face.index(min(face))
                    out.append(RSite("R3", "forward", tuple(face[i:] + face[:i])))
    elif kind == "R4":
        for ni, node in enumerate(d.nodes):
            if node.kind != "V":
                continue
            for i in range(3):
                vi, vj = node.darts[i], node.darts[(i + 1) % 3]
                if "forward" in dirs:
                    for v in ("first", "second"):
                        out.append(RSite("R4", "forward", (vi, vj), v))
                if "reverse" in dirs and _r4_reverse_crossing(d, where, vi, vj) is not None:
                    out.append(RSite("R4", "reverse", (vi, vj)))
    elif kind == "R5":
        for ni, node in enumerate(d.nodes):
            if node.kind != "V":
                continue
            for j in range(3):
                if "forward" in dirs and _r5_forward_ok(d, where, ni, j):
                    out.append(RSite("R5", "forward", (node.darts[j],)))
                if "reverse" in dirs and _r5_reverse_ok(d, where, ni, j):
                    out.append(RSite("R5", "reverse", (node.darts[(j + 1) % 3], node.darts[(j + 2) % 3])))
    elif kind == "R6":
        if "forward" in dirs:
            for a, b in d.arcs():
                na, nb = where[a][0], where[b][0]
                if na != nb and d.nodes[na].kind == "V" and d.nodes[nb].kind == "V":
                    out.append(RSite("R6", "forward", (a, b)))
    else:
        raise ValueError(f"unknown R-move kind {kind!r}")
    return sorted(out)


def _over(d: Diagram, where, x: int) -> bool:
    return where[x][1] % 2 == 0


def _bigon_ok(d: Diagram, where, d1: int, d2: int) -> bool:
    p, q = where[d1][0], where[d2][0]
    if p == q or not (_is_x(d, p) and _is_x(d, q)):
        return False
    e1 = d.pair[d1]
    if where[e1][0] != q or _over(d, where, d1) != _over(d, where, e1):
        return False
    # Strands must leave the bigon, except that one strand's far end may
    # run straight into the other's near end (the poke of an arc across
    # itself).  Curls and closed strands are left to R1.
    inner = set(d.nodes[p].darts) | set(d.nodes[q].darts)
    t1p, t1q, t2q, t2p = (_through(d, where, x) for x in (d1, e1, d2, d.pair[d2]))
    cross = [(x, y) for x in (t1p, t1q) for y in (t2q, t2p)]
    links = [(x, y) for x, y in cross if d.pair[x] == y]
    if len(links) > 1:
        return False
    allowed = set(links) | {(y, x) for x, y in links}
    return all(d.pair[o] not in inner or (o, d.pair[o]) in allowed for o in (t1p, t1q, t2q, t2p))


def _triangle_ok(d: Diagram, where, face: list[int]) -> bool:
    ns = [where[x][0] for x in face]
    if len(set(ns)) != 3 or not all(_is_x(d, n) for n in ns):
        return False
    # strand of arc i over strand of arc i-1 at node i; cyclic iff all equal
    rel = [_over(d, where, x) for x in face]
    return len(set(rel)) == 2


def _through(d: Diagram, where, x: int) -> int:
    ni, s = where[x]
    return d.nodes[ni].darts[(s + 2) % 4]


def _r4_reverse_crossing(d: Diagram, where, vi: int, vj: int):
    a, b = d.pair[vi], d.pair[vj]
    ca, sa = where[a]
    cb, sb = where[b]
    if ca != cb or not _is_x(d, ca) or ca == where[vi][0]:
        return None
    if (sb + 1) % 4 != sa:
        return None
    return ca, sb


def _r5_forward_ok(d: Diagram, where, vn: int, j: int) -> bool:
    node = d.nodes[vn]
    x = d.pair[node.darts[j]]
    c, k = where[x]
    if not _is_x(d, c):
        return False
    return True


def _r5_reverse_ok(d: Diagram, where, vn: int, j: int) -> bool:
    node = d.nodes[vn]
    x1, x2 = d.pair[node.darts[(j + 1) % 3]], d.pair[node.darts[(j + 2) % 3]]
    c1, a = where[x1]
    c2, b = where[x2]
    if c1 == c2 or not (_is_x(d, c1) and _is_x(d, c2)):
        return False
    d1, d2 = d.nodes[c1].darts, d.nodes[c2].darts
    if d.pair[d1[(a - 1) % 4]] != d2[(b + 1) % 4]:
        return False
    return ((a - 1) % 2 == 0) == ((b + 1) % 2 == 0)


# --- application --------------------------------------------------------


def apply_r(d: Diagram, site: RSite) -> Diagram:
    if site not in enumerate_r_sites(d, site.kind, site.direction if site.kind not in ("R3", "R6") else "forward") and not (
        site.kind in ("R3", "R6") and RSite(site.kind, "forward", site.anchors, site.variant) in enumerate_r_sites(d, site.kind, "forward")
    ):
        raise SiteMismatch(f"{site} does not match the diagram")
    where = d.node_of()
    m = _Map(d)
    fn = _APPLY[(site.kind, "forward" if site.kind in ("R3", "R6") else site.direction)]
    fn(d, where, m, site)
    out = m.diagram()
    out.check()
    return out


def _r1_forward(d, where, m: _Map, site: RSite) -> None:
    side, sign = site.variant[0], site.variant[1]
    c0, c1, c2, c3 = m.fresh(4)
    rot = [c0, c1, c2, c3] if sign == "+" else [c1, c2, c3, c0]
    m.add("X", rot)
    loop, exit_ = ((c2, c1), c3) if side == "a" else ((c2, c3), c1)
    m.join(*loop)
    if site.anchors:
        a, b = site.anchors
        m.join(a, c0)
        m.join(exit_, b)
    else:
        m.loops -= 1
        m.join(exit_, c0)


def _r1_reverse(d, where, m: _Map, site: RSite) -> None:
    ni, _ = where[site.anchors[0]]
    ds = d.nodes[ni].darts
    m.excise([ni], {ds[i]: ds[(i + 2) % 4] for i in range(4)})


def _r2_forward(d, where, m: _Map, site: RSite) -> None:
    a_out, b_out = site.anchors
    a_in, b_in = d.pair[a_out], d.pair[b_out]
    # Pl: ccw [B_in, A_out, B_out, A_in]; Pr: ccw [B_in, A_in, B_out, A_out]
    l_bi, l_ao, l_bo, l_ai = m.fresh(4)
    r_bi, r_ai, r_bo, r_ao = m.fresh(4)
    if site.variant.startswith("first"):
        m.add("X", [l_ao, l_bo, l_ai, l_bi])
        m.add("X", [r_ai, r_bo, r_ao, r_bi])
    else:
        m.add("X", [l_bi, l_ao, l_bo, l_ai])
        m.add("X", [r_bi, r_ai, r_bo, r_ao])
    if a_out == b_out:
        # both points on one side of one arc; "near" puts the poking
        # point nearer the arc's tail
        if site.variant.endswith("near"):
            chain = [a_out, l_ai, l_ao, r_ai, r_ao, r_bi, r_bo, l_bi, l_bo, a_in]
        else:
            chain = [a_out, r_bi, r_bo, l_bi, l_bo, l_ai, l_ao, r_ai, r_ao, a_in]
    elif b_out == a_in:
        # opposite sides of one arc
        if site.variant.endswith("near"):
            chain = [a_out, l_ai, l_ao, r_ai, r_ao, l_bo, l_bi, r_bo, r_bi, b_out]
        else:
            chain = [a_out, l_bo, l_bi, r_bo, r_bi, l_ai, l_ao, r_ai, r_ao, b_out]
    else:
        chain = [a_out, l_ai, l_ao, r_ai, r_ao, a_in, b_out, r_bi, r_bo, l_bi, l_bo, b_in]
    for x, y in zip(chain[::2], chain[1::2]):
        m.join(x, y)


def _r2_reverse(d, where, m: _Map, site: RSite) -> None:
    d1, d2 = site.anchors
    p, q = where[d1][0], where[d2][0]
    through = {}
    for ni in (p, q):
        ds = d.nodes[ni].darts
        through.update({ds[i]: ds[(i + 2) % 4] for i in range(4)})
    m.excise([p, q], through)


def _r3(d, where, m: _Map, site: RSite) -> None:
    # each strand now meets its two crossings in the opposite order
    old, new, internal = [], [], []
    for f in site.anchors:
        i1 = _through(d, where, f)
        i2 = d.pair[f]
        o2 = _through(d, where, i2)
        old += [i1, o2]
        new += [i2, f]
        internal.append((o2, i1))
    m.replace(old, new, internal=internal)


def _r4_forward(d, where, m: _Map, site: RSite) -> None:
    vi, vj = site.anchors
    c_e, c_n, c_w, c_s = m.fresh(4)
    m.add("X", [c_e, c_n, c_w, c_s] if site.variant == "first" else [c_n, c_w, c_s, c_e])
    m.replace([vi, vj], [c_e, c_n], internal=[(vi, c_s), (vj, c_w)])


def _r4_reverse(d, where, m: _Map, site: RSite) -> None:
    vi, vj = site.anchors
    c, k = _r4_reverse_crossing(d, where, vi, vj)
    cd = d.nodes[c].darts
    m.replace([cd[(k + 2) % 4], cd[(k + 3) % 4]], [vi, vj], removed=[c])


def _r5_forward(d, where, m: _Map, site: RSite) -> None:
    (vj,) = site.anchors
    vn, j = where[vj]
    vd = d.nodes[vn].darts
    v1, v2 = vd[(j + 1) % 3], vd[(j + 2) % 3]
    c, k = where[d.pair[vj]]
    cd = d.nodes[c].darts
    c_w, c_s, c_e = cd[(k + 1) % 4], cd[(k + 2) % 4], cd[(k + 3) % 4]
    s_over = (k + 3) % 2 == 0
    o1, s1c2, c1v, s1e = m.fresh(4)
    s2c1, o2, s2w, c2v = m.fresh(4)
    m.add("X", [s1c2, c1v, s1e, o1] if s_over else [o1, s1c2, c1v, s1e])
    m.add("X", [s2c1, o2, s2w, c2v] if s_over else [o2, s2w, c2v, s2c1])
    m.replace(
        [c_s, c_e, c_w, v1, v2],
        [vj, s1e, s2w, o1, o2],
        removed=[c],
        internal=[(v1, c1v), (v2, c2v), (s1c2, s2c1)],
    )


def _r5_reverse(d, where, m: _Map, site: RSite) -> None:
    v1, v2 = site.anchors
    vn, j1 = where[v1]
    vd = d.nodes[vn].darts
    vj = vd[(j1 + 2) % 3]
    c1, a = where[d.pair[v1]]
    c2, b = where[d.pair[v2]]
    d1, d2 = d.nodes[c1].darts, d.nodes[c2].darts
    s_over = (a - 1) % 2 == 0
    c_e, c_n, c_w, c_s = m.fresh(4)
    m.add("X", [c_e, c_n, c_w, c_s] if s_over else [c_n, c_w, c_s, c_e])
    m.replace(
        [d1[(a + 1) % 4], d2[(b - 1) % 4], d1[(a + 2) % 4], d2[(b + 2) % 4], vj],
        [c_e, c_w, v1, v2, c_s],
        removed=[c1, c2],
        internal=[(vj, c_n)],
    )


def _r6(d, where, m: _Map, site: RSite) -> None:
    ui, vk = site.anchors
    un, i = where[ui]
    vn, k = where[vk]
    ud, vd = d.nodes[un].darts, d.nodes[vn].darts
    u1, u2 = ud[(i + 1) % 3], ud[(i + 2) % 3]
    w1, w2 = vd[(k + 1) % 3], vd[(k + 2) % 3]
    a, b, e1 = m.fresh(3)
    e2, c, dd = m.fresh(3)
    m.add("V", [a, b, e1])
    m.add("V", [e2, c, dd])
    m.replace([u1, u2, w1, w2], [b, c, dd, a], removed=[un, vn], internal=[(e1, e2)])


_APPLY = {
    ("R1", "forward"): _r1_forward,
    ("R1", "reverse"): _r1_reverse,
    ("R2", "forward"): _r2_forward,
    ("R2", "reverse"): _r2_reverse,
    ("R3", "forward"): _r3,
    ("R4", "forward"): _r4_forward,
    ("R4", "reverse"): _r4_reverse,
    ("R5", "forward"): _r5_forward,
    ("R5", "reverse"): _r5_reverse,
    ("R6", "forward"): _r6,
}


def inverse_sites(before: Diagram, site: RSite, after: Diagram) -> list[RSite]:
    """Candidate sites on ``after`` that undo ``site``: every site of the
    opposite direction (or of the same kind, for self-inverse kinds)."""
    if site.kind in ("R3", "R6"):
        return enumerate_r_sites(after, site.kind, "forward")
    other = "reverse" if site.direction == "forward" else "forward"
    return enumerate_r_sites(after, site.kind, other)
