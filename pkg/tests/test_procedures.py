import random

import pytest

from handlebridge.diagram import canonical_code, project
from handlebridge.errors import CompileFailed, DiagramsDiffer, InvalidSite, NotBridge, NotPlatNormal, RSeqInvalid, SiteMismatch
from handlebridge.examples import NAMED
from handlebridge.moves import Move, apply, enumerate_sites, replay, verify
from handlebridge.procedures import (
    align,
    common_stabilization,
    compile_r,
    expand_s3,
    plat_normalize,
    profile_ok,
    r4_case,
    saturate,
    to_bridge,
)
from handlebridge.rmoves import RSite, apply_r, enumerate_r_sites
from handlebridge.search import bfs, enum_words, random_word
from handlebridge.words import (
    W,
    classify,
    event_counts,
    fast_components,
    graph_class,
    is_bridge,
    is_plat_normal,
    width,
)

THETA, HANDCUFF, KTHETA = NAMED["theta"], NAMED["handcuff"], NAMED["knotted_theta"]
STACKED = W("cup@1 ; cap@1 ; cup@1 ; cap@1")
THETA_I = W("cup@1 ; cup@3 ; l@2 ; y@2 ; cap@1 ; cap@1")
HANDCUFF_I = W("cup@1 ; l@1 ; y@1 ; cap@1")


def invariant_along(cert, start):
    words = replay(start, cert.steps)
    inv = {fast_components(w) for w in words}
    assert len(inv) == 1
    if not {m.name for m in cert.steps} & {"B4", "B5", "S3"}:
        assert len({graph_class(w) for w in words}) == 1
    assert verify(cert, start) == words[-1]


# --- to_bridge ----------------------------------------------------------


def test_to_bridge_examples():
    assert to_bridge(THETA).steps == ()
    cert = to_bridge(STACKED)
    assert cert.kinds() == ["M1"]
    assert is_bridge(cert.end_word) and width(cert.end_word) == 4


def test_to_bridge_enumerated_ten_slice_words():
    ws = [w for w in enum_words(10, 3) if len(w) == 10 and not is_bridge(w)]
    rng = random.Random(3)
    for w in rng.sample(ws, 40):
        cert = to_bridge(w)
        assert classify(cert.end_word).is_bridge
        names = {m.name for m in cert.steps}
        assert names <= {"M1", "M2", "M3", "B1", "B2", "B3", "B4", "B5", "S2"}
        invariant_along(cert, w)


def test_to_bridge_measure_drops_per_m_step():
    from handlebridge.words import inversions

    for w in list(enum_words(6, 3))[::5]:
        cert = to_bridge(w)
        words = replay(w, cert.steps)
        for m, a, b in zip(cert.steps, words, words[1:]):
            if m.name in ("M1", "M2", "M3"):
                assert inversions(b) < inversions(a)


# --- plat_normalize -----------------------------------------------------


def test_plat_normalize_examples():
    assert plat_normalize(THETA).steps == ()
    w = W("cup@1 ; cup@3 ; cup@5 ; x+@2 ; x+@4 ; cap@1 ; cap@1 ; cap@1")
    # commute the last crossing above the disjoint first cap, then undo it
    m = Move("B1", "forward", "", 5, 4)
    bumped = apply(w, m)
    assert is_bridge(bumped) and not is_plat_normal(bumped)
    cert = plat_normalize(bumped)
    assert is_plat_normal(cert.end_word)
    assert {x.name for x in cert.steps} <= {"B1", "B2", "B3"}
    assert canonical_code(project(cert.end_word)) == canonical_code(project(w))
    with pytest.raises(NotBridge):
        plat_normalize(STACKED)


def test_to_bridge_then_plat_normalize_small():
    for w in list(enum_words(6, 4))[::3]:
        c1 = to_bridge(w)
        c2 = plat_normalize(c1.end_word)
        assert is_plat_normal(c2.end_word)
        assert fast_components(c2.end_word) == fast_components(w)


# --- saturate -------------------------------------------------------------


def test_saturate_examples():
    assert saturate(THETA).steps == ()
    assert saturate(HANDCUFF).steps == ()
    cert = saturate(KTHETA)
    end = verify(cert, KTHETA)
    assert is_plat_normal(end)
    assert {m.name for m in cert.steps} <= {"S1", "S2", "B1", "B2", "B3"}
    # re-run the S2 site check: both legs of the lambda now descend freely
    assert len(enumerate_sites(end, "S2", "forward", "down")) == 2
    c0, c1 = event_counts(KTHETA), event_counts(end)
    assert c1["cup"] - c0["cup"] == c1["cap"] - c0["cap"] >= 1
    assert canonical_code(project(end)) == canonical_code(project(KTHETA))
    with pytest.raises(NotPlatNormal):
        saturate(STACKED)


# --- expand_s3 ------------------------------------------------------------


@pytest.mark.parametrize("w", [THETA_I, HANDCUFF_I])
def test_expand_s3(w):
    (site,) = enumerate_sites(w, "S3")
    cert = expand_s3(w, site)
    assert cert.kinds() == ["S2", "M2", "B5", "S2^-1"]
    end = verify(cert, w)
    assert event_counts(end) == event_counts(w)
    assert fast_components(end) == fast_components(w)
    assert apply(w, site) == end


def test_expand_s3_rejects_crossing_site():
    with pytest.raises(InvalidSite):
        expand_s3(NAMED["trefoil"], Move("S3", "forward", "", 3, 2))


# --- compile_r --------------------------------------------------------------


def test_compile_r1_reverse_kinked_unknot():
    w = NAMED["kinked_unknot"]
    site = enumerate_r_sites(project(w), "R1", "reverse")[0]
    cert = compile_r(w, site)
    assert {m.name for m in cert.steps} <= {"B1", "B2", "B3", "S1"}
    end = verify(cert, w)
    assert canonical_code(project(end)) == canonical_code(project(NAMED["unknot"]))
    assert project(end).crossings() == 0


def test_compile_r3_one_s1():
    w = NAMED["triangle"]
    for site in enumerate_r_sites(project(w), "R3"):
        cert = compile_r(w, site)
        assert cert.kinds().count("S1") == 1
        assert canonical_code(project(cert.end_word)) == canonical_code(apply_r(project(w), site))


def test_compile_r6_theta_ends_with_b5():
    for site in enumerate_r_sites(project(THETA), "R6"):
        cert = compile_r(THETA, site)
        core = [k for k in cert.kinds() if k not in ("B1", "B2", "B3")]
        assert core[-1] == "B5"
        assert profile_ok("R6", cert.steps)


def test_compile_r4_cases():
    w = KTHETA
    seen = set()
    for site in enumerate_r_sites(project(w), "R4"):
        case = r4_case(w, site)
        assert case in (1, 2, 3)
        seen.add(case)
    assert seen


def test_compile_r_errors():
    with pytest.raises(NotPlatNormal):
        compile_r(STACKED, RSite("R1", "forward", (), "a+"))
    with pytest.raises(SiteMismatch):
        compile_r(THETA, RSite("R1", "reverse", (0,)))


def test_compile_r_budget_failure_is_reported():
    site = enumerate_r_sites(project(KTHETA), "R5")[0]
    with pytest.raises(CompileFailed):
        compile_r(KTHETA, site)


def test_profile_ok_rejects_wrong_profiles():
    s1 = Move("S1", "forward", "", 1, 1)
    b1 = Move("B1", "forward", "", 1, 1)
    assert not profile_ok("R3", (b1,))
    assert not profile_ok("R3", (s1, s1))
    assert profile_ok("R3", (s1, b1))
    assert not profile_ok("R1", (Move("S2", "forward", "down", 1, 1),))
    assert not profile_ok("R6", (b1,))


# --- align and common_stabilization ---------------------------------------


def test_align_examples():
    ca, cb = align(THETA, THETA)
    assert ca.steps == () and cb.steps == ()
    u = NAMED["unknot"]
    s1 = apply(u, enumerate_sites(u, "S1")[0])
    ca, cb = align(u, s1)
    assert ca.kinds() == ["S1"] and cb.steps == ()


def test_align_theta_vs_moved_s2_image():
    m = enumerate_sites(THETA, "S2", "forward", "down")[1]
    b = apply(THETA, m)
    b = apply(b, enumerate_sites(b, "B1", "forward", "")[0])
    assert is_plat_normal(b)
    ca, cb = align(THETA, b)
    end = verify(ca, THETA)
    assert end == verify(cb, b)
    assert {x.name for x in ca.steps + cb.steps} <= {"S1", "S2", "B4", "B1", "B2", "B3"}
    # oracle: bfs reaches the same meeting word from both sides
    for start, cert in ((THETA, ca), (b, cb)):
        kinds = sorted(set(cert.kinds())) or ["B1"]
        found = bfs(start, end, kinds, max(len(cert.steps), 1))
        assert found is not None and len(found.steps) <= len(cert.steps)


def test_align_rejects_different_diagrams():
    with pytest.raises(DiagramsDiffer):
        align(THETA, HANDCUFF)


def test_common_stabilization_width_and_invariants():
    a, b = NAMED["unknot"], NAMED["unknot2"]
    ca, cb, common = common_stabilization(a, b, [])
    assert verify(ca, a) == common == verify(cb, b)
    assert width(common) >= max(width(a), width(b))
    invariant_along(ca, a)
    invariant_along(cb, b)


def test_common_stabilization_bad_rseq():
    with pytest.raises(RSeqInvalid):
        common_stabilization(THETA, THETA, [RSite("R1", "reverse", (0,))])
    with pytest.raises(DiagramsDiffer):
        common_stabilization(THETA, HANDCUFF, [])


def test_procedure_certificates_keep_invariants():
    rng = random.Random(11)
    for _ in range(20):
        w = random_word(rng, rng.randrange(2, 11))
        c1 = to_bridge(w)
        invariant_along(c1, w)
        c2 = plat_normalize(c1.end_word)
        invariant_along(c2, c1.end_word)
        c3 = saturate(c2.end_word)
        invariant_along(c3, c2.end_word)
