import pytest

from pingpong import fixtures
from pingpong.checker import check_ppp, check_proper
from pingpong.presentation import EPSILON
from pingpong.refine import (
    Equivalence, check_equivalence, check_equivariance, delta_matching,
    delta_sets, extend_equivalence, find_equivalence, refine, refine_k,
    refine_until_proper, semiconjugacy,
)


@pytest.fixture(scope="module")
def psl2z_fix():
    return fixtures.psl2z_realization()


@pytest.fixture(scope="module")
def z6z_fix():
    return fixtures.z6z_realization()


def test_refine_keeps_ppp(psl2z_fix):
    fr = psl2z_fix
    cur = fr.theta
    for _ in range(2):
        cur = refine(fr.action, cur)
        rep = check_ppp(fr.action, cur)
        assert rep.ok, str(rep.failures()[:4])
    assert len(cur.components()) > len(fr.theta.components())


def test_refine_z6z_passes_ppp(z6z_fix):
    real, graph, action, rot, theta = z6z_fix
    t1 = refine(action, theta)
    rep = check_ppp(action, t1)
    assert rep.ok, str(rep.failures()[:4])


def test_refine_until_proper(z6z_fix, psl2z_fix):
    real, graph, action, rot, theta = z6z_fix
    t, k = refine_until_proper(action, theta, 3)
    assert k == 1
    assert check_proper(action, t).ok
    # an already proper partition returns k = 0
    t0, k0 = refine_until_proper(psl2z_fix.action, psl2z_fix.theta, 2)
    assert k0 == 0


def test_delta_sets_nested(psl2z_fix):
    fr = psl2z_fix
    ds = delta_sets(fr.action, fr.theta, 2)
    assert set(ds[0]) <= set(ds[1]) <= set(ds[2])
    assert len(ds[0]) == 6  # three components
    assert len(ds[1]) > len(ds[0])


def test_refinement_claim_endpoints_map_to_old(psl2z_fix):
    # both endpoints of each refined component reach Delta_0 under one
    # common generator
    fr = psl2z_fix
    t1 = refine(fr.action, fr.theta)
    d0 = set(fr.theta.delta())
    gens = [EPSILON] + fr.action.g.preferred_generators()
    maps = [fr.action.evaluate(nf) for nf in gens]
    for lab, arc in t1.components():
        assert any(f(arc.lo) in d0 and f(arc.hi) in d0 for f in maps), (lab, arc)


def test_refinement_claim_images_meet_delta(psl2z_fix):
    fr = psl2z_fix
    t1 = refine(fr.action, fr.theta)
    d1 = set(t1.delta())
    for nf in fr.action.g.preferred_generators():
        f = fr.action.evaluate(nf)
        for lab, arc in t1.components():
            img = f.image_arc(arc)
            meets = any(img.contains(x) for x in d1)
            if meets:
                assert f(arc.lo) in d1 and f(arc.hi) in d1


def test_identity_equivalence(psl2z_fix):
    fr = psl2z_fix
    n = len(fr.theta.components())
    eq = Equivalence(tuple(range(n)))
    rep = check_equivalence(fr.action, fr.theta, fr.action, fr.theta, eq)
    assert rep.ok, str(rep.failures()[:4])


def test_find_equivalence_between_variants():
    fr0 = fixtures.psl2z_realization(0)
    fr1 = fixtures.psl2z_realization(1)
    eq = find_equivalence(fr0.action, fr0.theta, fr1.action, fr1.theta)
    assert eq is not None
    rep = check_equivalence(fr0.action, fr0.theta, fr1.action, fr1.theta, eq)
    assert rep.ok


def test_no_equivalence_across_types():
    fr = fixtures.psl2z_realization()
    fr2 = fixtures.z2z4_realization()
    assert find_equivalence(fr.action, fr.theta, fr2.action, fr2.theta) is None


def test_extend_equivalence_and_semiconjugacy():
    real0, g0, a0, _, t0 = fixtures.z6z_realization(0)
    real1, g1, a1, _, t1 = fixtures.z6z_realization(1)
    eq = find_equivalence(a0, t0, a1, t1)
    assert eq is not None
    r1, r2, eq2 = extend_equivalence(eq, a0, t0, a1, t1, 2)
    rep = check_equivalence(a0, r1, a1, r2, eq2)
    assert rep.ok, str(rep.failures()[:4])
    sc = semiconjugacy(eq, a0, t0, a1, t1, 2)
    eqrep = check_equivariance(a0, a1, sc)
    assert eqrep.ok, str(eqrep.failures()[:3])
    assert sc.monotone_ok()


def test_semiconjugacy_identity_is_identity(psl2z_fix):
    fr = psl2z_fix
    n = len(fr.theta.components())
    eq = Equivalence(tuple(range(n)))
    sc = semiconjugacy(eq, fr.action, fr.theta, fr.action, fr.theta, 1)
    for x, ys in sc.pairs:
        assert ys == (x,)


def test_depth_coherence():
    real0, g0, a0, _, t0 = fixtures.z6z_realization(0)
    real1, g1, a1, _, t1 = fixtures.z6z_realization(1)
    eq = find_equivalence(a0, t0, a1, t1)
    m1, d1 = delta_matching(a0, t0, a1, t1, eq, 1)
    m2, d2 = delta_matching(a0, t0, a1, t1, eq, 2)
    for x in d1[-1]:
        assert m2[x] == m1[x], x
