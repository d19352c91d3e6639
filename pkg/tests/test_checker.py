from fractions import Fraction as F

import pytest

from pingpong import fixtures
from pingpong.checker import (
    CheckReport, check_arboreal_family, check_free_pingpong,
    check_interactive_family, check_marked_action, check_ppp, check_proper,
    certify_faithful, free_skeleton, is_markovian, marked_action_report,
    skeleton,
)
from pingpong.circle import Arc, IntervalUnion, PLMap, rotation
from pingpong.presentation import EPSILON, V
from pingpong.tree import build_ball


@pytest.fixture(scope="module")
def psl2z_fix():
    return fixtures.psl2z_realization()


@pytest.fixture(scope="module")
def z6z_fix():
    return fixtures.z6z_realization()


def test_check_marked_action_rejects_wrong_order():
    g = fixtures.z2z4_graph()
    with pytest.raises(ValueError):
        # R_{1/3} assigned to the order-2 vertex generator
        check_marked_action(g, {"v4": rotation(F(1, 4)),
                                "v2": rotation(F(1, 3))}, {})


def test_check_marked_action_z2z4_rotations():
    g = fixtures.z2z4_graph()
    act = check_marked_action(g, {"v4": rotation(F(1, 4)),
                                  "v2": rotation(F(1, 2))}, {})
    assert marked_action_report(act).ok


def test_evaluate_word_composition(psl2z_fix):
    act = psl2z_fix.action
    a = act.vertex_maps["vp"]
    b = act.vertex_maps["vq"]
    w = act.evaluate((V("vq", 1), V("vp", 1)))
    # word b*a acts as b after a
    x = F(1, 7)
    assert w(x) == b(a(x))


def test_is_markovian_cases(z6z_fix):
    real, graph, action, rot, theta = z6z_fix
    # the expanding letter on one of its repelling components
    rep_atom = theta.v_atom("s0~")
    comp = rep_atom.components()[0]
    dec = is_markovian(action, graph.normalize((fixtures.S_letter("s0"),)),
                       comp, theta)
    assert dec is not None
    kinds = [k for k, _ in dec]
    assert kinds[0] == "I" and kinds[-1] == "I"
    assert len([k for k in kinds if k == "I"]) == 11
    # a contracted image strictly inside an atom is not Markovian
    att = theta.v_atom("s0").components()[0]
    assert is_markovian(action, graph.normalize((fixtures.S_letter("s0"),)),
                        att, theta) is None
    # a rotation maps atoms exactly onto atoms: containment by convention
    r_nf = graph.normalize((V("v", 1),))
    assert is_markovian(action, r_nf, att, theta) is None


def test_interactive_family_overlap_witness(psl2z_fix):
    fr = psl2z_fix
    # make atoms overlap: IF1 fails with a witness
    bad = fr.theta.relabel({})
    atoms = dict(bad.atoms)
    lab = ("U", "vp", "e")
    atoms[lab] = atoms[lab].union(IntervalUnion([fr.theta.u_atom("vq", "e~")
                                                 .components()[0]]))
    from pingpong.checker import PartitionTheta
    bad = PartitionTheta(tuple(atoms.items()))
    rep = check_interactive_family(fr.action, bad)
    assert not rep.ok
    assert any("IF1" in i.condition for i in rep.failures())


def test_z2z4_left_family_fails():
    fr, left = fixtures.z2z4_left_family()
    rep = check_ppp(fr.action, left)
    assert not rep.ok
    fails = rep.failures()
    assert fails and all(i.witness for i in fails[:1])


def test_certify_faithful_psl2z(psl2z_fix):
    fr = psl2z_fix
    cert = certify_faithful(fr.action, fr.theta)
    assert cert.ok


def test_certify_faithful_rejects_improper(z6z_fix):
    real, graph, action, rot, theta = z6z_fix
    with pytest.raises(ValueError):
        certify_faithful(action, theta)  # proper fails before refinement


def test_if11_z_fixture():
    graph, action, theta = fixtures.z_hyperbolic_fixture()
    rep = check_interactive_family(action, theta)
    assert rep.ok, str(rep.failures()[:3])
    prop = check_proper(action, theta)
    assert prop.ok, str(prop.failures()[:3])
    assert any("IF11" in i.condition for i in prop.items)


def test_minimal_fixture_is_proper_ppp():
    graph, action, theta = fixtures.minimal_psl2z_fixture()
    assert check_ppp(action, theta).ok
    assert check_proper(action, theta).ok
    # gaps all degenerate: the support misses only three points
    gaps = theta.gaps()
    assert all(g.is_point for g in gaps)
    assert len(gaps) == 3


def test_exact_tiling_if10_fails_nowhere_hmm(z6z_fix):
    real, graph, action, rot, theta = z6z_fix
    prop = check_proper(action, theta)
    assert not prop.ok
    assert any("IF10" in i.condition for i in prop.failures())


def test_free_pingpong_schottky():
    graph, action, atoms = fixtures.f2_schottky_fixture()
    rep = check_free_pingpong(action, atoms)
    assert rep.ok, str(rep.failures()[:3])
    order, lambdas = free_skeleton(action, atoms)
    assert tuple(s for s, _ in order) == ("a", "b", "a~", "b~")
    for s, assign in lambdas.items():
        targets = {t for _, t in assign}
        assert targets == {0}  # lambda maps all-to-one


def test_free_pingpong_rejects_nonfree(psl2z_fix):
    rep = check_free_pingpong(psl2z_fix.action, {})
    assert not rep.ok


def test_skeleton_equality_across_variants():
    fr0 = fixtures.psl2z_realization(0)
    fr1 = fixtures.psl2z_realization(1)
    s0 = skeleton(fr0.action, fr0.theta)
    s1 = skeleton(fr1.action, fr1.theta)
    assert s0 == s1
    # a genuinely different combinatorial type differs
    fr34 = fixtures.z2z4_realization()
    assert skeleton(fr34.action, fr34.theta) != s0


def test_arboreal_families_pass_checker():
    for g, radius in ((fixtures.psl2z_graph(), 4),
                      (fixtures.z6z_graph(), 3),
                      (fixtures.z_graph(), 3),
                      (fixtures.f2_graph(), 3)):
        ball = build_ball(g, radius)
        fam = ball.arboreal_family()
        rep = check_arboreal_family(ball, fam)
        assert rep.ok, (g.vertices, str(rep.failures()[:4]))


def test_arboreal_family_amalgam_nontrivial_edge():
    g = fixtures.z4_amalgam_z6_graph()
    ball = build_ball(g, 4)
    fam = ball.arboreal_family()
    rep = check_arboreal_family(ball, fam)
    assert rep.ok, str(rep.failures()[:4])
