from fractions import Fraction as F

import pytest

from pingpong import fixtures
from pingpong.checker import check_ppp
from pingpong.dkn import (
    ShellData, approx_U_subset, assemble_theta, check_dkn_properties,
    dkn_estimates, enumerate_ball, estimate_minimal_set, hat_reduce,
)
from pingpong.presentation import EPSILON
from pingpong.tree import build_ball


def test_enumerate_ball_psl2z():
    g = fixtures.psl2z_graph()
    ball = enumerate_ball(g, 3)
    assert ball.sizes()[0] == 1
    assert ball.sizes()[1] == 3          # a, b, b^2
    # alternating words: sizes follow the free-product pattern
    assert ball.sizes()[2] == 4          # ab, ab^2, ba, b^2a
    assert ball.sizes()[3] == 6
    allnf = ball.all()
    assert len(set(allnf)) == len(allnf)
    inv_closed = all(g.inverse(nf) in set(allnf) for nf in allnf)
    assert inv_closed


def test_enumerate_ball_f2():
    g = fixtures.f2_graph()
    ball = enumerate_ball(g, 2)
    assert ball.sizes() == [1, 4, 12]    # 17 elements in the 2-ball


def test_enumerate_ball_z6z():
    g = fixtures.z6z_graph()
    ball = enumerate_ball(g, 2)
    assert ball.sizes()[1] == 7          # r..r^5, s, s~
    assert ball.sizes()[2] == 22         # rotation-stable-letter alternations


def test_full_group_estimate_is_circle():
    graph, action, theta = fixtures.z_hyperbolic_fixture()
    ball = build_ball(graph, 3)
    est = approx_U_subset(action, lambda nf: True, 4, F(1, 32), 6, ball=ball)
    assert est.estimate.is_full


def test_z_action_estimate_is_attracting_basin():
    graph, action, theta = fixtures.z_hyperbolic_fixture()
    ball = build_ball(graph, 3)
    ests, shell = dkn_estimates(action, ball, 6, F(1, 32), 7)
    z_s = ball.z_component("s")
    z_sb = ball.z_component("s~")
    est_s = ests[z_s].estimate
    est_sb = ests[z_sb].estimate
    # the estimate of U_{Z_s} excludes a neighborhood of the attracting
    # fixed point p+ = 13/24 and keeps the repelling one p- = 5/24
    assert not est_s.contains(F(13, 24))
    assert est_s.contains(F(5, 24))
    assert not est_sb.contains(F(5, 24))
    assert est_sb.contains(F(13, 24))


def test_minimal_set_full_circle():
    graph, action, theta = fixtures.minimal_psl2z_fixture()
    est = estimate_minimal_set(action, theta, 3)
    assert est.final.is_full


def test_minimal_set_cantor_shrinks():
    real, graph, action, rot, theta = fixtures.z6z_realization()
    est = estimate_minimal_set(action, theta, 3)
    lens = [c.length for c in est.covers]
    assert all(lens[i + 1] <= lens[i] for i in range(len(lens) - 1))
    assert lens[-1] < lens[0] < 1


def test_hat_reduce_disjoint():
    from pingpong.circle import Arc, IntervalUnion
    a = IntervalUnion([Arc(0, F(3, 8))])
    b = IntervalUnion([Arc(F(1, 4), F(1, 2))])
    cover = IntervalUnion([Arc(0, F(1, 2))])
    red = hat_reduce({0: a, 1: b}, cover)
    assert not red[0].intersects(red[1])


def test_pipeline_psl2z_assembles_ppp():
    fr = fixtures.psl2z_realization()
    graph, action, theta = fr.graph, fr.action, fr.theta
    ball = build_ball(graph, 3)
    ests, shell = dkn_estimates(action, ball, 8, F(1, 64), 9)
    lam = estimate_minimal_set(action, theta, 3).final
    red = hat_reduce(ests, lam)
    assembled = assemble_theta(ball, red)
    # the assembled partition approximates the bundled exact one: same labels
    # with nearby atoms
    for lab, un in assembled.atoms:
        exact = theta.atom(lab)
        if exact.is_empty:
            continue
        assert not un.is_empty, lab
        for arc in exact.components():
            assert un.intersects(fixtures.IntervalUnion_single(arc)), (lab, arc)


def test_dkn_properties_psl2z():
    fr = fixtures.psl2z_realization()
    ball = build_ball(fr.graph, 3)
    ests, shell = dkn_estimates(fr.action, ball, 8, F(1, 64), 9)
    lam = estimate_minimal_set(fr.action, fr.theta, 6).final
    rep = check_dkn_properties(fr.action, ball, ests, lam, 9, arrow_norm=2)
    assert rep.ok, str(rep.failures()[:5])


def test_top_alg_duality():
    # U_{E h} and h^{-1}(U_E) agree on the grid, for E a W-set and h a letter
    fr = fixtures.psl2z_realization()
    graph, action = fr.graph, fr.action
    ball = build_ball(graph, 3)
    from pingpong.tree import ComponentLocator
    loc = ComponentLocator(ball)
    c = 0
    h = graph.preferred_generators()[0]
    hmap = action.evaluate(h)
    shell = ShellData.compute(action, ball, 8, F(1, 64), 8)
    est_e = approx_U_subset(action, lambda nf: loc.locate(nf) == c,
                            8, F(1, 64), 8, shell=shell)
    est_eh = approx_U_subset(
        action,
        lambda nf: loc.locate(graph.multiply(nf, graph.inverse(h))) == c,
        8, F(1, 64), 8, shell=shell)
    lhs = est_eh.estimate
    rhs = hmap.invert().image_union(est_e.estimate)
    # agreement up to one grid cell on both sides
    from pingpong.dkn import _dilate
    cell = F(1, 256)
    assert _dilate(rhs, cell).contains_union(lhs)
    assert _dilate(lhs, cell).contains_union(rhs)


def test_inclusion_monotone():
    # E subset of F gives estimate(E) subset of estimate(F), by construction
    fr = fixtures.psl2z_realization()
    ball = build_ball(fr.graph, 3)
    shell = ShellData.compute(fr.action, ball, 6, F(1, 32), 7)
    from pingpong.tree import ComponentLocator
    loc = ComponentLocator(ball)
    small = approx_U_subset(fr.action, lambda nf: loc.locate(nf) == 0,
                            6, F(1, 32), 7, shell=shell)
    big = approx_U_subset(fr.action, lambda nf: loc.locate(nf) in (0, 1),
                          6, F(1, 32), 7, shell=shell)
    assert big.estimate.contains_union(small.estimate)
