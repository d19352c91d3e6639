import itertools

import pytest

from pingpong import fixtures
from pingpong.presentation import EPSILON, S, V, pi_morphism
from pingpong.tree import (
    BallExhausted, ComponentLocator, NotFundamentalDomain, build_ball,
    geodesic_in_tree, subgroup_components,
)


@pytest.fixture(scope="module")
def psl2z():
    return fixtures.psl2z_graph()


@pytest.fixture(scope="module")
def psl2z_ball(psl2z):
    return build_ball(psl2z, 4)


@pytest.fixture(scope="module")
def z6z():
    return fixtures.z6z_graph()


@pytest.fixture(scope="module")
def z6z_ball(z6z):
    return build_ball(z6z, 3)


def test_psl2z_ball_shape(psl2z):
    ball = build_ball(psl2z, 1)
    assert len(ball.vertices) == 5
    degs = {}
    for v in ball.domain_vertices():
        degs[v.vid] = len(ball.edges_at(v.index))
    assert degs == {"v2": 2, "v3": 3}
    assert len(ball.components) == 3


def test_line_tree():
    ball = build_ball(fixtures.z_graph(), 4)
    # the Bass-Serre tree of Z is a line: degree 2 everywhere inside
    for v in ball.vertices:
        if v.depth <= 3:
            assert len(ball.edges_at(v.index)) == 2
    assert len(ball.components) == 2


def test_z6z_ball_degree(z6z_ball):
    t = z6z_ball.domain_vertices()[0]
    assert len(z6z_ball.edges_at(t.index)) == 12
    assert len(z6z_ball.components) == 12


def test_act_vertex_elliptic(psl2z, psl2z_ball):
    ball = psl2z_ball
    a = psl2z.normalize((V("v2", 1),))
    t2 = ball.vertex_index("v2", ())
    assert ball.act_vertex(t2, a) == t2       # a fixes the Z2 domain vertex
    assert ball.act_vertex(t2, EPSILON) == t2
    t3 = ball.vertex_index("v3", ())
    moved = ball.act_vertex(t3, a)
    assert moved != t3
    # a swaps the two edges at the Z2 vertex: acting twice returns
    assert ball.act_vertex(moved, a) == t3


def test_act_vertex_out_of_ball(psl2z):
    ball = build_ball(psl2z, 1)
    w = psl2z.normalize((V("v3", 1), V("v2", 1), V("v3", 1), V("v2", 1)))
    with pytest.raises(BallExhausted):
        ball.act_vertex(ball.vertex_index("v3", ()), w)


def test_g_circle(psl2z_ball, z6z_ball):
    names = {repr(nf) for nf in psl2z_ball.g_circle()}
    assert names == {"e", "v2", "v3", "v3^2"}
    assert len(z6z_ball.g_circle()) == 6  # identity + r..r^5


def test_g_circle_free():
    ball = build_ball(fixtures.f2_graph(), 2)
    assert ball.g_circle() == [EPSILON]


def test_geodesic_predicate(psl2z):
    # two-vertex tree: behind e means the far vertex side
    assert geodesic_in_tree(psl2z, "e", "v3")
    assert not geodesic_in_tree(psl2z, "e", "v2")
    assert geodesic_in_tree(psl2z, "e~", "v2")


def test_elliptics_not_in_W(psl2z, psl2z_ball):
    a = psl2z.normalize((V("v2", 1),))
    b = psl2z.normalize((V("v3", 1),))
    for c in range(len(psl2z_ball.components)):
        assert not psl2z_ball.in_W_c(a, c)
        assert not psl2z_ball.in_W_c(b, c)
    assert psl2z_ball.w_position(a) is None
    assert psl2z_ball.is_elliptic(a)


def test_w_position_matches_in_W(psl2z, psl2z_ball):
    gens = psl2z.preferred_generators()
    ball2 = [EPSILON]
    for _ in range(2):
        ball2 = list({psl2z.multiply(x, s) for x in ball2 for s in gens}
                     | set(ball2))
    for nf in ball2:
        pos = psl2z_ball.w_position(nf)
        for c in range(len(psl2z_ball.components)):
            assert psl2z_ball.in_W_c(nf, c) == (pos == c)


def test_in_W_arrow_identity(psl2z_ball):
    for c in range(len(psl2z_ball.components)):
        assert psl2z_ball.in_W_arrow(EPSILON, c, c)


def test_in_W_arrow_elliptic_branch(psl2z, psl2z_ball):
    ball = psl2z_ball
    b = psl2z.normalize((V("v3", 1),))
    comps_v3 = [c.index for c in ball.components
                if ball.vertices[c.t_vertex].vid == "v3"]
    assert len(comps_v3) == 2
    hits = [(c, d) for c in comps_v3 for d in comps_v3
            if ball.in_W_arrow(b, c, d)]
    # b permutes the three edges at the Z3 vertex cyclically; each component
    # goes somewhere among the two non-tree ones exactly once
    assert len(hits) >= 1
    for c, d in hits:
        assert c != d or psl2z.order("v3") <= 2


def test_in_W_arrow_against_brute_force(psl2z, psl2z_ball):
    """W_c g^{-1} subset of W_d, brute-forced over a word ball."""
    ball = psl2z_ball
    gens = psl2z.preferred_generators()
    elements = {EPSILON}
    for _ in range(3):
        elements |= {psl2z.multiply(x, s) for x in set(elements) for s in gens}
    small = [nf for nf in elements if nf.norm <= 1]
    ncomp = len(ball.components)
    for nf in small:
        inv = psl2z.inverse(nf)
        for c, d in itertools.product(range(ncomp), repeat=2):
            lhs = ball.in_W_arrow(nf, c, d)
            members = [h for h in elements if h.norm <= 2 and ball.in_W_c(h, c)]
            rhs = all(ball.in_W_c(psl2z.multiply(h, inv), d) for h in members)
            if lhs:
                assert rhs, (nf, c, d)
            # rhs vacuous cases (no members) are not conclusive
            if rhs and members:
                assert lhs, (nf, c, d)


def test_arboreal_family_psl2z(psl2z_ball):
    fam = psl2z_ball.arboreal_family()
    assert fam.z_parts == {}
    sizes = {k: len(v) for k, v in fam.x_parts.items()}
    assert sizes == {("v2", "e"): 1, ("v3", "e~"): 2}


def test_arboreal_family_z(z6z_ball):
    fam = z6z_ball.arboreal_family()
    assert len(fam.z_parts) == 2
    assert len(fam.x_parts[("v", "s")]) == 5
    assert len(fam.x_parts[("v", "s~")]) == 5
    zball = build_ball(fixtures.z_graph(), 3)
    zfam = zball.arboreal_family()
    assert all(len(v) == 0 for v in zfam.x_parts.values())
    assert len(set(zfam.z_parts.values())) == 2


def test_component_locator(psl2z, psl2z_ball):
    loc = ComponentLocator(psl2z_ball)
    gens = psl2z.preferred_generators()
    elements = {EPSILON}
    for _ in range(2):
        elements |= {psl2z.multiply(x, s) for x in set(elements) for s in gens}
    for nf in elements:
        assert loc.locate(nf) == psl2z_ball.w_position(nf)


def test_component_locator_deep(psl2z):
    # locator works far beyond the ball radius
    ball = build_ball(psl2z, 2)
    loc = ComponentLocator(ball)
    w = (V("v3", 1), V("v2", 1)) * 6
    nf = psl2z.normalize(w)
    assert nf.norm == 12
    pos = loc.locate(nf)
    assert pos is not None
    big = build_ball(psl2z, 14)
    assert big.w_position(nf) == pos


def test_subgroup_components_psl2z(psl2z, psl2z_ball):
    pi = pi_morphism(psl2z, fixtures.PSL2Z_ROT)
    dec = subgroup_components(psl2z, pi, psl2z_ball)
    assert len(dec.t_h_vertices) == 5
    assert dec.component_count == 4
    assert dec.rank == 2
    # fibers refine the three components of X minus T: sizes 2,1,1
    from collections import Counter
    fibers = Counter(dec.iota.values())
    assert sorted(fibers.values()) == [1, 1, 2]
    names = {repr(h) for h in dec.kernel_generators}
    assert names == {"v3*v2*v3^2*v2", "v3^2*v2*v3*v2"}


def test_subgroup_components_whole_group():
    # H = G is only possible over trivial vertex groups: the free case
    g = fixtures.f2_graph()
    ball = build_ball(g, 3)
    pi = pi_morphism(g, {"v": 0})
    dec = subgroup_components(g, pi, ball)
    assert sorted(dec.iota.values()) == list(range(4))  # iota is a bijection
    assert dec.rank == 2
    assert dec.t_h_vertices == tuple(v.index for v in ball.domain_vertices())


def test_subgroup_user_domain_rejected(psl2z, psl2z_ball):
    pi = pi_morphism(psl2z, fixtures.PSL2Z_ROT)
    with pytest.raises(NotFundamentalDomain):
        subgroup_components(psl2z, pi, psl2z_ball,
                            t_h=tuple(range(3)))
