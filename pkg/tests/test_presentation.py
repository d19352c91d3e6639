import itertools
import random
from fractions import Fraction as F

import pytest

from pingpong import fixtures
from pingpong.presentation import (
    EPSILON, NormalForm, S, V, inverse_word, lcm_order, pi_morphism,
    preferred_generators, quotient_graph_action, validate_graph, word_norm,
)


@pytest.fixture(scope="module")
def psl2z():
    return fixtures.psl2z_graph()


@pytest.fixture(scope="module")
def z6z():
    return fixtures.z6z_graph()


# -- validation ---------------------------------------------------------------

def test_validate_good_graphs(psl2z, z6z):
    assert validate_graph(psl2z).ok
    assert validate_graph(z6z).ok
    assert validate_graph(fixtures.z4_amalgam_z6_graph()).ok
    assert validate_graph(fixtures.f2_graph()).ok


def test_validate_divisibility_failure():
    rep = validate_graph(fixtures.bad_divisibility_graph())
    assert not rep.ok
    assert "divide" in rep.first_failure or "order" in rep.first_failure


# -- normal forms --------------------------------------------------------------

def test_torsion_relation(psl2z):
    b = V("v3", 1)
    assert psl2z.normalize((b, b, b)) == EPSILON
    assert psl2z.normalize((b, b)) == NormalForm((V("v3", 2),))


def test_commutator_cancels(psl2z):
    # [b,a] = b a b^2 a, composed with its letter-wise inverse
    com = (V("v3", 1), V("v2", 1), V("v3", 2), V("v2", 1))
    w = com + inverse_word(psl2z, com)
    assert psl2z.normalize(w) == EPSILON
    nf = psl2z.normalize(com)
    assert word_norm(nf) == 4


def test_abab_is_reduced(psl2z):
    w = (V("v2", 1), V("v3", 1), V("v2", 1), V("v3", 1))
    assert psl2z.normalize(w) == NormalForm(w)


def test_multiply_inverse_laws(psl2z):
    a = psl2z.normalize((V("v2", 1),))
    assert psl2z.multiply(a, a) == EPSILON
    assert word_norm(EPSILON) == 0
    x = psl2z.normalize((V("v3", 1), V("v2", 1)))
    assert psl2z.multiply(x, psl2z.inverse(x)) == EPSILON


def test_amalgam_identification():
    g = fixtures.z4_amalgam_z6_graph()
    # the order-2 subgroups are identified: 3 in Z6 equals 2 in Z4
    assert g.normalize((V("w", 3),)) == g.normalize((V("u", 2),))
    assert g.normalize((V("w", 3), V("u", 2))) == EPSILON
    # nontrivial coset survives
    assert g.normalize((V("w", 1),)) == NormalForm((V("w", 1),))
    # central element commutes with everything
    z = (V("u", 2),)
    w = (V("w", 1), V("u", 1))
    lhs = g.normalize(z + w)
    rhs = g.normalize(w + z)
    assert lhs == rhs


def test_hnn_britton_relation():
    g = fixtures.hnn_z6_over_z2_graph()
    # s^-1 (3) s = 3, the edge relation
    assert g.normalize((S("s~"), V("v", 3), S("s"))) == g.normalize((V("v", 3),))
    # s^-1 (1) s is Britton-reduced
    w = (S("s~"), V("v", 1), S("s"))
    assert word_norm(g.normalize(w)) == 3
    # s s^-1 cancels
    assert g.normalize((S("s"), S("s~"))) == EPSILON


def test_z6z_basics(z6z):
    r = V("v", 1)
    assert z6z.normalize((r,) * 6) == EPSILON
    w = (S("s"), r, S("s"), V("v", 5), S("s~"))
    nf = z6z.normalize(w)
    assert word_norm(nf) == 5
    assert z6z.multiply(nf, z6z.inverse(nf)) == EPSILON


def test_idempotence_and_homomorphism_random(psl2z, z6z):
    rnd = random.Random(42)
    for g in (psl2z, z6z, fixtures.z4_amalgam_z6_graph()):
        gens = preferred_generators(g)
        pool = [letter for nf in gens for letter in nf.letters]
        for _ in range(300):
            w1 = tuple(rnd.choice(pool) for _ in range(rnd.randrange(0, 8)))
            w2 = tuple(rnd.choice(pool) for _ in range(rnd.randrange(0, 8)))
            n1, n2 = g.normalize(w1), g.normalize(w2)
            assert g.normalize(n1.letters) == n1          # idempotent
            assert g.normalize(w1 + w2) == g.multiply(n1, n2)
            assert g.multiply(n1, g.inverse(n1)) == EPSILON


def test_associativity_spot(psl2z):
    gens = preferred_generators(psl2z)
    for x, y, z in itertools.product(gens[:3], repeat=3):
        assert psl2z.multiply(psl2z.multiply(x, y), z) == \
            psl2z.multiply(x, psl2z.multiply(y, z))


# -- preferred generators -------------------------------------------------------

def test_preferred_generators(psl2z, z6z):
    gens = preferred_generators(psl2z)
    assert len(gens) == 3  # a, b, b^2
    gens6 = preferred_generators(z6z)
    assert len(gens6) == 7  # r..r^5, s, s~
    trivial = fixtures.GraphOfGroups({"v": 1}, [])
    assert preferred_generators(trivial) == []
    # closed under the pairing s <-> s~
    labels = {nf.letters for nf in gens6}
    assert (S("s"),) in labels and (S("s~"),) in labels


def test_preferred_generators_hnn_cosets():
    g = fixtures.hnn_z6_over_z2_graph()
    gens = preferred_generators(g)
    # 5 vertex elements + 2 cosets of size 2
    assert len(gens) == 9


# -- morphism to Z_m -------------------------------------------------------------

def test_pi_morphism_psl2z(psl2z):
    pi = pi_morphism(psl2z, fixtures.PSL2Z_ROT)
    assert pi.modulus == 6
    com = psl2z.normalize((V("v3", 1), V("v2", 1), V("v3", 2), V("v2", 1)))
    assert pi.evaluate(com) == 0
    assert pi.evaluate(EPSILON) == 0
    assert pi.evaluate(psl2z.normalize((V("v3", 1),))) == 2
    assert pi.evaluate(psl2z.normalize((V("v2", 1),))) == 3


def test_pi_morphism_rejects_wrong_order(psl2z):
    with pytest.raises(ValueError):
        pi_morphism(psl2z, {"v2": F(1, 2), "v3": F(1, 2)})


def test_pi_is_homomorphism_on_ball(psl2z):
    pi = pi_morphism(psl2z, fixtures.PSL2Z_ROT)
    gens = preferred_generators(psl2z)
    ball = [EPSILON]
    for _ in range(4):
        ball = list({psl2z.multiply(x, s) for x in ball for s in gens} | set(ball))
    sample = sorted(ball)[:30]
    for x in sample:
        for y in sample[:10]:
            assert pi.evaluate(psl2z.multiply(x, y)) == \
                (pi.evaluate(x) + pi.evaluate(y)) % 6


def test_lcm_order(psl2z):
    assert lcm_order(psl2z) == 6
    assert lcm_order(fixtures.z4_amalgam_z6_graph()) == 12


# -- quotient graph ---------------------------------------------------------------

def test_quotient_graph_psl2z(psl2z):
    pi = pi_morphism(psl2z, fixtures.PSL2Z_ROT)
    data, sigma, m = quotient_graph_action(psl2z, pi, radius=4)
    assert m == 6
    assert len(data.vertices) == 5          # 3 + 2 coset classes
    assert data.n_unoriented == 6
    # Euler characteristic -> kernel rank 2
    assert data.n_unoriented - len(data.vertices) + 1 == 2
    # sigma permutes the six unoriented edges in a single cycle, no inversions
    seen = set()
    i = 1
    for _ in range(6):
        assert i > 0
        seen.add(abs(i))
        i = sigma[i]
    assert len(seen) == 6


def test_quotient_graph_f2_trivial():
    g = fixtures.f2_graph()
    pi = pi_morphism(g, {"v": F(0)})
    data, sigma, m = quotient_graph_action(g, pi, radius=3)
    assert m == 1
    assert len(data.vertices) == 1
    assert data.n_unoriented == 2
    assert sigma == {1: 1, -1: -1, 2: 2, -2: -2}


def test_quotient_graph_z6z(z6z):
    pi = pi_morphism(z6z, fixtures.Z6Z_ROT)
    data, sigma, m = quotient_graph_action(z6z, pi, radius=3)
    assert m == 6
    assert len(data.vertices) == 1
    assert data.n_unoriented == 6
    cyc, i = set(), 1
    for _ in range(6):
        cyc.add(abs(i))
        i = sigma[i]
    assert i == 1 and len(cyc) == 6
