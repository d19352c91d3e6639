import random
from fractions import Fraction as F

import pytest

from pingpong.circle import (
    Arc, Gap, IntervalUnion, PLMap, closed_intersection, closed_union,
    compose, cyclic_order_of_points, frac, gaps_of, invert, mod1, order_of,
    rotation, rotation_number_finite,
)


def test_frac_parsing():
    assert frac("3/4") == F(3, 4)
    assert frac(2) == F(2)
    with pytest.raises(Exception):
        frac("3/0")


def test_rotation_basics():
    r = rotation(F(1, 4))
    assert r(F(7, 8)) == F(1, 8)
    assert compose(r, r) == rotation(F(1, 2))
    assert rotation(0) == PLMap.identity()
    assert invert(PLMap.identity()) == PLMap.identity()
    r6 = rotation(F(1, 6))
    p = PLMap.identity()
    for _ in range(6):
        p = p.compose(r6)
    assert p.is_identity


def test_eval_linear_interpolation():
    # two breakpoints: (0,0) and (1/2,3/4); slope 3/2 then 1/2
    f = PLMap([(0, 0), (F(1, 2), F(3, 4))])
    assert f(F(1, 4)) == F(3, 8)
    assert f(F(3, 4)) == F(7, 8)
    g = invert(f)
    assert g(F(3, 8)) == F(1, 4)
    assert compose(g, f).is_identity


def test_compose_matches_pointwise():
    rnd = random.Random(7)
    f = PLMap([(0, F(1, 10)), (F(1, 3), F(2, 3)), (F(1, 2), F(7, 10))])
    g = rotation(F(2, 7))
    fg = compose(f, g)
    for _ in range(50):
        x = F(rnd.randrange(0, 997), 997)
        assert fg(x) == f(g(x))


def test_rotation_number():
    assert rotation_number_finite(rotation(F(1, 4))) == F(1, 4)
    assert rotation_number_finite(PLMap.identity()) == F(0)
    # PL conjugate of R_{1/4} by a non-rotation map has the same rotation number
    c = PLMap([(0, 0), (F(1, 8), F(1, 2))])
    r = rotation(F(1, 4))
    f = compose(compose(c, r), invert(c))
    assert order_of(f, 8) == 4
    assert rotation_number_finite(f) == F(1, 4)
    assert rotation_number_finite(compose(f, f)) == F(1, 2)


def test_order_of_none():
    f = PLMap([(0, 0), (F(1, 2), F(3, 4))])  # has fixed point, infinite order
    assert order_of(f, 20) is None


def test_cyclic_order():
    assert cyclic_order_of_points([F(1, 2), F(1, 8), F(3, 4)]) == [1, 0, 2]
    with pytest.raises(ValueError):
        cyclic_order_of_points([F(0), F(0)])


def test_arc_contains():
    a = Arc(F(3, 4), F(1, 4))  # wraps
    assert a.contains(F(7, 8))
    assert a.contains(F(1, 8))
    assert not a.contains(F(1, 2))
    assert not a.contains(F(3, 4))
    assert a.contains(F(3, 4), closed=True)
    assert a.contains_arc(Arc(F(7, 8), F(1, 8)))
    assert not a.contains_arc(Arc(F(1, 8), F(7, 8)))


def test_union_canonicalization():
    u = IntervalUnion([Arc(0, F(1, 4)), Arc(F(1, 8), F(1, 2))])
    assert u.components() == (Arc(0, F(1, 2)),)
    # adjacent arcs stay separate components
    v = IntervalUnion([Arc(0, F(1, 4)), Arc(F(1, 4), F(1, 2))])
    assert len(v.components()) == 2
    assert not v.contains(F(1, 4))
    # covering overlapping arcs detects the full circle
    w = IntervalUnion([Arc(0, F(2, 3)), Arc(F(1, 3), F(9, 10)), Arc(F(5, 6), F(1, 6))])
    assert w.is_full
    # adjacent all around is NOT full (missing endpoints)
    t = IntervalUnion([Arc(0, F(1, 2)), Arc(F(1, 2), 0)])
    assert not t.is_full
    assert len(t.components()) == 2


def test_union_wrap_merge():
    u = IntervalUnion([Arc(F(3, 4), F(1, 8)), Arc(F(1, 16), F(1, 4))])
    assert u.components() == (Arc(F(3, 4), F(1, 4)),)
    assert u.length == F(1, 2)


def test_gaps():
    u = IntervalUnion([Arc(0, F(1, 2))])
    assert u.gaps() == [Gap(F(1, 2), F(0))]
    v = IntervalUnion([Arc(0, F(1, 4)), Arc(F(1, 4), F(1, 2))])
    gs = v.gaps()
    assert Gap.point(F(1, 4)) in gs
    assert Gap(F(1, 2), F(0)) in gs
    assert len(gs) == 2
    assert gaps_of(IntervalUnion.empty()) == [Gap.full_circle()]
    assert gaps_of(IntervalUnion.full()) == []


def test_subtract_gap():
    u = IntervalUnion([Arc(0, F(1, 2))])
    v = u.subtract_gap(Gap(F(1, 8), F(1, 4)))
    assert v.components() == (Arc(0, F(1, 8)), Arc(F(1, 4), F(1, 2)))
    w = u.subtract_gap(Gap.point(F(1, 4)))
    assert w.components() == (Arc(0, F(1, 4)), Arc(F(1, 4), F(1, 2)))
    # removing a closed arc overlapping the boundary
    x = u.subtract_gap(Gap(F(3, 8), F(3, 4)))
    assert x.components() == (Arc(0, F(3, 8)),)
    y = u.subtract_gap(Gap(F(3, 4), F(1, 8)))  # wraps over the arc start
    assert y.components() == (Arc(F(1, 8), F(1, 2)),)
    assert u.subtract_gap(Gap.full_circle()).is_empty


def test_image_union_preserves_structure():
    f = PLMap([(0, 0), (F(1, 2), F(3, 4))])
    u = IntervalUnion([Arc(F(1, 8), F(1, 4)), Arc(F(5, 8), F(7, 8))])
    img = f.image_union(u)
    assert len(img.components()) == 2
    assert img.contains(f(F(3, 16)))
    assert not img.contains(f(F(1, 2)))


def test_image_additivity_random():
    rnd = random.Random(11)
    f = PLMap([(0, F(1, 5)), (F(1, 4), F(2, 5)), (F(1, 2), F(9, 10))])
    for _ in range(25):
        cuts = sorted({F(rnd.randrange(0, 360), 360) for _ in range(6)})
        if len(cuts) < 4:
            continue
        u = IntervalUnion([Arc(cuts[0], cuts[1]), Arc(cuts[2], cuts[3])])
        img = f.image_union(u)
        assert len(img.components()) == len(u.components())
        assert img.length == sum(
            (f.image_arc(a).length for a in u.components()), F(0))


def test_closed_ops():
    a = IntervalUnion([Arc(0, F(1, 2))])
    b = IntervalUnion([Arc(F(1, 4), F(3, 4))])
    i = closed_intersection(a, b)
    assert i.components() == (Arc(F(1, 4), F(1, 2)),)
    u = closed_union([a, b])
    assert u.components() == (Arc(0, F(3, 4)),)
    # closure merging across a shared endpoint
    c = IntervalUnion([Arc(0, F(1, 4)), Arc(F(1, 4), F(1, 2))])
    assert closed_union([c]).components() == (Arc(0, F(1, 2)),)
    assert closed_intersection(a, IntervalUnion.full()) == a
    assert closed_intersection(a, IntervalUnion.empty()).is_empty


def test_plmap_rejects_bad_data():
    with pytest.raises(ValueError):
        PLMap([(0, 0), (F(1, 2), F(1, 2)), (F(3, 4), F(1, 4))])  # slope <= 0
    with pytest.raises(ValueError):
        PLMap([])
    with pytest.raises(ValueError):
        Arc(F(1, 3), F(1, 3))


def test_canonical_form_drops_collinear():
    f = PLMap([(0, 0), (F(1, 4), F(1, 4)), (F(1, 2), F(3, 4))])
    # (1/4,1/4) is collinear with the identity piece on [0,1/2)? no: slopes 1,2
    g = PLMap([(0, 0), (F(1, 2), F(3, 4)), (F(3, 4), F(7, 8))])
    # last point collinear on the slope-1/2 stretch back to (1,1)
    assert g == PLMap([(0, 0), (F(1, 2), F(3, 4))])
    assert f(F(1, 8)) == F(1, 8)


def test_mod1():
    assert mod1(F(-1, 4)) == F(3, 4)
    assert mod1(F(9, 4)) == F(1, 4)
    assert mod1(F(1)) == F(0)
