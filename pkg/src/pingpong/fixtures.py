"""Bundled example groups, actions and partitions used by the test suite,
the CLI demos, and the acceptance checks."""

from __future__ import annotations

from fractions import Fraction as F

from .presentation import BoundaryInjection, EdgeSpec, GraphOfGroups, S as S_letter


def edge_pair(eid: str, origin: str, target: str, edge_order: int,
              img_origin: int, img_target: int, in_tree: bool,
              order_origin: int, order_target: int):
    """Both orientations of one unoriented edge; the reverse id is eid + '~'."""
    rid = eid + "~"
    return [
        EdgeSpec(eid, origin, rid, edge_order,
                 BoundaryInjection(edge_order, order_origin, img_origin), in_tree),
        EdgeSpec(rid, target, eid, edge_order,
                 BoundaryInjection(edge_order, order_target, img_target), in_tree),
    ]


def psl2z_graph() -> GraphOfGroups:
    """Z2 * Z3 with one tree edge and trivial edge group."""
    return GraphOfGroups(
        {"v2": 2, "v3": 3},
        edge_pair("e", "v2", "v3", 1, 0, 0, True, 2, 3))


def z2z4_graph() -> GraphOfGroups:
    """Z4 * Z2 (the two-vertex marking of the basic-example group)."""
    return GraphOfGroups(
        {"v2": 2, "v4": 4},
        edge_pair("e", "v4", "v2", 1, 0, 0, True, 4, 2))


def free_product_graph(p: int, q: int) -> GraphOfGroups:
    """Z_p * Z_q on vertices vp, vq."""
    return GraphOfGroups(
        {"vp": p, "vq": q},
        edge_pair("e", "vp", "vq", 1, 0, 0, True, p, q))


def z6z_graph() -> GraphOfGroups:
    """Z6 * Z: one vertex of order 6, one non-tree loop, trivial edge group."""
    return GraphOfGroups(
        {"v": 6},
        edge_pair("s", "v", "v", 1, 0, 0, False, 6, 6))


def z_graph() -> GraphOfGroups:
    """Z: a single loop on a trivial vertex."""
    return GraphOfGroups(
        {"v": 1},
        edge_pair("s", "v", "v", 1, 0, 0, False, 1, 1))


def f2_graph() -> GraphOfGroups:
    """F_2 as a wedge: trivial vertex, two non-tree loops."""
    return GraphOfGroups(
        {"v": 1},
        edge_pair("a", "v", "v", 1, 0, 0, False, 1, 1)
        + edge_pair("b", "v", "v", 1, 0, 0, False, 1, 1))


def z4_amalgam_z6_graph() -> GraphOfGroups:
    """Z4 *_{Z2} Z6: central extension of Z2 * Z3 by Z2."""
    return GraphOfGroups(
        {"u": 4, "w": 6},
        edge_pair("e", "u", "w", 2, 2, 3, True, 4, 6))


def hnn_z6_over_z2_graph() -> GraphOfGroups:
    """HNN extension of Z6 identifying the Z2 subgroup with itself."""
    return GraphOfGroups(
        {"v": 6},
        edge_pair("s", "v", "v", 2, 3, 3, False, 6, 6))


def bad_divisibility_graph() -> GraphOfGroups:
    """Edge of order 4 injecting into a vertex of order 6: invalid."""
    return GraphOfGroups(
        {"u": 6, "w": 4},
        edge_pair("e", "u", "w", 4, 1, 1, True, 6, 4))


PSL2Z_ROT = {"v2": F(1, 2), "v3": F(1, 3)}
Z2Z4_ROT = {"v2": F(1, 2), "v4": F(1, 4)}
Z6Z_ROT = {"v": F(1, 6)}


# ---------------------------------------------------------------------------
# bundled actions with exact partitions


def psl2z_realization(variant: int = 0):
    """Z2 * Z3 acting with the order-2 generator a rigid half turn."""
    from .realize import default_free_product_params, realize_free_product
    return realize_free_product(2, 3, default_free_product_params(2, 3, variant))


def z2z4_realization(variant: int = 0):
    """Z4 * Z2 with the order-4 generator the rotation by 1/4 (the
    basic-example group, right-hand partition)."""
    from .realize import default_free_product_params, realize_free_product
    return realize_free_product(4, 2, default_free_product_params(4, 2, variant))


def z2z4_left_family():
    """The same circle action and the same intervals, but grouped the wrong
    way round (one quarter atom relabeled to the order-2 vertex): not a
    ping-pong partition for the marking."""
    from .checker import PartitionTheta
    from .circle import IntervalUnion
    fr = z2z4_realization()
    a_arcs = list(fr.theta.u_atom("vp", "e").components())
    b_arcs = list(fr.theta.u_atom("vq", "e~").components())
    moved = a_arcs[1]
    rest = [a for a in a_arcs if a != moved]
    left = PartitionTheta.build(
        {("vp", "e"): IntervalUnion(rest + b_arcs),
         ("vq", "e~"): IntervalUnion([moved])}, {})
    return fr, left


def z6z_realization(variant: int = 0):
    """F_6 x| Z_6 with the cyclic permutation of generators, i.e. Z6 * Z;
    returns (realization, graph, action, rot, theta)."""
    from .realize import SignedPermutation, default_params, realize_semidirect
    sigma = SignedPermutation.cyclic(6)
    real = realize_semidirect(6, 6, sigma,
                              default_params(6, 6, sigma, variant))
    graph, action, rot, _ = real.marking()
    theta = real.suggested_theta()
    return real, graph, action, rot, theta


def minimal_psl2z_fixture():
    """Z2 * Z3 acting minimally: the partition tiles the circle, all gaps
    degenerate to points."""
    from .checker import PartitionTheta, check_marked_action
    from .circle import Arc, IntervalUnion, PLMap, rotation
    graph = free_product_graph(2, 3)
    b = PLMap([(0, F(1, 2)), (F(1, 2), F(3, 4)), (F(3, 4), 0)])
    action = check_marked_action(
        graph, {"vp": rotation(F(1, 2)), "vq": b}, {})
    theta = PartitionTheta.build(
        {("vp", "e"): IntervalUnion([Arc(0, F(1, 2))]),
         ("vq", "e~"): IntervalUnion([Arc(F(1, 2), F(3, 4)),
                                      Arc(F(3, 4), 0)])}, {})
    return graph, action, theta


def z_hyperbolic_fixture():
    """A single hyperbolic PL map generating Z: one loop, axis sets only."""
    from .checker import PartitionTheta, check_marked_action
    from .circle import Arc, IntervalUnion, PLMap
    graph = z_graph()
    # repelling interval (1/8, 1/4), attracting (1/2, 5/8)
    f = PLMap([(F(1, 8), F(5, 8)), (F(1, 4), F(1, 2))])
    action = check_marked_action(graph, {"v": PLMap.identity()}, {"s": f})
    theta = PartitionTheta.build(
        {("v", "s"): IntervalUnion.empty(), ("v", "s~"): IntervalUnion.empty()},
        {"s": IntervalUnion([Arc(F(1, 2), F(5, 8))]),
         "s~": IntervalUnion([Arc(F(1, 8), F(1, 4))])})
    return graph, action, theta


def f2_schottky_fixture():
    """Rank-2 Schottky-like PL action with four intervals, plus the free
    ping-pong atoms (atom of s sits at the repeller of s)."""
    from .checker import check_marked_action
    from .circle import Arc, IntervalUnion, PLMap
    graph = f2_graph()
    pos = {
        "a": Arc(F(1, 16), F(3, 16)),
        "b": Arc(F(5, 16), F(7, 16)),
        "a~": Arc(F(9, 16), F(11, 16)),
        "b~": Arc(F(13, 16), F(15, 16)),
    }

    def north_south(rep: Arc, att: Arc) -> PLMap:
        return PLMap([(rep.lo, att.hi), (rep.hi, att.lo)])

    fa = north_south(pos["a"], pos["a~"])   # repels on U_a, lands in U_{a~}
    fb = north_south(pos["b"], pos["b~"])
    action = check_marked_action(
        graph, {"v": PLMap.identity()}, {"a": fa, "b": fb})
    atoms = {s: IntervalUnion([arc]) for s, arc in pos.items()}
    return graph, action, atoms


def IntervalUnion_single(arc):
    from .circle import IntervalUnion
    return IntervalUnion([arc])
