"""Finite balls of the Bass-Serre tree with the right action by cosets.

Vertices over a quotient vertex v are right cosets G_v g, labeled by the
shortest-lex canonical coset representative.  The fundamental domain T is the
closed lift of the spanning tree plus one boundary edge per non-tree edge
pair; components of X minus T use the half-open reading (far endpoints of
boundary edges belong to the outside).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .presentation import EPSILON, GraphOfGroups, NormalForm, S, V


class BallExhausted(Exception):
    pass


class ResourceLimit(Exception):
    pass


class NotFundamentalDomain(Exception):
    pass


@dataclass
class BallVertex:
    index: int
    vid: str
    rep: tuple           # canonical coset representative (letter tuple)
    depth: int
    component: int | None  # None for domain vertices


@dataclass
class BallEdge:
    index: int
    eid: str             # quotient edge id, oriented: origin side is `near`
    rep: tuple           # canonical edge-coset representative (letter tuple)
    near: int
    far: int
    reverse: int = -1
    in_domain: bool = False
    component: int | None = None  # point-set component; None inside T


@dataclass(frozen=True)
class ComponentRef:
    """A connected component of X minus T, named by its outward edge."""

    index: int
    t_vertex: int        # ball index of the adjacent domain vertex
    edge: int            # ball index of the outward oriented edge e_c
    eid: str             # quotient edge id of e_c (origin at the T vertex)


@dataclass
class ArborealFamily:
    """Component grouping: X_v split by quotient star edges, plus the axis
    components Z_s per oriented non-tree edge."""

    x_parts: dict        # (vid, eid) -> tuple of component indices
    z_parts: dict        # oriented non-tree eid -> component index

    def all_x(self, vid: str, ball) -> tuple:
        return tuple(c for (v, _), cs in sorted(self.x_parts.items())
                     if v == vid for c in cs)


class TreeBall:
    def __init__(self, g: GraphOfGroups, radius: int, max_vertices: int = 2_000_000):
        if radius < 1:
            raise ValueError("radius must be >= 1")
        g.assert_valid()
        self.g = g
        self.radius = radius
        self.vertices: list[BallVertex] = []
        self.edges: list[BallEdge] = []
        self.components: list[ComponentRef] = []
        self._vindex: dict = {}
        self._eindex: dict = {}
        self._adjacency: dict = {}
        self._build(max_vertices)
        self._mark_domain_edges()

    # -- canonical coset representatives ---------------------------------

    def coset_rep(self, vid: str, letters: tuple) -> tuple:
        g = self.g
        if vid == g.base:
            head, steps = g._word_to_path(letters)
            head, steps = g._canon_path(head, steps)
            return g._path_to_letters(0, steps)
        best = None
        for k in range(g.order(vid)):
            cand = g.normalize((V(vid, k),) + tuple(letters)).letters
            key = (len(cand), cand)
            if best is None or key < best[0]:
                best = (key, cand)
        return best[1]

    def edge_rep(self, eid: str, letters: tuple) -> tuple:
        g = self.g
        al = g.alpha(eid)
        o = g.origin(eid)
        best = None
        for j in range(al.source_order):
            cand = g.normalize((V(o, al.image(j)),) + tuple(letters)).letters
            key = (len(cand), cand)
            if best is None or key < best[0]:
                best = (key, cand)
        return best[1]

    # -- construction ------------------------------------------------------

    def _get_vertex(self, vid, rep, depth):
        key = (vid, rep)
        if key in self._vindex:
            return self._vindex[key]
        idx = len(self.vertices)
        self.vertices.append(BallVertex(idx, vid, rep, depth, None))
        self._vindex[key] = idx
        self._adjacency[idx] = []
        return idx

    def _build(self, max_vertices):
        g = self.g
        for vid in sorted(g.vertices):
            self._get_vertex(vid, (), 0)
        frontier = list(range(len(self.vertices)))
        while frontier:
            nxt = []
            for ui in frontier:
                u = self.vertices[ui]
                if u.depth >= self.radius:
                    continue
                for eid in g.star(u.vid):
                    al = g.alpha(eid)
                    n_cosets = g.order(u.vid) // al.source_order
                    for h in range(n_cosets):
                        word = ((V(u.vid, h),) if h else ()) + u.rep
                        erep = self.edge_rep(eid, word)
                        ekey = (eid, erep)
                        if ekey in self._eindex:
                            continue
                        far_word = word
                        if not g.edges[eid].in_tree:
                            far_word = (S(g.reverse(eid)),) + far_word
                        frep = self.coset_rep(g.target(eid), far_word)
                        fi = self._get_vertex(g.target(eid), frep, u.depth + 1)
                        if len(self.vertices) > max_vertices:
                            raise ResourceLimit("tree ball too large")
                        fv = self.vertices[fi]
                        if fv.depth > u.depth:
                            nxt.append(fi)
                        ei = self._add_edge_pair(eid, erep, ui, fi, word)
                        comp = None
                        if u.depth == 0 and fv.depth > 0:
                            if fv.component is None:
                                comp = len(self.components)
                                self.components.append(
                                    ComponentRef(comp, ui, ei, eid))
                                fv.component = comp
                            else:
                                comp = fv.component
                        elif u.depth > 0:
                            comp = u.component
                            if fv.depth > 0 and fv.component is None:
                                fv.component = comp
                        for e in (self.edges[ei], self.edges[self.edges[ei].reverse]):
                            e.component = comp
            frontier = nxt

    def _add_edge_pair(self, eid, erep, ui, fi, word):
        g = self.g
        rid = g.reverse(eid)
        rword = word
        if not g.edges[eid].in_tree:
            rword = (S(rid),) + rword
        rrep = self.edge_rep(rid, rword)
        i1 = len(self.edges)
        self.edges.append(BallEdge(i1, eid, erep, ui, fi))
        i2 = len(self.edges)
        self.edges.append(BallEdge(i2, rid, rrep, fi, ui))
        self.edges[i1].reverse = i2
        self.edges[i2].reverse = i1
        self._eindex[(eid, erep)] = i1
        self._eindex[(rid, rrep)] = i2
        self._adjacency[ui].append(i1)
        self._adjacency[fi].append(i2)
        return i1

    def _mark_domain_edges(self):
        g = self.g
        # tree-edge identity lifts connect depth-0 vertices
        for e in self.edges:
            if (self.vertices[e.near].depth == 0
                    and self.vertices[e.far].depth == 0):
                e.in_domain = True
                e.component = None
        # one boundary edge per non-tree pair: the lift whose far vertex is
        # (o(s), [s]) seen from the t(s) domain vertex, for the canonical s
        for s in g.stable_pairs():
            rid = g.reverse(s)
            erep = self.edge_rep(rid, ())
            ei = self._eindex.get((rid, erep))
            if ei is None:
                continue
            for idx in (ei, self.edges[ei].reverse):
                self.edges[idx].in_domain = True
                self.edges[idx].component = None

    # -- basic queries -------------------------------------------------------

    def vertex_index(self, vid: str, rep: tuple):
        return self._vindex.get((vid, rep))

    def domain_vertices(self) -> list:
        return [v for v in self.vertices if v.depth == 0]

    def edges_at(self, vi: int):
        out = []
        for ei in self._adjacency[vi]:
            e = self.edges[ei]
            out.append(BallEdgeView(e.eid, self._coset_nf(e.rep),
                                    e.index, e.component, e.in_domain))
        return out

    def _coset_nf(self, rep):
        return NormalForm(tuple(rep))

    def act_vertex(self, vi: int, nf: NormalForm) -> int:
        """Right action: (G_v x) . g = G_v (x g); raises if out of the ball."""
        v = self.vertices[vi]
        rep = self.coset_rep(v.vid, v.rep + nf.letters)
        out = self.vertex_index(v.vid, rep)
        if out is None:
            raise BallExhausted(f"vertex {(v.vid, rep)} beyond radius {self.radius}")
        return out

    def component_of_vertex(self, vi: int) -> int | None:
        return self.vertices[vi].component

    # -- W sets ---------------------------------------------------------------

    def is_elliptic(self, nf: NormalForm) -> bool:
        """Whether nf fixes a domain vertex, i.e. lies in some vertex group."""
        return any(self.coset_rep(vid, nf.letters) == ()
                   for vid in self.g.vertices)

    def g_circle(self) -> list:
        """All elements fixing a domain vertex: the vertex groups, merged."""
        out = [EPSILON]
        seen = {EPSILON}
        for vid in sorted(self.g.vertices):
            for k in range(1, self.g.order(vid)):
                nf = self.g.normalize((V(vid, k),))
                if nf not in seen:
                    seen.add(nf)
                    out.append(nf)
        return out

    def in_W_c(self, nf: NormalForm, c: int) -> bool:
        """Whether T.g lies inside component c."""
        if nf.is_identity or self.is_elliptic(nf):
            return False
        for vid in self.g.vertices:
            rep = self.coset_rep(vid, nf.letters)
            vi = self.vertex_index(vid, rep)
            if vi is None:
                raise BallExhausted(f"T.g beyond radius {self.radius}")
            if self.vertices[vi].component != c:
                return False
        return True

    def w_position(self, nf: NormalForm):
        """Component containing T.g, or None for elliptic/identity elements.

        T.g is connected and misses T once no vertex coset collapses, so the
        position is the component of any single coset vertex."""
        if nf.is_identity or self.is_elliptic(nf):
            return None
        rep = self.coset_rep(self.g.base, nf.letters)
        vi = self.vertex_index(self.g.base, rep)
        if vi is None:
            raise BallExhausted(f"T.g beyond radius {self.radius}")
        return self.vertices[vi].component

    def in_W_arrow(self, nf: NormalForm, c: int, d: int) -> bool:
        """Membership in { g : W_c g^{-1} subset of W_d }: either g^{-1} sits
        in W_d with g outside W_c, or g is elliptic and moves the outward
        edge of c into component d."""
        inv = self.g.inverse(nf)
        if not self.is_elliptic(nf):
            return self.w_position(inv) == d and self.w_position(nf) != c
        e_c = self.edges[self.components[c].edge]
        img_rep = self.edge_rep(e_c.eid, e_c.rep + inv.letters)
        ei = self._eindex.get((e_c.eid, img_rep))
        if ei is None:
            raise BallExhausted("edge image beyond ball")
        return self.edges[ei].component == d

    # -- arboreal family ----------------------------------------------------

    def z_component(self, s: str) -> int:
        """Component containing the positive axis direction of stable edge s:
        the one holding the vertex (o(s), [s])."""
        rep = self.coset_rep(self.g.origin(s), (S(s),))
        vi = self.vertex_index(self.g.origin(s), rep)
        comp = self.vertices[vi].component
        if comp is None:
            raise ValueError(f"no component for axis of {s}")
        return comp

    def arboreal_family(self) -> ArborealFamily:
        g = self.g
        z_parts = {s: self.z_component(s) for s in g.stable_edge_ids}
        z_set = set(z_parts.values())
        x_parts = {}
        for vid in sorted(g.vertices):
            for eid in g.star(vid):
                # lifts of a stable letter are named after the axis
                # orientation, which is the reverse of the outward one
                want = eid if g.edges[eid].in_tree else g.reverse(eid)
                cs = []
                for comp in self.components:
                    if comp.eid != want:
                        continue
                    if self.vertices[comp.t_vertex].vid != vid:
                        continue
                    if comp.index in z_set:
                        continue
                    cs.append(comp.index)
                x_parts[(vid, eid)] = tuple(cs)
        return ArborealFamily(x_parts, z_parts)


@dataclass(frozen=True)
class BallEdgeView:
    eid: str
    coset_rep: NormalForm
    index: int
    component: int | None
    in_domain: bool


def build_ball(g: GraphOfGroups, radius: int, **kw) -> TreeBall:
    return TreeBall(g, radius, **kw)


def act_vertex(ball: TreeBall, vi: int, nf: NormalForm) -> int:
    return ball.act_vertex(vi, nf)


def components(ball: TreeBall) -> list:
    return list(ball.components)


def geodesic_in_tree(g: GraphOfGroups, eid: str, vid: str) -> bool:
    return g.geodesic_in_tree(eid, vid)


def star(g: GraphOfGroups, vid: str) -> list:
    return g.star(vid)


def g_circle(g: GraphOfGroups, ball: TreeBall) -> list:
    return ball.g_circle()


def in_W_c(ball: TreeBall, nf: NormalForm, c: int) -> bool:
    return ball.in_W_c(nf, c)


def in_W_arrow(ball: TreeBall, nf: NormalForm, c: int, d: int) -> bool:
    return ball.in_W_arrow(nf, c, d)


def arboreal_family(g: GraphOfGroups, ball: TreeBall) -> ArborealFamily:
    return ball.arboreal_family()


class ComponentLocator:
    """Ball-free location of T.g for arbitrarily deep elements.

    Walks cosets toward the fundamental domain, peeling the leading letter of
    the canonical representative; results are memoized per coset.  The final
    depth-1 vertex is matched against the ball's component registry.
    """

    def __init__(self, ball: TreeBall):
        self.ball = ball
        self.g = ball.g
        self._memo: dict = {}

    def _descend(self, vid: str, rep: tuple):
        g = self.g
        l1 = rep[0]
        u = l1.ident if l1.kind == 0 else g.origin(l1.ident)
        if vid == u and l1.kind == 1:
            w = g.target(l1.ident)
            return w, self.ball.coset_rep(w, rep[1:])
        if vid == u:
            # canonical reps never start with a letter of the current group
            raise AssertionError("non-canonical coset representative")
        eid = g.tree_geodesic(vid, u)[0]
        w = g.target(eid)
        return w, self.ball.coset_rep(w, rep)

    def component_of_coset(self, vid: str, rep: tuple):
        """Component of the vertex G_vid . rep (None for domain vertices)."""
        key = (vid, rep)
        if key in self._memo:
            return self._memo[key]
        path = []
        while key not in self._memo:
            vid, rep = key
            if rep == ():
                self._memo[key] = None
                break
            vi = self.ball.vertex_index(vid, rep)
            if vi is not None and (self.ball.vertices[vi].component is not None
                                   or self.ball.vertices[vi].depth == 0):
                self._memo[key] = self.ball.vertices[vi].component
                break
            path.append(key)
            key = self._descend(vid, rep)
        comp = self._memo[key]
        # every vertex strictly outside T inherits the component found below
        for k in path:
            self._memo[k] = comp if k[1] != () else None
        return comp

    def locate(self, nf: NormalForm):
        """Component containing T.g, or None for elliptic elements."""
        if nf.is_identity:
            return None
        reps = {vid: self.ball.coset_rep(vid, nf.letters)
                for vid in self.g.vertices}
        if any(r == () for r in reps.values()):
            return None
        return self.component_of_coset(self.g.base, reps[self.g.base])


# ---------------------------------------------------------------------------
# finite-index subgroups


@dataclass
class SubgroupDecomposition:
    t_h_vertices: tuple       # ball vertex indices of the H fundamental domain
    t_h_edges: tuple          # ball edge indices of its Schreier tree
    outward: tuple            # ball edge indices leaving T_H (one per component)
    iota: dict                # H-component index -> G-component index
    kernel_generators: tuple  # free generating set of H = ker(pi)
    rank: int

    @property
    def component_count(self):
        return len(self.outward)


def subgroup_components(g: GraphOfGroups, pi, ball: TreeBall,
                        t_h: tuple | None = None) -> SubgroupDecomposition:
    """Fundamental domain, component refinement and free generators for the
    kernel H of pi acting on the tree.

    The orbit of a vertex under H is classified by its vertex type together
    with the coset of pi(G_v); T_H defaults to a Schreier tree grown by
    breadth-first search from the domain of the full group.
    """
    m = pi.modulus

    def vkey(v: BallVertex):
        sub = pi.vertex_subgroup_image(g, v.vid)
        val = pi.evaluate(NormalForm(v.rep))
        return (v.vid, min((val + s) % m for s in sub))

    expected = {(vid, min((c + s) % m for s in pi.vertex_subgroup_image(g, vid)))
                for vid in g.vertices for c in range(m)}

    if t_h is None:
        chosen = [v.index for v in ball.domain_vertices()]
        chosen_keys = {vkey(ball.vertices[i]) for i in chosen}
        tree_edges = []
        progress = True
        while progress and chosen_keys != expected:
            progress = False
            for vi in sorted(chosen):
                for ei in ball._adjacency[vi]:
                    e = ball.edges[ei]
                    w = ball.vertices[e.far]
                    k = vkey(w)
                    if k not in chosen_keys:
                        chosen.append(w.index)
                        chosen_keys.add(k)
                        tree_edges.append(ei)
                        progress = True
            chosen.sort()
        if chosen_keys != expected:
            raise BallExhausted("ball radius insufficient to span T_H")
    else:
        chosen = sorted(t_h)
        keys = [vkey(ball.vertices[i]) for i in chosen]
        if len(set(keys)) != len(keys) or set(keys) != expected:
            raise NotFundamentalDomain(
                "T_H must contain exactly one vertex per H-orbit")
        inside = set(chosen)
        tree_edges = [e.index for e in ball.edges
                      if e.near in inside and e.far in inside
                      and e.index < e.reverse]
        if len(tree_edges) != len(chosen) - 1:
            raise NotFundamentalDomain("T_H is not a connected subtree")

    inside = set(chosen)
    tree_edge_set = set(tree_edges) | {ball.edges[i].reverse for i in tree_edges}
    outward = []
    for vi in sorted(inside):
        for ei in ball._adjacency[vi]:
            e = ball.edges[ei]
            if e.far not in inside and ei not in tree_edge_set:
                outward.append(ei)
    outward.sort()

    iota = {}
    for hc, ei in enumerate(outward):
        far = ball.vertices[ball.edges[ei].far]
        if far.component is None:
            raise BallExhausted("outward vertex not assigned a component")
        iota[hc] = far.component

    # Schreier generators: one per unoriented H-orbit of chord edges
    def ekey(e: BallEdge):
        al = g.alpha(e.eid)
        img = pi.image_of_vertex(g.origin(e.eid))
        sub = {(j * al.generator_image * img) % m for j in range(al.source_order)}
        val = pi.evaluate(NormalForm(e.rep))
        return (e.eid, min((val + s) % m for s in sub))

    rep_of_key = {}
    for vi in inside:
        rep_of_key[vkey(ball.vertices[vi])] = vi
    gens = []
    seen_orbits = set()
    for ei in outward:
        e = ball.edges[ei]
        k1 = ekey(e)
        k2 = ekey(ball.edges[e.reverse])
        orbit = min(k1, k2), max(k1, k2)
        if orbit in seen_orbits:
            continue
        seen_orbits.add(orbit)
        far = ball.vertices[e.far]
        r = ball.vertices[rep_of_key[vkey(far)]]
        h = None
        for k in range(g.order(far.vid)):
            cand = g.normalize(
                tuple(_inv_letters(g, r.rep)) + ((V(far.vid, k),) if k else ())
                + far.rep)
            if pi.evaluate(cand) == 0 and not cand.is_identity:
                h = cand
                break
        if h is None:
            raise AssertionError("no kernel element matches the chord")
        gens.append(h)
    rank = len(gens)
    return SubgroupDecomposition(
        tuple(chosen), tuple(tree_edges), tuple(outward), iota,
        tuple(gens), rank)


def _inv_letters(g: GraphOfGroups, letters: tuple) -> tuple:
    from .presentation import inverse_word
    return inverse_word(g, letters)
