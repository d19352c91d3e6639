"""Graphs of finite cyclic groups, their fundamental groups, and exact
normal forms for the word problem.

A group is presented by a finite connected graph with a cyclic group at each
vertex, a cyclic group on each edge injecting into both endpoint groups, and
a marked spanning tree.  Generators are the nontrivial vertex elements plus
one stable letter per non-tree oriented edge; tree edges are collapsed.

Normal forms are reduced loops at a fixed base vertex of the quotient graph,
with edge-subgroup cosets represented by minimal non-negative residues and
all subgroup parts pushed to the left.  Two words represent the same group
element iff they normalize to the same letter sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# letters and words


@dataclass(frozen=True, order=True)
class Letter:
    """Either a vertex-group element (kind 0) or a stable letter (kind 1).

    Ordering is (kind, id, residue): vertex elements by (vertexId, residue)
    first, then stable letters by edgeId.
    """

    kind: int
    ident: str
    k: int = 0

    def __repr__(self):
        if self.kind == 0:
            return f"{self.ident}^{self.k}" if self.k != 1 else self.ident
        return self.ident


def V(vertex_id: str, k: int) -> Letter:
    return Letter(0, vertex_id, k)


def S(edge_id: str) -> Letter:
    return Letter(1, edge_id)


Word = tuple  # tuple[Letter, ...]


@dataclass(frozen=True, order=True)
class NormalForm:
    """Canonical word for a group element; norm is the letter count."""

    letters: tuple

    @property
    def norm(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __repr__(self):
        return "e" if not self.letters else "*".join(map(repr, self.letters))


EPSILON = NormalForm(())


# ---------------------------------------------------------------------------
# graph data


@dataclass(frozen=True)
class CyclicGroupSpec:
    order: int


@dataclass(frozen=True)
class BoundaryInjection:
    """Injection of Z_a into Z_n sending the generator to residue t."""

    source_order: int
    target_order: int
    generator_image: int

    def image(self, j: int) -> int:
        return (j * self.generator_image) % self.target_order

    def image_subgroup(self) -> frozenset:
        return frozenset(self.image(j) for j in range(self.source_order))


@dataclass(frozen=True)
class EdgeSpec:
    eid: str
    origin: str
    reverse: str
    edge_order: int
    alpha: BoundaryInjection
    in_tree: bool


@dataclass
class ValidationReport:
    ok: bool
    failures: list = field(default_factory=list)

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None


class GraphOfGroups:
    """Finite graph of finite cyclic groups with a marked spanning tree."""

    def __init__(self, vertices: dict, edges: Iterable[EdgeSpec]):
        self.vertices = dict(vertices)           # vid -> order
        self.edges = {e.eid: e for e in edges}   # oriented edges
        self.base = min(self.vertices) if self.vertices else None

    # -- structure queries ------------------------------------------------

    def order(self, vid: str) -> int:
        return self.vertices[vid]

    def reverse(self, eid: str) -> str:
        return self.edges[eid].reverse

    def origin(self, eid: str) -> str:
        return self.edges[eid].origin

    def target(self, eid: str) -> str:
        return self.edges[self.edges[eid].reverse].origin

    def alpha(self, eid: str) -> BoundaryInjection:
        return self.edges[eid].alpha

    def omega(self, eid: str) -> BoundaryInjection:
        return self.edges[self.edges[eid].reverse].alpha

    @property
    def tree_edge_ids(self) -> list:
        return sorted(e for e, spec in self.edges.items() if spec.in_tree)

    @property
    def stable_edge_ids(self) -> list:
        """Oriented non-tree edges, both orientations."""
        return sorted(e for e, spec in self.edges.items() if not spec.in_tree)

    def stable_pairs(self) -> list:
        """One canonical orientation per non-tree edge pair."""
        out = []
        for e in self.stable_edge_ids:
            if e <= self.reverse(e):
                out.append(e)
        return out

    def star(self, vid: str) -> list:
        """Oriented edges with origin vid (the star in the quotient graph)."""
        return sorted(e for e, spec in self.edges.items() if spec.origin == vid)

    # -- validation --------------------------------------------------------

    def validate(self) -> ValidationReport:
        fails = []
        for vid, n in sorted(self.vertices.items()):
            if n < 1:
                fails.append(f"vertex {vid}: order {n} < 1")
        for eid, e in sorted(self.edges.items()):
            if e.reverse not in self.edges:
                fails.append(f"edge {eid}: reverse {e.reverse} missing")
                continue
            r = self.edges[e.reverse]
            if r.reverse != eid:
                fails.append(f"edge {eid}: reversal not involutive")
            if e.reverse == eid:
                fails.append(f"edge {eid}: reversal has a fixed point")
            if r.edge_order != e.edge_order:
                fails.append(f"edge {eid}: edge order differs from reverse")
            if e.in_tree != r.in_tree:
                fails.append(f"edge {eid}: tree membership differs from reverse")
            if e.origin not in self.vertices:
                fails.append(f"edge {eid}: unknown origin {e.origin}")
                continue
            a = e.alpha
            n = self.vertices[e.origin]
            if a.source_order != e.edge_order:
                fails.append(f"edge {eid}: injection source order != edge order")
            if a.target_order != n:
                fails.append(f"edge {eid}: injection target order != vertex order")
            if n % max(a.source_order, 1) != 0:
                fails.append(
                    f"edge {eid}: edge order {a.source_order} does not divide "
                    f"vertex order {n}")
            else:
                t = a.generator_image % n
                ordt = n // gcd(t, n) if t else 1
                if ordt != a.source_order:
                    fails.append(
                        f"edge {eid}: generator image {t} has order {ordt} "
                        f"!= {a.source_order} in Z_{n}")
        # spanning tree: connected on all vertices with |V|-1 unoriented edges
        tree_pairs = {frozenset((e, self.reverse(e))) for e in self.tree_edge_ids
                      if self.reverse(e) in self.edges}
        if len(tree_pairs) != max(len(self.vertices) - 1, 0):
            fails.append(
                f"spanning tree has {len(tree_pairs)} unoriented edges, "
                f"expected {len(self.vertices) - 1}")
        else:
            seen = set()
            stack = [self.base] if self.base else []
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                for eid in self.tree_edge_ids:
                    if self.origin(eid) == v:
                        stack.append(self.target(eid))
            if seen != set(self.vertices):
                fails.append("spanning tree does not span all vertices")
        # connectivity of the whole graph follows from the spanning tree
        return ValidationReport(not fails, fails)

    def assert_valid(self):
        rep = self.validate()
        if not rep.ok:
            raise ValueError("invalid graph of groups: " + rep.first_failure)

    # -- spanning tree geodesics -------------------------------------------

    @lru_cache(maxsize=None)
    def _tree_adjacency(self):
        adj = {v: [] for v in self.vertices}
        for eid in self.tree_edge_ids:
            adj[self.origin(eid)].append((eid, self.target(eid)))
        for v in adj:
            adj[v].sort()
        return adj

    @lru_cache(maxsize=None)
    def tree_geodesic(self, u: str, v: str) -> tuple:
        """Oriented tree edge ids from u to v in the spanning tree."""
        if u == v:
            return ()
        adj = self._tree_adjacency()
        prev = {u: None}
        queue = [u]
        while queue:
            w = queue.pop(0)
            for eid, x in adj[w]:
                if x not in prev:
                    prev[x] = (w, eid)
                    queue.append(x)
        if v not in prev:
            raise ValueError(f"vertices {u}, {v} not tree-connected")
        path = []
        w = v
        while prev[w] is not None:
            pw, eid = prev[w]
            path.append(eid)
            w = pw
        return tuple(reversed(path))

    def geodesic_in_tree(self, eid: str, vid: str) -> bool:
        """Whether the oriented tree geodesic from o(e) to v traverses e.

        This is the predicate 'v lies behind e' used by the nesting
        conditions; it holds in particular for v = t(e).
        """
        if not self.edges[eid].in_tree:
            raise ValueError(f"{eid} is not a tree edge")
        return eid in self.tree_geodesic(self.origin(eid), vid)

    # -- subgroup/coset tables ----------------------------------------------

    @lru_cache(maxsize=None)
    def _omega_tables(self, eid: str):
        """For pushing across edge e: the subgroup omega_e(A_e) of the target
        vertex group, its coset-rep modulus, and the discrete log back to A_e."""
        om = self.omega(eid)
        n = om.target_order
        a = om.source_order
        idx = n // a                       # transversal {0, .., idx-1}
        log = {(j * om.generator_image) % n: j for j in range(a)}
        return idx, log

    # -- words and normal forms ----------------------------------------------

    def letter_word(self, *items) -> tuple:
        """Convenience: build a word from ('v', k) pairs and edge-id strings."""
        out = []
        for it in items:
            if isinstance(it, Letter):
                out.append(it)
            elif isinstance(it, str):
                out.append(S(it))
            else:
                out.append(V(*it))
        return tuple(out)

    def check_letter(self, letter: Letter):
        if letter.kind == 0:
            if letter.ident not in self.vertices:
                raise ValueError(f"unknown vertex id {letter.ident!r}")
        else:
            if letter.ident not in self.edges:
                raise ValueError(f"unknown edge id {letter.ident!r}")
            if self.edges[letter.ident].in_tree:
                raise ValueError(f"edge {letter.ident!r} is a tree edge, "
                                 "not a stable letter")

    def _word_to_path(self, word) -> tuple:
        """Loop at the base vertex: (head residue, [(edge id, label), ...])."""
        head = 0
        steps = []
        cur = self.base

        def goto(v):
            nonlocal cur
            for eid in self.tree_geodesic(cur, v):
                steps.append([eid, 0])
            cur = v

        def add(k, v):
            nonlocal head
            if steps:
                steps[-1][1] = (steps[-1][1] + k) % self.order(v)
            else:
                head = (head + k) % self.order(self.base)

        for letter in word:
            self.check_letter(letter)
            if letter.kind == 0:
                goto(letter.ident)
                add(letter.k, letter.ident)
            else:
                goto(self.origin(letter.ident))
                steps.append([letter.ident, 0])
                cur = self.target(letter.ident)
        goto(self.base)
        return head, steps

    def _push_left(self, head, steps):
        """Rewrite every step label as its minimal coset representative,
        moving subgroup parts left through the edge relations."""
        for i in range(len(steps) - 1, -1, -1):
            eid, lab = steps[i]
            idx, log = self._omega_tables(eid)
            rep = lab % idx
            if rep != lab:
                j = log[(lab - rep) % self.order(self.target(eid))]
                al = self.alpha(eid)
                carry = al.image(j)
                steps[i][1] = rep
                if i == 0:
                    head = (head + carry) % self.order(self.base)
                else:
                    prev = steps[i - 1]
                    prev[1] = (prev[1] + carry) % self.order(self.target(prev[0]))
        return head, steps

    def _canon_path(self, head, steps):
        while True:
            head, steps = self._push_left(head, steps)
            hit = None
            for i in range(len(steps) - 1):
                if steps[i][1] == 0 and steps[i + 1][0] == self.reverse(steps[i][0]):
                    hit = i
                    break
            if hit is None:
                return head, steps
            merged = steps[hit + 1][1]
            del steps[hit:hit + 2]
            if hit == 0:
                head = (head + merged) % self.order(self.base)
            else:
                prev = steps[hit - 1]
                prev[1] = (prev[1] + merged) % self.order(self.target(prev[0]))

    def _path_to_letters(self, head, steps) -> tuple:
        out = []
        if head % self.order(self.base) != 0:
            out.append(V(self.base, head % self.order(self.base)))
        for eid, lab in steps:
            if not self.edges[eid].in_tree:
                out.append(S(eid))
            if lab != 0:
                out.append(V(self.target(eid), lab))
        return tuple(out)

    def normalize(self, word) -> NormalForm:
        """Canonical representative; normalize(w) == () iff w is trivial."""
        head, steps = self._word_to_path(word)
        head, steps = self._canon_path(head, steps)
        return NormalForm(self._path_to_letters(head, steps))

    def multiply(self, x: NormalForm, y: NormalForm) -> NormalForm:
        return self.normalize(x.letters + y.letters)

    def inverse(self, x: NormalForm) -> NormalForm:
        return self.normalize(inverse_word(self, x.letters))

    def identity(self) -> NormalForm:
        return EPSILON

    # -- preferred generators -------------------------------------------------

    def preferred_generators(self) -> list:
        """All nontrivial vertex elements plus, per stable letter s, the coset
        alpha_s(A_s)s; deduplicated as normal forms, closed under inverses."""
        out = []
        seen = set()
        for vid in sorted(self.vertices):
            for k in range(1, self.order(vid)):
                nf = self.normalize((V(vid, k),))
                if not nf.is_identity and nf not in seen:
                    seen.add(nf)
                    out.append(nf)
        for eid in self.stable_edge_ids:
            al = self.alpha(eid)
            for j in range(al.source_order):
                word = (V(self.origin(eid), al.image(j)), S(eid))
                nf = self.normalize(word)
                if nf not in seen:
                    seen.add(nf)
                    out.append(nf)
        return out


def inverse_word(g: GraphOfGroups, word) -> tuple:
    """Letter-wise reversed inverse of a word."""
    out = []
    for letter in reversed(word):
        if letter.kind == 0:
            n = g.order(letter.ident)
            out.append(V(letter.ident, (-letter.k) % n))
        else:
            out.append(S(g.reverse(letter.ident)))
    return tuple(out)


def validate_graph(g: GraphOfGroups) -> ValidationReport:
    return g.validate()


def normalize(g: GraphOfGroups, word) -> NormalForm:
    return g.normalize(word)


def multiply(g: GraphOfGroups, x: NormalForm, y: NormalForm) -> NormalForm:
    return g.multiply(x, y)


def inverse(g: GraphOfGroups, x: NormalForm) -> NormalForm:
    return g.inverse(x)


def word_norm(x: NormalForm) -> int:
    return x.norm


def preferred_generators(g: GraphOfGroups) -> list:
    return g.preferred_generators()


# ---------------------------------------------------------------------------
# the morphism to Z_m


def lcm_order(g: GraphOfGroups) -> int:
    out = 1
    for n in g.vertices.values():
        out = lcm(out, n)
    return out


@dataclass(frozen=True)
class ZmMorphism:
    """Morphism to Z_m = (1/m)Z / Z, given on each vertex generator."""

    modulus: int
    images: tuple  # sorted tuple of (vid, residue mod m)

    def image_of_vertex(self, vid: str) -> int:
        return dict(self.images)[vid]

    def evaluate(self, nf: NormalForm) -> int:
        """Sum of letter images; stable letters map to 0."""
        imgs = dict(self.images)
        total = 0
        for letter in nf.letters:
            if letter.kind == 0:
                total += letter.k * imgs[letter.ident]
        return total % self.modulus

    def as_fraction(self, nf: NormalForm) -> Fraction:
        return Fraction(self.evaluate(nf), self.modulus)

    def vertex_subgroup_image(self, g: GraphOfGroups, vid: str) -> frozenset:
        im = self.image_of_vertex(vid)
        return frozenset((k * im) % self.modulus for k in range(g.order(vid)))


def pi_morphism(g: GraphOfGroups, rot_assignment: dict) -> ZmMorphism:
    """Build the morphism to Z_m from a rotation-number assignment.

    rot_assignment maps each vertex id to a residue mod m (m = lcm of vertex
    orders) of exact additive order n_v; compatibility across every edge
    relation is verified.
    """
    m = lcm_order(g)
    images = {}
    for vid, n in sorted(g.vertices.items()):
        r = rot_assignment[vid]
        if isinstance(r, Fraction):
            if m % r.denominator != 0:
                raise ValueError(f"rotation {r} incompatible with modulus {m}")
            r = r.numerator * (m // r.denominator)
        r %= m
        order = m // gcd(r, m) if r else 1
        if order != n:
            raise ValueError(
                f"vertex {vid}: image {r}/{m} has order {order}, expected {n}")
        images[vid] = r
    for eid, e in sorted(g.edges.items()):
        al, om = g.alpha(eid), g.omega(eid)
        lhs = (al.generator_image * images[e.origin]) % m
        rhs = (om.generator_image * images[g.target(eid)]) % m
        if lhs != rhs:
            raise ValueError(
                f"edge {eid}: incompatible images {lhs} != {rhs} mod {m}")
    return ZmMorphism(m, tuple(sorted(images.items())))


# ---------------------------------------------------------------------------
# quotient graph of the kernel action


@dataclass(frozen=True)
class QuotientGraphData:
    """Quotient of the Bass-Serre tree by ker(pi), with the induced Z_m
    action on oriented edges.

    vertices: tuple of (vid, class rep); oriented_edges likewise; sigma maps
    an oriented-edge orbit to its image under the canonical Z_m generator.
    Suitable input for the realization of F(S_0) x| Z_m.
    """

    m: int
    vertices: tuple
    oriented_edges: tuple
    edge_endpoints: tuple   # ((o-vertex-key, t-vertex-key), ...) per edge
    reversal: tuple         # index pairs
    sigma: tuple            # index permutation of oriented edges

    @property
    def n_unoriented(self) -> int:
        return len(self.oriented_edges) // 2

    def signed_sigma(self) -> dict:
        """Sigma as a map on signed generator indices 1..n, -1..-n, where
        generator i is the i-th unoriented edge in its canonical orientation."""
        chosen = []
        chosen_of = {}
        for i, _ in enumerate(self.oriented_edges):
            j = self.reversal[i]
            if i < j:
                chosen_of[i] = len(chosen) + 1
                chosen_of[j] = -(len(chosen) + 1)
                chosen.append(i)
        out = {}
        for i, _ in enumerate(self.oriented_edges):
            out[chosen_of[i]] = chosen_of[self.sigma[i]]
        return out


class RadiusInsufficient(Exception):
    pass


def quotient_graph_action(g: GraphOfGroups, pi: ZmMorphism, radius: int = 4):
    """Quotient graph of the Bass-Serre tree by H = ker(pi) plus the induced
    Z_m edge action, computed on a ball of the given radius and
    cross-checked against the coset arithmetic.

    Returns (QuotientGraphData, sigma_signed, m).
    """
    from . import tree as tree_mod

    m = pi.modulus

    def vclass(vid, value):
        sub = pi.vertex_subgroup_image(g, vid)
        return min((value + s) % m for s in sub)

    def eclass(eid, value):
        al = g.alpha(eid)
        sub = frozenset((j * al.generator_image * pi.image_of_vertex(g.origin(eid)))
                        % m for j in range(al.source_order))
        return min((value + s) % m for s in sub)

    expected_vertices = sorted(
        {(vid, vclass(vid, c)) for vid in g.vertices for c in range(m)})
    expected_edges = sorted(
        {(eid, eclass(eid, c)) for eid in g.edges for c in range(m)})

    ball = tree_mod.build_ball(g, radius)
    seen_vertices = set()
    star_complete = {}
    for vtx in ball.vertices:
        key = (vtx.vid, vclass(vtx.vid, pi.evaluate(NormalForm(vtx.rep))))
        seen_vertices.add(key)
        if vtx.depth <= radius - 1 and key not in star_complete:
            star_complete[key] = [
                (e.eid, eclass(e.eid, pi.evaluate(e.coset_rep)))
                for e in ball.edges_at(vtx.index)]
    if set(expected_vertices) - set(star_complete):
        raise RadiusInsufficient(
            f"radius {radius} does not close the quotient graph; retry larger")
    seen_edges = {k for stars in star_complete.values() for k in stars}
    if set(expected_edges) - seen_edges:
        raise RadiusInsufficient(
            f"radius {radius} misses edge orbits; retry larger")

    edge_index = {k: i for i, k in enumerate(expected_edges)}
    endpoints = []
    reversal = []
    sigma = []
    for eid, c in expected_edges:
        o_key = (g.origin(eid), vclass(g.origin(eid), c))
        t_key = (g.target(eid), vclass(g.target(eid), c))
        endpoints.append((o_key, t_key))
        reversal.append(edge_index[(g.reverse(eid), eclass(g.reverse(eid), c))])
        sigma.append(edge_index[(eid, eclass(eid, (c + 1) % m))])
    data = QuotientGraphData(
        m=m,
        vertices=tuple(expected_vertices),
        oriented_edges=tuple(expected_edges),
        edge_endpoints=tuple(endpoints),
        reversal=tuple(reversal),
        sigma=tuple(sigma),
    )
    return data, data.signed_sigma(), m
