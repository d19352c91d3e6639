"""Verification engine: marked circle actions, interactive families,
ping-pong partitions, Markovian images, skeletons, and faithfulness
certificates.

All conditions quantify over finite data (vertex groups are enumerated, sets
are finite unions of rational arcs) and every verdict is exact; failure items
carry an explicit witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .circle import Arc, Gap, IntervalUnion, PLMap, order_of
from .presentation import GraphOfGroups, NormalForm, S, V


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CheckItem:
    condition: str
    ok: bool
    witness: str = ""


@dataclass
class CheckReport:
    items: list = field(default_factory=list)

    def add(self, condition: str, ok: bool, witness: str = ""):
        self.items.append(CheckItem(condition, bool(ok), witness if not ok else ""))

    @property
    def ok(self) -> bool:
        return all(i.ok for i in self.items)

    def failures(self) -> list:
        return [i for i in self.items if not i.ok]

    def merged(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(self.items + other.items)

    def __str__(self):
        lines = []
        for i in self.items:
            mark = "ok " if i.ok else "FAIL"
            w = f"  [{i.witness}]" if i.witness else ""
            lines.append(f"{mark} {i.condition}{w}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# marked actions


class MarkedAction:
    """A graph of groups together with exact PL maps for the vertex-group
    generators and the stable letters; relation identities hold exactly."""

    def __init__(self, g: GraphOfGroups, vertex_maps: dict, stable_maps: dict):
        self.g = g
        self.vertex_maps = dict(vertex_maps)
        smaps = {}
        for eid in g.stable_pairs():
            if eid in stable_maps:
                smaps[eid] = stable_maps[eid]
            elif g.reverse(eid) in stable_maps:
                smaps[eid] = stable_maps[g.reverse(eid)].invert()
            else:
                raise ValueError(f"missing map for stable letter {eid}")
        self.stable_maps = smaps
        self._letter_cache: dict = {}

    def map_of_letter(self, letter) -> PLMap:
        key = (letter.kind, letter.ident, letter.k)
        if key in self._letter_cache:
            return self._letter_cache[key]
        if letter.kind == 0:
            out = self.vertex_maps[letter.ident].power(
                letter.k % self.g.order(letter.ident))
        else:
            eid = letter.ident
            if eid in self.stable_maps:
                out = self.stable_maps[eid]
            else:
                out = self.stable_maps[self.g.reverse(eid)].invert()
        self._letter_cache[key] = out
        return out

    def evaluate(self, word) -> PLMap:
        """Word (letters or NormalForm) as a map; letters compose left to
        right, the rightmost letter acting first."""
        if isinstance(word, NormalForm):
            word = word.letters
        out = PLMap.identity()
        for letter in word:
            out = out.compose(self.map_of_letter(letter))
        return out

    def generator_maps(self) -> list:
        """(nf, map) pairs for the preferred generating system."""
        return [(nf, self.evaluate(nf)) for nf in self.g.preferred_generators()]


def check_marked_action(g: GraphOfGroups, vertex_maps: dict,
                        stable_maps: dict) -> MarkedAction:
    action = MarkedAction(g, vertex_maps, stable_maps)
    rep = marked_action_report(action)
    if not rep.ok:
        raise ValueError("invalid marked action: "
                         + "; ".join(i.condition + " " + i.witness
                                     for i in rep.failures()))
    return action


def marked_action_report(action: MarkedAction) -> CheckReport:
    g = action.g
    rep = CheckReport()
    for vid in sorted(g.vertices):
        n = g.order(vid)
        k = order_of(action.vertex_maps[vid], n)
        rep.add(f"vertex {vid} generator has exact order {n}", k == n,
                f"found order {k}")
    for eid in sorted(g.edges):
        al, om = g.alpha(eid), g.omega(eid)
        lhs = action.evaluate((V(g.origin(eid), al.generator_image),))
        rhs = action.evaluate((V(g.target(eid), om.generator_image),))
        if g.edges[eid].in_tree:
            rep.add(f"edge {eid}: alpha and omega images agree", lhs == rhs,
                    "tree edge relation violated")
        else:
            s = action.map_of_letter(S(eid))
            conj = s.invert().compose(lhs).compose(s)
            rep.add(f"edge {eid}: s^-1 alpha(a) s = omega(a)", conj == rhs,
                    "stable letter relation violated")
    for eid in g.stable_pairs():
        srev = action.map_of_letter(S(g.reverse(eid)))
        rep.add(f"edge {eid}: reverse letter is the inverse map",
                srev == action.stable_maps[eid].invert(), "reversal broken")
    return rep


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class PartitionTheta:
    """Labeled family of finite unions of open arcs.

    Labels are ("U", vid, eid) for e in the star of v, and ("V", eid) for
    oriented non-tree edges."""

    atoms: tuple  # ((label, IntervalUnion), ...)

    @staticmethod
    def build(u_atoms: dict, v_atoms: dict) -> "PartitionTheta":
        items = []
        for (vid, eid), un in sorted(u_atoms.items()):
            items.append((("U", vid, eid), un))
        for eid, un in sorted(v_atoms.items()):
            items.append((("V", eid), un))
        return PartitionTheta(tuple(items))

    def atom(self, label) -> IntervalUnion:
        for lab, un in self.atoms:
            if lab == label:
                return un
        return IntervalUnion.empty()

    def u_atom(self, vid, eid) -> IntervalUnion:
        return self.atom(("U", vid, eid))

    def v_atom(self, eid) -> IntervalUnion:
        return self.atom(("V", eid))

    def u_union(self, vid) -> IntervalUnion:
        out = IntervalUnion.empty()
        for lab, un in self.atoms:
            if lab[0] == "U" and lab[1] == vid:
                out = out.union(un)
        return out

    def support(self) -> IntervalUnion:
        out = IntervalUnion.empty()
        for _, un in self.atoms:
            out = out.union(un)
        return out

    def components(self) -> list:
        """(label, Arc) pairs in circular order of the arc start."""
        out = []
        for lab, un in self.atoms:
            for a in un.components():
                out.append((lab, a))
        out.sort(key=lambda p: p[1].lo)
        return out

    def gaps(self) -> list:
        return self.support().gaps()

    def delta(self) -> list:
        """All component endpoints, sorted."""
        pts = set()
        for _, un in self.atoms:
            for a in un.components():
                pts.add(a.lo)
                pts.add(a.hi)
        return sorted(pts)

    def relabel(self, mapping) -> "PartitionTheta":
        return PartitionTheta(tuple((mapping.get(lab, lab), un)
                                    for lab, un in self.atoms))


def _vertex_elements(g: GraphOfGroups, vid: str, exclude: frozenset = frozenset((0,))):
    return [V(vid, k) for k in range(g.order(vid)) if k not in exclude]


def _restriction_is_identity(f: PLMap, u: IntervalUnion) -> bool:
    if u.is_empty:
        return True
    for a in (u.components() if not u.is_full else (Arc(0, Fraction(1, 2)),
                                                    Arc(Fraction(1, 2), 0))):
        probes = [a.midpoint(),
                  a.lo + a.length / 4 if a.lo < a.hi else a.midpoint()]
        probes = {a.midpoint(), Arc(a.lo, a.midpoint()).midpoint(),
                  Arc(a.midpoint(), a.hi).midpoint()}
        probes.update(x for x, _ in f.breakpoints() if a.contains(x))
        for x in probes:
            if f(x) != x:
                return False
    return True


# ---------------------------------------------------------------------------
# interactive families on the circle


def check_interactive_family(action: MarkedAction, theta: PartitionTheta,
                             strengthened: bool = True) -> CheckReport:
    """Conditions IF 1-8 for the circle action (exact)."""
    g = action.g
    rep = CheckReport()
    fam = {}
    for vid in sorted(g.vertices):
        fam[("X", vid)] = theta.u_union(vid)
    for s in g.stable_edge_ids:
        fam[("Z", s)] = theta.v_atom(s)

    # IF 1: disjointness and the required non-emptiness
    keys = sorted(fam)
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1:]:
            if fam[k1].intersects(fam[k2]):
                rep.add("IF1 family pairwise disjoint", False, f"{k1} meets {k2}")
    rep.add("IF1 family pairwise disjoint", True)
    for s in g.stable_edge_ids:
        rep.add(f"IF1 Z_{s} non-empty", not fam[("Z", s)].is_empty)
    for vid in sorted(g.vertices):
        needed = any(g.order(vid) != g.alpha(e).source_order
                     for e in g.star(vid))
        if needed:
            rep.add(f"IF1 X_{vid} non-empty", not fam[("X", vid)].is_empty)

    # IF 2: s(O) inside Z_s for every O except Z_sbar
    for s in g.stable_edge_ids:
        smap = action.map_of_letter(S(s))
        zs = fam[("Z", s)]
        for key in keys:
            if key == ("Z", g.reverse(s)):
                continue
            o = fam[key]
            if o.is_empty:
                continue
            ok = zs.contains_union(smap.image_union(o))
            rep.add(f"IF2 {s}({key}) in Z_{s}", ok, f"image of {key} escapes")

    # IF 3: invariance of Z_s under the edge subgroup, with equality
    for s in g.stable_edge_ids:
        al = g.alpha(s)
        zs = fam[("Z", s)]
        for j in range(al.source_order):
            amap = action.map_of_letter(V(g.origin(s), al.image(j)))
            img = amap.image_union(zs)
            rep.add(f"IF3 alpha_{s}(A)(Z_{s}) in Z_{s}", zs.contains_union(img),
                    f"a^{j} moves Z out")
            rep.add(f"IF3eq alpha_{s}(A)(Z_{s}) = Z_{s}", img == zs,
                    f"a^{j} image differs")

    # IF 4: (G_v minus alpha_s(A_s))(Z_s) in X_v, strengthened into U_v^s
    for s in g.stable_edge_ids:
        vid = g.origin(s)
        sub = g.alpha(s).image_subgroup()
        target = theta.u_atom(vid, s) if strengthened else fam[("X", vid)]
        zs = fam[("Z", s)]
        if zs.is_empty:
            continue
        for letter in _vertex_elements(g, vid, sub):
            img = action.map_of_letter(letter).image_union(zs)
            rep.add(f"IF4 ({letter!r})(Z_{s}) in U_{vid}^{s}",
                    target.contains_union(img), "image escapes")

    # IF 5: X_v^e nonempty for tree star edges with proper inclusion
    for vid in sorted(g.vertices):
        for e in g.star(vid):
            if not g.edges[e].in_tree:
                continue
            if g.order(vid) != g.alpha(e).source_order:
                rep.add(f"IF5 U_{vid}^{e} non-empty",
                        not theta.u_atom(vid, e).is_empty)

    # IF 6: edge-subgroup invariance of U^e for tree edges, with equality
    for e in sorted(g.edges):
        if not g.edges[e].in_tree:
            continue
        vid = g.origin(e)
        ue = theta.u_atom(vid, e)
        if ue.is_empty:
            continue
        al = g.alpha(e)
        for j in range(al.source_order):
            amap = action.map_of_letter(V(vid, al.image(j)))
            img = amap.image_union(ue)
            rep.add(f"IF6 alpha_{e}(A)(U_{vid}^{e}) in U_{vid}^{e}",
                    ue.contains_union(img), f"a^{j} escapes")
            rep.add(f"IF6eq alpha_{e}(A)(U_{vid}^{e}) = U_{vid}^{e}",
                    img == ue, f"a^{j} image differs")

    # IF 7: nesting along the spanning tree
    for e in sorted(g.edges):
        if not g.edges[e].in_tree:
            continue
        vid = g.origin(e)
        sub = g.alpha(e).image_subgroup()
        target = theta.u_atom(vid, e)
        for w in sorted(g.vertices):
            if not g.geodesic_in_tree(e, w):
                continue
            src = fam[("X", w)]
            if src.is_empty:
                continue
            for letter in _vertex_elements(g, vid, sub):
                img = action.map_of_letter(letter).image_union(src)
                rep.add(f"IF7 ({letter!r})(X_{w}) in U_{vid}^{e}",
                        target.contains_union(img), "image escapes")

    # IF 8: same with the Z sets behind the edge
    for e in sorted(g.edges):
        if not g.edges[e].in_tree:
            continue
        vid = g.origin(e)
        sub = g.alpha(e).image_subgroup()
        target = theta.u_atom(vid, e)
        for s in g.stable_edge_ids:
            if not g.geodesic_in_tree(e, g.origin(s)):
                continue
            src = fam[("Z", s)]
            if src.is_empty:
                continue
            for letter in _vertex_elements(g, vid, sub):
                img = action.map_of_letter(letter).image_union(src)
                rep.add(f"IF8 ({letter!r})(Z_{s}) in U_{vid}^{e}",
                        target.contains_union(img), "image escapes")
    return rep


def _images_into_vertex(action: MarkedAction, theta: PartitionTheta, wid: str):
    """All images required to land inside X_w by IF 4, 7, 8."""
    g = action.g
    out = []
    for s in g.stable_edge_ids:
        if g.origin(s) != wid:
            continue
        sub = g.alpha(s).image_subgroup()
        zs = theta.v_atom(s)
        for letter in _vertex_elements(g, wid, sub):
            out.append(action.map_of_letter(letter).image_union(zs))
    for e in g.star(wid):
        if not g.edges[e].in_tree:
            continue
        sub = g.alpha(e).image_subgroup()
        for w in sorted(g.vertices):
            if g.geodesic_in_tree(e, w):
                src = theta.u_union(w)
                for letter in _vertex_elements(g, wid, sub):
                    out.append(action.map_of_letter(letter).image_union(src))
        for s in g.stable_edge_ids:
            if g.geodesic_in_tree(e, g.origin(s)):
                src = theta.v_atom(s)
                for letter in _vertex_elements(g, wid, sub):
                    out.append(action.map_of_letter(letter).image_union(src))
    return out


def check_proper(action: MarkedAction, theta: PartitionTheta) -> CheckReport:
    """Conditions IF 9-11 on top of a family passing IF 1-8."""
    g = action.g
    rep = CheckReport()

    # IF 9: faithful edge-subgroup restrictions
    for s in g.stable_edge_ids:
        al = g.alpha(s)
        zs = theta.v_atom(s)
        for j in range(1, al.source_order):
            amap = action.map_of_letter(V(g.origin(s), al.image(j)))
            rep.add(f"IF9 alpha_{s}(a^{j}) moves a point of Z_{s}",
                    not _restriction_is_identity(amap, zs), "acts trivially")
    for e in sorted(g.edges):
        if not g.edges[e].in_tree:
            continue
        al = g.alpha(e)
        ue = theta.u_atom(g.origin(e), e)
        for j in range(1, al.source_order):
            amap = action.map_of_letter(V(g.origin(e), al.image(j)))
            rep.add(f"IF9 alpha_{e}(a^{j}) moves a point of U^{e}",
                    not _restriction_is_identity(amap, ue), "acts trivially")

    # IF 10: some X_w not tiled by the listed images
    nonempty = [vid for vid in sorted(g.vertices)
                if not theta.u_union(vid).is_empty]
    if nonempty:
        missed = None
        for wid in sorted(g.vertices):
            xw = theta.u_union(wid)
            if xw.is_empty:
                continue
            images = _images_into_vertex(action, theta, wid)
            total = IntervalUnion.empty()
            for im in images:
                total = total.union(im)
            if not total.contains_union(xw):
                missed = wid
                break
        rep.add("IF10 images miss a point of some X_w", missed is not None,
                "images tile every X_w")

    # IF 11: the degenerate single-pair case
    pairs = g.stable_pairs()
    if len(pairs) == 1 and not nonempty and len(g.stable_edge_ids) == 2:
        s = pairs[0]
        sbar = g.reverse(s)
        zs, zsbar = theta.v_atom(s), theta.v_atom(sbar)
        smap = action.map_of_letter(S(s))
        sbarmap = action.map_of_letter(S(sbar))
        found = None
        comp = zs.union(zsbar)
        for gap in comp.gaps():
            if gap.full or gap.is_point:
                continue
            p = Arc(gap.lo, gap.hi).midpoint()
            if zs.contains(smap(p)) and zsbar.contains(sbarmap(p)):
                found = p
                break
        rep.add("IF11 witness point for the single-pair case", found is not None,
                "no point maps into both axis sets")
    return rep


# ---------------------------------------------------------------------------
# Markovian images and PPP


def is_markovian(action: MarkedAction, gen, interval: Arc,
                 theta: PartitionTheta):
    """Decomposition I_0, J_1, I_1, ..., J_m, I_m of the image of `interval`
    under `gen` (a word, NormalForm or PLMap), or None.

    An image contained in (or exactly equal to) a single atom component is a
    containment, not a Markovian image."""
    fmap = gen if isinstance(gen, PLMap) else action.evaluate(gen)
    img = fmap.image_arc(interval)
    if theta.support().contains_arc(img):
        return None
    comps = theta.components()
    gaps = theta.gaps()
    start = {a.lo: i for i, (_, a) in enumerate(comps)}
    gap_at = {gp.lo: i for i, gp in enumerate(gaps) if not gp.full}
    out = []
    pos = img.lo
    seen = 0
    while True:
        ci = start.get(pos)
        if ci is None:
            return None
        arc = comps[ci][1]
        out.append(("I", ci))
        seen += 1
        if seen > len(comps) + 1:
            return None
        if arc.hi == img.hi:
            break
        gi = gap_at.get(arc.hi)
        if gi is None:
            return None
        out.append(("J", gi))
        pos = gaps[gi].hi
        if pos == img.hi:
            return None  # images must end with an interval
    if len(out) < 3:
        return None  # m >= 1: a single interval is a containment case
    return out


def check_ppp(action: MarkedAction, theta: PartitionTheta) -> CheckReport:
    """PPP 1-3 plus the dual gap condition."""
    g = action.g
    rep = check_interactive_family(action, theta, strengthened=True)

    # PPP 1 extras: atoms of one vertex pairwise disjoint; edge-subgroup
    # invariance of the U_v^s atoms
    for vid in sorted(g.vertices):
        stars = g.star(vid)
        for i, e1 in enumerate(stars):
            for e2 in stars[i + 1:]:
                ok = not theta.u_atom(vid, e1).intersects(theta.u_atom(vid, e2))
                rep.add(f"PPP1 U_{vid}^{e1} disjoint from U_{vid}^{e2}", ok,
                        "atoms overlap")
    for s in g.stable_edge_ids:
        vid = g.origin(s)
        us = theta.u_atom(vid, s)
        if us.is_empty:
            continue
        al = g.alpha(s)
        for j in range(al.source_order):
            amap = action.map_of_letter(V(vid, al.image(j)))
            rep.add(f"PPP1 alpha_{s}(A)(U_{vid}^{s}) = U_{vid}^{s}",
                    amap.image_union(us) == us, f"a^{j} image differs")

    # PPP 2: atoms are finite unions by construction
    rep.add("PPP2 atoms are finite unions of intervals", True)

    # PPP 3: containment or Markovian image for every generator and component
    gens = action.generator_maps()
    support = theta.support()
    for nf, fmap in gens:
        for lab, arc in theta.components():
            img = fmap.image_arc(arc)
            if support.contains_arc(img):
                continue
            dec = is_markovian(action, fmap, arc, theta)
            rep.add(f"PPP3 {nf!r} on {lab}@{arc}", dec is not None,
                    f"image {img} neither contained nor Markovian")
    rep.add("PPP3 all generator images contained or Markovian", True)

    # dual condition on gaps: image of a gap is a gap or sits inside an atom
    gaps = theta.gaps()
    gapset = set()
    for gp in gaps:
        if not gp.full:
            gapset.add((gp.lo, gp.hi))
    for nf, fmap in gens:
        for gp in gaps:
            if gp.full:
                continue
            img = fmap.image_gap(gp)
            if (img.lo, img.hi) in gapset:
                continue
            if img.is_point:
                ok = support.contains(img.lo)
            else:
                ok = support.contains_arc(Arc(img.lo, img.hi)) and \
                    support.contains(img.lo) and support.contains(img.hi)
            rep.add(f"PPPdual {nf!r} on gap {gp}", ok,
                    f"gap image {img} is neither a gap nor inside an atom")
    rep.add("PPPdual gap images are gaps or contained", True)
    return rep


@dataclass(frozen=True)
class FaithfulnessCertificate:
    theta: PartitionTheta
    ppp_report: CheckReport
    proper_report: CheckReport

    @property
    def ok(self):
        return self.ppp_report.ok and self.proper_report.ok


def certify_faithful(action: MarkedAction,
                     theta: PartitionTheta) -> FaithfulnessCertificate:
    ppp = check_ppp(action, theta)
    if not ppp.ok:
        raise ValueError("not a ping-pong partition: "
                         + str(ppp.failures()[0]))
    proper = check_proper(action, theta)
    if not proper.ok:
        raise ValueError("interactive family is not proper: "
                         + str(proper.failures()[0]))
    return FaithfulnessCertificate(theta, ppp, proper)


# ---------------------------------------------------------------------------
# skeletons


@dataclass(frozen=True)
class Skeleton:
    """Cyclic order of partition components plus the transition data of every
    preferred generator: the target component for contractions and the
    decomposition pattern for expansions."""

    cyclic_labels: tuple      # label of each component, in circular order
    transitions: tuple        # ((gen key, ((kind, data), ...)), ...)

    def __eq__(self, other):
        return (isinstance(other, Skeleton)
                and self.cyclic_labels == other.cyclic_labels
                and self.transitions == other.transitions)


def skeleton(action: MarkedAction, theta: PartitionTheta) -> Skeleton:
    comps = theta.components()
    labels = tuple(lab for lab, _ in comps)
    support = theta.support()
    rows = []
    for nf, fmap in action.generator_maps():
        row = []
        for idx, (_, arc) in enumerate(comps):
            img = fmap.image_arc(arc)
            target = None
            for j, (_, barc) in enumerate(comps):
                if barc.contains_arc(img):
                    target = j
                    break
            if target is not None:
                row.append(("into", target))
                continue
            dec = is_markovian(action, fmap, arc, theta)
            if dec is None:
                row.append(("none", idx))
            else:
                row.append(("markov", tuple(dec)))
        rows.append((repr(nf), tuple(row)))
    return Skeleton(labels, tuple(rows))


# ---------------------------------------------------------------------------
# free-group ping-pong


def check_free_pingpong(action: MarkedAction, atoms: dict) -> CheckReport:
    """Conditions for a classical free-group ping-pong partition: atoms keyed
    by oriented non-tree edge ids on a wedge marking (trivial vertex groups,
    all edges stable)."""
    g = action.g
    rep = CheckReport()
    if any(n != 1 for n in g.vertices.values()) or g.tree_edge_ids:
        rep.add("free marking (trivial vertices, no tree edges)", False,
                "marking is not a wedge of loops")
        return rep
    letters = g.stable_edge_ids
    for s in letters:
        un = atoms.get(s, IntervalUnion.empty())
        rep.add(f"free1 U_{s} non-empty finite union", not un.is_empty)
    for i, s in enumerate(letters):
        for t in letters[i + 1:]:
            rep.add(f"free2 U_{s} disjoint from U_{t}",
                    not atoms[s].intersects(atoms[t]), "atoms overlap")
    for s in letters:
        smap = action.map_of_letter(S(s))
        target = atoms[g.reverse(s)]
        for t in letters:
            if t == s:
                continue
            ok = target.contains_union(smap.image_union(atoms[t]))
            rep.add(f"free3 {s}(U_{t}) in U_{g.reverse(s)}", ok, "image escapes")
    return rep


def free_skeleton(action: MarkedAction, atoms: dict):
    """Cyclic order plus the component assignments lambda_s for a free
    ping-pong partition."""
    g = action.g
    comps = []
    for s in sorted(atoms):
        for a in atoms[s].components():
            comps.append((s, a))
    comps.sort(key=lambda p: p[1].lo)
    lambdas = {}
    for s in sorted(atoms):
        smap = action.map_of_letter(S(s))
        targets = [a for a in atoms[g.reverse(s)].components()]
        assign = []
        for t, arc in comps:
            if t == s:
                continue
            img = smap.image_arc(arc)
            tgt = next((i for i, b in enumerate(targets) if b.contains_arc(img)),
                       None)
            assign.append(((t, str(arc)), tgt))
        lambdas[s] = tuple(assign)
    return tuple((s, str(a)) for s, a in comps), lambdas


# ---------------------------------------------------------------------------
# the arboreal family as an interactive family (right action on components)


def _component_image_in(ball, c: int, nf: NormalForm, d: int) -> bool:
    """Whether X_c . g lies inside X_d (Bass-Serre components)."""
    g = ball.g
    if ball.is_elliptic(nf):
        e_c = ball.edges[ball.components[c].edge]
        img_rep = ball.edge_rep(e_c.eid, e_c.rep + nf.letters)
        ei = ball._eindex.get((e_c.eid, img_rep))
        if ei is None:
            from .tree import BallExhausted
            raise BallExhausted("edge image beyond ball")
        return ball.edges[ei].component == d
    return ball.w_position(nf) == d and ball.w_position(g.inverse(nf)) != c


def check_arboreal_family(ball, family) -> CheckReport:
    """IF 1-8 for the right action on tree components, against the family
    produced by the tree module (exactness of IF 4 strengthened included)."""
    g = ball.g
    rep = CheckReport()
    x_all = {}
    for vid in sorted(g.vertices):
        x_all[vid] = tuple(c for (v, _), cs in sorted(family.x_parts.items())
                           if v == vid for c in cs)
    zs = family.z_parts

    def image_in_union(cset, nf, target):
        return all(any(_component_image_in(ball, c, nf, d) for d in target)
                   for c in cset)

    all_parts = [("X", vid, x_all[vid]) for vid in sorted(g.vertices)]
    all_parts += [("Z", s, (zs[s],)) for s in g.stable_edge_ids]
    used = [c for _, _, cs in all_parts for c in cs]
    rep.add("IF1 parts pairwise disjoint and exhaustive",
            sorted(used) == sorted(set(used))
            and set(used) == set(range(len(ball.components))),
            "component bookkeeping broken")

    for s in g.stable_edge_ids:
        snf = g.normalize((S(s),))
        for kind, key, cs in all_parts:
            if kind == "Z" and key == g.reverse(s):
                continue
            if not cs:
                continue
            rep.add(f"IF2 ({key}).{s} in Z_{s}",
                    image_in_union(cs, snf, (zs[s],)), "component escapes")

    for s in g.stable_edge_ids:
        al = g.alpha(s)
        for j in range(al.source_order):
            anf = g.normalize((V(g.origin(s), al.image(j)),))
            if anf.is_identity:
                continue
            rep.add(f"IF3 Z_{s}.alpha(a^{j}) in Z_{s}",
                    image_in_union((zs[s],), anf, (zs[s],)), "escapes")

    for s in g.stable_edge_ids:
        vid = g.origin(s)
        sub = g.alpha(s).image_subgroup()
        strong = family.x_parts.get((vid, s), ())
        for letter in _vertex_elements(g, vid, sub):
            nf = g.normalize((letter,))
            if nf.is_identity:
                continue
            rep.add(f"IF4 Z_{s}.({letter!r}) in X_{vid}^{s}",
                    image_in_union((zs[s],), nf, strong), "escapes")

    for e in sorted(g.edges):
        if not g.edges[e].in_tree:
            continue
        vid = g.origin(e)
        if g.order(vid) != g.alpha(e).source_order:
            rep.add(f"IF5 X_{vid}^{e} non-empty",
                    bool(family.x_parts.get((vid, e))))
        sub = g.alpha(e).image_subgroup()
        target = family.x_parts.get((vid, e), ())
        al = g.alpha(e)
        for j in range(al.source_order):
            anf = g.normalize((V(vid, al.image(j)),))
            if anf.is_identity or not target:
                continue
            rep.add(f"IF6 X^{e}.alpha(a^{j}) in X^{e}",
                    image_in_union(target, anf, target), "escapes")
        for w in sorted(g.vertices):
            if not g.geodesic_in_tree(e, w) or not x_all[w]:
                continue
            for letter in _vertex_elements(g, vid, sub):
                nf = g.normalize((letter,))
                if nf.is_identity:
                    continue
                rep.add(f"IF7 X_{w}.({letter!r}) in X_{vid}^{e}",
                        image_in_union(x_all[w], nf, target), "escapes")
        for s in g.stable_edge_ids:
            if not g.geodesic_in_tree(e, g.origin(s)):
                continue
            for letter in _vertex_elements(g, vid, sub):
                nf = g.normalize((letter,))
                if nf.is_identity:
                    continue
                rep.add(f"IF8 Z_{s}.({letter!r}) in X_{vid}^{e}",
                        image_in_union((zs[s],), nf, target), "escapes")
    return rep
