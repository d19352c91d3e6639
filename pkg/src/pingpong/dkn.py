"""Empirical contraction-set machinery: word-ball enumeration, finite-cutoff
estimation of the sets U_c, minimal-set covers, hat-reduction and assembly of
the induced circle partition, plus the finite-depth property checks.

The limit definition of U_E is approximated over the norm window [N/2, N];
all arithmetic stays exact, only the family of tested grid arcs is
discretized (dyadic arcs at resolution 2^-r)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .checker import MarkedAction, PartitionTheta
from .circle import (Arc, IntervalUnion, PLMap, closed_intersection,
                     closed_union, mod1)
from .presentation import EPSILON, GraphOfGroups, NormalForm, S, V
from .tree import ComponentLocator, TreeBall


class ResourceLimit(Exception):
    pass


# ---------------------------------------------------------------------------
# word balls


@dataclass
class BallEnumeration:
    """All normal forms with norm <= N, indexed by norm level."""

    levels: list

    @property
    def max_norm(self):
        return len(self.levels) - 1

    def all(self):
        return [nf for lvl in self.levels for nf in lvl]

    def shell(self, lo: int, hi: int):
        return [nf for lvl in self.levels[lo:hi + 1] for nf in lvl]

    def sizes(self):
        return [len(lvl) for lvl in self.levels]


def _letters(g: GraphOfGroups):
    out = []
    for vid in sorted(g.vertices):
        out.extend(V(vid, k) for k in range(1, g.order(vid)))
    out.extend(S(e) for e in g.stable_edge_ids)
    return out


def enumerate_ball(g: GraphOfGroups, n: int,
                   max_size: int = 500_000) -> BallEnumeration:
    """Exact ball via normal forms: canonical words are closed under taking
    prefixes, so each level extends the previous one letter at a time."""
    letters = _letters(g)
    levels = [[EPSILON]]
    total = 1
    for _ in range(n):
        nxt = []
        for nf in levels[-1]:
            for letter in letters:
                cand = nf.letters + (letter,)
                if g.normalize(cand).letters == cand:
                    nxt.append(NormalForm(cand))
        total += len(nxt)
        if total > max_size:
            raise ResourceLimit(f"ball size exceeds {max_size}")
        levels.append(nxt)
    return BallEnumeration(levels)


# ---------------------------------------------------------------------------
# grid sweeps


def _violating_arcs(fmap: PLMap, delta: Fraction, r: int) -> tuple:
    """Indices of dyadic grid arcs whose image under fmap has length >= delta,
    plus the largest arc-image length seen (for diagnostics).

    Interior arcs of a linear piece are classified by the slope alone, so the
    cost is O(breakpoints + number of violators)."""
    n = 1 << r
    cell = Fraction(1, n)
    out = set()
    maxlen = Fraction(0)
    pts = fmap.breakpoints()
    for i in range(len(pts)):
        x0, y0, x1, y1 = fmap._seg(i)
        slope = (y1 - y0) / (x1 - x0)
        maxlen = max(maxlen, min(slope * cell, y1 - y0))
        if slope * cell >= delta:
            lo = ceil(x0 * n)
            hi = floor(x1 * n)
            if hi - lo > n:
                hi = lo + n
            for j in range(lo, hi):
                out.add(j % n)
    for x, _ in pts:
        j = floor(x * n) % n
        for jj in (j - 1, j):
            jj %= n
            a = fmap(Fraction(jj, n))
            b = fmap(Fraction(jj + 1, n))
            ln = mod1(b - a)
            maxlen = max(maxlen, ln)
            if ln >= delta:
                out.add(jj)
            else:
                out.discard(jj)
    return out, maxlen


def _arcs_to_union(indices, r: int) -> IntervalUnion:
    n = 1 << r
    if len(indices) >= n:
        return IntervalUnion.full()
    idx = sorted(indices)
    if not idx:
        return IntervalUnion.empty()
    runs = []
    start = prev = idx[0]
    for j in idx[1:]:
        if j == prev + 1:
            prev = j
            continue
        runs.append((start, prev))
        start = prev = j
    runs.append((start, prev))
    # wrap merge
    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == n - 1:
        s, e = runs.pop()
        runs[0] = (s - n, runs[0][1])
    return IntervalUnion(Arc(Fraction(s, n), Fraction((e + 1) % n, n))
                         for s, e in runs)


# ---------------------------------------------------------------------------
# the estimates


@dataclass
class DKNApprox:
    component: int | None
    estimate: IntervalUnion
    cutoff: int
    delta: Fraction
    grid_r: int
    diagnostics: dict = field(default_factory=dict)


@dataclass
class ShellData:
    """Shell of the word ball with maps and tree positions precomputed."""

    action: MarkedAction
    ball: TreeBall
    cutoff: int
    elements: list        # (nf, PLMap, position)
    level_max_image: dict

    @staticmethod
    def compute(action: MarkedAction, ball: TreeBall, cutoff: int,
                delta: Fraction, grid_r: int, max_size: int = 500_000):
        g = action.g
        words = enumerate_ball(g, cutoff, max_size)
        locator = ComponentLocator(ball)
        maps = {(): PLMap.identity()}
        elements = []
        level_max = {}
        lo = ceil(cutoff / 2)
        violators = {}
        for norm in range(1, cutoff + 1):
            lmax = Fraction(0)
            for nf in words.levels[norm]:
                parent = maps[nf.letters[:-1]]
                fmap = parent.compose(action.map_of_letter(nf.letters[-1]))
                maps[nf.letters] = fmap
                if norm < lo:
                    continue
                arcs, mlen = _violating_arcs(fmap, delta, grid_r)
                lmax = max(lmax, mlen)
                if arcs:
                    violators[nf] = arcs
                elements.append((nf, fmap, locator.locate(nf)))
            if norm >= lo:
                level_max[norm] = lmax
            # drop maps no longer needed as parents
            if norm >= 2:
                for nf in words.levels[norm - 2]:
                    maps.pop(nf.letters, None)
        data = ShellData(action, ball, cutoff, elements, level_max)
        data._violators = violators
        return data


def dkn_estimates(action: MarkedAction, ball: TreeBall, cutoff: int,
                  delta, grid_r: int, shell: ShellData | None = None):
    """Estimates of U_c for every component c of the ball, from one shared
    sweep of the norm window [cutoff/2, cutoff].

    A grid arc belongs to the estimate of c iff every window element whose
    image of the arc is not delta-small lies in W_c."""
    delta = Fraction(delta) if not isinstance(delta, Fraction) else delta
    if shell is None:
        shell = ShellData.compute(action, ball, cutoff, delta, grid_r)
    n = 1 << grid_r
    profile = [set() for _ in range(n)]
    poisoned = [False] * n
    for nf, fmap, pos in shell.elements:
        arcs = shell._violators.get(nf)
        if not arcs:
            continue
        for j in arcs:
            if pos is None:
                poisoned[j] = True
            else:
                profile[j].add(pos)
    out = {}
    for comp in ball.components:
        c = comp.index
        good = {j for j in range(n)
                if not poisoned[j] and profile[j] <= {c}}
        out[c] = DKNApprox(c, _arcs_to_union(good, grid_r), cutoff, delta,
                           grid_r, {"max_image_per_level": shell.level_max_image})
    return out, shell


def approx_U(action: MarkedAction, ball: TreeBall, c: int, cutoff: int,
             delta, grid_r: int) -> DKNApprox:
    ests, _ = dkn_estimates(action, ball, cutoff, delta, grid_r)
    return ests[c]


def approx_U_subset(action: MarkedAction, membership, cutoff: int,
                    delta, grid_r: int, ball: TreeBall | None = None,
                    shell: ShellData | None = None) -> DKNApprox:
    """Estimate of U_E for an arbitrary subset E given by a membership
    predicate on normal forms.  With E the whole group the supremum runs over
    the empty set and the estimate is the full circle."""
    delta = Fraction(delta) if not isinstance(delta, Fraction) else delta
    if shell is None:
        if ball is None:
            raise ValueError("need a ball or a precomputed shell")
        shell = ShellData.compute(action, ball, cutoff, delta, grid_r)
    n = 1 << grid_r
    bad = [False] * n
    for nf, fmap, _ in shell.elements:
        if membership(nf):
            continue
        for j in shell._violators.get(nf, ()):
            bad[j] = True
    good = {j for j in range(n) if not bad[j]}
    return DKNApprox(None, _arcs_to_union(good, grid_r), cutoff, delta, grid_r)


# ---------------------------------------------------------------------------
# minimal-set covers


@dataclass
class MinimalSetApprox:
    covers: list  # nested nonincreasing IntervalUnions

    @property
    def final(self) -> IntervalUnion:
        return self.covers[-1]


def estimate_minimal_set(action: MarkedAction, theta: PartitionTheta,
                         depth: int) -> MinimalSetApprox:
    """Iterated generator-image attractor of the partition support.

    The minimal invariant set lies in the closure of the partition and is
    carried onto itself by every generator, so intersecting all generator
    images expels wandering points while keeping the covers nested."""
    gens = [action.evaluate(nf) for nf in action.g.preferred_generators()]
    cover = closed_union([theta.support()])
    covers = [cover]
    for _ in range(depth):
        nxt = cover
        for f in gens:
            nxt = closed_intersection(nxt, f.image_union(cover))
        cover = nxt
        covers.append(cover)
    return MinimalSetApprox(covers)


# ---------------------------------------------------------------------------
# hat reduction and assembly


def hat_reduce(estimates: dict, lam_cover: IntervalUnion) -> dict:
    """Trim every estimate by the gaps of the minimal-set cover, then resolve
    any residual pairwise overlaps (conservatively, removing them from both
    sides).  The result is a pairwise disjoint family."""
    reduced = {}
    gaps = lam_cover.gaps()
    for c, approx in estimates.items():
        un = approx.estimate if isinstance(approx, DKNApprox) else approx
        for gp in gaps:
            if gp.full:
                un = IntervalUnion.empty()
                break
            if gp.is_point:
                continue
            un = un.subtract_gap(gp)
        reduced[c] = un
    keys = sorted(reduced)
    for i, c in enumerate(keys):
        for d in keys[i + 1:]:
            if reduced[c].intersects(reduced[d]):
                overlap = closed_intersection(reduced[c], reduced[d])
                for gp in _union_to_gaps(overlap):
                    reduced[c] = reduced[c].subtract_gap(gp)
                    reduced[d] = reduced[d].subtract_gap(gp)
    return reduced


def _union_to_gaps(un: IntervalUnion):
    from .circle import Gap
    if un.is_full:
        return [Gap.full_circle()]
    return [Gap(a.lo, a.hi) for a in un.components()]


def assemble_theta(ball: TreeBall, reduced: dict) -> PartitionTheta:
    """Group the reduced sets into the circle partition.

    The set of a component behind an outward edge lift of e joins the atom
    U_v^e; the two axis components contribute the V atoms with orientations
    swapped (the set of Z_s plays the role of V_{s reversed}, matching the
    inverse in the definition of the arrow sets)."""
    g = ball.g
    z_of = {s: ball.z_component(s) for s in g.stable_edge_ids}
    z_comps = {c: s for s, c in z_of.items()}
    u_atoms = {}
    v_atoms = {}
    for s in g.stable_edge_ids:
        v_atoms[s] = reduced.get(z_of[g.reverse(s)], IntervalUnion.empty())
    for comp in ball.components:
        if comp.index in z_comps:
            continue
        vid = ball.vertices[comp.t_vertex].vid
        key = (vid, comp.eid)
        cur = u_atoms.get(key, IntervalUnion.empty())
        u_atoms[key] = cur.union(reduced.get(comp.index, IntervalUnion.empty()))
    for vid in sorted(g.vertices):
        for eid in g.star(vid):
            u_atoms.setdefault((vid, eid), IntervalUnion.empty())
    return PartitionTheta.build(u_atoms, v_atoms)


# ---------------------------------------------------------------------------
# property checks at the cutoff


def _dilate(un: IntervalUnion, eps: Fraction) -> IntervalUnion:
    if un.is_full or un.is_empty:
        return un
    return IntervalUnion(Arc(mod1(a.lo - eps), mod1(a.hi + eps))
                         for a in un.components()
                         if a.length + 2 * eps < 1)


def check_dkn_properties(action: MarkedAction, ball: TreeBall,
                         estimates: dict, lam_cover: IntervalUnion,
                         grid_r: int, arrow_norm: int = 3,
                         endpoint_cells: int = 2):
    """Finite-cutoff surrogate of the contraction-set properties: finitely
    many components, pairwise disjointness inside the minimal-set cover,
    cover of the minimal set up to a few grid cells per gap endpoint, and
    the arrow inclusions up to one grid cell."""
    from .checker import CheckReport
    rep = CheckReport()
    cell = Fraction(1, 1 << grid_r)
    ests = {c: (a.estimate if isinstance(a, DKNApprox) else a)
            for c, a in estimates.items()}

    for c, un in sorted(ests.items()):
        rep.add(f"U_{c} estimate has finitely many components",
                un.is_full or len(un.components()) < (1 << grid_r))

    keys = sorted(ests)
    for i, c in enumerate(keys):
        for d in keys[i + 1:]:
            inter = closed_intersection(closed_intersection(ests[c], ests[d]),
                                        lam_cover)
            rep.add(f"U_{c} and U_{d} disjoint inside the cover",
                    inter.is_empty, f"overlap {inter}")

    total = IntervalUnion.empty()
    for un in ests.values():
        total = total.union(un)
    residual = closed_intersection(lam_cover, _complement_cover(total))
    gap_pts = [p for gp in lam_cover.gaps() for p in gp.endpoints()]
    tol = endpoint_cells * cell
    bad = []
    if not residual.is_empty:
        for a in residual.components():
            near = any(mod1(a.lo - p) <= tol or mod1(p - a.lo) <= tol
                       for p in gap_pts)
            if a.length > tol or not (near or not gap_pts):
                bad.append(a)
    rep.add(f"estimates cover the minimal-set cover up to {endpoint_cells} "
            "cells per gap endpoint", not bad, f"residual {bad[:4]}")

    # arrow inclusions are checked relative to the minimal-set cover: off the
    # minimal set the estimates legitimately overlap and wandering regions
    # may sit on either side of the smallness threshold at a finite cutoff
    words = enumerate_ball(action.g, arrow_norm)
    ncomp = len(ball.components)
    checked = failures = 0
    witness = ""
    restricted = {c: closed_intersection(un, lam_cover)
                  for c, un in ests.items()}
    for nf in words.all():
        if nf.is_identity:
            continue
        fmap = action.evaluate(nf)
        for c in range(ncomp):
            if restricted.get(c, IntervalUnion.empty()).is_empty:
                continue
            for d in range(ncomp):
                if not ball.in_W_arrow(nf, c, d):
                    continue
                checked += 1
                img = closed_intersection(
                    fmap.image_union(restricted[c]), lam_cover)
                if not _dilate(ests[d], cell).contains_union(img):
                    failures += 1
                    if not witness:
                        witness = f"first failure {nf!r}: {c} -> {d}"
    rep.add(f"arrow inclusions g(U_c) in U_d up to one cell inside the "
            f"cover ({checked} instances)", failures == 0,
            f"{failures} failures; {witness}")
    return rep


def _complement_cover(un: IntervalUnion) -> IntervalUnion:
    if un.is_full:
        return IntervalUnion.empty()
    if un.is_empty:
        return IntervalUnion.full()
    return IntervalUnion(Arc(gp.lo, gp.hi) for gp in un.gaps()
                         if not gp.is_point)
