"""Partition refinement, ping-pong equivalences, and semi-conjugacy data.

The refinement of a partition removes every generator image of every gap, so
the refined gap family is exactly the set of those images; iterating gives
the endpoint sets Delta_k whose matched pairs carry the semi-conjugacy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .checker import (CheckReport, MarkedAction, PartitionTheta, check_ppp,
                      check_proper, is_markovian)
from .circle import mod1
from .presentation import EPSILON


class RefinementExhausted(Exception):
    pass


def _generators(action: MarkedAction, with_identity: bool = True):
    gens = action.g.preferred_generators()
    return ([EPSILON] + gens) if with_identity else gens


def refine(action: MarkedAction, theta: PartitionTheta) -> PartitionTheta:
    """One refinement step: the new gap family is the set of all generator
    images of old gaps (the identity included, so old gaps persist)."""
    gaps = theta.gaps()
    images = []
    for nf in _generators(action):
        fmap = action.evaluate(nf)
        images.extend(fmap.image_gap(gp) for gp in gaps)
    atoms = []
    for lab, un in theta.atoms:
        for img in images:
            un = un.subtract_gap(img)
        atoms.append((lab, un))
    return PartitionTheta(tuple(atoms))


def refine_k(action: MarkedAction, theta: PartitionTheta, k: int):
    out = [theta]
    for _ in range(k):
        out.append(refine(action, out[-1]))
    return out


def refine_until_proper(action: MarkedAction, theta: PartitionTheta,
                        max_k: int = 4):
    """Smallest k <= max_k whose k-th refinement is a proper family."""
    cur = theta
    for k in range(max_k + 1):
        if check_proper(action, cur).ok:
            return cur, k
        if k < max_k:
            cur = refine(action, cur)
    raise RefinementExhausted(f"no proper refinement within {max_k} steps")


def delta_sets(action: MarkedAction, theta: PartitionTheta, k: int) -> list:
    """Endpoint sets Delta_0, .., Delta_k with Delta_{j+1} the generator
    orbit of Delta_j (identity included, so the sets are nested)."""
    gens = [(nf, action.evaluate(nf)) for nf in _generators(action)]
    out = [sorted(set(theta.delta()))]
    for _ in range(k):
        nxt = set(out[-1])
        for _, fmap in gens:
            nxt.update(fmap(x) for x in out[-1])
        out.append(sorted(nxt))
    return out


# ---------------------------------------------------------------------------
# equivalences


@dataclass(frozen=True)
class Equivalence:
    """Bijection of component lists (indices into the circularly sorted
    component sequences of the two partitions)."""

    mapping: tuple

    def __call__(self, i: int) -> int:
        return self.mapping[i]


def _gap_index_map(n: int, mapping: tuple) -> dict:
    # gap i sits between components i and i+1 in circular order
    return {i: mapping[i] for i in range(n)}


def check_equivalence(action1: MarkedAction, theta1: PartitionTheta,
                      action2: MarkedAction, theta2: PartitionTheta,
                      eq: Equivalence) -> CheckReport:
    rep = CheckReport()
    comps1 = theta1.components()
    comps2 = theta2.components()
    n = len(comps1)
    if len(comps2) != n or sorted(eq.mapping) != list(range(n)):
        rep.add("PPE0 bijection of components", False,
                f"{n} vs {len(comps2)} components")
        return rep
    rep.add("PPE0 bijection of components", True)
    for i in range(n):
        lab1 = comps1[i][0]
        lab2 = comps2[eq(i)][0]
        rep.add(f"PPE0 label match at {i}", lab1 == lab2, f"{lab1} vs {lab2}")
    ok_cyc = all(eq((i + 1) % n) == (eq(i) + 1) % n for i in range(n))
    rep.add("PPE1 cyclic order preserved", ok_cyc, "mapping not rotational")
    if not rep.ok:
        return rep

    gaps1 = theta1.gaps()
    gaps2 = theta2.gaps()
    sup1, sup2 = theta1.support(), theta2.support()
    gens1 = dict(action1.generator_maps())
    gens2 = dict(action2.generator_maps())
    for nf in action1.g.preferred_generators():
        f1, f2 = gens1[nf], gens2[nf]
        for i in range(n):
            arc1, arc2 = comps1[i][1], comps2[eq(i)][1]
            img1, img2 = f1.image_arc(arc1), f2.image_arc(arc2)
            if sup1.contains_arc(img1):
                j = next(j for j, (_, b) in enumerate(comps1)
                         if b.contains_arc(img1))
                tgt = comps2[eq(j)][1]
                ok = tgt.contains_arc(img2)
                rep.add(f"PPE2 {nf!r}@{i} containment corresponds", ok,
                        f"component {i} -> {j} not mirrored")
                if img1 == comps1[j][1]:
                    rep.add(f"PPE2 {nf!r}@{i} equality preserved",
                            img2 == tgt, "equality lost")
                continue
            dec1 = is_markovian(action1, f1, arc1, theta1)
            dec2 = is_markovian(action2, f2, arc2, theta2)
            if dec1 is None or dec2 is None:
                rep.add(f"PPE2 {nf!r}@{i} image classified", False,
                        "not contained and not Markovian")
                continue
            want = [(kind, eq(ix) if kind == "I" else eq.mapping and
                     _gap_index_map(n, eq.mapping)[ix])
                    for kind, ix in dec1]
            rep.add(f"PPE2 {nf!r}@{i} Markovian pattern corresponds",
                    want == list(dec2), f"{dec1} vs {dec2}")
    return rep


def find_equivalence(action1: MarkedAction, theta1: PartitionTheta,
                     action2: MarkedAction, theta2: PartitionTheta):
    """Label-respecting, cyclic-order-preserving bijection passing the
    equivalence checks, or None."""
    comps1 = theta1.components()
    comps2 = theta2.components()
    n = len(comps1)
    if len(comps2) != n:
        return None
    labels1 = [lab for lab, _ in comps1]
    labels2 = [lab for lab, _ in comps2]
    for r in range(n):
        if any(labels1[i] != labels2[(i + r) % n] for i in range(n)):
            continue
        eq = Equivalence(tuple((i + r) % n for i in range(n)))
        if check_equivalence(action1, theta1, action2, theta2, eq).ok:
            return eq
    return None


# ---------------------------------------------------------------------------
# matched endpoints and semi-conjugacy


def delta_matching(action1: MarkedAction, theta1: PartitionTheta,
                   action2: MarkedAction, theta2: PartitionTheta,
                   eq: Equivalence, k: int):
    """Multivalued endpoint correspondence on Delta_k, driven by the
    equivalence on components and the generator action."""
    comps1 = theta1.components()
    comps2 = theta2.components()
    match: dict = {}

    def put(x, y):
        match.setdefault(x, set()).add(y)

    for i, (_, a) in enumerate(comps1):
        b = comps2[eq(i)][1]
        put(a.lo, b.lo)
        put(a.hi, b.hi)
    gens = [(action1.evaluate(nf), action2.evaluate(nf))
            for nf in _generators(action1, with_identity=False)]
    domains = [sorted(match)]
    for _ in range(k):
        additions = []
        for x, ys in match.items():
            for f1, f2 in gens:
                additions.append((f1(x), {f2(y) for y in ys}))
        for x, ys in additions:
            for y in ys:
                put(x, y)
        domains.append(sorted(match))
    return match, domains


@dataclass
class SemiConjugacy:
    """Monotone matched pairs on Delta_k for two actions; multivalued images
    are kept as value sets and collapsed (to the leftmost choice relative to
    the matched component) only for rendering."""

    depth: int
    pairs: tuple       # ((x, (y1, y2, ...)), ...) sorted by x
    base_point: Fraction

    def values(self, x):
        return dict(self.pairs).get(x)

    def rendered_pairs(self):
        out = []
        for x, ys in self.pairs:
            out.append((x, min(ys, key=lambda y: mod1(y - self.base_point))))
        return out

    def monotone_ok(self) -> bool:
        """All matched values wind once around the circle as x does."""
        seq = []
        for x, ys in self.pairs:
            ref = mod1(ys[0] - self.base_point)
            lo = min(mod1(y - self.base_point) for y in ys)
            hi = max(mod1(y - self.base_point) for y in ys)
            seq.append((lo, hi))
        flat = []
        for lo, hi in seq:
            flat.extend((lo, hi))
        descents = sum(1 for i in range(len(flat))
                       if flat[(i + 1) % len(flat)] < flat[i])
        return descents <= 1


def semiconjugacy(eq: Equivalence, action1: MarkedAction,
                  theta1: PartitionTheta, action2: MarkedAction,
                  theta2: PartitionTheta, k: int) -> SemiConjugacy:
    match, domains = delta_matching(action1, theta1, action2, theta2, eq, k)
    pairs = tuple((x, tuple(sorted(match[x]))) for x in sorted(match))
    base = theta2.components()[0][1].lo
    return SemiConjugacy(k, pairs, base)


def check_equivariance(action1: MarkedAction, action2: MarkedAction,
                       sc: SemiConjugacy) -> CheckReport:
    """Exact equivariance of the matching: whenever a generator moves a
    matched point to another matched point, the images of its values are
    among the values there."""
    rep = CheckReport()
    match = dict(sc.pairs)
    for nf in _generators(action1, with_identity=False):
        f1 = action1.evaluate(nf)
        f2 = action2.evaluate(nf)
        bad = None
        for x, ys in sc.pairs:
            x2 = f1(x)
            if x2 not in match:
                continue
            if not {f2(y) for y in ys} <= set(match[x2]):
                bad = x
                break
        rep.add(f"equivariance of {nf!r} on Delta_{sc.depth}", bad is None,
                f"fails at x={bad}")
    return rep


def extend_equivalence(eq: Equivalence, action1: MarkedAction,
                       theta1: PartitionTheta, action2: MarkedAction,
                       theta2: PartitionTheta, k: int):
    """Extend a ping-pong equivalence to the k-th refinements.

    Returns (theta1_k, theta2_k, eq_k); raises if the matched endpoints do
    not determine a bijection of refined components."""
    t1, t2 = theta1, theta2
    cur = eq
    for step in range(k):
        r1 = refine(action1, t1)
        r2 = refine(action2, t2)
        match, _ = delta_matching(action1, t1, action2, t2, cur, 1)
        comps1 = r1.components()
        comps2 = r2.components()
        if len(comps1) != len(comps2):
            raise ValueError("refined partitions have different sizes")
        starts2 = {arc.lo: j for j, (_, arc) in enumerate(comps2)}
        mapping = []
        for lab, arc in comps1:
            cands = [starts2[y] for y in match.get(arc.lo, ())
                     if y in starts2]
            cands = [j for j in cands
                     if comps2[j][0] == lab
                     and any(comps2[j][1].hi == y2
                             for y2 in match.get(arc.hi, ()))]
            if len(set(cands)) != 1:
                raise ValueError(
                    f"matched endpoints ambiguous at component {lab}@{arc}")
            mapping.append(cands[0])
        cur = Equivalence(tuple(mapping))
        t1, t2 = r1, r2
    return t1, t2, cur
