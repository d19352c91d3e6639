"""Explicit piecewise-linear realizations.

realize_semidirect builds, for F(S_0) x| Z_m with Z_m permuting the signed
generators, a circle action in which the rotation by 1/m conjugates each
generator map to its successor exactly; cycles that invert a generator
satisfy R_{j/m} f R_{j/m}^{-1} = f^{-1} as an exact PL identity.

realize_free_product builds actions of Z_p * Z_q whose bundled partition
passes the ping-pong checks, with the order-p generator a rigid rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .checker import MarkedAction, PartitionTheta, check_marked_action
from .circle import Arc, IntervalUnion, PLMap, mod1, rotation
from .presentation import BoundaryInjection, EdgeSpec, GraphOfGroups


class InfeasibleParams(Exception):
    pass


@dataclass(frozen=True)
class SignedPermutation:
    """Bijection of {±1..±n} commuting with negation."""

    n: int
    mapping: tuple  # ((i, sigma(i)) for i in 1..n)

    @staticmethod
    def from_dict(n: int, d: dict) -> "SignedPermutation":
        full = {}
        for i in range(1, n + 1):
            if i not in d:
                raise ValueError(f"missing image of {i}")
            full[i] = d[i]
        imgs = {abs(v) for v in full.values()}
        if imgs != set(range(1, n + 1)):
            raise ValueError("not a signed permutation")
        return SignedPermutation(n, tuple(sorted(full.items())))

    @staticmethod
    def cyclic(n: int) -> "SignedPermutation":
        return SignedPermutation.from_dict(
            n, {i: (i % n) + 1 for i in range(1, n + 1)})

    @staticmethod
    def identity(n: int) -> "SignedPermutation":
        return SignedPermutation.from_dict(n, {i: i for i in range(1, n + 1)})

    def __call__(self, x: int) -> int:
        d = dict(self.mapping)
        return d[x] if x > 0 else -d[-x]

    def order(self) -> int:
        from math import lcm
        out = 1
        for cyc in self.cycles():
            out = lcm(out, 2 * cyc.j if cyc.inverting else cyc.k)
        return out

    def cycles(self) -> list:
        done = set()
        out = []
        for i in range(1, self.n + 1):
            if i in done:
                continue
            members = []
            x = i
            t = 0
            while True:
                members.append((t, x))
                done.add(abs(x))
                x = self(x)
                t += 1
                if abs(x) == i:
                    break
            if x == i:
                out.append(Cycle(rep=i, k=t, j=None, inverting=False,
                                 members=tuple(members)))
            else:
                out.append(Cycle(rep=i, k=2 * t, j=t, inverting=True,
                                 members=tuple(members)))
        return out


@dataclass(frozen=True)
class Cycle:
    rep: int
    k: int                # length of the cycle on signed letters
    j: int | None         # inversion offset (sigma^j(s) = s^-1), if any
    inverting: bool
    members: tuple        # (t, signed index) with signed index = sigma^t(rep)


@dataclass(frozen=True)
class RealizationParams:
    """Per-cycle interval data inside the slot structure of (0, 1/m):
    orientation cycles carry (a, b, c, d) with I^- = (a,b), I^+ = (c,d);
    inverting cycles carry (c, d) with I^- the rotated copy of I^+."""

    entries: tuple  # ((cycle rep, points tuple), ...)

    def of(self, rep: int) -> tuple:
        return dict(self.entries)[rep]


def default_params(n: int, m: int, sigma: SignedPermutation,
                   variant: int = 0) -> RealizationParams:
    """Equal-spacing slot allocation: cycle t gets a slot of width 1/(mC)
    and places its intervals on an eighth-grid inside it (coarser grids for
    parameter variants)."""
    cycles = sigma.cycles()
    c_count = len(cycles)
    den = 8 + 4 * variant
    entries = []
    for t, cyc in enumerate(cycles):
        base = Fraction(t, m * c_count)
        q = Fraction(1, m * c_count * den)
        if cyc.inverting:
            entries.append((cyc.rep, (base + q, base + 2 * q)))
        else:
            entries.append((cyc.rep,
                            (base + q, base + 2 * q, base + 4 * q, base + 5 * q)))
    return RealizationParams(tuple(entries))


def _orientation_map(m: int, k: int, pts: tuple) -> PLMap:
    a, b, c, d = pts
    tau = Fraction(k, m)
    if not (0 < a < b < c < d and d - a < tau):
        raise InfeasibleParams(f"bad interval data {pts}")
    if (c - d + tau) <= (b - a):
        raise InfeasibleParams("expanding slope not greater than one")
    bps = []
    for i in range(m // k):
        s = i * tau
        bps.append((mod1(a + s), mod1(d + s - tau)))
        bps.append((mod1(b + s), mod1(c + s)))
    return PLMap(bps)


def _inversion_map(m: int, j: int, pts: tuple) -> PLMap:
    c, d = pts
    k = 2 * j
    tau = Fraction(k, m)
    if not (0 < c < d and 2 * (d - c) < tau):
        raise InfeasibleParams(f"bad inversion interval data {pts}")
    bps = []
    for i in range(m // k):
        s = i * tau
        bps.append((mod1(c + Fraction(j, m) + s), mod1(d + s)))
        bps.append((mod1(d + Fraction(j, m) + s), mod1(c + tau + s)))
    return PLMap(bps)


@dataclass
class Realization:
    n: int
    m: int
    sigma: SignedPermutation
    params: RealizationParams
    gen_maps: dict           # generator index (1..n) -> PLMap
    rotation_map: PLMap
    cycles: list

    def map_of(self, signed: int) -> PLMap:
        f = self.gen_maps[abs(signed)]
        return f if signed > 0 else f.invert()

    def marking(self):
        """Graph of groups for the grouped presentation, with PL assignments
        and the rotation data for the morphism to Z_m.

        Returns (graph, action, rot_assignment, cycle_edge) where cycle_edge
        maps each cycle rep to its stable letter or amalgam vertex."""
        m = self.m
        vertices = {"v": m}
        edges = []
        vertex_maps = {"v": self.rotation_map}
        stable_maps = {}
        rot = {"v": Fraction(1, m)}
        cycle_edge = {}
        for ci, cyc in enumerate(self.cycles):
            f = self.gen_maps[cyc.rep]
            if not cyc.inverting:
                k = cyc.k
                a_ord = m // k
                img = k % m
                eid = f"s{ci}"
                edges.append(EdgeSpec(eid, "v", eid + "~", a_ord,
                                      BoundaryInjection(a_ord, m, img), False))
                edges.append(EdgeSpec(eid + "~", "v", eid, a_ord,
                                      BoundaryInjection(a_ord, m, img), False))
                stable_maps[eid] = f
                cycle_edge[cyc.rep] = eid
            else:
                j = cyc.j
                wid = f"w{ci}"
                worder = (2 * m) // cyc.k
                vertices[wid] = worder
                a_ord = m // cyc.k
                eid = f"t{ci}"
                edges.append(EdgeSpec(eid, "v", eid + "~", a_ord,
                                      BoundaryInjection(a_ord, m, cyc.k % m), True))
                edges.append(EdgeSpec(eid + "~", wid, eid, a_ord,
                                      BoundaryInjection(a_ord, worder, 2 % worder),
                                      True))
                q = rotation(Fraction(j, m)).compose(f)
                vertex_maps[wid] = q
                rot[wid] = Fraction(j, m)
                cycle_edge[cyc.rep] = wid
        g = GraphOfGroups(vertices, edges)
        action = check_marked_action(g, vertex_maps, stable_maps)
        return g, action, rot, cycle_edge

    def suggested_theta(self):
        """Exact tight partition for purely orientation-preserving sigma, or
        None when the construction does not apply (inverting cycles, or a
        degenerate minimal set)."""
        if any(c.inverting for c in self.cycles):
            return None
        try:
            bounds = _tight_bounds(self.m, self.cycles, self.params)
        except InfeasibleParams:
            return None
        u_atoms = {}
        v_atoms = {}
        for ci, cyc in enumerate(self.cycles):
            k = cyc.k
            tau = Fraction(k, self.m)
            eid = f"s{ci}"
            for sign, vkey in ((1, eid), (-1, eid + "~")):
                lo, hi = bounds[(cyc.rep, sign)]
                if lo == hi:
                    return None
                copies = [Arc(mod1(lo + i * tau), mod1(hi + i * tau))
                          for i in range(self.m // k)]
                v_atoms[vkey] = IntervalUnion(copies)
                trans = []
                for t in range(1, k):
                    sh = Fraction(t, self.m)
                    trans.extend(Arc(mod1(lo + sh + i * tau),
                                     mod1(hi + sh + i * tau))
                                 for i in range(self.m // k))
                u_atoms[("v", vkey)] = IntervalUnion(trans)
        return PartitionTheta.build(u_atoms, v_atoms)


def realize_semidirect(n: int, m: int, sigma: SignedPermutation,
                       params: RealizationParams | None = None) -> Realization:
    if sigma.n != n:
        raise ValueError("permutation size mismatch")
    cycles = sigma.cycles()
    for cyc in cycles:
        if m % cyc.k != 0:
            raise InfeasibleParams(
                f"cycle length {cyc.k} does not divide the rotation order {m}")
    if params is None:
        params = default_params(n, m, sigma)
    _validate_disjoint(m, cycles, params)
    gen_maps = {}
    for cyc in cycles:
        pts = params.of(cyc.rep)
        if cyc.inverting:
            f = _inversion_map(m, cyc.j, pts)
        else:
            f = _orientation_map(m, cyc.k, pts)
        for t, signed in cyc.members:
            conj = rotation(Fraction(t, m))
            fm = conj.compose(f).compose(conj.invert())
            gen_maps[abs(signed)] = fm if signed > 0 else fm.invert()
    return Realization(n, m, sigma, params, gen_maps,
                       rotation(Fraction(1, m)), cycles)


def _cycle_base_intervals(m, cyc, pts):
    # the full translate family by 1/m subsumes the rotated copies, so the
    # inverting case only contributes its attracting base interval
    if cyc.inverting:
        c, d = pts
        return [(c, d, 1)], Fraction(cyc.k, m)
    a, b, c, d = pts
    return [(a, b, -1), (c, d, 1)], Fraction(cyc.k, m)


def _validate_disjoint(m, cycles, params):
    arcs = []
    for cyc in cycles:
        base, tau = _cycle_base_intervals(m, cyc, params.of(cyc.rep))
        for lo, hi, _ in base:
            for t in range(m):
                sh = Fraction(t, m)
                arcs.append(Arc(mod1(lo + sh), mod1(hi + sh)))
    total = IntervalUnion(arcs)
    if total.length != sum((a.length for a in arcs), Fraction(0)):
        raise InfeasibleParams("interval families of the cycles overlap")


def _tight_bounds(m, cycles, params):
    """Least/greatest limit points of the invariant set inside each base
    interval, solved exactly from the self-similarity equations."""
    # raw interval catalogue: (circle start, length, cycle rep, sign)
    raw = []
    data = {}
    for cyc in cycles:
        a_pts = params.of(cyc.rep)
        a, b, c, d = a_pts
        tau = Fraction(cyc.k, m)
        data[cyc.rep] = (a, b, c, d, tau)
        for t in range(m):
            sh = Fraction(t, m)
            raw.append((mod1(a + sh), b - a, cyc.rep, -1, sh))
            raw.append((mod1(c + sh), d - c, cyc.rep, 1, sh))

    def first_after(w):
        best = None
        for start, length, rep, sign, sh in raw:
            delta = mod1(start - w)
            if delta == 0:
                delta = Fraction(1)
            if best is None or delta < best[0]:
                best = (delta, start, rep, sign, sh)
        return best

    def last_before(w):
        best = None
        for start, length, rep, sign, sh in raw:
            end = mod1(start + length)
            delta = mod1(w - end)
            if delta == 0:
                delta = Fraction(1)
            if best is None or delta < best[0]:
                best = (delta, end, rep, sign, sh)
        return best

    idx = {}
    for cyc in cycles:
        for sign in (1, -1):
            for bound in (0, 1):   # lo, hi
                idx[(cyc.rep, sign, bound)] = len(idx)
    size = len(idx)
    mat = [[Fraction(0)] * size for _ in range(size)]
    rhs = [Fraction(0)] * size

    def lift_const(xref, shift, w0):
        """Integer J with xref + shift + J inside [w0, w0 + 1)."""
        pos = mod1(xref + shift)
        return (w0 + mod1(pos - w0)) - (xref + shift)

    def set_eq(row, target, coeff, src, const):
        mat[row][idx[target]] = Fraction(1)
        mat[row][idx[src]] -= coeff
        rhs[row] = const

    def start_ref(rep2, sign2):
        return data[rep2][0] if sign2 < 0 else data[rep2][2]

    row = 0
    for cyc in cycles:
        a, b, c, d, tau = data[cyc.rep]
        lam = (d - c) / (a + tau - b)
        mu = (c - (d - tau)) / (b - a)
        # contracting piece [b, a+tau] -> [c, d]:
        #   lower bound comes from the first interval after b,
        #   upper bound from the last interval ending before a+tau
        _, _, rep2, sign2, sh2 = first_after(b)
        J = lift_const(start_ref(rep2, sign2), sh2, b)
        set_eq(row, (cyc.rep, 1, 0), lam, (rep2, sign2, 0),
               c + lam * (sh2 + J - b))
        row += 1
        _, _, rep2, sign2, sh2 = last_before(mod1(a + tau))
        J = lift_const(start_ref(rep2, sign2), sh2, b)
        set_eq(row, (cyc.rep, 1, 1), lam, (rep2, sign2, 1),
               c + lam * (sh2 + J - b))
        row += 1
        # expanding piece [a, b] -> [d-tau, c], solved through the inverse
        w0 = d - tau
        _, _, rep2, sign2, sh2 = first_after(mod1(w0))
        J = lift_const(start_ref(rep2, sign2), sh2, w0)
        set_eq(row, (cyc.rep, -1, 0), Fraction(1) / mu,
               (rep2, sign2, 0), a + (sh2 + J - w0) / mu)
        row += 1
        _, _, rep2, sign2, sh2 = last_before(c)
        J = lift_const(start_ref(rep2, sign2), sh2, w0)
        set_eq(row, (cyc.rep, -1, 1), Fraction(1) / mu,
               (rep2, sign2, 1), a + (sh2 + J - w0) / mu)
        row += 1

    sol = _solve(mat, rhs)
    out = {}
    for cyc in cycles:
        a, b, c, d, tau = data[cyc.rep]
        lo_p, hi_p = sol[idx[(cyc.rep, 1, 0)]], sol[idx[(cyc.rep, 1, 1)]]
        lo_m, hi_m = sol[idx[(cyc.rep, -1, 0)]], sol[idx[(cyc.rep, -1, 1)]]
        if not (c <= lo_p <= hi_p <= d and a <= lo_m <= hi_m <= b):
            raise InfeasibleParams("tight bounds escaped their intervals")
        out[(cyc.rep, 1)] = (lo_p, hi_p)
        out[(cyc.rep, -1)] = (lo_m, hi_m)
    return out


def _solve(mat, rhs):
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InfeasibleParams("singular tightness system")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


# ---------------------------------------------------------------------------
# free products of two finite cyclic groups


@dataclass(frozen=True)
class FreeProductParams:
    u: Fraction
    v: Fraction
    b_intervals: tuple   # ((m_i, n_i), ...) spatial left to right


def default_free_product_params(p: int, q: int, variant: int = 0) -> FreeProductParams:
    den = 8 + 4 * variant
    u = Fraction(1, den * p)
    v = Fraction(1, p) - u
    lo = u + Fraction(1, p)
    hi = v + Fraction(1, p)
    parts = 2 * (q - 1) - 1
    step = (hi - lo) / parts
    bs = tuple((lo + 2 * i * step, lo + (2 * i + 1) * step)
               for i in range(q - 1))
    return FreeProductParams(u, v, bs)


@dataclass
class FreeProductRealization:
    p: int
    q: int
    graph: GraphOfGroups
    action: MarkedAction
    theta: PartitionTheta
    params: FreeProductParams


def realize_free_product(p: int, q: int,
                         params: FreeProductParams | None = None
                         ) -> FreeProductRealization:
    """Marked action of Z_p * Z_q with the order-p generator a rigid rotation
    and exact tight ping-pong atoms.

    The order-q generator cycles the q-1 atoms of its vertex and the single
    big atom of the other vertex, expanding the last one over the full
    rotation landscape."""
    if p < 2 or q < 2 or (p == 2 and q == 2):
        raise InfeasibleParams("free product must not be virtually cyclic")
    if params is None:
        params = default_free_product_params(p, q)
    u, v, bs = params.u, params.v, params.b_intervals
    if not (0 < u < v < Fraction(1, p)) or len(bs) != q - 1:
        raise InfeasibleParams("bad free product parameters")
    if bs[0][0] != u + Fraction(1, p) or bs[-1][1] != v + Fraction(1, p):
        raise InfeasibleParams("second-vertex atoms must span the rotated "
                               "first atom")
    span_lo = mod1(u + Fraction(2, p))
    bps = [(v, bs[0][1])]
    for i in range(q - 2):
        bps.append((bs[i][0], bs[i + 1][0]))
        bps.append((bs[i][1], bs[i + 1][1]))
    bps.append((bs[-1][0], span_lo))
    bps.append((bs[-1][1], v))
    bps.append((span_lo, bs[0][0]))
    bmap = PLMap(bps)

    from . import fixtures
    graph = fixtures.free_product_graph(p, q)
    action = check_marked_action(
        graph, {"vp": rotation(Fraction(1, p)), "vq": bmap}, {})
    a_arcs = [Arc(mod1(u + Fraction(1 - t, p)), mod1(v + Fraction(1 - t, p)))
              for t in range(1, p)]
    u_atoms = {
        ("vp", "e"): IntervalUnion(a_arcs),
        ("vq", "e~"): IntervalUnion(Arc(lo, hi) for lo, hi in bs),
    }
    theta = PartitionTheta.build(u_atoms, {})
    return FreeProductRealization(p, q, graph, action, theta, params)
