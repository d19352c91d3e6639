"""Exact arithmetic on the circle R/Z: rational points, open arcs, finite
unions of arcs, and orientation-preserving piecewise-linear homeomorphisms.

Everything is computed over Fractions; there is no rounding anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def frac(x) -> Fraction:
    """Parse a rational from int/Fraction/'p/q' string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if "/" in x:
            p, q = x.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(x))
    raise TypeError(f"not a rational: {x!r}")


def mod1(x: Fraction) -> Fraction:
    """Canonical representative of x in [0, 1)."""
    return x - (x.numerator // x.denominator)


def rat_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def cyclic_order_of_points(points: Sequence[Fraction]) -> list[int]:
    """Permutation sorting the given distinct circle points counterclockwise
    starting from the smallest representative in [0,1)."""
    pts = [mod1(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("points not distinct on the circle")
    return sorted(range(len(pts)), key=lambda i: pts[i])


@dataclass(frozen=True)
class Arc:
    """Open arc (lo, hi) traversed counterclockwise; wrapping allowed.

    lo and hi are reduced rationals in [0,1) with lo != hi; an Arc is never
    the full circle.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", mod1(frac(self.lo)))
        object.__setattr__(self, "hi", mod1(frac(self.hi)))
        if self.lo == self.hi:
            raise ValueError("degenerate arc; use IntervalUnion.full() for S^1")

    @property
    def length(self) -> Fraction:
        return mod1(self.hi - self.lo)

    def midpoint(self) -> Fraction:
        return mod1(self.lo + self.length / 2)

    def contains(self, x: Fraction, closed: bool = False) -> bool:
        x = mod1(x)
        if closed and (x == self.lo or x == self.hi):
            return True
        d = mod1(x - self.lo)
        return 0 < d < self.length

    def contains_arc(self, other: "Arc") -> bool:
        """Whether the open arc `other` is a subset of this open arc."""
        d_lo = mod1(other.lo - self.lo)
        d_hi = mod1(other.hi - self.lo)
        if d_hi == 0:
            d_hi = Fraction(1)
        return d_lo <= self.length and d_hi <= self.length and d_lo < d_hi

    def intersects(self, other: "Arc") -> bool:
        s = mod1(other.lo - self.lo)
        e = s + other.length
        for sh in (0, -1):
            if max(Fraction(0), s + sh) < min(self.length, e + sh):
                return True
        return False

    def __str__(self):
        return f"({rat_str(self.lo)},{rat_str(self.hi)})"


@dataclass(frozen=True)
class Gap:
    """Closed arc [lo, hi], possibly a single point (lo == hi), or the full
    circle (complement of the empty union)."""

    lo: Fraction | None
    hi: Fraction | None
    full: bool = False

    def __post_init__(self):
        if not self.full:
            object.__setattr__(self, "lo", mod1(frac(self.lo)))
            object.__setattr__(self, "hi", mod1(frac(self.hi)))

    @staticmethod
    def point(x) -> "Gap":
        x = mod1(frac(x))
        return Gap(x, x)

    @staticmethod
    def full_circle() -> "Gap":
        return Gap(None, None, full=True)

    @property
    def is_point(self) -> bool:
        return not self.full and self.lo == self.hi

    @property
    def length(self) -> Fraction:
        if self.full:
            return Fraction(1)
        if self.lo == self.hi:
            return Fraction(0)
        return mod1(self.hi - self.lo)

    def contains(self, x: Fraction) -> bool:
        if self.full:
            return True
        x = mod1(x)
        if self.lo == self.hi:
            return x == self.lo
        return mod1(x - self.lo) <= self.length

    def endpoints(self) -> list[Fraction]:
        if self.full:
            return []
        if self.is_point:
            return [self.lo]
        return [self.lo, self.hi]

    def __str__(self):
        if self.full:
            return "[S1]"
        return f"[{rat_str(self.lo)},{rat_str(self.hi)}]"


class IntervalUnion:
    """Canonical finite union of pairwise disjoint open arcs, sorted by
    starting point.

    Components sharing a single boundary point stay separate (the union is a
    point set; the shared endpoint is not in it).  The full circle is a
    distinguished value.
    """

    __slots__ = ("arcs", "_full")

    def __init__(self, arcs: Iterable[Arc] = (), full: bool = False):
        if full:
            self.arcs: tuple[Arc, ...] = ()
            self._full = True
            return
        self._full = False
        arcs = list(arcs)
        if not arcs:
            self.arcs = ()
            return
        cut = None
        for a in arcs:
            for cand in (a.lo, a.hi):
                if not any(b.contains(cand) for b in arcs):
                    cut = cand
                    break
            if cut is not None:
                break
        if cut is None:
            self.arcs = ()
            self._full = True
            return
        segs = sorted((mod1(a.lo - cut), mod1(a.lo - cut) + a.length)
                      for a in arcs)
        merged: list[list[Fraction]] = []
        for s, e in segs:
            if merged and s < merged[-1][1]:
                if e > merged[-1][1]:
                    merged[-1][1] = e
            else:
                merged.append([s, e])
        out = [Arc(mod1(cut + s), mod1(cut + e)) for s, e in merged]
        self.arcs = tuple(sorted(out, key=lambda a: a.lo))

    @staticmethod
    def full() -> "IntervalUnion":
        return IntervalUnion(full=True)

    @staticmethod
    def empty() -> "IntervalUnion":
        return IntervalUnion(())

    @property
    def is_full(self) -> bool:
        return self._full

    @property
    def is_empty(self) -> bool:
        return not self._full and not self.arcs

    @property
    def length(self) -> Fraction:
        if self._full:
            return Fraction(1)
        return sum((a.length for a in self.arcs), Fraction(0))

    def components(self) -> tuple[Arc, ...]:
        if self._full:
            raise ValueError("full circle has no canonical arc decomposition")
        return self.arcs

    def contains(self, x: Fraction) -> bool:
        if self._full:
            return True
        return any(a.contains(x) for a in self.arcs)

    def closure_contains(self, x: Fraction) -> bool:
        if self._full:
            return True
        x = mod1(x)
        return any(a.contains(x) or x == a.lo or x == a.hi for a in self.arcs)

    def contains_arc(self, arc: Arc) -> bool:
        if self._full:
            return True
        return any(a.contains_arc(arc) for a in self.arcs)

    def contains_union(self, other: "IntervalUnion") -> bool:
        if other.is_empty or self._full:
            return True
        if other.is_full:
            return False
        return all(self.contains_arc(a) for a in other.arcs)

    def intersects(self, other: "IntervalUnion") -> bool:
        if self.is_empty or other.is_empty:
            return False
        if self._full or other.is_full:
            return True
        return any(a.intersects(b) for a in self.arcs for b in other.arcs)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        if self._full or other.is_full:
            return IntervalUnion.full()
        return IntervalUnion(self.arcs + other.arcs)

    def gaps(self) -> list[Gap]:
        """Complement decomposition: closed arcs between consecutive
        components, degenerate where two components share an endpoint."""
        if self._full:
            return []
        if not self.arcs:
            return [Gap.full_circle()]
        out = []
        for i, a in enumerate(self.arcs):
            b = self.arcs[(i + 1) % len(self.arcs)]
            out.append(Gap(a.hi, b.lo))
        return out

    def subtract_gap(self, g: Gap) -> "IntervalUnion":
        """Remove a closed arc (or point) from the union."""
        if g.full:
            return IntervalUnion.empty()
        if self._full:
            if g.is_point:
                raise ValueError("cannot represent S^1 minus a single point")
            return IntervalUnion([Arc(g.hi, g.lo)])
        out: list[Arc] = []
        for a in self.arcs:
            out.extend(_arc_minus_closed(a, g))
        return IntervalUnion(out)

    def endpoints(self) -> list[Fraction]:
        if self._full:
            return []
        out = []
        for a in self.arcs:
            out.extend((a.lo, a.hi))
        return out

    def __eq__(self, other):
        return (isinstance(other, IntervalUnion)
                and self._full == other._full and self.arcs == other.arcs)

    def __hash__(self):
        return hash((self._full, self.arcs))

    def __str__(self):
        if self._full:
            return "S1"
        return "{" + ", ".join(str(a) for a in self.arcs) + "}"

    __repr__ = __str__


def _arc_minus_closed(a: Arc, g: Gap) -> list[Arc]:
    """Open arc minus closed arc/point, as open arcs (line subtraction
    relative to a.lo, covering both wrap positions of g)."""
    if g.full:
        return []
    L = a.length
    s = mod1(g.lo - a.lo)
    e = s + g.length
    pieces: list[tuple[Fraction, Fraction]] = [(Fraction(0), L)]
    for shift in (Fraction(0), Fraction(-1)):
        lo, hi = s + shift, e + shift
        nxt: list[tuple[Fraction, Fraction]] = []
        for p, q in pieces:
            if hi <= p or lo >= q:
                nxt.append((p, q))
                continue
            if lo > p:
                nxt.append((p, lo))
            if hi < q:
                nxt.append((hi, q))
        pieces = nxt
    return [Arc(mod1(a.lo + p), mod1(a.lo + q)) for p, q in pieces if q > p]


def closed_sweep(unions: Sequence[IntervalUnion], keep) -> IntervalUnion:
    """Boolean combination of the CLOSURES of the given unions.

    `keep` maps a membership vector to a bool; the result is returned as an
    IntervalUnion whose closure is the requested set (interiors of the swept
    segments, with adjacent kept segments merged).  Used for cover
    arithmetic, where sets only matter up to finitely many points.
    """
    if all(u.is_full for u in unions):
        return IntervalUnion.full() if keep([True] * len(unions)) else IntervalUnion.empty()
    pts = sorted({p for u in unions for p in u.endpoints()})
    if not pts:
        vec = [u.is_full for u in unions]
        return IntervalUnion.full() if keep(vec) else IntervalUnion.empty()
    n = len(pts)
    kept: list[bool] = []
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        span = mod1(q - p)
        if span == 0:
            span = Fraction(1)
        mid = mod1(p + span / 2)
        kept.append(keep([u.closure_contains(mid) for u in unions]))
    if all(kept):
        return IntervalUnion.full()
    # merge runs of consecutive kept segments, scanning from a non-kept slot
    start = kept.index(False)
    arcs = []
    run_start = None
    for k in range(1, n + 1):
        i = (start + k) % n
        if kept[i]:
            if run_start is None:
                run_start = i
        elif run_start is not None:
            arcs.append(Arc(pts[run_start], pts[i]))
            run_start = None
    return IntervalUnion(arcs)


def closed_intersection(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    return closed_sweep([a, b], all)


def closed_union(unions: Sequence[IntervalUnion]) -> IntervalUnion:
    return closed_sweep(list(unions), any)


class PLMap:
    """Orientation-preserving piecewise-linear circle homeomorphism with
    rational breakpoints and slopes.

    Stored as breakpoint pairs (x_i, y_i), x_i strictly increasing in [0,1),
    y_i = f(x_i); between breakpoints f interpolates linearly with respect to
    the degree-one lift.  Canonical form drops collinear breakpoints (always
    keeping at least one), so equal maps compare equal.
    """

    __slots__ = ("pts",)

    def __init__(self, pts: Sequence[tuple]):
        pairs = sorted((mod1(frac(x)), mod1(frac(y))) for x, y in pts)
        if not pairs:
            raise ValueError("need at least one breakpoint")
        xs = [p[0] for p in pairs]
        if len(set(xs)) != len(xs):
            raise ValueError("duplicate breakpoint abscissae")
        if len(pairs) > 1:
            ys = [p[1] for p in pairs]
            descents = sum(1 for i in range(len(ys))
                           if ys[(i + 1) % len(ys)] <= ys[i])
            if descents != 1:
                raise ValueError("not a degree-one orientation-preserving map")
        self.pts = tuple(pairs)
        self._canonicalize()
        for i in range(len(self.pts)):
            if self._slope(i) <= 0:
                raise ValueError("not an orientation-preserving circle map")

    def _seg(self, i: int):
        """Lifted segment i: (x0, y0, x1, y1) with x1 > x0, y1 > y0."""
        n = len(self.pts)
        x0, y0 = self.pts[i]
        if n == 1:
            return x0, y0, x0 + 1, y0 + 1
        x1, y1 = self.pts[(i + 1) % n]
        if i + 1 == n:
            x1 += 1
        if y1 <= y0:
            y1 += 1
        return x0, y0, x1, y1

    def _slope(self, i: int) -> Fraction:
        x0, y0, x1, y1 = self._seg(i)
        return (y1 - y0) / (x1 - x0)

    def _canonicalize(self):
        while len(self.pts) > 1:
            n = len(self.pts)
            sl = [self._slope(i) for i in range(n)]
            keep = [self.pts[i] for i in range(n) if sl[i - 1] != sl[i]]
            if not keep:
                # constant slope 1 everywhere: a rigid rotation
                self.pts = (self.pts[0],)
                break
            if len(keep) == n:
                break
            self.pts = tuple(keep)
        if len(self.pts) == 1:
            x, y = self.pts[0]
            self.pts = ((Fraction(0), mod1(y - x)),)

    @staticmethod
    def identity() -> "PLMap":
        return PLMap([(Fraction(0), Fraction(0))])

    @property
    def is_identity(self) -> bool:
        return self.pts == ((Fraction(0), Fraction(0)),)

    def __call__(self, x) -> Fraction:
        x = mod1(frac(x))
        n = len(self.pts)
        if x < self.pts[0][0]:
            x0, y0, x1, y1 = self._seg(n - 1)
            x = x + 1
        else:
            lo, hi = 0, n - 1
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if self.pts[mid][0] <= x:
                    lo = mid
                else:
                    hi = mid - 1
            x0, y0, x1, y1 = self._seg(lo)
        return mod1(y0 + (x - x0) * (y1 - y0) / (x1 - x0))

    def _preimage(self, y: Fraction) -> Fraction:
        y = mod1(y)
        for i in range(len(self.pts)):
            x0, y0, x1, y1 = self._seg(i)
            for lift in (y, y + 1):
                if y0 <= lift <= y1:
                    return mod1(x0 + (lift - y0) * (x1 - x0) / (y1 - y0))
        raise AssertionError("preimage not found")

    def compose(self, other: "PLMap") -> "PLMap":
        """self after other: self.compose(other)(x) == self(other(x))."""
        xs = {x for x, _ in other.pts}
        xs.update(other._preimage(x) for x, _ in self.pts)
        return PLMap([(x, self(other(x))) for x in sorted(xs)])

    def invert(self) -> "PLMap":
        return PLMap([(y, x) for x, y in self.pts])

    def power(self, k: int) -> "PLMap":
        if k < 0:
            return self.invert().power(-k)
        out = PLMap.identity()
        for _ in range(k):
            out = out.compose(self)
        return out

    def image_arc(self, a: Arc) -> Arc:
        return Arc(self(a.lo), self(a.hi))

    def image_union(self, u: IntervalUnion) -> IntervalUnion:
        if u.is_full:
            return IntervalUnion.full()
        return IntervalUnion(self.image_arc(a) for a in u.arcs)

    def image_gap(self, g: Gap) -> Gap:
        if g.full:
            return g
        if g.is_point:
            return Gap.point(self(g.lo))
        return Gap(self(g.lo), self(g.hi))

    def breakpoints(self):
        return self.pts

    def __eq__(self, other):
        return isinstance(other, PLMap) and self.pts == other.pts

    def __hash__(self):
        return hash(self.pts)

    def __repr__(self):
        ps = ", ".join(f"({rat_str(x)},{rat_str(y)})" for x, y in self.pts)
        return f"PLMap[{ps}]"


def rotation(t) -> PLMap:
    """The rigid rotation x -> x + t mod 1."""
    return PLMap([(Fraction(0), mod1(frac(t)))])


def compose(f: PLMap, g: PLMap) -> PLMap:
    return f.compose(g)


def invert(f: PLMap) -> PLMap:
    return f.invert()


def compose_all(maps: Sequence[PLMap]) -> PLMap:
    """Compose left to right: result(x) = maps[0](maps[1](...(x)))."""
    out = PLMap.identity()
    for m in maps:
        out = out.compose(m)
    return out


def order_of(f: PLMap, max_k: int) -> int | None:
    """Smallest k <= max_k with f^k = id, or None."""
    g = f
    for k in range(1, max_k + 1):
        if g.is_identity:
            return k
        g = g.compose(f)
    return None


def rotation_number_finite(f: PLMap, max_k: int = 64) -> Fraction:
    """Rotation number of a finite-order map, as p/k: the cyclically sorted
    orbit of 0 advances by p positions per application."""
    if f.is_identity:
        return Fraction(0)
    k = order_of(f, max_k)
    if k is None:
        raise ValueError(f"map has no finite order <= {max_k}")
    orbit = [Fraction(0)]
    for _ in range(k - 1):
        orbit.append(f(orbit[-1]))
    order = sorted(range(k), key=lambda i: orbit[i])
    pos = {idx: r for r, idx in enumerate(order)}
    p = (pos[1] - pos[0]) % k
    return Fraction(p, k)


def gaps_of(u: IntervalUnion) -> list[Gap]:
    return u.gaps()
