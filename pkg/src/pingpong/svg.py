"""Deterministic SVG renderings: circle partitions as labeled annular arcs,
tree balls as radial diagrams, semi-conjugacies as monotone graphs.

No randomness and no timestamps: identical inputs give byte-identical
documents.
"""

from __future__ import annotations

from fractions import Fraction
from math import cos, pi, sin


def _fmt(x: float) -> str:
    return f"{x:.4f}"


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def _color(i: int) -> str:
    return _PALETTE[i % len(_PALETTE)]


def _arc_path(cx, cy, r, a0, a1) -> str:
    # angles as fractions of the turn, counterclockwise from the east axis
    x0, y0 = cx + r * cos(2 * pi * a0), cy - r * sin(2 * pi * a0)
    x1, y1 = cx + r * cos(2 * pi * a1), cy - r * sin(2 * pi * a1)
    span = (a1 - a0) % 1.0
    large = 1 if span > 0.5 else 0
    return (f"M {_fmt(x0)} {_fmt(y0)} "
            f"A {_fmt(r)} {_fmt(r)} 0 {large} 0 {_fmt(x1)} {_fmt(y1)}")


def _doc(width, height, body) -> str:
    return ('<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n'
            + "\n".join(body) + "\n</svg>\n")


def render_partition(theta, size: int = 420) -> str:
    """Circle with one colored annular arc per atom component, colors per
    atom label, labels printed in a legend."""
    cx = cy = size / 2
    r = size * 0.36
    body = [f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
            'fill="none" stroke="#cccccc" stroke-width="1"/>']
    labels = sorted({lab for lab, _ in theta.atoms})
    color_of = {lab: _color(i) for i, lab in enumerate(labels)}
    for lab, arc in theta.components():
        a0, a1 = float(arc.lo), float(arc.hi)
        body.append(f'<path d="{_arc_path(cx, cy, r, a0, a1)}" fill="none" '
                    f'stroke="{color_of[lab]}" stroke-width="10" '
                    'stroke-linecap="butt"/>')
    for lab, arc in theta.components():
        mid = float(arc.lo) + (float(arc.hi) - float(arc.lo)) % 1.0 / 2
        tx = cx + r * 1.18 * cos(2 * pi * mid)
        ty = cy - r * 1.18 * sin(2 * pi * mid)
        name = lab[1] + "^" + lab[2] if lab[0] == "U" else lab[1]
        body.append(f'<text x="{_fmt(tx)}" y="{_fmt(ty)}" font-size="9" '
                    f'text-anchor="middle" fill="{color_of[lab]}">'
                    f'{name}</text>')
    for i, lab in enumerate(labels):
        name = ("U_%s^%s" % lab[1:]) if lab[0] == "U" else "V_%s" % lab[1]
        body.append(f'<rect x="8" y="{8 + 14 * i}" width="10" height="10" '
                    f'fill="{color_of[lab]}"/>')
        body.append(f'<text x="22" y="{17 + 14 * i}" font-size="10" '
                    f'fill="#000000">{name}</text>')
    return _doc(size, size, body)


def render_tree(ball, size: int = 480) -> str:
    """Radial layout: domain vertices in the middle ring, depth growing
    outward; vertices colored by quotient vertex."""
    cx = cy = size / 2
    vids = sorted({v.vid for v in ball.vertices})
    color_of = {vid: _color(i) for i, vid in enumerate(vids)}
    # assign angles: leaves spread uniformly, parents centered on children
    children: dict = {}
    parent: dict = {}
    for e in ball.edges:
        nd, fd = ball.vertices[e.near].depth, ball.vertices[e.far].depth
        if fd == nd + 1:
            children.setdefault(e.near, []).append(e.far)
            parent[e.far] = e.near
    order = sorted(ball.vertices, key=lambda v: (v.depth, v.vid, v.rep))
    angle: dict = {}
    slot = [0]
    maxdepth = max(v.depth for v in ball.vertices)

    def assign(vi):
        kids = sorted(children.get(vi, []))
        for k in kids:
            assign(k)
        if kids:
            angle[vi] = sum(angle[k] for k in kids) / len(kids)
        else:
            angle[vi] = slot[0]
            slot[0] += 1

    roots = [v.index for v in ball.domain_vertices()]
    for r_ in roots:
        assign(r_)
    total = max(slot[0], 1)
    body = []
    pos = {}
    for v in ball.vertices:
        a = 2 * pi * angle[v.index] / total
        rad = (v.depth + 0.35) / (maxdepth + 1) * size * 0.44
        pos[v.index] = (cx + rad * cos(a), cy - rad * sin(a))
    drawn = set()
    for e in ball.edges:
        key = frozenset((e.near, e.far))
        if key in drawn:
            continue
        drawn.add(key)
        x0, y0 = pos[e.near]
        x1, y1 = pos[e.far]
        style = "#333333" if e.in_domain else "#aaaaaa"
        body.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" '
                    f'y2="{_fmt(y1)}" stroke="{style}" stroke-width="1"/>')
    for v in ball.vertices:
        x, y = pos[v.index]
        rr = 5 if v.depth == 0 else 3
        body.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{rr}" '
                    f'fill="{color_of[v.vid]}"/>')
    for i, vid in enumerate(vids):
        body.append(f'<circle cx="12" cy="{12 + 14 * i}" r="5" '
                    f'fill="{color_of[vid]}"/>')
        body.append(f'<text x="22" y="{16 + 14 * i}" font-size="10">'
                    f'{vid}</text>')
    return _doc(size, size, body)


def render_semiconjugacy(sc, size: int = 420) -> str:
    """Graph of the monotone correspondence on the unit square, one dot per
    matched pair (left endpoints chosen for multivalued images)."""
    pad = 30
    w = size - 2 * pad
    body = [f'<rect x="{pad}" y="{pad}" width="{w}" height="{w}" '
            'fill="none" stroke="#999999"/>']
    pts = sc.rendered_pairs()
    coords = []
    for x, y in pts:
        px = pad + float(x) * w
        py = pad + (1 - float(y)) * w
        coords.append((px, py))
    for px, py in coords:
        body.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2" '
                    'fill="#1f77b4"/>')
    body.append(f'<text x="{pad}" y="{size - 8}" font-size="10">'
                f'matched endpoints at depth {sc.depth}</text>')
    return _doc(size, size, body)
