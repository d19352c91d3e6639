"""Structured-text (JSON) schemas for every pipeline artifact.

All rationals travel as strings "p/q" with q > 0 and gcd(p, q) = 1; parsing
validates both.  Every document carries a format tag and a version field.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

from .checker import PartitionTheta
from .circle import Arc, IntervalUnion, PLMap, rat_str
from .presentation import (BoundaryInjection, EdgeSpec, GraphOfGroups, Letter,
                           NormalForm, S, V)


class FormatError(Exception):
    pass


def parse_rational(s) -> Fraction:
    try:
        if isinstance(s, int):
            return Fraction(s)
        if not isinstance(s, str):
            raise ValueError("rational must be a string")
        if "/" in s:
            p, q = s.split("/")
            qi = int(q)
            pi = int(p)
            if qi <= 0:
                raise ValueError("denominator must be positive")
            if gcd(pi, qi) != 1 and pi != 0:
                raise ValueError(f"rational {s} not in lowest terms")
            return Fraction(pi, qi)
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}: {exc}") from None


def _tagged(kind: str, payload: dict) -> dict:
    return {"format": kind, "version": 1, **payload}


def _expect(doc: dict, kind: str):
    if not isinstance(doc, dict) or doc.get("format") != kind:
        raise FormatError(f"expected a {kind!r} document")


# -- graphs of groups ---------------------------------------------------------

def gog_to_json(g: GraphOfGroups) -> dict:
    return _tagged("gog", {
        "vertices": [{"id": vid, "order": n}
                     for vid, n in sorted(g.vertices.items())],
        "edges": [{
            "id": e.eid, "from": e.origin, "reverse": e.reverse,
            "edgeOrder": e.edge_order, "alphaImage": e.alpha.generator_image,
            "inTree": e.in_tree,
        } for e in (g.edges[k] for k in sorted(g.edges))],
    })


def gog_from_json(doc: dict) -> GraphOfGroups:
    _expect(doc, "gog")
    try:
        vertices = {v["id"]: int(v["order"]) for v in doc["vertices"]}
        edges = []
        for e in doc["edges"]:
            n = vertices[e["from"]]
            edges.append(EdgeSpec(
                e["id"], e["from"], e["reverse"], int(e["edgeOrder"]),
                BoundaryInjection(int(e["edgeOrder"]), n, int(e["alphaImage"])),
                bool(e["inTree"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad gog document: {exc}") from None
    return GraphOfGroups(vertices, edges)


# -- words --------------------------------------------------------------------

def word_to_json(word) -> list:
    out = []
    for letter in (word.letters if isinstance(word, NormalForm) else word):
        if letter.kind == 0:
            out.append({"v": letter.ident, "k": letter.k})
        else:
            out.append({"s": letter.ident})
    return out


def word_from_json(items) -> tuple:
    out = []
    try:
        for it in items:
            if "v" in it:
                out.append(V(it["v"], int(it["k"])))
            else:
                out.append(S(it["s"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad word: {exc}") from None
    return tuple(out)


# -- circle data --------------------------------------------------------------

def plmap_to_json(f: PLMap) -> list:
    return [[rat_str(x), rat_str(y)] for x, y in f.breakpoints()]


def plmap_from_json(pts) -> PLMap:
    try:
        return PLMap([(parse_rational(x), parse_rational(y)) for x, y in pts])
    except (ValueError, TypeError) as exc:
        raise FormatError(f"bad PL map: {exc}") from None


def union_to_json(u: IntervalUnion):
    if u.is_full:
        return "full"
    return [[rat_str(a.lo), rat_str(a.hi)] for a in u.components()]


def union_from_json(data) -> IntervalUnion:
    if data == "full":
        return IntervalUnion.full()
    try:
        return IntervalUnion(Arc(parse_rational(a), parse_rational(b))
                             for a, b in data)
    except (ValueError, TypeError) as exc:
        raise FormatError(f"bad interval union: {exc}") from None


# -- actions ------------------------------------------------------------------

def action_to_json(g: GraphOfGroups, vertex_maps: dict, stable_maps: dict,
                   rot=None) -> dict:
    doc = _tagged("action", {
        "gog": gog_to_json(g),
        "vertexMaps": {vid: plmap_to_json(m)
                       for vid, m in sorted(vertex_maps.items())},
        "stableMaps": {eid: plmap_to_json(m)
                       for eid, m in sorted(stable_maps.items())},
    })
    if rot:
        doc["rotAssignment"] = {vid: rat_str(Fraction(v))
                                for vid, v in sorted(rot.items())}
    return doc


def action_from_json(doc):
    _expect(doc, "action")
    g = gog_from_json(doc["gog"])
    vmaps = {vid: plmap_from_json(m) for vid, m in doc["vertexMaps"].items()}
    smaps = {eid: plmap_from_json(m) for eid, m in doc["stableMaps"].items()}
    rot = {vid: parse_rational(x)
           for vid, x in doc.get("rotAssignment", {}).items()} or None
    return g, vmaps, smaps, rot


# -- partitions ---------------------------------------------------------------

def theta_to_json(theta: PartitionTheta) -> dict:
    atoms = []
    for lab, un in theta.atoms:
        if lab[0] == "U":
            atoms.append({"kind": "U", "v": lab[1], "e": lab[2],
                          "arcs": union_to_json(un)})
        else:
            atoms.append({"kind": "V", "s": lab[1], "arcs": union_to_json(un)})
    return _tagged("partition", {"atoms": atoms})


def theta_from_json(doc) -> PartitionTheta:
    _expect(doc, "partition")
    u_atoms = {}
    v_atoms = {}
    try:
        for a in doc["atoms"]:
            un = union_from_json(a["arcs"])
            if a["kind"] == "U":
                u_atoms[(a["v"], a["e"])] = un
            else:
                v_atoms[a["s"]] = un
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad partition: {exc}") from None
    return PartitionTheta.build(u_atoms, v_atoms)


# -- free atoms ----------------------------------------------------------------

def free_atoms_to_json(atoms: dict) -> dict:
    return _tagged("free-atoms",
                   {"atoms": {s: union_to_json(u)
                              for s, u in sorted(atoms.items())}})


def free_atoms_from_json(doc) -> dict:
    _expect(doc, "free-atoms")
    return {s: union_from_json(u) for s, u in doc["atoms"].items()}


# -- tree balls ----------------------------------------------------------------

def ball_to_json(ball) -> dict:
    verts = [{"id": v.index, "vertex": v.vid,
              "coset": word_to_json(NormalForm(v.rep)),
              "depth": v.depth,
              "component": v.component} for v in ball.vertices]
    edges = [{"id": e.index, "edge": e.eid,
              "near": e.near, "far": e.far, "reverse": e.reverse,
              "inDomain": e.in_domain, "component": e.component}
             for e in ball.edges]
    return _tagged("tree-ball", {
        "radius": ball.radius, "vertices": verts, "edges": edges,
        "components": [{"id": c.index, "tVertex": c.t_vertex,
                        "edge": c.edge, "quotientEdge": c.eid}
                       for c in ball.components]})


# -- semiconjugacy -------------------------------------------------------------

def semiconj_to_json(sc) -> dict:
    return _tagged("semiconjugacy", {
        "depth": sc.depth,
        "pairs": [{"x": rat_str(x), "y": [rat_str(y) for y in ys]}
                  for x, ys in sc.pairs],
    })


def equivalence_to_json(eq) -> dict:
    return _tagged("equivalence", {"mapping": list(eq.mapping)})


def equivalence_from_json(doc):
    from .refine import Equivalence
    _expect(doc, "equivalence")
    return Equivalence(tuple(doc["mapping"]))


# -- reports -------------------------------------------------------------------

def report_to_json(rep) -> dict:
    return _tagged("report", {
        "ok": rep.ok,
        "items": [{"condition": i.condition, "ok": i.ok,
                   "witness": i.witness} for i in rep.items],
    })


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def load_path(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON: {exc}") from None


def dump_path(path, doc):
    with open(path, "w") as fh:
        fh.write(dumps(doc))
