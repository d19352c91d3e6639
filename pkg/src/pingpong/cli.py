"""Command-line front end.

Subcommands: gog validate|normalize, tree ball|arboreal|subgroup,
realize semidirect|freeproduct, check action|if|proper|ppp|faithful,
refine, equiv, semiconj, dkn, render.

Exit codes: 0 success or check passed, 1 check failed (report written),
2 input or format error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import serialize as ser
from .checker import (MarkedAction, check_free_pingpong,
                      check_interactive_family, check_ppp, check_proper,
                      marked_action_report)
from .circle import rat_str
from .dkn import (ResourceLimit, assemble_theta, check_dkn_properties,
                  dkn_estimates, estimate_minimal_set, hat_reduce)
from .presentation import NormalForm, pi_morphism, quotient_graph_action
from .realize import (InfeasibleParams, SignedPermutation,
                      default_free_product_params, default_params,
                      realize_free_product, realize_semidirect)
from .refine import (RefinementExhausted, check_equivalence,
                     check_equivariance, find_equivalence, refine,
                     refine_until_proper, semiconjugacy)
from .serialize import FormatError
from .svg import render_partition, render_semiconjugacy, render_tree
from .tree import BallExhausted, NotFundamentalDomain, build_ball


def _print(doc):
    sys.stdout.write(ser.dumps(doc))


def _emit_report(rep, out=None) -> int:
    doc = ser.report_to_json(rep)
    if out:
        ser.dump_path(out, doc)
    _print(doc)
    return 0 if rep.ok else 1


def _load_action(path) -> MarkedAction:
    g, vmaps, smaps, rot = ser.action_from_json(ser.load_path(path))
    g.assert_valid()
    action = MarkedAction(g, vmaps, smaps)
    rep = marked_action_report(action)
    if not rep.ok:
        raise FormatError("action file violates its relations: "
                          + rep.failures()[0].condition)
    return action


# -- gog ----------------------------------------------------------------------

def cmd_gog_validate(args) -> int:
    g = ser.gog_from_json(ser.load_path(args.gog))
    rep = g.validate()
    _print({"format": "validation", "version": 1, "ok": rep.ok,
            "failures": rep.failures})
    return 0 if rep.ok else 1


def cmd_gog_normalize(args) -> int:
    g = ser.gog_from_json(ser.load_path(args.gog))
    g.assert_valid()
    word = ser.word_from_json(ser.load_path(args.word))
    nf = g.normalize(word)
    doc = {"format": "normal-form", "version": 1,
           "letters": ser.word_to_json(nf), "norm": nf.norm}
    if args.out:
        ser.dump_path(args.out, doc)
    _print(doc)
    return 0


# -- tree ---------------------------------------------------------------------

def cmd_tree_ball(args) -> int:
    g = ser.gog_from_json(ser.load_path(args.gog))
    ball = build_ball(g, args.radius)
    doc = ser.ball_to_json(ball)
    if args.out:
        ser.dump_path(args.out, doc)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_tree(ball))
    if not args.out:
        _print(doc)
    return 0


def cmd_tree_arboreal(args) -> int:
    g = ser.gog_from_json(ser.load_path(args.gog))
    ball = build_ball(g, args.radius)
    fam = ball.arboreal_family()
    doc = {"format": "arboreal-family", "version": 1,
           "x": [{"v": v, "e": e, "components": list(cs)}
                 for (v, e), cs in sorted(fam.x_parts.items())],
           "z": [{"s": s, "component": c}
                 for s, c in sorted(fam.z_parts.items())]}
    if args.out:
        ser.dump_path(args.out, doc)
    _print(doc)
    return 0


def cmd_tree_subgroup(args) -> int:
    from .tree import subgroup_components
    g = ser.gog_from_json(ser.load_path(args.gog))
    rot = {k: ser.parse_rational(v)
           for k, v in ser.load_path(args.rot).items()}
    pi = pi_morphism(g, rot)
    ball = build_ball(g, args.radius)
    dec = subgroup_components(g, pi, ball)
    doc = {"format": "subgroup-decomposition", "version": 1,
           "modulus": pi.modulus,
           "domainVertices": list(dec.t_h_vertices),
           "components": dec.component_count,
           "iota": {str(k): v for k, v in sorted(dec.iota.items())},
           "rank": dec.rank,
           "kernelGenerators": [ser.word_to_json(h)
                                for h in dec.kernel_generators]}
    if args.out:
        ser.dump_path(args.out, doc)
    _print(doc)
    return 0


# -- realize ------------------------------------------------------------------

def _sigma_from_file(n, path) -> SignedPermutation:
    doc = ser.load_path(path)
    try:
        return SignedPermutation.from_dict(
            n, {int(k): int(v) for k, v in doc.items()})
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad permutation file: {exc}") from None


def cmd_realize_semidirect(args) -> int:
    if args.sigma:
        sigma = _sigma_from_file(args.n, args.sigma)
    elif args.cyclic:
        sigma = SignedPermutation.cyclic(args.n)
    else:
        sigma = SignedPermutation.identity(args.n)
    real = realize_semidirect(args.n, args.m, sigma,
                              default_params(args.n, args.m, sigma,
                                             args.variant))
    g, action, rot, _ = real.marking()
    ser.dump_path(args.out_action,
                  ser.action_to_json(g, action.vertex_maps,
                                     action.stable_maps, rot))
    theta = real.suggested_theta()
    if args.out_theta:
        if theta is None:
            raise FormatError("no tight partition for this permutation "
                              "(inverting cycles or a degenerate minimal set)")
        ser.dump_path(args.out_theta, ser.theta_to_json(theta))
    if args.svg and theta is not None:
        with open(args.svg, "w") as fh:
            fh.write(render_partition(theta))
    _print({"format": "realized", "version": 1,
            "generators": real.n, "rotationOrder": real.m,
            "theta": theta is not None})
    return 0


def cmd_realize_freeproduct(args) -> int:
    fr = realize_free_product(args.p, args.q,
                              default_free_product_params(args.p, args.q,
                                                          args.variant))
    rot = {"vp": Fraction(1, args.p), "vq": Fraction(1, args.q)}
    ser.dump_path(args.out_action,
                  ser.action_to_json(fr.graph, fr.action.vertex_maps,
                                     fr.action.stable_maps, rot))
    if args.out_theta:
        ser.dump_path(args.out_theta, ser.theta_to_json(fr.theta))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_partition(fr.theta))
    _print({"format": "realized", "version": 1, "p": args.p, "q": args.q})
    return 0


# -- checks -------------------------------------------------------------------

def cmd_check(args) -> int:
    if args.kind == "action":
        g, vmaps, smaps, _ = ser.action_from_json(ser.load_path(args.action))
        g.assert_valid()
        return _emit_report(marked_action_report(MarkedAction(g, vmaps, smaps)),
                            args.out)
    action = _load_action(args.action)
    theta = ser.theta_from_json(ser.load_path(args.theta))
    if args.kind == "if":
        return _emit_report(check_interactive_family(action, theta), args.out)
    if args.kind == "proper":
        return _emit_report(check_proper(action, theta), args.out)
    if args.kind == "ppp":
        return _emit_report(check_ppp(action, theta), args.out)
    if args.kind == "faithful":
        ppp = check_ppp(action, theta)
        proper = check_proper(action, theta)
        return _emit_report(ppp.merged(proper), args.out)
    raise FormatError(f"unknown check kind {args.kind!r}")


# -- refinement and equivalence -------------------------------------------------

def cmd_refine(args) -> int:
    action = _load_action(args.action)
    theta = ser.theta_from_json(ser.load_path(args.theta))
    if args.until_proper:
        theta_k, k = refine_until_proper(action, theta, args.k)
        _print({"format": "refined", "version": 1, "k": k})
    else:
        theta_k = theta
        for _ in range(args.k):
            theta_k = refine(action, theta_k)
        _print({"format": "refined", "version": 1, "k": args.k})
    if args.out:
        ser.dump_path(args.out, ser.theta_to_json(theta_k))
    return 0


def cmd_equiv(args) -> int:
    a1 = _load_action(args.action1)
    t1 = ser.theta_from_json(ser.load_path(args.theta1))
    a2 = _load_action(args.action2)
    t2 = ser.theta_from_json(ser.load_path(args.theta2))
    eq = find_equivalence(a1, t1, a2, t2)
    if eq is None:
        _print({"format": "equivalence", "version": 1, "found": False})
        return 1
    if args.out:
        ser.dump_path(args.out, ser.equivalence_to_json(eq))
    rep = check_equivalence(a1, t1, a2, t2, eq)
    _print({"format": "equivalence", "version": 1, "found": True,
            "mapping": list(eq.mapping), "ok": rep.ok})
    return 0 if rep.ok else 1


def cmd_semiconj(args) -> int:
    a1 = _load_action(args.action1)
    t1 = ser.theta_from_json(ser.load_path(args.theta1))
    a2 = _load_action(args.action2)
    t2 = ser.theta_from_json(ser.load_path(args.theta2))
    eq = find_equivalence(a1, t1, a2, t2)
    if eq is None:
        _print({"format": "semiconjugacy", "version": 1, "found": False})
        return 1
    sc = semiconjugacy(eq, a1, t1, a2, t2, args.depth)
    rep = check_equivariance(a1, a2, sc)
    doc = ser.semiconj_to_json(sc)
    doc["equivariant"] = rep.ok
    doc["monotone"] = sc.monotone_ok()
    if args.out:
        ser.dump_path(args.out, doc)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_semiconjugacy(sc))
    _print({"format": "semiconjugacy", "version": 1, "found": True,
            "pairs": len(sc.pairs), "equivariant": rep.ok,
            "monotone": sc.monotone_ok()})
    return 0 if rep.ok else 1


# -- dkn ----------------------------------------------------------------------

def cmd_dkn(args) -> int:
    action = _load_action(args.action)
    ball = build_ball(action.g, args.radius)
    delta = ser.parse_rational(args.delta)
    ests, shell = dkn_estimates(action, ball, args.norm_cutoff, delta,
                                args.grid)
    doc = {"format": "dkn-estimates", "version": 1,
           "cutoff": args.norm_cutoff, "delta": rat_str(delta),
           "grid": args.grid,
           "estimates": {str(c): ser.union_to_json(a.estimate)
                         for c, a in sorted(ests.items())},
           "diagnostics": {
               "maxImagePerLevel": {
                   str(k): rat_str(v)
                   for k, v in sorted(shell.level_max_image.items())}}}
    code = 0
    if args.theta:
        theta = ser.theta_from_json(ser.load_path(args.theta))
        lam = estimate_minimal_set(action, theta, args.depth).final
        doc["minimalSetCover"] = ser.union_to_json(lam)
        red = hat_reduce(ests, lam)
        assembled = assemble_theta(ball, red)
        doc["assembled"] = ser.theta_to_json(assembled)
        rep = check_dkn_properties(action, ball, ests, lam, args.grid)
        doc["properties"] = ser.report_to_json(rep)
        code = 0 if rep.ok else 1
        if args.svg:
            with open(args.svg, "w") as fh:
                fh.write(render_partition(assembled))
    if args.out:
        ser.dump_path(args.out, doc)
    else:
        _print(doc)
    return code


# -- render ---------------------------------------------------------------------

def cmd_render(args) -> int:
    if args.kind == "partition":
        theta = ser.theta_from_json(ser.load_path(args.input))
        out = render_partition(theta)
    elif args.kind == "tree":
        g = ser.gog_from_json(ser.load_path(args.input))
        out = render_tree(build_ball(g, args.radius))
    elif args.kind == "semiconj":
        doc = ser.load_path(args.input)
        if doc.get("format") != "semiconjugacy":
            raise FormatError("expected a semiconjugacy document")
        from .refine import SemiConjugacy
        pairs = tuple((ser.parse_rational(p["x"]),
                       tuple(ser.parse_rational(y) for y in p["y"]))
                      for p in doc["pairs"])
        sc = SemiConjugacy(doc["depth"], pairs,
                           pairs[0][1][0] if pairs else Fraction(0))
        out = render_semiconjugacy(sc)
    else:
        raise FormatError(f"unsupported render kind {args.kind!r}")
    with open(args.out, "w") as fh:
        fh.write(out)
    return 0


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pingpong",
        description="exact ping-pong partitions for virtually free groups "
                    "of circle homeomorphisms")
    sub = ap.add_subparsers(dest="command", required=True)

    gog = sub.add_parser("gog", help="graph-of-groups utilities")
    gsub = gog.add_subparsers(dest="sub", required=True)
    gv = gsub.add_parser("validate")
    gv.add_argument("--gog", required=True)
    gv.set_defaults(fn=cmd_gog_validate)
    gn = gsub.add_parser("normalize")
    gn.add_argument("--gog", required=True)
    gn.add_argument("--word", required=True)
    gn.add_argument("--out")
    gn.set_defaults(fn=cmd_gog_normalize)

    tree = sub.add_parser("tree", help="Bass-Serre tree balls")
    tsub = tree.add_subparsers(dest="sub", required=True)
    tb = tsub.add_parser("ball")
    tb.add_argument("--gog", required=True)
    tb.add_argument("--radius", type=int, default=3)
    tb.add_argument("--out")
    tb.add_argument("--svg")
    tb.set_defaults(fn=cmd_tree_ball)
    ta = tsub.add_parser("arboreal")
    ta.add_argument("--gog", required=True)
    ta.add_argument("--radius", type=int, default=3)
    ta.add_argument("--out")
    ta.set_defaults(fn=cmd_tree_arboreal)
    ts = tsub.add_parser("subgroup")
    ts.add_argument("--gog", required=True)
    ts.add_argument("--rot", required=True)
    ts.add_argument("--radius", type=int, default=4)
    ts.add_argument("--out")
    ts.set_defaults(fn=cmd_tree_subgroup)

    real = sub.add_parser("realize", help="explicit PL realizations")
    rsub = real.add_subparsers(dest="sub", required=True)
    rs = rsub.add_parser("semidirect")
    rs.add_argument("--n", type=int, required=True)
    rs.add_argument("--m", type=int, required=True)
    rs.add_argument("--sigma", help="JSON file mapping 1..n to signed images")
    rs.add_argument("--cyclic", action="store_true",
                    help="use the cyclic permutation")
    rs.add_argument("--variant", type=int, default=0)
    rs.add_argument("--out-action", required=True)
    rs.add_argument("--out-theta")
    rs.add_argument("--svg")
    rs.set_defaults(fn=cmd_realize_semidirect)
    rf = rsub.add_parser("freeproduct")
    rf.add_argument("--p", type=int, required=True)
    rf.add_argument("--q", type=int, required=True)
    rf.add_argument("--variant", type=int, default=0)
    rf.add_argument("--out-action", required=True)
    rf.add_argument("--out-theta")
    rf.add_argument("--svg")
    rf.set_defaults(fn=cmd_realize_freeproduct)

    chk = sub.add_parser("check", help="verification of actions and partitions")
    chk.add_argument("kind",
                     choices=["action", "if", "proper", "ppp", "faithful"])
    chk.add_argument("--action", required=True)
    chk.add_argument("--theta")
    chk.add_argument("--out")
    chk.set_defaults(fn=cmd_check)

    ref = sub.add_parser("refine", help="partition refinement")
    ref.add_argument("--action", required=True)
    ref.add_argument("--theta", required=True)
    ref.add_argument("--k", type=int, default=1)
    ref.add_argument("--until-proper", action="store_true")
    ref.add_argument("--out")
    ref.set_defaults(fn=cmd_refine)

    eqp = sub.add_parser("equiv", help="find and verify a ping-pong equivalence")
    for i in ("1", "2"):
        eqp.add_argument(f"--action{i}", required=True)
        eqp.add_argument(f"--theta{i}", required=True)
    eqp.add_argument("--out")
    eqp.set_defaults(fn=cmd_equiv)

    scp = sub.add_parser("semiconj", help="matched endpoints of two actions")
    for i in ("1", "2"):
        scp.add_argument(f"--action{i}", required=True)
        scp.add_argument(f"--theta{i}", required=True)
    scp.add_argument("--depth", type=int, default=2)
    scp.add_argument("--out")
    scp.add_argument("--svg")
    scp.set_defaults(fn=cmd_semiconj)

    dk = sub.add_parser("dkn", help="empirical contraction-set estimates")
    dk.add_argument("--action", required=True)
    dk.add_argument("--theta", help="partition used for the minimal-set cover")
    dk.add_argument("--norm-cutoff", type=int, default=6)
    dk.add_argument("--delta", default="1/64")
    dk.add_argument("--grid", type=int, default=9)
    dk.add_argument("--depth", type=int, default=4)
    dk.add_argument("--radius", type=int, default=2)
    dk.add_argument("--out")
    dk.add_argument("--svg")
    dk.set_defaults(fn=cmd_dkn)

    ren = sub.add_parser("render", help="deterministic SVG figures")
    ren.add_argument("--kind", required=True,
                     choices=["partition", "tree", "semiconj"])
    ren.add_argument("--in", dest="input", required=True)
    ren.add_argument("--radius", type=int, default=2)
    ren.add_argument("--out", required=True)
    ren.set_defaults(fn=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, KeyError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ResourceLimit, BallExhausted, RefinementExhausted,
            NotFundamentalDomain, InfeasibleParams, RecursionError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
