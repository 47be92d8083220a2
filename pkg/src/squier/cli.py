"""Command-line front end.

Exit codes: 0 for success or a true predicate, 1 for a false predicate,
2 for malformed input or exceeded resource caps.

Argument conventions:
  pictures   @FILE (picture text format), tree:BRACKET (over <x|x=xx>),
             word:GENERATORS (e.g. "word:x0 x1^-1"), or - for stdin
  vertices   base, tree:BRACKET, grid:M,N, gridhat:M,N, full:M, or @FILE
  hyperplanes  addr:BITS (binary caret address; addr: alone is the root)
  labelled trees  bracket with @COEFF on maximal carets, e.g.
             "((. .)@0.5 .)"
"""

import argparse
import math
import sys

from squier import complex as cx
from squier import embed, hyperplane, profile, thompson, verify
from squier.picture import (
    PLANAR,
    PictureError,
    canonical_serialize,
    concatenate,
    equal_mod_dipoles,
    invert_picture,
    parse_picture,
    promote_variant,
    reduce_picture,
    common_variant,
)
from squier.trees import parse_bracket, tree_picture


class CliError(ValueError):
    pass


def _read_picture(spec, variant=None):
    if spec == "-":
        text = sys.stdin.read()
        p = parse_picture(text)
    elif spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as fh:
            p = parse_picture(fh.read())
    elif spec.startswith("tree:"):
        p = tree_picture(parse_bracket(spec[5:]), variant or PLANAR)
    elif spec.startswith("word:"):
        p = thompson.evaluate_word(spec[5:]).picture
    else:
        raise CliError("unrecognized picture argument %r" % spec)
    if variant:
        p = promote_variant(p, variant)
    return p


def _read_vertex(spec, variant=PLANAR):
    if spec == "base":
        return cx.base_vertex("x", variant)
    if spec.startswith("tree:"):
        return cx.vertex_of(tree_picture(parse_bracket(spec[5:]), variant))
    if spec.startswith("grid:"):
        m, n = (int(x) for x in spec[5:].split(","))
        return thompson.grid_tree(m, n, variant)
    if spec.startswith("gridhat:"):
        m, n = (int(x) for x in spec[8:].split(","))
        return thompson.grid_tree_hat(m, n, variant)
    if spec.startswith("full:"):
        return thompson.full_tree(int(spec[5:]), variant)
    if spec.startswith("@") or spec == "-":
        return cx.vertex_of(_read_picture(spec, variant))
    raise CliError("unrecognized vertex argument %r" % spec)


def _read_hyperplane(spec, variant=PLANAR):
    if spec.startswith("addr:"):
        bits = spec[5:]
        if any(ch not in "01" for ch in bits):
            raise CliError("address must be a binary string")
        return hyperplane.hyperplane_at_address(bits, variant)
    raise CliError("unrecognized hyperplane argument %r" % spec)


def _show_vertex(v):
    return v.bracket if v.bracket is not None else v.key_text


def _bool_exit(value, out):
    print("true" if value else "false", file=out)
    return 0 if value else 1


def main(argv=None, out=sys.stdout):
    parser = argparse.ArgumentParser(
        prog="squier", description="semigroup pictures and diagram complexes"
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("reduce", help="reduce a picture to its normal form")
    sp.add_argument("picture", nargs="?", default="-")
    sp.add_argument("--variant")

    sp = sub.add_parser("mul", help="concatenate two pictures and reduce")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = sub.add_parser("inv", help="invert a picture")
    sp.add_argument("picture", nargs="?", default="-")

    sp = sub.add_parser("eq", help="equality modulo dipoles")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = sub.add_parser("ball", help="enumerate a ball around the base vertex")
    sp.add_argument("--word", default="x")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--variant", default=PLANAR)
    sp.add_argument("--dot", help="also write DOT output to this file")

    sp = sub.add_parser("dist", help="edge distance between two vertices")
    sp.add_argument("v1")
    sp.add_argument("v2")
    sp.add_argument("--variant", default=PLANAR)

    sp = sub.add_parser("cubes", help="cubes incident to a vertex")
    sp.add_argument("--at", required=True)
    sp.add_argument("--variant", default=PLANAR)
    sp.add_argument("--max-dim", type=int)

    sp = sub.add_parser("hyp", help="hyperplane predicates")
    sp.add_argument("op", choices=("min", "separates", "leq", "meet"))
    sp.add_argument("--vertex")
    sp.add_argument("--transistor", type=int)
    sp.add_argument("--hyp")
    sp.add_argument("--h1")
    sp.add_argument("--h2")
    sp.add_argument("--variant", default=PLANAR)

    sp = sub.add_parser("act", help="apply a generator word to a vertex")
    sp.add_argument("--element", required=True)
    sp.add_argument("--vertex", required=True)
    sp.add_argument("--variant", default=PLANAR)

    sp = sub.add_parser("relcheck", help="does a generator word reduce to 1")
    sp.add_argument("--word", required=True)

    sp = sub.add_parser("linkcheck", help="grid-tree link condition")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("profile", help="truncated profile operations")
    sp.add_argument("op", choices=("gen", "act", "fixed"))
    sp.add_argument("--kind", choices=profile.PROFILE_KINDS, required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--element")

    sp = sub.add_parser("embed", help="Hilbert-space embedding operations")
    sp.add_argument("op", choices=("rho", "dist", "displace", "search"))
    sp.add_argument("--vertex")
    sp.add_argument("--v1")
    sp.add_argument("--v2")
    sp.add_argument("--tree")
    sp.add_argument("--m", type=int)
    sp.add_argument("--bound", type=float)
    sp.add_argument("--variant", default=PLANAR)

    sp = sub.add_parser("verify-all", help="run the acceptance battery")
    sp.add_argument("--depth", type=int, default=12)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args, out)
    except (PictureError, CliError, cx.ComplexError, profile.ProfileError,
            thompson.ThompsonError, embed.EmbedError, hyperplane.HyperplaneError,
            OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def _dispatch(args, out):
    if args.verb == "reduce":
        p = _read_picture(args.picture, args.variant)
        out.write(canonical_serialize(reduce_picture(p)))
        return 0
    if args.verb == "mul":
        a = _read_picture(args.left)
        b = _read_picture(args.right)
        target = common_variant(a, b)
        a, b = promote_variant(a, target), promote_variant(b, target)
        out.write(canonical_serialize(reduce_picture(concatenate(a, b))))
        return 0
    if args.verb == "inv":
        out.write(canonical_serialize(invert_picture(_read_picture(args.picture))))
        return 0
    if args.verb == "eq":
        a = _read_picture(args.left)
        b = _read_picture(args.right)
        target = common_variant(a, b)
        return _bool_exit(
            equal_mod_dipoles(promote_variant(a, target), promote_variant(b, target)),
            out,
        )
    if args.verb == "ball":
        g = cx.ball(args.word, args.radius, args.variant)
        out.write(g.serialize())
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(cx.export_dot(g))
        return 0
    if args.verb == "dist":
        v1 = _read_vertex(args.v1, args.variant)
        v2 = _read_vertex(args.v2, args.variant)
        print(cx.edge_distance(v1, v2), file=out)
        return 0
    if args.verb == "cubes":
        v = _read_vertex(args.at, args.variant)
        for c in cx.cubes_at(v, max_dim=args.max_dim):
            whites = ",".join(sorted(str(k) for k in c.whites))
            print(
                "cube dim=%d max=%s whites=%s"
                % (c.dimension, _show_vertex(c.max_corner()), whites),
                file=out,
            )
        return 0
    if args.verb == "hyp":
        return _dispatch_hyp(args, out)
    if args.verb == "act":
        g = thompson.evaluate_word(args.element)
        v = _read_vertex(args.vertex, args.variant)
        print(_show_vertex(thompson.act(g, v)), file=out)
        return 0
    if args.verb == "relcheck":
        return _bool_exit(thompson.check_relation(args.word), out)
    if args.verb == "linkcheck":
        return _bool_exit(thompson.link_condition_check(args.m, args.n), out)
    if args.verb == "profile":
        return _dispatch_profile(args, out)
    if args.verb == "embed":
        return _dispatch_embed(args, out)
    if args.verb == "verify-all":
        results = verify.run_all(depth=args.depth, report=lambda s: print(s, file=out))
        return 0 if all(r.ok for r in results) else 1
    raise CliError("unknown verb %r" % args.verb)


def _dispatch_hyp(args, out):
    if args.op == "min":
        v = _read_vertex(args.vertex, args.variant)
        h = hyperplane.min_vertex(v, args.transistor)
        print("@%s" % h.address if h.address is not None else h.min_vertex.key_text, file=out)
        return 0
    if args.op == "separates":
        h = _read_hyperplane(args.hyp, args.variant)
        v = _read_vertex(args.vertex, args.variant)
        return _bool_exit(hyperplane.separates(h, v), out)
    h1 = _read_hyperplane(args.h1, args.variant)
    h2 = _read_hyperplane(args.h2, args.variant)
    if args.op == "leq":
        return _bool_exit(hyperplane.halfspace_leq(h1, h2), out)
    return _bool_exit(hyperplane.halfspaces_intersect(h1, h2), out)


def _dispatch_profile(args, out):
    if args.op == "gen":
        tp = profile.canonical_profile(args.kind, args.depth)
        print(profile.profile_bracket(tp), file=out)
        return 0
    if not args.element:
        raise CliError("profile %s needs --element" % args.op)
    g = thompson.evaluate_word(args.element)
    if args.op == "act":
        tp = profile.canonical_profile(args.kind, args.depth)
        moved = profile.act_profile(g, tp)
        bracket = profile.profile_bracket(moved)
        if bracket is None:
            out.write(canonical_serialize(moved.picture))
            print("markers: %s" % "".join(moved.markers), file=out)
        else:
            print(bracket, file=out)
        print("depth: %d" % moved.depth, file=out)
        return 0
    return _bool_exit(profile.is_fixed_to_depth(g, args.kind, args.depth), out)


def _dispatch_embed(args, out):
    if args.op == "rho":
        v = _read_vertex(args.vertex, args.variant)
        print(embed.rho_vertex(v).render(), file=out)
        return 0
    if args.op == "dist":
        v1 = _read_vertex(args.v1, args.variant)
        v2 = _read_vertex(args.v2, args.variant)
        d = embed.l2_distance(embed.rho_vertex(v1), embed.rho_vertex(v2))
        print("%.12g" % d, file=out)
        return 0
    if args.op == "displace":
        t = embed.parse_labelled_bracket(args.tree)
        d2 = embed.displacement_squared(t)
        print("displacement: %.12g" % math.sqrt(d2), file=out)
        if t.is_all_ones():
            try:
                a, b, c, total = embed.displacement_decomposition(t)
                print("decomposition: %g + %g + %g = %g" % (a, b, c, total), file=out)
            except embed.EmbedError:
                pass
        return 0
    if args.op == "search":
        if args.m is None or args.bound is None:
            raise CliError("embed search needs --m and --bound")
        t = embed.search_low_displacement(args.m, args.bound)
        if t is None:
            print("NONE", file=out)
            return 1
        d = math.sqrt(embed.displacement_squared(t))
        print("%s displacement %.12g" % (t.bracket, d), file=out)
        return 0
    raise CliError("unknown embed op")


if __name__ == "__main__":
    sys.exit(main())
