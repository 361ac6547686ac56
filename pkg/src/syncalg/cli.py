"""Command-line front end.

    syncalg check-laws --model M [--laws GLOB] [--exhaustive] ...
    syncalg refine    --model M LHS RHS
    syncalg equal     --model M LHS RHS
    syncalg normalize --model M EXPR
    syncalg replay    --model M FILE
    syncalg quintuple --model M PRED RELY GUAR POST CMD

Exit status: 0 when every check holds, 1 when a check fails, 2 on usage
or model errors, 3 when a bound was exhausted before a verdict.
"""

from __future__ import annotations

import argparse
import sys

from .decide import Bounds, check_quintuple, equal_bounded, refines_bounded
from .laws import (LawError, Sampler, check_law, replay_derivation,
                   select_laws)
from .models import ModelError, load_model
from .parser import ParseError, parse, render
from .universe import UniverseError


class _Usage(Exception):
    pass


def _build_argparser():
    ap = argparse.ArgumentParser(prog="syncalg",
                                 description="bounded checking for a "
                                             "synchronous refinement algebra")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--model", required=True,
                       help="model file (or the name of a bundled one)")
        p.add_argument("--depth", type=int, default=5,
                       help="finite behaviour length bound (default 5)")
        p.add_argument("--lasso", type=int, default=4,
                       help="lasso cycle length bound (default 4)")
        p.add_argument("--seed", type=int, default=0,
                       help="sampling seed (default 0)")

    p = sub.add_parser("check-laws", help="check the law catalog")
    common(p)
    p.add_argument("--laws", default=None, metavar="GLOB",
                   help="only laws whose name matches this glob")
    p.add_argument("--exhaustive", action="store_true",
                   help="enumerate all bindings over finite sorts")
    p.add_argument("--samples", type=int, default=30,
                   help="random bindings per law (default 30)")

    for name, nargs in (("refine", 2), ("equal", 2), ("normalize", 1)):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("exprs", nargs=nargs, metavar="EXPR")

    p = sub.add_parser("replay", help="replay a derivation script")
    common(p)
    p.add_argument("script", metavar="FILE")

    p = sub.add_parser("quintuple",
                       help="check {p};(rely r && guar g && spec q) <= c")
    common(p)
    p.add_argument("exprs", nargs=5, metavar="ARG",
                   help="PRED RELY GUAR POST CMD")
    return ap


def _named_or_literal(text, uni, tables):
    from .laws import parse_value
    for table in tables:
        if text in table:
            return table[text]
    return parse_value(text, "rel", uni)


def _run(args, out):
    uni = load_model(args.model)
    bounds = Bounds(maxlen=args.depth, maxlassolen=args.lasso)

    if args.cmd == "check-laws":
        laws = select_laws(args.laws)
        laws = [l for l in laws if l.applicable(uni)]
        if not laws:
            raise _Usage("no laws match %r for this model" % (args.laws,))
        sampler = Sampler(uni, seed=args.seed, exhaustive=args.exhaustive,
                          samples=args.samples)
        worst = 0
        for law in sorted(laws, key=lambda l: l.name):
            rep = check_law(law, uni, bounds, sampler)
            out.write(rep.line() + "\n")
            for d in rep.details:
                out.write("    %s\n" % d)
            if rep.outcome == "RESOURCE":
                worst = max(worst, 3)
            elif rep.outcome != "PASS":
                worst = max(worst, 1)
        return worst

    if args.cmd == "normalize":
        out.write(render(parse(args.exprs[0], uni)) + "\n")
        return 0

    if args.cmd in ("refine", "equal"):
        lhs = parse(args.exprs[0], uni)
        rhs = parse(args.exprs[1], uni)
        fn = refines_bounded if args.cmd == "refine" else equal_bounded
        v = fn(uni, lhs, rhs, bounds)
        out.write(v.render(uni) + "\n")
        return {"holds": 0, "fails": 1}.get(v.outcome, 3)

    if args.cmd == "replay":
        with open(args.script) as fh:
            text = fh.read()
        res = replay_derivation(uni, text, bounds)
        out.write("replay %s (%d steps)%s\n"
                  % (res.outcome, res.steps,
                     ": " + res.diagnostic if res.diagnostic else ""))
        return 0 if res.holds else 1

    if args.cmd == "quintuple":
        ptext, rtext, gtext, qtext, ctext = args.exprs
        from .laws import parse_value
        p = parse_value(ptext, "pred", uni)
        r = parse_value(rtext, "rel", uni)
        g = parse_value(gtext, "rel", uni)
        q = parse_value(qtext, "strel", uni)
        c = parse(ctext, uni)
        v = check_quintuple(uni, p, r, g, q, c, bounds)
        out.write(v.render(uni) + "\n")
        return {"holds": 0, "fails": 1}.get(v.outcome, 3)

    raise _Usage("unknown command %r" % args.cmd)


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = _build_argparser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return _run(args, out)
    except (_Usage, ModelError, ParseError, UniverseError, LawError,
            OSError) as e:
        sys.stderr.write("error: %s\n" % e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
