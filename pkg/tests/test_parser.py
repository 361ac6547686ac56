"""Concrete syntax round-trips and parse errors."""

import itertools

import pytest

from syncalg.parser import ParseError, parse, render

REL_ATOMS = [
    "bot", "top", "nil", "skip", "chaos", "term", "alpha", "eps", "pistep",
    "test({s0})", "test({s0,s1})", "test(p0)", "test({})",
    "assert({s1})", "assert(p1)",
    "pgm({(s0,s1)})", "pgm(r0)", "env({(s1,s1)})", "env(id)", "pgm({})",
    "astep({(s0,s0)};{(s1,s1)})", "astep({};{})",
    "assumestep({(s0,s1)};{(s0,s0),(s1,s1)})",
    "assume({(s0,s1)})", "assume(r0)",
    "guar({(s0,s1)})", "guar(full)", "rely(id)", "spec(r0)",
]

EV_ATOMS = [
    "bot", "top", "nil", "skip", "chaos", "term", "alpha", "eps",
    "atev(a)", "atev(b)", "atev(a~)", "atev(tau)",
    "guar({a,b})", "guar(AB)",
    "restrict[a,a~](atev(b))", "restrict[AB](atev(tau))",
    "parcsp[a](atev(a), atev(a))", "parcsp[a,b](atev(a), nil)",
    "hide[a](atev(a))", "rename[swap](atev(a))", "rename[a->b](atev(a))",
    "rename[](atev(b))",
]

OPS = ["({0} ; {1})", "({0} \\/ {1})", "({0} || {1})", "({0} && {1})",
       "({0} /\\ {1})", "{0}^*", "{0}^w", "{0}^inf"]


def _corpus(atoms):
    out = list(atoms)
    for (i, pat) in enumerate(OPS):
        for (j, a) in enumerate(atoms):
            b = atoms[(j * 7 + i) % len(atoms)]
            out.append(pat.format(a, b))
    # some deeper nestings
    for a, b, c in itertools.islice(itertools.combinations(atoms, 3), 12):
        out.append("((%s ; %s)^w \\/ (%s && %s))" % (a, b, c, a))
        out.append("(%s ; (%s \\/ %s))^*" % (c, a, b))
    return out


def _roundtrip(uni, exprs):
    for s in exprs:
        t = parse(s, uni)
        assert parse(render(t), uni) is t, s


def test_roundtrip_rel_corpus(rel_uni):
    exprs = _corpus(REL_ATOMS)
    assert len(exprs) > 100
    _roundtrip(rel_uni, exprs)


def test_roundtrip_event_corpus(ev_uni):
    exprs = _corpus(EV_ATOMS)
    assert len(exprs) > 100
    _roundtrip(ev_uni, exprs)


def test_precedence():
    # iteration binds tighter than ; which binds tighter than || / \/
    from syncalg.models import builtin_model_path, load_model
    u = load_model(builtin_model_path("two_state.model"))
    assert parse("pgm(r0) ; pgm(id)^w", u) is parse("pgm(r0) ; (pgm(id)^w)", u)
    assert (parse("pgm(r0) ; nil \\/ pgm(id)", u)
            is parse("(pgm(r0) ; nil) \\/ pgm(id)", u))
    assert (parse("pgm(r0) ; nil || pgm(id)", u)
            is parse("(pgm(r0) ; nil) || pgm(id)", u))


@pytest.mark.parametrize("bad", [
    "", "(", "nil nil", "test(s0)", "pgm(r9)", "assume", "nil ;", "{s0}",
    "test({s0)",
])
def test_parse_errors_rel(rel_uni, bad):
    from syncalg.terms import TermError
    from syncalg.universe import UniverseError
    with pytest.raises((ParseError, UniverseError, TermError)):
        parse(bad, rel_uni)


def test_metavariables_parse(rel_uni):
    t = parse("(?c ; pgm(r0))", rel_uni)
    assert render(t).startswith("(?c")
