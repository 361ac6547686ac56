"""Bounded refinement/equality decisions and their witnesses."""

import syncalg.terms as T
from syncalg.decide import (Bounds, check_quintuple, equal_bounded,
                            refines_bounded)
from syncalg.parser import parse
from syncalg.semantics import Behaviour, Lasso


def test_reflexive_and_bottom_top(rel_uni):
    u = rel_uni
    c = parse("(pgm(r0) ; env(id))^w", u)
    assert refines_bounded(u, c, c).holds
    assert refines_bounded(u, T.BOT, c).holds  # bot is refined by anything
    assert refines_bounded(u, c, T.TOP).holds  # top refines anything
    assert not refines_bounded(u, T.TOP, T.BOT).holds


def test_choice_is_refined_by_its_branches(rel_uni):
    u = rel_uni
    a, b = parse("pgm(r0)", u), parse("env(full)", u)
    assert refines_bounded(u, T.choice(a, b), a).holds
    assert refines_bounded(u, T.choice(a, b), b).holds
    assert not refines_bounded(u, a, T.choice(a, b)).holds


def test_failure_yields_minimal_finite_witness(rel_uni):
    u = rel_uni
    a = parse("alpha", u)
    v = refines_bounded(u, T.seq(a, a), a)  # one step is not two
    assert v.outcome == "fails"
    assert isinstance(v.witness, Behaviour)
    assert len(v.witness.steps) <= 1
    assert "fails" in v.render(u)


def test_omega_nil_equals_bot(rel_uni):
    u = rel_uni
    assert equal_bounded(u, parse("nil^w", u), parse("bot", u)).holds


def test_finite_vs_omega_needs_a_lasso(rel_uni):
    u = rel_uni
    v = equal_bounded(u, parse("alpha^*", u), parse("alpha^w", u))
    assert v.outcome == "fails"
    assert isinstance(v.witness, Lasso)


def test_equal_reports_which_side(rel_uni):
    u = rel_uni
    a = parse("alpha", u)
    v = equal_bounded(u, a, T.choice(a, T.NIL))
    assert v.outcome == "fails"
    assert "right side" in v.diagnostic
    v = equal_bounded(u, T.choice(a, T.NIL), a)
    assert v.outcome == "fails"
    assert "left side" in v.diagnostic


def test_custom_bounds_change_visibility(rel_uni):
    u = rel_uni
    a = parse("alpha", u)
    five = T.seq(a, T.seq(a, T.seq(a, T.seq(a, a))))
    # at depth 2 the five-step difference is invisible
    shallow = Bounds(maxlen=2, maxlassolen=2)
    assert refines_bounded(u, five, T.seq(a, five), shallow).holds
    deep = Bounds(maxlen=6, maxlassolen=2)
    assert not refines_bounded(u, five, T.seq(a, five), deep).holds


def test_resource_exhaustion_is_reported(rel_uni):
    u = rel_uni
    c = parse("(pgm(full) \\/ env(full))^w", u)
    tight = Bounds(maxlen=5, maxlassolen=4, residual_cap=3)
    v = refines_bounded(u, c, T.seq(c, c), tight)
    assert v.outcome == "resource_exhausted"
    assert "cap" in v.diagnostic


def test_quintuple_holds_and_fails(rel_uni):
    u = rel_uni
    full = u.relations["full"]
    ident = u.relations["id"]
    p = frozenset(u.states)
    q = frozenset((s1, s2) for s1 in u.states for s2 in u.states)
    # finitely many id-steps establish the anything-goes postcondition
    c = parse("pgm(id)^* ; env(full)^w", u)
    assert check_quintuple(u, p, full, full, q, c).holds
    # but cannot establish the empty postcondition
    assert not check_quintuple(u, p, full, full, frozenset(), c).holds
    # guarantee violation: program takes steps outside id
    d = parse("pgm(full)^* ; env(full)^w", u)
    assert not check_quintuple(u, p, full, ident, q, d).holds
