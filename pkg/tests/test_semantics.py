"""Derivative-based membership oracle."""

import pytest

import syncalg.terms as T
from syncalg.semantics import (Behaviour, ResourceExhausted, Semantics,
                               SemanticsError, enumerate_finite,
                               distinct_lassos)


def _steps1(uni, state):
    return list(uni.steps_from(state))


def test_nil_admits_only_empty_terminated(rel_uni):
    sem = Semantics(rel_uni)
    for b in enumerate_finite(rel_uni, 2):
        expect = not b.steps and b.status == "terminated"
        assert sem.member(T.NIL, b) == expect


def test_top_admits_nothing(rel_uni):
    sem = Semantics(rel_uni)
    assert not any(sem.member(T.TOP, b) for b in enumerate_finite(rel_uni, 2))


def test_bot_admits_everything(rel_uni):
    sem = Semantics(rel_uni)
    assert all(sem.member(T.BOT, b) for b in enumerate_finite(rel_uni, 2))
    assert all(sem.member_lasso(T.BOT, l) for l in distinct_lassos(rel_uni, 2))


def test_atomic_membership(rel_uni):
    u = rel_uni
    sem = Semantics(u)
    a = T.atomic(u.alpha)
    for b in enumerate_finite(u, 2):
        expect = len(b.steps) == 1 and b.status == "terminated"
        assert sem.member(a, b) == expect


def test_abort_closure_extends_aborts(rel_uni):
    u = rel_uni
    sem = Semantics(u)
    a = T.atomic(u.alpha)
    t = T.seq(a, T.BOT)  # do one step, then abort
    for b in enumerate_finite(u, 3):
        assert sem.member(t, b) == (len(b.steps) >= 1)


def test_test_membership_depends_on_state(rel_uni):
    u = rel_uni
    sem = Semantics(u)
    t = T.test(frozenset({"s0"}), u)
    assert sem.member(t, Behaviour("s0", (), "terminated"))
    assert not sem.member(t, Behaviour("s1", (), "terminated"))
    assert not sem.member(t, Behaviour("s0", (), "aborted"))


def test_omega_vs_finite_iteration_on_lassos(rel_uni):
    u = rel_uni
    sem = Semantics(u)
    a = T.atomic(u.alpha)
    lassos = distinct_lassos(u, 3)
    assert lassos
    # a^w sustains every infinite run of steps; a^* admits none
    assert all(sem.member_lasso(T.om_iter(a), l) for l in lassos)
    assert not any(sem.member_lasso(T.fin_iter(a), l) for l in lassos)
    assert all(sem.member_lasso(T.inf_iter(a), l) for l in lassos)


def test_empty_body_iteration_diverges(rel_uni):
    """nil^w spins without taking steps, which is abort (= bot)."""
    sem = Semantics(rel_uni)
    t = T.om_iter(T.NIL)
    assert sem.aborts_now(t, "s0")
    assert all(sem.member(t, b) for b in enumerate_finite(rel_uni, 2))


def test_behaviour_chaining_validated(rel_uni):
    u = rel_uni
    sem = Semantics(u)
    s0_steps = _steps1(u, "s0")
    bad = [s for s in s0_steps if u.step_post(s) == "s0"]
    wrong = Behaviour("s1", (bad[0],), "terminated")  # does not chain from s1
    with pytest.raises(SemanticsError):
        sem.member(T.BOT, wrong)


def test_residual_cap_is_per_decision(rel_uni):
    u = rel_uni
    sem = Semantics(u, residual_cap=3)
    a = T.atomic(u.alpha)
    deep = T.seq(a, T.seq(a, T.seq(a, T.seq(a, a))))
    long_b = None
    for b in enumerate_finite(u, 5):
        if len(b.steps) == 5 and b.status == "terminated":
            long_b = b
            break
    with pytest.raises(ResourceExhausted):
        sem.member(deep, long_b)
    # the budget resets; cached residuals do not count again
    sem.reset_work()
    assert sem.member(deep, long_b)


def test_derived_forms_are_rejected_unexpanded(rel_uni):
    sem = Semantics(rel_uni)
    with pytest.raises(SemanticsError):
        sem.member(T.SKIP, Behaviour("s0", (), "terminated"))
