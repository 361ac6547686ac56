"""Release gate: the end-to-end checks every build must pass.

Eight independent criteria, each its own test: the axiom suite and the
derived-law suite run exhaustively over small finite universes, the
documented non-laws produce confirmed counterexamples, the least/greatest
fixed-point distinction is observable, the process-communication laws hold,
the bundled derivation scripts replay with every step oracle-verified, the
derivative-based membership agrees with an independent reference
denotation, and the parallel-introduction refinement holds end to end.
"""

import os
import random
import time

import pytest

import refmodel
import syncalg.terms as T
from syncalg.decide import Bounds, equal_bounded
from syncalg.laws import (Oracle, Sampler, check_law, desc_pool, get_law,
                          pred_pool, replay_derivation, select_laws)
from syncalg.models import builtin_model_path, load_model, parse_model
from syncalg.semantics import Lasso, Semantics, enumerate_finite

BOUNDS = Bounds(maxlen=5, maxlassolen=4)

DERIVATIONS = os.path.join(os.path.dirname(builtin_model_path("x")),
                           os.pardir, "derivations")

SEQ_AXIOMS = (
    "A-seq-assoc", "A-seq-identity", "A-seq-annihilation-left",
    "A-seq-distr-right", "A-seq-distr-left",
)
SYNC_AXIOMS = (
    "A-sync-assoc", "A-sync-comm", "A-sync-id-command",
    "A-sync-Inf-distrib", "A-sync-closed", "A-sync-id",
    "A-sync-weak-interchange-seq", "A-atomic-sync-interchange",
    "A-atomic-infiter-sync", "A-nil-sync-absorb", "A-nil-sync-atomic",
    "A-test-sync-interchange",
)
APPENDIX_LEMMAS = (
    "L-atomic-iteration-finite", "L-atomic-iteration-finite-infinite",
    "L-atomic-iteration-either", "L-iterations-with-abort",
    "L-assume-iter-conj-assume-iter", "L-assump-help1", "L-assump-help2",
    "L-assump-help3", "L-helper2",
)


@pytest.fixture(scope="module")
def one_state():
    """One state, two events: the smallest synchronising universe."""
    return parse_model("events: a b\n", name="one-state-two-event")


@pytest.fixture(scope="module")
def ccs2():
    return parse_model("events[ccs]: a b\n", name="ccs-two-event")


@pytest.fixture(scope="module")
def csp2():
    return parse_model("events[csp]: a b\n", name="csp-two-event")


def exhaustive(uni):
    return Sampler(uni, seed=0, exhaustive=True, samples=0)


def run_suite(uni, patterns):
    reports = {}
    for pat in patterns:
        for law in select_laws(pat, negatives=False):
            if law.applicable(uni):
                reports[law.name] = check_law(law, uni, BOUNDS,
                                              exhaustive(uni))
    return reports


def assert_all_pass(reports):
    for name, rep in sorted(reports.items()):
        assert rep.outcome == "PASS", "%s: %s" % (name, rep.details)
        assert rep.checked > 0, "%s checked no instances" % name


# -- 1. axiom suite --------------------------------------------------------

def test_axiom_suite_exhaustive_on_both_universes(one_state, rel_uni):
    start = time.monotonic()
    on_events = run_suite(one_state, ("A-*",))
    on_states = run_suite(rel_uni, ("A-*",))
    elapsed = time.monotonic() - start

    assert_all_pass(on_events)
    assert_all_pass(on_states)
    required = set(SEQ_AXIOMS) | set(SYNC_AXIOMS)
    # every listed axiom is covered wherever it is expressible
    assert required <= set(on_states)
    assert required - set(on_events) == {"A-test-sync-interchange"}
    # synchronisation axioms are checked in all three modes
    assert set(get_law("A-sync-assoc").modes) == {"par", "conj", "join"}
    assert elapsed <= 120.0, "axiom suite took %.1fs" % elapsed


# -- 2. derived-law suite --------------------------------------------------

def test_derived_law_suite_exhaustive(one_state, rel_uni):
    on_events = run_suite(one_state, ("L-*", "C-*"))
    start = time.monotonic()
    on_states = run_suite(rel_uni, ("L-*", "C-*"))
    elapsed = time.monotonic() - start

    assert_all_pass(on_events)
    assert_all_pass(on_states)
    assert set(APPENDIX_LEMMAS) <= set(on_events)
    assert set(APPENDIX_LEMMAS) <= set(on_states)
    # the rely/guarantee lemmas cover every relation of the 2-state universe
    assert on_states["L-rely-guar"].checked == 16
    assert on_states["L-combine-relies"].checked == 256
    assert elapsed <= 120.0, "2-state derived suite took %.1fs" % elapsed


# -- 3. negative laws ------------------------------------------------------

def test_non_laws_have_confirmed_counterexamples(rel_uni):
    u = rel_uni
    for name in ("N-strong-test-distribution",
                 "N-left-distribution-empty-choice", "N-sync-top"):
        law = get_law(name)
        rep = check_law(law, u, BOUNDS, exhaustive(u))
        assert rep.outcome == "PASS", "%s: no counterexample" % name
        assert rep.failed > 0 and rep.details
        # re-confirm one concrete counterexample directly with the oracle
        witnessed = False
        oracle = Oracle(u, BOUNDS)
        for b in exhaustive(u).bindings(law):
            if law.side is not None and not law.side(u, b, oracle):
                continue
            for (lhs, rhs) in law.build(u, b):
                v = equal_bounded(u, lhs, rhs, BOUNDS)
                if v.outcome == "fails":
                    assert v.witness is not None
                    witnessed = True
                    break
            if witnessed:
                break
        assert witnessed, "%s: oracle found no failing instance" % name


# -- 4. least vs greatest fixed points -------------------------------------

def _admits_cycle(uni, desc):
    """Is there a loop in the state digraph induced by the atom's steps?"""
    adj = {}
    for s in desc.steps():
        adj.setdefault(uni.step_pre(s), set()).add(uni.step_post(s))
    color = {}
    for root in adj:
        if root in color:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if color.get(nxt) == 1:
                    return True
                if nxt not in color:
                    color[nxt] = 1
                    stack.append((nxt, iter(adj.get(nxt, ()))))
                    break
            else:
                color[node] = 2
                stack.pop()
    return False


def test_fixed_point_distinction(one_state, rel_uni):
    for u in (one_state, rel_uni):
        # infinite stuttering of nil is divergence, i.e. abort
        assert equal_bounded(u, T.om_iter(T.NIL), T.BOT, BOUNDS).holds
        cyclic = 0
        for desc in desc_pool(u, True):
            a = T.atomic(desc)
            if a is T.TOP:  # the empty atom has no steps at all
                continue
            v = equal_bounded(u, T.fin_iter(a), T.om_iter(a), BOUNDS)
            if _admits_cycle(u, desc):
                cyclic += 1
                assert v.outcome == "fails", "%s on %s" % (v.outcome, a)
                assert isinstance(v.witness, Lasso)
            else:
                # without a cycle the atom cannot iterate forever, so the
                # finite and omega iterations genuinely coincide
                assert v.holds, "%s on acyclic %s" % (v.outcome, a)
        assert cyclic > 0


# -- 5. process communication ----------------------------------------------

def test_process_algebra_suite(ccs2, csp2):
    plan = ((ccs2, ("L-ccs-synchronise", "ccs-atev-sync", "ccs-pp")),
            (csp2, ("L-atomic-sync", "csp-atev-sync", "csp-pp",
                    "csp-synchronise", "csp-interleave", "csp-hiding")))
    for (u, names) in plan:
        for name in names:
            law = get_law(name)
            assert law.applicable(u), name
            rep = check_law(law, u, BOUNDS, exhaustive(u))
            assert rep.outcome == "PASS", "%s: %s" % (name, rep.details)
            assert rep.checked >= 2


# -- 6. derivation replays -------------------------------------------------

def test_derivation_replays(rel_uni, ev_uni):
    plan = (("conjoin-assumptions.txt", rel_uni),
            ("test-sync-test.txt", rel_uni),
            ("rely-guar.txt", rel_uni),
            ("ccs-synchronise.txt", ev_uni))
    for (fname, u) in plan:
        with open(os.path.join(DERIVATIONS, fname)) as f:
            text = f.read()
        # check_steps verifies every intermediate rewrite with the oracle
        res = replay_derivation(u, text, BOUNDS, check_steps=True)
        assert res.holds, "%s: %s" % (fname, res)
        assert res.steps > 0


# -- 7. membership vs reference denotation ---------------------------------

def _term_generator(uni, rng):
    descs = list(desc_pool(uni, True))
    preds = list(pred_pool(uni, True))
    modes = ("par", "conj", "join")

    def gen(depth):
        ops = (("leaf",) if depth == 0 else
               ("leaf", "seq", "choice", "join", "sync", "fin", "om", "inf"))
        op = rng.choice(ops)
        if op == "leaf":
            k = rng.randrange(5)
            if k == 0:
                return T.NIL
            if k == 1:
                return T.BOT
            if k == 2:
                return T.TOP
            if k == 3:
                return T.test(rng.choice(preds), uni)
            return T.atomic(rng.choice(descs))
        if op == "seq":
            return T.seq(gen(depth - 1), gen(depth - 1))
        if op == "choice":
            return T.choice(gen(depth - 1), gen(depth - 1))
        if op == "join":
            return T.join(gen(depth - 1), gen(depth - 1))
        if op == "sync":
            return T.sync(rng.choice(modes), gen(depth - 1), gen(depth - 1))
        return {"fin": T.fin_iter, "om": T.om_iter, "inf": T.inf_iter}[op](
            gen(depth - 1))

    return gen


def test_membership_agrees_with_reference_denotation(rel_uni):
    u = rel_uni
    depth = 4
    rng = random.Random(20260824)
    gen = _term_generator(u, rng)
    behaviours = list(enumerate_finite(u, depth))
    sem = Semantics(u)
    status = {"terminated": "term", "aborted": "abort"}
    checked = disagreements = 0
    for _ in range(500):
        t = gen(depth)
        denoted, _partials = refmodel.denote(t, u, depth)
        for b in behaviours:
            sem.reset_work()
            here = sem.member(t, b)
            there = (b.init, b.steps, status[b.status]) in denoted
            checked += 1
            if here != there:
                disagreements += 1
    assert checked == 500 * len(behaviours)
    assert disagreements == 0


# -- 8. parallel introduction end to end -----------------------------------

def test_parallel_introduction_refinement(rel_uni):
    law = get_law("L-introduce-parallel-rspec")
    assert law.kind == "refinement"
    assert [n for (n, _s) in law.vars] == ["r", "r0", "r1", "q0", "q1"]
    rep = check_law(law, rel_uni, BOUNDS, exhaustive(rel_uni))
    assert rep.outcome == "PASS", rep.details
    assert rep.checked >= 20
