"""Bounded refinement and equality decisions with counterexample extraction.

Refinement is reverse behaviour containment: c is refined by d when every
behaviour of d is a behaviour of c, checked over all chaining-consistent
behaviours up to a finite-depth bound and all lassos up to a length bound.
Verdicts are explicitly bounded; `holds` never claims unbounded validity.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import terms as T
from .semantics import (Behaviour, ResourceExhausted, Semantics,
                        distinct_lassos)


@dataclass(frozen=True)
class Bounds:
    maxlen: int = 5
    maxlassolen: int = 4
    residual_cap: int = 10000


@dataclass(frozen=True)
class Verdict:
    outcome: str  # 'holds' | 'fails' | 'resource_exhausted'
    witness: object = None  # Behaviour | Lasso on failure
    diagnostic: str = ""

    @property
    def holds(self):
        return self.outcome == "holds"

    def render(self, uni):
        if self.outcome == "holds":
            return "holds (bounded)"
        if self.outcome == "fails":
            return "fails: %s" % (self.witness.render(uni)
                                  if self.witness is not None else self.diagnostic)
        return "resource exhausted: %s" % self.diagnostic


class _Decider:
    """Shares semantics caches and lasso enumerations per universe."""

    def __init__(self, uni, bounds):
        self.uni = uni
        self.bounds = bounds
        self.sem = Semantics(uni, residual_cap=bounds.residual_cap)
        self._lassos = None
        self._accepted = {}  # term -> frozenset of accepted lassos

    def lassos(self):
        if self._lassos is None:
            self._lassos = distinct_lassos(self.uni, self.bounds.maxlassolen)
        return self._lassos

    def refines(self, c, d):
        """Every behaviour of d within bounds is a behaviour of c."""
        c = T.expand(c, self.uni)
        d = T.expand(d, self.uni)
        if c is d:  # interned terms: identical term, identical semantics
            return Verdict("holds")
        self.sem.reset_work()
        try:
            w = self._finite_witness(c, d)
            if w is not None:
                return Verdict("fails", witness=self._minimize(c, d, w))
            w = self._lasso_witness(c, d)
            if w is not None:
                return Verdict("fails", witness=w)
        except ResourceExhausted as e:
            return Verdict("resource_exhausted", diagnostic=e.diagnostic)
        return Verdict("holds")

    def _finite_witness(self, c, d):
        sem = self.sem
        uni = self.uni
        maxlen = self.bounds.maxlen
        from collections import deque
        # breadth-first so the first witness found is as short as possible
        queue = deque((c, d, init, init, ()) for init in uni.states)
        while queue:
            rc, rd, init, state, steps = queue.popleft()
            if sem.aborts_now(rc, state):
                continue  # c accepts everything from here
            if sem.aborts_now(rd, state):
                return Behaviour(init, steps, "aborted")
            if sem.can_terminate(rd, state) and not sem.can_terminate(rc, state):
                return Behaviour(init, steps, "terminated")
            if len(steps) < maxlen:
                for s in uni.steps_from(state):
                    rd2 = sem.derivative(rd, s)
                    if rd2 is T.TOP:
                        continue  # d has no behaviours this way
                    rc2 = sem.derivative(rc, s)
                    queue.append((rc2, rd2, init, uni.step_post(s), steps + (s,)))
        return None

    def _accepted_lassos(self, t):
        acc = self._accepted.get(t)
        if acc is None:
            sem = self.sem
            acc = frozenset(l for l in self.lassos() if sem.member_lasso(t, l))
            if len(self._accepted) > 4096:
                self._accepted.clear()
            self._accepted[t] = acc
        return acc

    def _lasso_witness(self, c, d):
        extra = self._accepted_lassos(d) - self._accepted_lassos(c)
        if not extra:
            return None
        # keep enumeration order so the reported witness is the shortest
        for l in self.lassos():
            if l in extra:
                return l
        return None

    def _minimize(self, c, d, w):
        """Shrink a finite witness by prefix truncation."""
        sem = self.sem
        for k in range(len(w.steps)):
            for status in ("terminated", "aborted"):
                b = Behaviour(w.init, w.steps[:k], status)
                if sem.member(d, b) and not sem.member(c, b):
                    return b
        return w

    def equal(self, c, d):
        v = self.refines(c, d)
        if not v.holds:
            if v.outcome == "fails":
                return Verdict("fails", witness=v.witness,
                               diagnostic="witness is a behaviour of the right side only")
            return v
        v = self.refines(d, c)
        if v.outcome == "fails":
            return Verdict("fails", witness=v.witness,
                           diagnostic="witness is a behaviour of the left side only")
        return v


_DECIDERS = {}


def _decider(uni, bounds):
    key = (id(uni), bounds)
    dec = _DECIDERS.get(key)
    if dec is None:
        dec = _Decider(uni, bounds)
        _DECIDERS[key] = dec
    return dec


def refines_bounded(uni, c, d, bounds=Bounds()):
    """Verdict for c ⊑ d (d refines c) within bounds."""
    return _decider(uni, bounds).refines(c, d)


def equal_bounded(uni, c, d, bounds=Bounds()):
    return _decider(uni, bounds).equal(c, d)


def check_quintuple(uni, p, r, g, q, c, bounds=Bounds()):
    """Rely/guarantee quintuple: {p};(rely r ⋓ guar g ⋓ spec q) ⊑ c."""
    spec_cmd = T.seq(T.assert_test(p),
                     T.weak_conj(T.weak_conj(T.rely(r), T.guar(g)), T.spec(q)))
    return refines_bounded(uni, spec_cmd, c, bounds)
