"""Catalog of algebraic laws, instance checking, rewriting, and replay.

Each law is a schema over metavariables together with builder and
side-condition closures.  check_law() samples (or exhausts) bindings over a
finite model and confirms every instance with the bounded oracle.  Negative
entries are expected to produce a counterexample.  rewrite_step() applies a
law at a position in a term, and replay_derivation() runs a calculational
proof script line by line, spot-checking each step against the oracle.
"""

from __future__ import annotations

import fnmatch
import itertools
import random
import re
from dataclasses import dataclass, field

from . import terms as T
from .decide import Bounds, equal_bounded, refines_bounded
from .semantics import ResourceExhausted
from .universe import (JOIN, PARALLEL, SILENT, WEAKCONJ, all_subsets,
                       sync_identity_atom, sync_prim)


class LawError(ValueError):
    pass


@dataclass(frozen=True)
class LawEntry:
    """A checkable law schema.

    build(uni, binding) returns one or more (lhs, rhs) pairs; for kind
    'equality' each pair must be equal, for 'refinement' lhs must be
    refined by rhs (lhs ⊑ rhs).  side(uni, binding, oracle) may veto a
    binding (semantic premises use the oracle).  Negative entries state a
    non-law: checking succeeds when a counterexample exists.
    """
    name: str
    kind: str  # 'equality' | 'refinement'
    vars: tuple
    build: object
    side: object = None
    modes: tuple = ()
    scope: str = "any"  # 'any' | 'rel' | 'event' | 'ccs' | 'csp' | 'combined'
    negative: bool = False
    note: str = ""

    def applicable(self, uni):
        if self.scope == "any":
            return True
        if self.scope == "rel":
            return uni.kind in ("rel", "combined")
        if self.scope == "event":
            return uni.kind in ("event", "combined")
        if self.scope == "ccs":
            return bool(uni.complements)
        if self.scope == "csp":
            return bool(uni.tags)
        if self.scope == "combined":
            return uni.kind == "combined"
        return False

    def all_vars(self):
        v = self.vars
        if self.modes:
            v = (("m", "mode"),) + v
        return v


class Oracle:
    """Bounded decision procedures shared by side conditions and checks."""

    def __init__(self, uni, bounds):
        self.uni = uni
        self.bounds = bounds

    def equal(self, c, d):
        return equal_bounded(self.uni, c, d, self.bounds)

    def refines(self, c, d):
        return refines_bounded(self.uni, c, d, self.bounds)

    def holds(self, kind, c, d):
        if kind == "equality":
            return self.equal(c, d)
        return self.refines(c, d)


# -- sampling --------------------------------------------------------------

def command_pool(uni):
    """A deterministic, reasonably diverse pool of closed commands."""
    pool = [T.NIL, T.BOT, T.TOP]
    if uni.kind == "rel":
        s0 = uni.states[0]
        half = frozenset([s0])
        r1 = frozenset(l for l in uni.labels if l[0] == s0)
        a1 = T.atomic(uni.pgm_atom(r1))
        a2 = T.atomic(uni.env_atom(uni.full_labels))
        pool += [
            T.test(half, uni),
            a1,
            a2,
            T.seq(a1, a2),
            T.choice(a1, T.NIL),
            T.om_iter(a2),
            T.seq(a1, T.BOT),
            T.fin_iter(T.atomic(uni.alpha)),
        ]
    else:
        evs = [e for e in uni.base_events if e != SILENT][:2]
        pool += [T.SKIP]
        for e in evs:
            pool.append(T.atev(e))
        if len(evs) >= 2:
            pool.append(T.seq(T.atev(evs[0]), T.atev(evs[1])))
        pool.append(T.seq(T.atev(evs[0]), T.SKIP))
    return tuple(pool)


def desc_pool(uni, exhaustive):
    """Atomic-step descriptors: all pure program and environment atoms."""
    out = []
    if exhaustive and len(uni.labels) <= 4:
        subsets = tuple(all_subsets(uni.labels))
        out += [uni.atom(s, ()) for s in subsets]
        out += [uni.atom((), s) for s in subsets if s]
    else:
        rels = relation_pool(uni, exhaustive)
        out += [uni.atom(r, ()) for r in rels]
        out += [uni.atom((), r) for r in rels if r]
        out.append(uni.alpha)
    # dedupe, stable order
    seen = []
    for d in out:
        if d not in seen:
            seen.append(d)
    return tuple(seen)


def relation_pool(uni, exhaustive):
    if exhaustive and len(uni.labels) <= 4:
        return tuple(all_subsets(uni.labels))
    labels = sorted(uni.labels)
    out = [frozenset(), frozenset(labels), frozenset(labels[:1])]
    if len(labels) > 1:
        out.append(frozenset(labels[1:]))
        out.append(frozenset(labels[::2]))
    return tuple(out)


def pred_pool(uni, exhaustive):
    if exhaustive or len(uni.states) <= 3:
        return tuple(all_subsets(uni.states))
    return (frozenset(), frozenset(uni.states), frozenset(uni.states[:1]))


class Sampler:
    """Generates bindings for a law's metavariables over a universe."""

    def __init__(self, uni, seed=0, exhaustive=False, samples=30,
                 max_instances=400):
        self.uni = uni
        self.seed = seed
        self.exhaustive = exhaustive
        self.samples = samples
        self.max_instances = max_instances

    def domain(self, sort, law):
        uni = self.uni
        if sort == "mode":
            return law.modes
        if sort == "cmd":
            return command_pool(uni)
        if sort == "desc":
            return desc_pool(uni, self.exhaustive)
        if sort in ("pred", "test"):
            return pred_pool(uni, self.exhaustive)
        if sort in ("rel", "labels"):
            return relation_pool(uni, self.exhaustive)
        if sort == "strel":
            pairs = [(s1, s2) for s1 in uni.states for s2 in uni.states]
            if self.exhaustive and len(pairs) <= 4:
                return tuple(all_subsets(pairs))
            return (frozenset(), frozenset(pairs), frozenset(pairs[:1]),
                    frozenset(pairs[1:]))
        if sort == "nat":
            return tuple(range(4))
        if sort == "event":
            return tuple(e for e in uni.events if e != SILENT)
        if sort == "baseevent":
            return tuple(e for e in uni.base_events if e != SILENT)
        if sort == "eventset":
            return tuple(all_subsets(
                [e for e in uni.base_events if e != SILENT]))
        raise LawError("unknown metavariable sort %r" % sort)

    def bindings(self, law):
        names = [n for (n, _s) in law.all_vars()]
        domains = [self.domain(s, law) for (_n, s) in law.all_vars()]
        if not names:
            yield {}
            return
        if self.exhaustive:
            it = itertools.product(*domains)
            for combo in itertools.islice(it, self.max_instances):
                yield dict(zip(names, combo))
        else:
            rng = random.Random((self.seed, law.name).__repr__())
            for _ in range(self.samples):
                yield {n: rng.choice(d) for n, d in zip(names, domains)}


# -- checking --------------------------------------------------------------

@dataclass
class LawReport:
    name: str
    outcome: str  # 'PASS' | 'FAIL' | 'RESOURCE'
    checked: int = 0
    failed: int = 0
    skipped: int = 0
    details: list = field(default_factory=list)

    def line(self):
        return "LAW %s %s (%d instances)" % (self.name, self.outcome, self.checked)


def instantiate(law, binding, uni):
    """Ground (lhs, rhs) pairs for a full binding; checks side conditions."""
    missing = [n for (n, _s) in law.all_vars() if n not in binding]
    if missing:
        raise LawError("unbound metavariables %s for %s" % (missing, law.name))
    if law.side is not None:
        oracle = Oracle(uni, Bounds())
        if not law.side(uni, binding, oracle):
            raise LawError("side condition of %s violated" % law.name)
    return law.build(uni, binding)


def check_law(law, uni, bounds=Bounds(), sampler=None):
    """Check a law over sampled bindings; see LawReport."""
    if sampler is None:
        sampler = Sampler(uni)
    oracle = Oracle(uni, bounds)
    rep = LawReport(law.name, "PASS")
    try:
        for b in sampler.bindings(law):
            if law.side is not None and not law.side(uni, b, oracle):
                rep.skipped += 1
                continue
            pairs = law.build(uni, b)
            bad = None
            for (lhs, rhs) in pairs:
                v = oracle.holds(law.kind, lhs, rhs)
                if v.outcome == "resource_exhausted":
                    rep.outcome = "RESOURCE"
                    rep.details.append("%s  vs  %s: %s"
                                      % (lhs._str, rhs._str, v.render(uni)))
                    return rep
                if not v.holds:
                    bad = (lhs, rhs, v)
                    break
            rep.checked += 1
            if bad is not None:
                rep.failed += 1
                if len(rep.details) < 3:
                    lhs, rhs, v = bad
                    rep.details.append("%s  vs  %s: %s"
                                      % (lhs._str, rhs._str, v.render(uni)))
                if law.negative:
                    break  # one confirmed counterexample suffices
    except ResourceExhausted as e:
        rep.outcome = "RESOURCE"
        rep.details.append(e.diagnostic)
        return rep
    if law.negative:
        rep.outcome = "PASS" if rep.failed > 0 else "FAIL"
        if rep.failed == 0:
            rep.details.append("no counterexample found")
    else:
        rep.outcome = "PASS" if rep.failed == 0 else "FAIL"
    return rep


def select_laws(pattern=None, negatives=True):
    out = []
    for law in CATALOG:
        if pattern and not fnmatch.fnmatch(law.name, pattern):
            continue
        if not negatives and law.negative:
            continue
        out.append(law)
    return out


def get_law(name):
    for law in CATALOG:
        if law.name == name:
            return law
    raise LawError("unknown law %r" % name)


# -- builder helpers -------------------------------------------------------

def _sync(m, a, b):
    return T.sync(m, a, b)


def _id_command(uni, m):
    if m == PARALLEL:
        return T.SKIP
    if m == WEAKCONJ:
        return T.CHAOS
    return T.BOT  # identity of lattice join


def _id_atom(uni, m):
    return sync_identity_atom(uni, m)


def _pguard(uni, g):
    return T.choice(T.atomic(uni.pgm_atom(g)), T.atomic(uni.ebot))


def _eassume(uni, r):
    return T.assume_step(uni.pibot.meet(uni.env_atom(r)))


def _power(c, i):
    return T.seq(*([c] * i)) if i else T.NIL


def _atomic_built(t):
    """Built purely from atomic steps under ; ⊓ and iterations."""
    tag = t.tag
    if tag == "atomic":
        return True
    if tag == "derived" and t.args[0] == "atev":
        return True
    if tag == "seq":
        return _atomic_built(t.args[0]) and _atomic_built(t.args[1])
    if tag == "choice":
        return all(_atomic_built(x) for x in t.items)
    if tag in ("fin", "om", "inf"):
        return _atomic_built(t.body)
    return False


def _is_prefixed(uni, c, oracle):
    """ε̲^ω ; c = c — the command tolerates initial environment steps."""
    return oracle.equal(T.seq(T.om_iter(T.atomic(uni.ebot)), c), c).holds


def _law(name, kind, vars, build, **kw):
    return LawEntry(name, kind, tuple(vars), build, **kw)


def _eq(name, vars, build, **kw):
    return _law(name, "equality", vars, build, **kw)


def _ref(name, vars, build, **kw):
    return _law(name, "refinement", vars, build, **kw)


_ALL_MODES = (PARALLEL, WEAKCONJ, JOIN)
_STRICT_MODES = (PARALLEL, WEAKCONJ)  # the abort-strict instantiations

C, D = "c", "d"


def _catalog():
    E = []

    # ---- sequential composition ----------------------------------------
    E.append(_eq("A-seq-assoc", [("c0", "cmd"), ("c1", "cmd"), ("c2", "cmd")],
        lambda u, b: ((T.seq(b["c0"], T.seq(b["c1"], b["c2"])),
                       T.seq(T.seq(b["c0"], b["c1"]), b["c2"])),)))
    E.append(_eq("A-seq-identity", [("c", "cmd")],
        lambda u, b: ((T.seq(b["c"], T.NIL), b["c"]),
                      (T.seq(T.NIL, b["c"]), b["c"]))))
    E.append(_eq("A-seq-annihilation-left", [("c", "cmd")],
        lambda u, b: ((T.seq(T.BOT, b["c"]), T.BOT),)))
    E.append(_eq("A-seq-distr-right", [("c0", "cmd"), ("c1", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.seq(T.choice(b["c0"], b["c1"]), b["d"]),
                       T.choice(T.seq(b["c0"], b["d"]), T.seq(b["c1"], b["d"]))),)))
    E.append(_eq("A-seq-distr-left", [("c", "cmd"), ("d0", "cmd"), ("d1", "cmd")],
        lambda u, b: ((T.seq(b["c"], T.choice(b["d0"], b["d1"])),
                       T.choice(T.seq(b["c"], b["d0"]), T.seq(b["c"], b["d1"]))),),
        note="left distribution over a non-empty choice"))

    # ---- iteration laws --------------------------------------------------
    E.append(_eq("L-omega-unfold", [("c", "cmd")],
        lambda u, b: ((T.om_iter(b["c"]),
                       T.choice(T.NIL, T.seq(b["c"], T.om_iter(b["c"])))),)))
    E.append(_eq("L-finite-unfold", [("c", "cmd")],
        lambda u, b: ((T.fin_iter(b["c"]),
                       T.choice(T.NIL, T.seq(b["c"], T.fin_iter(b["c"])))),)))
    E.append(_eq("L-infinite-unfold", [("c", "cmd")],
        lambda u, b: ((T.inf_iter(b["c"]),
                       T.seq(b["c"], T.inf_iter(b["c"]))),)))
    E.append(_eq("L-infinite-unfold-power", [("c", "cmd"), ("i", "nat")],
        lambda u, b: ((T.inf_iter(b["c"]),
                       T.seq(_power(b["c"], b["i"]), T.inf_iter(b["c"]))),)))
    E.append(_eq("L-infinite-annihilates", [("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.inf_iter(b["c"]),
                       T.seq(T.inf_iter(b["c"]), b["d"])),)))
    E.append(_ref("L-omega-induction", [("c", "cmd"), ("x", "cmd")],
        lambda u, b: ((T.om_iter(b["c"]), b["x"]),),
        side=lambda u, b, o: o.refines(
            T.choice(T.NIL, T.seq(b["c"], b["x"])), b["x"]).holds,
        note="premise: nil ⊓ c;x ⊑ x"))
    E.append(_ref("L-finite-induction", [("c", "cmd"), ("x", "cmd")],
        lambda u, b: ((b["x"], T.fin_iter(b["c"])),),
        side=lambda u, b, o: o.refines(
            b["x"], T.choice(T.NIL, T.seq(b["c"], b["x"]))).holds,
        note="premise: x ⊑ nil ⊓ c;x"))
    E.append(_eq("L-omega-twice", [("c", "cmd")],
        lambda u, b: ((T.seq(T.om_iter(b["c"]), T.om_iter(b["c"])),
                       T.om_iter(b["c"])),)))
    E.append(_eq("L-finite-twice", [("c", "cmd")],
        lambda u, b: ((T.seq(T.fin_iter(b["c"]), T.fin_iter(b["c"])),
                       T.fin_iter(b["c"])),)))
    E.append(_eq("L-isolation", [("c", "cmd")],
        lambda u, b: ((T.om_iter(b["c"]),
                       T.choice(T.fin_iter(b["c"]), T.inf_iter(b["c"]))),)))
    E.append(_eq("L-finite-iteration", [("c", "cmd")],
        lambda u, b: ((T.fin_iter(b["c"]),
                       T.choice(*[_power(b["c"], i) for i in range(7)])),),
        note="c* as the choice of powers; coincides with the supremum for "
             "behaviour bounds below the power bound"))
    E.append(_eq("L-iteration1", [("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.seq(T.om_iter(b["c"]), b["d"]),
                       T.choice(T.seq(T.fin_iter(b["c"]), b["d"]),
                                T.inf_iter(b["c"]))),)))

    # ---- tests and assertions -------------------------------------------
    E.append(_eq("A-test-sup-interchange",
        [("t1", "pred"), ("t2", "pred"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.join(T.seq(T.test(b["t1"], u), b["c"]),
                              T.seq(T.test(b["t2"], u), b["d"])),
                       T.seq(T.test(b["t1"] & b["t2"], u),
                             T.join(b["c"], b["d"]))),), scope="rel"))
    E.append(_eq("test-seq-test", [("t1", "pred"), ("t2", "pred")],
        lambda u, b: ((T.seq(T.test(b["t1"], u), T.test(b["t2"], u)),
                       T.join(T.test(b["t1"], u), T.test(b["t2"], u))),),
        scope="rel"))
    E.append(_ref("assert-galois-lr", [("t", "pred"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((b["c"], T.seq(T.test(b["t"], u), b["d"])),),
        side=lambda u, b, o: o.refines(
            T.seq(T.assert_test(b["t"]), b["c"]), b["d"]).holds,
        scope="rel", note="Galois: assert(t);c ⊑ d implies c ⊑ t;d"))
    E.append(_ref("assert-galois-rl", [("t", "pred"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.seq(T.assert_test(b["t"]), b["c"]), b["d"]),),
        side=lambda u, b, o: o.refines(
            b["c"], T.seq(T.test(b["t"], u), b["d"])).holds,
        scope="rel", note="Galois: c ⊑ t;d implies assert(t);c ⊑ d"))
    E.append(_eq("tau-inf-tau", [("p", "pred"), ("q", "pred")],
        lambda u, b: ((T.test(b["p"] | b["q"], u),
                       T.choice(T.test(b["p"], u), T.test(b["q"], u))),),
        scope="rel"))
    E.append(_eq("tau-sup-tau", [("p", "pred"), ("q", "pred")],
        lambda u, b: ((T.test(b["p"] & b["q"], u),
                       T.join(T.test(b["p"], u), T.test(b["q"], u))),),
        scope="rel"))

    # ---- atomic steps and assumptions -----------------------------------
    E.append(_eq("atomic-inf-atomic", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.choice(T.atomic(b["a"]), T.atomic(b["b"])),
                       T.atomic(b["a"].meet(b["b"]))),)))
    E.append(_eq("A-step-sup-interchange",
        [("a", "desc"), ("b", "desc"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.join(T.seq(T.atomic(b["a"]), b["c"]),
                              T.seq(T.atomic(b["b"]), b["d"])),
                       T.seq(T.atomic(b["a"].join(b["b"])),
                             T.join(b["c"], b["d"]))),)))
    E.append(_eq("L-conjoin-assumptions", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.join(T.assume_step(b["a"]), T.assume_step(b["b"])),
                       T.assume_step(b["a"].meet(b["b"]))),)))
    E.append(_ref("L-weaken-assume", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.assume_step(b["a"]), T.assume_step(b["b"])),),
        side=lambda u, b, o: set(b["a"].steps()) <= set(b["b"].steps()),
        note="premise b ⊑ a, i.e. the steps of a are among those of b"))
    E.append(_eq("L-iterated-assumption", [("a", "desc")],
        lambda u, b: ((T.om_iter(T.assume_step(b["a"])),
                       T.seq(T.om_iter(T.atomic(b["a"])),
                             T.choice(T.NIL,
                                      T.seq(T.atomic(b["a"].complement()),
                                            T.BOT)))),)))
    E.append(_eq("A-test-atomic-sup", [],
        lambda u, b: ((T.join(T.atomic(u.alpha), T.NIL), T.TOP),)))
    E.append(_eq("A-test-atomic-pre", [("t", "pred"), ("a", "desc")],
        lambda u, b: ((T.seq(T.test(b["t"], u), T.atomic(b["a"])),
                       T.atomic(b["a"].domain_restrict(b["t"]))),),
        scope="rel", note="a test before a step is again a step"))

    # ---- synchronisation axioms -----------------------------------------
    E.append(_eq("A-sync-assoc", [("c0", "cmd"), ("c1", "cmd"), ("c2", "cmd")],
        lambda u, b: ((_sync(b["m"], b["c0"], _sync(b["m"], b["c1"], b["c2"])),
                       _sync(b["m"], _sync(b["m"], b["c0"], b["c1"]), b["c2"])),),
        modes=_ALL_MODES))
    E.append(_eq("A-sync-comm", [("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((_sync(b["m"], b["c"], b["d"]),
                       _sync(b["m"], b["d"], b["c"])),), modes=_ALL_MODES))
    E.append(_eq("A-sync-id-command", [("c", "cmd")],
        lambda u, b: ((_sync(b["m"], b["c"], _id_command(u, b["m"])), b["c"]),),
        modes=_ALL_MODES))
    E.append(_eq("A-sync-Inf-distrib", [("c", "cmd"), ("d0", "cmd"), ("d1", "cmd")],
        lambda u, b: ((_sync(b["m"], b["c"], T.choice(b["d0"], b["d1"])),
                       T.choice(_sync(b["m"], b["c"], b["d0"]),
                                _sync(b["m"], b["c"], b["d1"]))),),
        modes=_ALL_MODES))
    E.append(_eq("A-sync-closed", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((_sync(b["m"], T.atomic(b["a"]), T.atomic(b["b"])),
                       T.atomic(sync_prim(b["m"], b["a"], b["b"]))),),
        modes=_ALL_MODES))
    E.append(_eq("A-sync-id", [("a", "desc")],
        lambda u, b: ((_sync(b["m"], T.atomic(b["a"]),
                             T.atomic(_id_atom(u, b["m"]))),
                       T.atomic(b["a"])),), modes=_ALL_MODES))
    E.append(_ref("A-sync-weak-interchange-seq",
        [("c0", "cmd"), ("c1", "cmd"), ("d0", "cmd"), ("d1", "cmd")],
        lambda u, b: ((_sync(b["m"], T.seq(b["c0"], b["c1"]),
                             T.seq(b["d0"], b["d1"])),
                       T.seq(_sync(b["m"], b["c0"], b["d0"]),
                             _sync(b["m"], b["c1"], b["d1"]))),),
        modes=_ALL_MODES))
    E.append(_eq("A-atomic-sync-interchange",
        [("a", "desc"), ("b", "desc"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((_sync(b["m"], T.seq(T.atomic(b["a"]), b["c"]),
                             T.seq(T.atomic(b["b"]), b["d"])),
                       T.seq(T.atomic(sync_prim(b["m"], b["a"], b["b"])),
                             _sync(b["m"], b["c"], b["d"]))),),
        modes=_ALL_MODES))
    E.append(_eq("A-atomic-infiter-sync", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((_sync(b["m"], T.inf_iter(T.atomic(b["a"])),
                             T.inf_iter(T.atomic(b["b"]))),
                       T.inf_iter(T.atomic(sync_prim(b["m"], b["a"], b["b"])))),),
        modes=_ALL_MODES))
    E.append(_eq("A-nil-sync-absorb", [],
        lambda u, b: ((_sync(b["m"], T.NIL, T.NIL), T.NIL),),
        modes=_ALL_MODES))
    E.append(_eq("A-nil-sync-atomic", [("a", "desc"), ("c", "cmd")],
        lambda u, b: ((_sync(b["m"], T.seq(T.atomic(b["a"]), b["c"]), T.NIL),
                       T.TOP),),
        side=lambda u, b, o: not b["a"].is_empty(),
        modes=_ALL_MODES))
    E.append(_eq("A-test-sync-interchange",
        [("t", "pred"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((_sync(b["m"], T.seq(T.test(b["t"], u), b["c"]),
                             T.seq(T.test(b["t"], u), b["d"])),
                       T.seq(T.test(b["t"], u), _sync(b["m"], b["c"], b["d"]))),),
        modes=_ALL_MODES, scope="rel"))
    E.append(_ref("A-sync-cstepd", [("a", "desc")],
        lambda u, b: ((_sync(b["m"], T.atomic(b["a"]), T.atomic(u.alpha)),
                       T.atomic(b["a"])),), modes=_ALL_MODES))
    E.append(_eq("A-sync-test", [("a", "desc"), ("c", "cmd"), ("t", "pred")],
        lambda u, b: ((_sync(b["m"], T.seq(T.atomic(b["a"]), b["c"]),
                             T.test(b["t"], u)), T.TOP),),
        side=lambda u, b, o: not b["a"].is_empty(),
        modes=_ALL_MODES, scope="rel"))
    E.append(_eq("A-sync-top", [("a", "desc"), ("c", "cmd")],
        lambda u, b: ((_sync(b["m"], T.seq(T.atomic(b["a"]), b["c"]), T.TOP),
                       T.TOP),),
        side=lambda u, b, o: not b["a"].is_empty(),
        modes=_ALL_MODES))
    E.append(_eq("L-test-command-sync-command",
        [("c", "cmd"), ("t", "pred"), ("d", "cmd")],
        lambda u, b: ((_sync(b["m"], b["c"], T.seq(T.test(b["t"], u), b["d"])),
                       T.seq(T.test(b["t"], u), _sync(b["m"], b["c"], b["d"]))),),
        side=lambda u, b, o: (
            b["c"].tag in ("test", "nil", "top")
            or (b["c"].tag == "seq" and b["c"].args[0].tag == "atomic")
            or b["c"].tag == "atomic"
            or o.refines(_id_command(u, b["m"]), b["c"]).holds),
        modes=_ALL_MODES, scope="rel",
        note="holds when c is a test, is atomic-prefixed, or refines Id"))
    E.append(_eq("L-test-sync-test", [("t1", "pred"), ("t2", "pred")],
        lambda u, b: ((_sync(b["m"], T.test(b["t1"], u), T.test(b["t2"], u)),
                       T.join(T.test(b["t1"], u), T.test(b["t2"], u))),),
        modes=_ALL_MODES, scope="rel"))
    E.append(_ref("L-sync-distribute-seq",
        [("c", "cmd"), ("d0", "cmd"), ("d1", "cmd")],
        lambda u, b: ((_sync(b["m"], b["c"], T.seq(b["d0"], b["d1"])),
                       T.seq(_sync(b["m"], b["c"], b["d0"]),
                             _sync(b["m"], b["c"], b["d1"]))),),
        side=lambda u, b, o: o.refines(b["c"], T.seq(b["c"], b["c"])).holds,
        modes=_ALL_MODES, note="premise: c ⊑ c;c"))

    # ---- iterations of atomic steps (§4) --------------------------------
    E.append(_eq("L-atomic-iteration-nil", [("a", "desc")],
        lambda u, b: ((_sync(b["m"], T.fin_iter(T.atomic(b["a"])), T.NIL), T.NIL),
                      (_sync(b["m"], T.om_iter(T.atomic(b["a"])), T.NIL), T.NIL),
                      (_sync(b["m"], T.inf_iter(T.atomic(b["a"])), T.NIL), T.TOP)),
        modes=_ALL_MODES))
    E.append(_eq("L-atomic-iteration-power",
        [("a", "desc"), ("b", "desc"), ("i", "nat"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((_sync(b["m"],
                             T.seq(_power(T.atomic(b["a"]), b["i"]), b["c"]),
                             T.seq(_power(T.atomic(b["b"]), b["i"]), b["d"])),
                       T.seq(_power(T.atomic(sync_prim(b["m"], b["a"], b["b"])),
                                    b["i"]),
                             _sync(b["m"], b["c"], b["d"]))),),
        modes=_ALL_MODES))

    def _ab(u, b):
        return (T.atomic(b["a"]), T.atomic(b["b"]),
                T.atomic(sync_prim(b["m"], b["a"], b["b"])))

    E.append(_eq("L-atomic-iteration-finite",
        [("a", "desc"), ("b", "desc"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: (lambda a, bb, ab: ((
            _sync(b["m"], T.seq(T.fin_iter(a), b["c"]),
                  T.seq(T.fin_iter(bb), b["d"])),
            T.seq(T.fin_iter(ab),
                  T.choice(_sync(b["m"], b["c"], T.seq(T.fin_iter(bb), b["d"])),
                           _sync(b["m"], T.seq(T.fin_iter(a), b["c"]), b["d"])))),)
            )(*_ab(u, b)),
        modes=_ALL_MODES))
    E.append(_eq("C-atomic-iteration-finite",
        [("a", "desc"), ("b", "desc"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: (lambda a, bb, ab: ((
            _sync(b["m"], T.seq(T.fin_iter(a), b["c"]),
                  T.seq(T.fin_iter(bb), b["d"])),
            T.seq(T.fin_iter(ab),
                  T.choice(_sync(b["m"], b["c"], b["d"]),
                           _sync(b["m"], b["c"],
                                 T.seq(bb, T.fin_iter(bb), b["d"])),
                           _sync(b["m"], T.seq(a, T.fin_iter(a), b["c"]),
                                 b["d"])))),))(*_ab(u, b)),
        modes=_ALL_MODES))
    E.append(_eq("L-atomic-finite-sync", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((_sync(b["m"], T.fin_iter(T.atomic(b["a"])),
                             T.fin_iter(T.atomic(b["b"]))),
                       T.fin_iter(T.atomic(sync_prim(b["m"], b["a"], b["b"])))),),
        modes=_ALL_MODES))
    E.append(_eq("L-atomic-iteration-finite-infinite",
        [("a", "desc"), ("b", "desc"), ("c", "cmd")],
        lambda u, b: (lambda a, bb, ab: ((
            _sync(b["m"], T.seq(T.fin_iter(a), b["c"]), T.inf_iter(bb)),
            T.seq(T.fin_iter(ab), _sync(b["m"], b["c"], T.inf_iter(bb)))),)
            )(*_ab(u, b)),
        modes=_ALL_MODES))
    E.append(_eq("L-atomic-iteration-finite-omega",
        [("a", "desc"), ("b", "desc"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: (lambda a, bb, ab: ((
            _sync(b["m"], T.seq(T.fin_iter(a), b["c"]),
                  T.seq(T.om_iter(bb), b["d"])),
            T.seq(T.fin_iter(ab),
                  T.choice(_sync(b["m"], b["c"], T.seq(T.om_iter(bb), b["d"])),
                           _sync(b["m"], T.seq(T.fin_iter(a), b["c"]), b["d"])))),)
            )(*_ab(u, b)),
        modes=_ALL_MODES))
    E.append(_eq("L-atomic-iteration-either",
        [("a", "desc"), ("b", "desc"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: (lambda a, bb, ab: ((
            _sync(b["m"], T.seq(T.om_iter(a), b["c"]),
                  T.seq(T.om_iter(bb), b["d"])),
            T.seq(T.om_iter(ab),
                  T.choice(_sync(b["m"], b["c"], T.seq(T.om_iter(bb), b["d"])),
                           _sync(b["m"], T.seq(T.om_iter(a), b["c"]), b["d"])))),)
            )(*_ab(u, b)),
        modes=_ALL_MODES))
    E.append(_eq("C-atomic-iteration-either",
        [("a", "desc"), ("b", "desc"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: (lambda a, bb, ab: ((
            _sync(b["m"], T.seq(T.om_iter(a), b["c"]),
                  T.seq(T.om_iter(bb), b["d"])),
            T.seq(T.om_iter(ab),
                  T.choice(_sync(b["m"], b["c"], b["d"]),
                           _sync(b["m"], b["c"],
                                 T.seq(bb, T.om_iter(bb), b["d"])),
                           _sync(b["m"], T.seq(a, T.om_iter(a), b["c"]),
                                 b["d"])))),))(*_ab(u, b)),
        modes=_ALL_MODES))
    E.append(_eq("L-atomic-either-sync", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((_sync(b["m"], T.om_iter(T.atomic(b["a"])),
                             T.om_iter(T.atomic(b["b"]))),
                       T.om_iter(T.atomic(sync_prim(b["m"], b["a"], b["b"])))),),
        modes=_ALL_MODES, note="omega-sync-omega"))
    E.append(_eq("L-iterations-with-abort",
        [("a0", "desc"), ("a1", "desc"), ("b", "desc")],
        lambda u, b: ((_sync(b["m"],
                             T.om_iter(T.choice(T.atomic(b["a0"]),
                                                T.seq(T.atomic(b["a1"]), T.BOT))),
                             T.om_iter(T.atomic(b["b"]))),
                       T.seq(T.om_iter(T.atomic(sync_prim(b["m"], b["a0"], b["b"]))),
                             T.choice(T.NIL,
                                      T.seq(T.atomic(sync_prim(b["m"], b["a1"],
                                                               b["b"])),
                                            T.BOT)))),),
        modes=_STRICT_MODES, note="needs abort-strictness of the operator"))

    # ---- appendix helpers ------------------------------------------------
    E.append(_eq("L-atomic-iter-prefix-sync-nil",
        [("a", "desc"), ("b", "desc"), ("b1", "desc"), ("c", "cmd")],
        lambda u, b: ((_sync(b["m"], T.om_iter(T.atomic(b["a"])),
                             T.seq(T.om_iter(T.atomic(b["b"])),
                                   T.atomic(b["b1"]), b["c"])),
                       T.seq(T.om_iter(T.atomic(sync_prim(b["m"], b["a"], b["b"]))),
                             T.atomic(sync_prim(b["m"], b["a"], b["b1"])),
                             _sync(b["m"], T.om_iter(T.atomic(b["a"])), b["c"]))),),
        modes=_ALL_MODES))
    E.append(_eq("L-atomic-iter-prefix-sync-atomic",
        [("a", "desc"), ("a1", "desc"), ("b", "desc"), ("b1", "desc"),
         ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((_sync(b["m"],
                             T.seq(T.om_iter(T.atomic(b["a"])), T.atomic(b["a1"]),
                                   b["c"]),
                             T.seq(T.om_iter(T.atomic(b["b"])), T.atomic(b["b1"]),
                                   b["d"])),
                       T.seq(T.om_iter(T.atomic(sync_prim(b["m"], b["a"], b["b"]))),
                             T.choice(
                                 T.seq(T.atomic(sync_prim(b["m"], b["a1"], b["b1"])),
                                       _sync(b["m"], b["c"], b["d"])),
                                 T.seq(T.atomic(sync_prim(b["m"], b["a1"], b["b"])),
                                       _sync(b["m"], b["c"],
                                             T.seq(T.om_iter(T.atomic(b["b"])),
                                                   T.atomic(b["b1"]), b["d"]))),
                                 T.seq(T.atomic(sync_prim(b["m"], b["a"], b["b1"])),
                                       _sync(b["m"],
                                             T.seq(T.om_iter(T.atomic(b["a"])),
                                                   T.atomic(b["a1"]), b["c"]),
                                             b["d"]))))),),
        modes=_ALL_MODES))
    E.append(_eq("L-assump-help1", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.weak_conj(T.om_iter(T.atomic(b["a"])),
                                   T.seq(T.om_iter(T.atomic(b["b"])),
                                         T.atomic(b["b"].complement()), T.BOT)),
                       T.seq(T.om_iter(T.atomic(b["a"].join(b["b"]))),
                             T.atomic(b["a"].join(b["b"].complement())),
                             T.BOT)),)))
    E.append(_eq("L-assump-help2", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.weak_conj(
                         T.seq(T.om_iter(T.atomic(b["a"])),
                               T.atomic(b["a"].complement()), T.BOT),
                         T.seq(T.om_iter(T.atomic(b["b"])),
                               T.atomic(b["b"].complement()), T.BOT)),
                       T.seq(T.om_iter(T.atomic(b["a"].join(b["b"]))),
                             T.atomic(b["a"].complement()
                                      .join(b["b"].complement())
                                      .meet(b["a"].complement().join(b["b"]))
                                      .meet(b["a"].join(b["b"].complement()))),
                             T.BOT)),)))
    E.append(_eq("L-helper2", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.choice(
                         T.weak_conj(T.atomic(b["a"].complement()),
                                     T.atomic(b["b"])),
                         T.weak_conj(T.atomic(b["a"]),
                                     T.atomic(b["b"].complement())),
                         T.weak_conj(T.atomic(b["a"].complement()),
                                     T.atomic(b["b"].complement()))),
                       T.atomic(b["a"].join(b["b"]).complement())),)))
    E.append(_eq("L-assump-help3", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.atomic(b["a"].join(b["b"].complement())
                                .meet(b["a"].complement().join(b["b"]))
                                .meet(b["a"].complement()
                                      .join(b["b"].complement()))),
                       T.atomic(b["a"].join(b["b"]).complement())),)))
    E.append(_eq("L-assume-iter-conj-assume-iter", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.weak_conj(T.om_iter(T.assume_step(b["a"])),
                                   T.om_iter(T.assume_step(b["b"]))),
                       T.om_iter(T.assume_step(b["a"].join(b["b"])))),)))

    # ---- parallel and weak conjunction (§5) -----------------------------
    E.append(_eq("A-together-idempotent", [("c", "cmd")],
        lambda u, b: ((T.weak_conj(b["c"], b["c"]), b["c"]),)))
    E.append(_eq("A-parallel-abort", [("c", "cmd")],
        lambda u, b: ((T.parallel(b["c"], T.BOT), T.BOT),)))
    E.append(_eq("A-together-abort", [("c", "cmd")],
        lambda u, b: ((T.weak_conj(b["c"], T.BOT), T.BOT),)))
    E.append(_ref("conjunction-interchange-parallel",
        [("c0", "cmd"), ("c1", "cmd"), ("d0", "cmd"), ("d1", "cmd")],
        lambda u, b: ((T.weak_conj(T.parallel(b["c0"], b["d0"]),
                                   T.parallel(b["c1"], b["d1"])),
                       T.parallel(T.weak_conj(b["c0"], b["c1"]),
                                  T.weak_conj(b["d0"], b["d1"]))),)))
    E.append(_eq("A-weakconj-nonfail", [("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.weak_conj(b["c"], b["d"]), T.join(b["c"], b["d"])),),
        side=lambda u, b, o: (o.refines(T.CHAOS, b["c"]).holds
                              and o.refines(T.CHAOS, b["d"]).holds),
        note="premise: both commands refine Chaos"))
    E.append(_eq("A-together-atomic", [("a", "desc"), ("b", "desc")],
        lambda u, b: ((T.weak_conj(T.atomic(b["a"]), T.atomic(b["b"])),
                       T.join(T.atomic(b["a"]), T.atomic(b["b"]))),)))

    # ---- program and environment steps (§6) -----------------------------
    E.append(_eq("join-pibot-ebot", [],
        lambda u, b: ((T.join(T.atomic(u.pibot), T.atomic(u.ebot)), T.TOP),)))
    E.append(_eq("choice-pi-env", [],
        lambda u, b: ((T.choice(T.atomic(u.pibot), T.atomic(u.ebot)),
                       T.atomic(u.alpha)),)))
    E.append(_eq("negate-e-inf-e", [],
        lambda u, b: ((T.choice(T.atomic(u.ebot.complement()), T.atomic(u.ebot)),
                       T.atomic(u.alpha)),)))
    E.append(_eq("anegate-pibot", [],
        lambda u, b: ((T.atomic(u.pibot.complement()), T.atomic(u.ebot)),)))
    E.append(_eq("pi-inf-pi", [("r1", "rel"), ("r2", "rel")],
        lambda u, b: ((T.atomic(u.pgm_atom(b["r1"] | b["r2"])),
                       T.choice(T.atomic(u.pgm_atom(b["r1"])),
                                T.atomic(u.pgm_atom(b["r2"])))),)))
    E.append(_eq("pi-sup-pi", [("r1", "rel"), ("r2", "rel")],
        lambda u, b: ((T.atomic(u.pgm_atom(b["r1"] & b["r2"])),
                       T.join(T.atomic(u.pgm_atom(b["r1"])),
                              T.atomic(u.pgm_atom(b["r2"]))),),)))
    E.append(_eq("e-inf-e", [("r1", "rel"), ("r2", "rel")],
        lambda u, b: ((T.atomic(u.env_atom(b["r1"] | b["r2"])),
                       T.choice(T.atomic(u.env_atom(b["r1"])),
                                T.atomic(u.env_atom(b["r2"])))),)))
    E.append(_eq("e-sup-e", [("r1", "rel"), ("r2", "rel")],
        lambda u, b: ((T.atomic(u.env_atom(b["r1"] & b["r2"])),
                       T.join(T.atomic(u.env_atom(b["r1"])),
                              T.atomic(u.env_atom(b["r2"]))),),)))

    # ---- specifications, guarantees, relies (§7) ------------------------
    E.append(_eq("L-specification-terminates", [("q", "strel")],
        lambda u, b: ((T.weak_conj(T.spec(b["q"]), T.TERM), T.spec(b["q"])),
                      (T.parallel(T.spec(b["q"]), T.TERM), T.spec(b["q"]))),
        scope="rel"))
    E.append(_ref("L-strengthen-guarantee", [("g1", "rel"), ("g2", "rel")],
        lambda u, b: ((_pguard(u, b["g2"]), _pguard(u, b["g1"])),
                      (T.guar(b["g2"]), T.guar(b["g1"]))),
        side=lambda u, b, o: b["g1"] <= b["g2"],
        scope="rel", note="premise: g1 ⊆ g2"))
    E.append(_eq("L-combine-guarantees", [("g1", "rel"), ("g2", "rel")],
        lambda u, b: ((T.weak_conj(_pguard(u, b["g1"]), _pguard(u, b["g2"])),
                       _pguard(u, b["g1"] & b["g2"])),
                      (T.weak_conj(T.guar(b["g1"]), T.guar(b["g2"])),
                       T.guar(b["g1"] & b["g2"]))),
        scope="rel"))
    E.append(_eq("guar-dist", [("g", "labels"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.weak_conj(T.guar(b["g"]), T.seq(b["c"], b["d"])),
                       T.seq(T.weak_conj(T.guar(b["g"]), b["c"]),
                             T.weak_conj(T.guar(b["g"]), b["d"]))),),
        side=lambda u, b, o: _atomic_built(b["c"]) and _atomic_built(b["d"]),
        note="side condition: both commands consist of atomic steps only"))
    E.append(_ref("L-weaken-rely", [("r0", "rel"), ("r1", "rel")],
        lambda u, b: ((T.rely(b["r0"]), T.rely(b["r1"])),),
        side=lambda u, b, o: b["r0"] <= b["r1"],
        scope="rel", note="premise: r0 ⊆ r1"))
    E.append(_eq("L-combine-relies", [("r1", "rel"), ("r2", "rel")],
        lambda u, b: ((T.weak_conj(T.rely(b["r1"]), T.rely(b["r2"])),
                       T.rely(b["r1"] & b["r2"])),), scope="rel"))

    # ---- relational interpretation (§8) ---------------------------------
    E.append(_eq("A-domain-restriction", [("p", "pred"), ("r", "rel")],
        lambda u, b: ((T.seq(T.test(b["p"], u), T.atomic(u.pgm_atom(b["r"]))),
                       T.atomic(u.pgm_atom(frozenset(
                           l for l in b["r"] if u.label_pre(l) in b["p"])))),
                      (T.seq(T.test(b["p"], u), T.atomic(u.env_atom(b["r"]))),
                       T.atomic(u.env_atom(frozenset(
                           l for l in b["r"] if u.label_pre(l) in b["p"]))))),
        scope="rel"))
    E.append(_eq("A-range-restriction", [("p", "pred"), ("r", "rel")],
        lambda u, b: (lambda rr: (
            (T.seq(T.atomic(u.pgm_atom(rr)), T.test(b["p"], u)),
             T.atomic(u.pgm_atom(rr))),
            (T.seq(T.atomic(u.env_atom(rr)), T.test(b["p"], u)),
             T.atomic(u.env_atom(rr)))))(
                frozenset(l for l in b["r"] if u.label_post(l) in b["p"])),
        scope="rel"))
    E.append(_eq("aczel-pe", [("r1", "rel"), ("r2", "rel")],
        lambda u, b: ((T.parallel(T.atomic(u.pgm_atom(b["r1"])),
                                  T.atomic(u.env_atom(b["r2"]))),
                       T.atomic(u.pgm_atom(b["r1"] & b["r2"]))),), scope="rel"))
    E.append(_eq("aczel-ee", [("r1", "rel"), ("r2", "rel")],
        lambda u, b: ((T.parallel(T.atomic(u.env_atom(b["r1"])),
                                  T.atomic(u.env_atom(b["r2"]))),
                       T.atomic(u.env_atom(b["r1"] & b["r2"]))),), scope="rel"))
    E.append(_eq("aczel-pp", [("r1", "rel"), ("r2", "rel")],
        lambda u, b: ((T.parallel(T.atomic(u.pgm_atom(b["r1"])),
                                  T.atomic(u.pgm_atom(b["r2"]))),
                       T.TOP),), scope="rel"))
    E.append(_eq("L-rely-guar", [("r", "rel")],
        lambda u, b: ((T.rely(b["r"]),
                       T.parallel(T.rely(b["r"]), T.guar(b["r"]))),),
        scope="rel"))
    E.append(_ref("L-parallel-guarantee", [("r", "rel"), ("r1", "rel"), ("c", "cmd")],
        lambda u, b: ((T.weak_conj(T.rely(b["r"]), b["c"]),
                       T.parallel(T.weak_conj(T.rely(b["r"] | b["r1"]), b["c"]),
                                  T.weak_conj(T.guar(b["r"] | b["r1"]),
                                              T.TERM))),),
        side=lambda u, b, o: o.equal(T.parallel(b["c"], T.TERM), b["c"]).holds,
        scope="rel", note="premise: c ∥ Term = c"))
    E.append(_ref("L-introduce-parallel",
        [("r", "rel"), ("r0", "rel"), ("r1", "rel"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.weak_conj(T.rely(b["r"]), T.weak_conj(b["c"], b["d"])),
                       T.parallel(
                           T.weak_conj(T.rely(b["r"] | b["r0"]),
                                       T.weak_conj(T.guar(b["r1"]), b["c"])),
                           T.weak_conj(T.rely(b["r"] | b["r1"]),
                                       T.weak_conj(T.guar(b["r0"]), b["d"])))),),
        side=lambda u, b, o: all(
            o.equal(T.weak_conj(x, T.TERM), x).holds
            and o.equal(T.parallel(x, T.TERM), x).holds
            for x in (b["c"], b["d"])),
        scope="rel", note="premises: c,d unaffected by ⋓ Term and ∥ Term"))
    E.append(_eq("L-conjoin-postcondition", [("q0", "strel"), ("q1", "strel")],
        lambda u, b: ((T.spec(b["q0"] & b["q1"]),
                       T.weak_conj(T.spec(b["q0"]), T.spec(b["q1"]))),),
        scope="rel"))
    E.append(_ref("L-introduce-parallel-rspec",
        [("r", "rel"), ("r0", "rel"), ("r1", "rel"),
         ("q0", "strel"), ("q1", "strel")],
        lambda u, b: ((T.weak_conj(T.rely(b["r"]), T.spec(b["q0"] & b["q1"])),
                       T.parallel(
                           T.weak_conj(T.rely(b["r"] | b["r0"]),
                                       T.weak_conj(T.guar(b["r1"]),
                                                   T.spec(b["q0"]))),
                           T.weak_conj(T.rely(b["r"] | b["r1"]),
                                       T.weak_conj(T.guar(b["r0"]),
                                                   T.spec(b["q1"]))))),),
        scope="rel"))

    # ---- event communication (§9) ---------------------------------------
    def _psync(u, e, f):
        a = u.atom(u.labels_for_events({e}), ())
        bb = u.atom(u.labels_for_events({f}), ())
        return sync_prim(PARALLEL, a, bb)

    E.append(_eq("L-atomic-interleaving", [("e", "event"), ("f", "event")],
        lambda u, b: (lambda g: ((
            T.parallel(T.atev(b["e"]), T.atev(b["f"])),
            T.choice(T.seq(T.om_iter(T.atomic(u.ebot)), T.atomic(g),
                           T.om_iter(T.atomic(u.ebot))),
                     T.seq(T.atev(b["e"]), T.atev(b["f"])),
                     T.seq(T.atev(b["f"]), T.atev(b["e"])))),)
            )(_psync(u, b["e"], b["f"])),
        scope="event",
        note="π(e) ∥ π(f) is folded in as the synchronised branch; when the "
             "steps cannot synchronise that branch is infeasible"))
    E.append(_eq("L-prefixed-interleaving",
        [("e", "event"), ("f", "event"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: (lambda g: ((
            T.parallel(T.seq(T.atev(b["e"]), b["c"]),
                       T.seq(T.atev(b["f"]), b["d"])),
            T.choice(T.seq(T.om_iter(T.atomic(u.ebot)), T.atomic(g),
                           T.om_iter(T.atomic(u.ebot)),
                           T.parallel(b["c"], b["d"])),
                     T.seq(T.atev(b["e"]),
                           T.parallel(b["c"], T.seq(T.atev(b["f"]), b["d"]))),
                     T.seq(T.atev(b["f"]),
                           T.parallel(T.seq(T.atev(b["e"]), b["c"]), b["d"])))),)
            )(_psync(u, b["e"], b["f"])),
        side=lambda u, b, o: (_is_prefixed(u, b["c"], o)
                              and _is_prefixed(u, b["d"], o)),
        scope="event", note="premise: c and d absorb a leading ε̲^ω"))
    E.append(_eq("A-rename-nil", [],
        lambda u, b: (((T.rename(_any_rename(u), T.NIL)), T.NIL),),
        scope="event"))
    E.append(_eq("A-rename-choice", [("c", "cmd"), ("d", "cmd")],
        lambda u, b: (lambda ph: ((T.rename(ph, T.choice(b["c"], b["d"])),
                                   T.choice(T.rename(ph, b["c"]),
                                            T.rename(ph, b["d"]))),)
                      )(_any_rename(u)),
        scope="event"))
    E.append(_eq("A-rename-seq", [("c", "cmd"), ("d", "cmd")],
        lambda u, b: (lambda ph: ((T.rename(ph, T.seq(b["c"], b["d"])),
                                   T.seq(T.rename(ph, b["c"]),
                                         T.rename(ph, b["d"]))),)
                      )(_any_rename(u)),
        scope="event"))
    E.append(_eq("A-rename-atomic", [("a", "desc")],
        lambda u, b: (lambda ph: ((T.rename(ph, T.atomic(b["a"])),
                                   T.atomic(u.atom(
                                       {ph.apply(s)[1] for s in b["a"].steps()
                                        if s[0] == "pgm"},
                                       b["a"].env))),))(_any_rename(u)),
        scope="event"))
    E.append(_eq("ccs-pp", [("e", "baseevent")],
        lambda u, b: ((T.parallel(
                          T.atomic(u.atom(u.labels_for_events({b["e"]}), ())),
                          T.atomic(u.atom(
                              u.labels_for_events({u.complements[b["e"]]}), ()))),
                       T.atomic(u.atom(u.labels_for_events({SILENT}), ()))),),
        scope="ccs"))
    E.append(_eq("ccs-atev-sync", [("e", "baseevent")],
        lambda u, b: (lambda eb: ((
            T.parallel(T.atev(b["e"]), T.atev(eb)),
            T.choice(T.atev(SILENT),
                     T.seq(T.atev(b["e"]), T.atev(eb)),
                     T.seq(T.atev(eb), T.atev(b["e"])))),)
            )(u.complements[b["e"]]),
        scope="ccs"))
    E.append(_eq("L-atomic-restriction",
        [("E", "eventset"), ("e", "event"), ("f", "event")],
        lambda u, b: ((T.weak_conj(T.atev(b["e"]),
                                   T.guar(u.labels_for_events(b["E"]))),
                       T.atev(b["e"])),
                      (T.weak_conj(T.atev(b["f"]),
                                   T.guar(u.labels_for_events(b["E"]))),
                       T.seq(T.om_iter(T.atomic(u.ebot)), T.TOP))),
        side=lambda u, b, o: b["e"] in b["E"] and b["f"] not in b["E"],
        scope="event", note="an event inside/outside the guarantee set"))
    E.append(_eq("omsidtop-elim", [("e", "event")],
        lambda u, b: ((T.choice(T.atev(b["e"]),
                                T.seq(T.om_iter(T.atomic(u.ebot)), T.TOP)),
                       T.atev(b["e"])),), scope="event"))
    E.append(_eq("L-ccs-synchronise", [("e", "baseevent")],
        lambda u, b: ((T.ccs_restrict_term(
                          frozenset({b["e"], u.complements[b["e"]]}),
                          T.parallel(T.atev(b["e"]),
                                     T.atev(u.complements[b["e"]]))),
                       T.atev(SILENT)),), scope="ccs"))
    E.append(_eq("csp-pp", [("e", "baseevent")],
        lambda u, b: ((T.parallel(
                          T.atomic(u.atom(u.labels_for_events({b["e"]}), ())),
                          T.atomic(u.atom(u.labels_for_events({b["e"]}), ()))),
                       T.atomic(u.atom(u.labels_for_events({u.tags[b["e"]]}),
                                       ()))),),
        scope="csp"))
    E.append(_eq("csp-atev-sync", [("e", "baseevent")],
        lambda u, b: ((T.parallel(T.atev(b["e"]), T.atev(b["e"])),
                       T.choice(T.atev(u.tags[b["e"]]),
                                T.seq(T.atev(b["e"]), T.atev(b["e"])))),),
        scope="csp"))
    E.append(_eq("L-atomic-sync", [("e", "baseevent")],
        lambda u, b: ((T.csp_parallel_term(frozenset({b["e"]}),
                                           T.atev(b["e"]), T.atev(b["e"])),
                       T.atev(b["e"])),), scope="csp"))
    E.append(_eq("csp-synchronise", [("e", "baseevent"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.csp_parallel_term(frozenset({b["e"]}),
                                           T.seq(T.atev(b["e"]), b["c"]),
                                           T.seq(T.atev(b["e"]), b["d"])),
                       T.seq(T.atev(b["e"]),
                             T.csp_parallel_term(frozenset({b["e"]}),
                                                 b["c"], b["d"]))),),
        side=lambda u, b, o: (_is_prefixed(u, b["c"], o)
                              and _is_prefixed(u, b["d"], o)),
        scope="csp", note="premise: c and d absorb a leading ε̲^ω"))
    E.append(_eq("csp-interleave",
        [("e", "baseevent"), ("f", "baseevent"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.csp_parallel_term(frozenset({b["e"]}),
                                           T.seq(T.atev(b["e"]), b["c"]),
                                           T.seq(T.atev(b["f"]), b["d"])),
                       T.seq(T.atev(b["f"]),
                             T.csp_parallel_term(frozenset({b["e"]}),
                                                 T.seq(T.atev(b["e"]), b["c"]),
                                                 b["d"]))),),
        side=lambda u, b, o: (b["e"] != b["f"]
                              and _is_prefixed(u, b["c"], o)
                              and _is_prefixed(u, b["d"], o)),
        scope="csp"))
    E.append(_eq("csp-hiding", [("e", "baseevent"), ("c", "cmd"), ("d", "cmd")],
        lambda u, b: ((T.hide_term(frozenset({b["e"]}),
                                   T.csp_parallel_term(
                                       frozenset({b["e"]}),
                                       T.seq(T.atev(b["e"]), b["c"]),
                                       T.seq(T.atev(b["e"]), b["d"]))),
                       T.seq(T.atev(SILENT),
                             T.hide_term(frozenset({b["e"]}),
                                         T.csp_parallel_term(frozenset({b["e"]}),
                                                             b["c"], b["d"])))),),
        side=lambda u, b, o: (_is_prefixed(u, b["c"], o)
                              and _is_prefixed(u, b["d"], o)),
        scope="csp"))
    E.append(_eq("interp-csps", [("T1", "rel"), ("T2", "rel")],
        lambda u, b: ((T.parallel(T.atomic(u.pgm_atom(b["T1"])),
                                  T.atomic(u.pgm_atom(b["T2"]))),
                       T.atomic(u.pgm_atom(frozenset(
                           (s, u.tags[e], s2)
                           for (s, e, s2) in b["T1"] & b["T2"]
                           if e in u.tags)))),),
        scope="combined",
        note="matching state-event-state triples merge into a tagged step"))

    # ---- definitional laws (for folding/unfolding in proofs) ------------
    E.append(_eq("def-assume", [("a", "desc")],
        lambda u, b: ((T.assume_step(b["a"]),
                       T.choice(T.atomic(b["a"]),
                                T.seq(T.atomic(b["a"].complement()), T.BOT))),)))
    E.append(_eq("def-assert", [("p", "pred")],
        lambda u, b: ((T.assert_test(b["p"]),
                       T.choice(T.test(b["p"], u),
                                T.seq(T.test(u.all_states - b["p"], u),
                                      T.BOT))),), scope="rel"))
    E.append(_eq("def-skip", [],
        lambda u, b: ((T.SKIP, T.om_iter(T.atomic(u.ebot))),)))
    E.append(_eq("def-chaos", [],
        lambda u, b: ((T.CHAOS, T.om_iter(T.atomic(u.alpha))),)))
    E.append(_eq("def-term", [],
        lambda u, b: ((T.TERM, T.seq(T.fin_iter(T.atomic(u.alpha)),
                                     T.om_iter(T.atomic(u.ebot)))),)))
    E.append(_eq("def-inf", [("c", "cmd")],
        lambda u, b: ((T.inf_iter(b["c"]),
                       T.seq(T.om_iter(b["c"]), T.TOP)),)))
    E.append(_eq("def-guar", [("g", "rel")],
        lambda u, b: ((T.guar(b["g"]), T.om_iter(_pguard(u, b["g"]))),),
        scope="rel"))
    E.append(_eq("def-rely", [("r", "rel")],
        lambda u, b: ((T.rely(b["r"]), T.om_iter(_eassume(u, b["r"]))),),
        scope="rel"))
    E.append(_eq("def-atev", [("e", "event")],
        lambda u, b: ((T.atev(b["e"]),
                       T.seq(T.om_iter(T.atomic(u.ebot)),
                             T.atomic(u.pgm_atom(u.labels_for_events({b["e"]}))),
                             T.om_iter(T.atomic(u.ebot)))),), scope="event"))
    E.append(_eq("def-ccs-restrict", [("E", "eventset"), ("c", "cmd")],
        lambda u, b: ((T.ccs_restrict_term(b["E"], b["c"]),
                       T.weak_conj(b["c"],
                                   T.guar(u.labels_for_events(
                                       frozenset(u.events) - b["E"])))),),
        scope="event"))

    # ---- negative catalog ------------------------------------------------
    E.append(_eq("N-strong-test-distribution",
        [("c", "cmd"), ("t", "pred"), ("d", "cmd")],
        lambda u, b: ((_sync(b["m"], b["c"], T.seq(T.test(b["t"], u), b["d"])),
                       T.seq(T.test(b["t"], u), _sync(b["m"], b["c"], b["d"]))),),
        modes=_STRICT_MODES, scope="rel", negative=True,
        note="test distribution fails for commands that can abort"))
    E.append(_eq("N-left-distribution-empty-choice", [("c", "cmd")],
        lambda u, b: ((T.seq(b["c"], T.TOP), T.TOP),),
        negative=True,
        note="sequential composition is conjunctive, not universally so"))
    E.append(_eq("N-sync-top", [("c", "cmd")],
        lambda u, b: ((_sync(b["m"], b["c"], T.TOP), T.TOP),),
        modes=_STRICT_MODES, negative=True,
        note="fails because parallel and weak conjunction are abort-strict"))

    return tuple(E)


def _any_rename(uni):
    """A canonical non-trivial renaming for exercising the rename axioms."""
    evs = [e for e in uni.base_events if e != SILENT]
    from .universe import RenameMap
    if not evs:
        return RenameMap(uni, {})
    return RenameMap(uni, {evs[0]: SILENT})


CATALOG = _catalog()


# -- rewriting -------------------------------------------------------------

def _occurring_values(sub, uni):
    """Candidate binding values harvested from a subterm, per sort."""
    cmds = list(T.subterms(sub)) + [T.NIL, T.BOT, T.TOP]
    descs = set()
    preds = set()
    rels = set()
    strels = set()
    events = set()
    esets = set()
    for t in cmds:
        if t.tag == "atomic":
            descs.add(t.desc)
            rels.add(frozenset(t.desc.pgm))
            rels.add(frozenset(t.desc.env))
        elif t.tag == "test":
            preds.add(t.pred)
        elif t.tag == "derived":
            k = t.dkind
            if k == "assume":
                descs.add(t.dargs[0])
            elif k == "assert":
                preds.add(t.dargs[0])
            elif k in ("guar", "rely"):
                rels.add(t.dargs[0])
            elif k == "spec":
                strels.add(t.dargs[0])
            elif k == "atev":
                events.add(t.dargs[0])
            elif k in ("ccsres", "csppar", "hide"):
                esets.add(t.dargs[0])
    descs |= {uni.pibot, uni.ebot, uni.alpha}
    preds |= {frozenset(), uni.all_states}
    rels |= {frozenset(), uni.full_labels}
    return {
        "cmd": cmds,
        "desc": sorted(descs, key=lambda d: d.key()),
        "pred": sorted(preds, key=sorted),
        "test": sorted(preds, key=sorted),
        "rel": sorted(rels, key=sorted),
        "labels": sorted(rels, key=sorted),
        "strel": sorted(strels, key=sorted) or
                 [frozenset((s1, s2) for s1 in uni.states
                            for s2 in uni.states)],
        "nat": list(range(5)),
        "mode": None,  # filled from the law
        "event": sorted(events) or
                 [e for e in getattr(uni, "events", ()) if e != SILENT],
        "baseevent": sorted(events) or
                     [e for e in getattr(uni, "base_events", ())
                      if e != SILENT],
        "eventset": sorted(esets, key=sorted) or
                    [frozenset(e for e in getattr(uni, "base_events", ())
                               if e != SILENT)],
    }


def _candidate_bindings(law, uni, sub, given, cap=40000):
    names = []
    domains = []
    for (n, s) in law.all_vars():
        if n in given:
            continue
        names.append(n)
        if s == "mode":
            domains.append(list(law.modes))
        else:
            domains.append(_occurring_values(sub, uni)[s])
    if not names:
        yield dict(given)
        return
    count = 0
    for combo in itertools.product(*domains):
        if count >= cap:
            return
        count += 1
        b = dict(given)
        b.update(zip(names, combo))
        yield b


def rewrite_step(uni, term, law, direction, path=(), binding=None,
                 bounds=None):
    """Apply a law at a position; returns the rewritten term.

    direction is '->' (left to right) or '<-' (equality laws only).
    An incomplete binding is completed by bounded search over values
    occurring in the subterm.
    """
    if isinstance(law, str):
        law = get_law(law)
    if law.negative:
        raise LawError("cannot rewrite with the non-law %s" % law.name)
    if direction not in ("->", "<-"):
        raise LawError("direction must be -> or <-")
    if direction == "<-" and law.kind != "equality":
        raise LawError("%s is a refinement law; reverse application would "
                       "strengthen, not refine" % law.name)
    sub = T.subterm_at(term, path)
    oracle = Oracle(uni, bounds or Bounds())
    for b in _candidate_bindings(law, uni, sub, binding or {}):
        try:
            pairs = law.build(uni, b)
        except Exception:
            continue
        for (lhs, rhs) in pairs:
            if direction == "<-":
                lhs, rhs = rhs, lhs
            new_sub = _match_replace(sub, lhs, rhs)
            if new_sub is None or new_sub is sub:
                continue
            # match first, then the (possibly oracle-backed) premise
            if law.side is not None and not law.side(uni, b, oracle):
                continue
            return T.replace_at(term, path, new_sub)
    raise LawError("law %s (%s) does not match at path %s in %s"
                   % (law.name, direction, list(path), term._str))


def _seq_flatten(t):
    parts = []
    while t.tag == "seq":
        parts.append(t.args[0])
        t = t.args[1]
    parts.append(t)
    return parts


def _match_replace(sub, lhs, rhs):
    """Rewrite lhs to rhs inside sub, up to flattening.

    Exact match aside, a choice/join law may rewrite a subset of an n-ary
    node's items, and a sequential law may rewrite a prefix of a
    right-nested composition; both are sound modulo associativity and
    commutativity of the operators involved.
    """
    if lhs is sub:
        return rhs
    if lhs.tag == sub.tag and lhs.tag in ("choice", "join"):
        li = set(lhs.items)
        si = list(sub.items)
        if li < set(si):
            rest = [x for x in si if x not in li]
            ctor = T.choice if sub.tag == "choice" else T.join
            return ctor(rhs, *rest)
    if sub.tag == "seq":
        sparts = _seq_flatten(sub)
        lparts = _seq_flatten(lhs) if lhs.tag == "seq" else [lhs]
        n = len(lparts)
        if n < len(sparts) and sparts[:n] == lparts:
            return T.seq(rhs, *sparts[n:])
    return None


# -- derivation replay -----------------------------------------------------

@dataclass
class ReplayResult:
    outcome: str  # 'holds' | 'fails'
    steps: int = 0
    diagnostic: str = ""

    @property
    def holds(self):
        return self.outcome == "holds"


_STEP_RE = re.compile(r"^(\S+)\s+(->|<-)\s+at\s+(\S+)(?:\s+with\s+(.*))?$")


def _parse_path(s):
    if s in ("root", "."):
        return ()
    return tuple(int(x) for x in s.split("."))


def _split_top(s, sep=","):
    out = []
    depth = 0
    cur = []
    for ch in s:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return [x.strip() for x in out if x.strip()]


def parse_value(text, sort, uni):
    """Parse a binding value from its script notation."""
    from .parser import _Parser, parse
    text = text.strip()
    if sort == "mode":
        if text not in (PARALLEL, WEAKCONJ, JOIN):
            raise LawError("unknown mode %r" % text)
        return text
    if sort == "nat":
        return int(text)
    if sort in ("event", "baseevent"):
        return text
    if sort in ("pred", "test", "rel", "labels", "strel", "eventset"):
        if text.startswith("{"):
            p = _Parser(text, uni)
            s = p.set_literal()
            if p.peek() is not None:
                raise LawError("trailing input in %r" % text)
            return s
        for table in (uni.predicates, uni.relations, uni.eventsets):
            if text in table:
                return table[text]
        raise LawError("unknown named set %r" % text)
    if sort == "desc":
        t = parse(text, uni)
        if t.tag != "atomic":
            raise LawError("%r is not an atomic step" % text)
        return t.desc
    return parse(text, uni)


def replay_derivation(uni, text, bounds=None, check_steps=True):
    """Run a derivation script; holds iff every step applies and the final
    term is the declared goal.  Each step is spot-checked with the oracle."""
    bounds = bounds or Bounds()
    oracle = Oracle(uni, bounds)
    from .parser import parse
    initial = goal = None
    current = None
    nsteps = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("initial:"):
            initial = parse(line[len("initial:"):], uni)
            current = initial
            continue
        if line.startswith("goal:"):
            goal = parse(line[len("goal:"):], uni)
            continue
        if current is None:
            return ReplayResult("fails", nsteps,
                                "line %d: step before initial:" % lineno)
        m = _STEP_RE.match(line)
        if not m:
            return ReplayResult("fails", nsteps,
                                "line %d: cannot parse step %r" % (lineno, line))
        name, direction, pathtxt, withtxt = m.groups()
        try:
            law = get_law(name)
            binding = {}
            if withtxt:
                sorts = dict(law.all_vars())
                for item in _split_top(withtxt):
                    var, _, val = item.partition("=")
                    var = var.strip()
                    if var not in sorts:
                        raise LawError("law %s has no metavariable %r"
                                       % (name, var))
                    binding[var] = parse_value(val, sorts[var], uni)
            new = rewrite_step(uni, current, law, direction,
                               _parse_path(pathtxt), binding, bounds)
        except LawError as e:
            return ReplayResult("fails", nsteps,
                                "line %d: %s" % (lineno, e))
        if check_steps:
            if law.kind == "equality":
                v = oracle.equal(current, new)
            elif direction == "->":
                v = oracle.refines(current, new)
            else:
                v = oracle.refines(new, current)
            if not v.holds:
                return ReplayResult("fails", nsteps,
                                    "line %d: rewrite is unsound within "
                                    "bounds: %s" % (lineno, v.render(uni)))
        current = new
        nsteps += 1
    if initial is None or goal is None:
        return ReplayResult("fails", nsteps, "missing initial: or goal: line")
    if current is not goal:
        v = oracle.equal(current, goal)
        hint = " (but oracle-equal)" if v.holds else ""
        return ReplayResult("fails", nsteps,
                            "final term %s is not the goal %s%s"
                            % (current._str, goal._str, hint))
    return ReplayResult("holds", nsteps)
