"""Finite-model behaviour semantics via step derivatives.

A behaviour is an initial state, a chained sequence of primitive steps and
a final status (terminated or aborted).  Aborted behaviours are closed
under arbitrary extension with any status, which makes bottom the command
holding every behaviour.  Infinite behaviours are represented by lassos
(ultimately periodic words) and decided by a cycle search over
nondeterministic (Antimirov-style) residuals.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import terms as T
from .universe import PARALLEL, WEAKCONJ


class SemanticsError(ValueError):
    pass


class ResourceExhausted(Exception):
    """A residual cap was hit; the check is inconclusive."""

    def __init__(self, diagnostic):
        super().__init__(diagnostic)
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class Behaviour:
    init: str
    steps: tuple
    status: str  # 'terminated' | 'aborted'

    def render(self, uni):
        out = [self.init]
        for s in self.steps:
            out.append("-%s->" % uni.render_step(s))
            out.append(uni.step_post(s))
        out.append("[%s]" % self.status)
        return " ".join(out)


@dataclass(frozen=True)
class Lasso:
    init: str
    prefix: tuple
    loop: tuple

    def render(self, uni):
        out = [self.init]
        for s in self.prefix:
            out.append("-%s->" % uni.render_step(s))
            out.append(uni.step_post(s))
        for s in self.loop:
            out.append("-%s->" % uni.render_step(s))
            out.append(uni.step_post(s))
        out.append("[loop@%d]" % len(self.prefix))
        return " ".join(out)


def check_behaviour(uni, b):
    """Validate the chaining invariant."""
    st = b.init
    if st not in uni.all_states:
        raise SemanticsError("unknown initial state %r" % b.init)
    for s in b.steps:
        if uni.step_pre(s) != st:
            raise SemanticsError("behaviour steps do not chain")
        st = uni.step_post(s)
    return st


def check_lasso(uni, l):
    if not l.loop:
        raise SemanticsError("lasso loop must be non-empty")
    st = check_behaviour(uni, Behaviour(l.init, l.prefix + l.loop, "terminated"))
    if st != uni.step_pre(l.loop[0]):
        raise SemanticsError("lasso loop does not close")


class Semantics:
    """Membership oracle for one universe; memoizes per instance."""

    def __init__(self, uni, residual_cap=10000):
        self.uni = uni
        self.residual_cap = residual_cap
        self._dv = {}
        self._ct = {}
        self._ab = {}
        self._nd = {}
        self._lv = set()  # lassos already validated against the universe
        self._work = 0

    def reset_work(self):
        """Restart the per-decision work budget; caches are kept."""
        self._work = 0

    # -- nullability and abort analysis ----------------------------------

    def can_terminate(self, t, state):
        key = (t, state)
        v = self._ct.get(key)
        if v is None:
            # an aborting command admits every behaviour, termination included
            v = self._can_terminate(t, state) or self.aborts_now(t, state)
            self._ct[key] = v
        return v

    def _can_terminate(self, t, state):
        tag = t.tag
        if tag in ("nil", "bot", "fin", "om"):
            return True
        if tag in ("top", "atomic", "inf"):
            return False
        if tag == "test":
            return state in t.pred
        if tag == "seq":
            return (self.can_terminate(t.args[0], state)
                    and self.can_terminate(t.args[1], state))
        if tag == "choice":
            return any(self.can_terminate(x, state) for x in t.items)
        if tag == "join":
            return all(self.can_terminate(x, state) for x in t.items)
        if tag == "sync":
            return (self.can_terminate(t.args[1], state)
                    and self.can_terminate(t.args[2], state))
        if tag == "rename":
            return self.can_terminate(t.args[1], state)
        if tag == "derived":
            raise SemanticsError("derived form in oracle; expand first: %s" % t)
        raise SemanticsError("unexpected term %s" % t)

    def aborts_now(self, t, state):
        key = (t, state)
        v = self._ab.get(key)
        if v is None:
            v = self._aborts_now(t, state)
            self._ab[key] = v
        return v

    def _aborts_now(self, t, state):
        tag = t.tag
        if tag == "bot":
            return True
        if tag in ("top", "nil", "test", "atomic"):
            return False
        if tag == "seq":
            c, d = t.args
            return (self.aborts_now(c, state)
                    or (self.can_terminate(c, state) and self.aborts_now(d, state)))
        if tag == "choice":
            return any(self.aborts_now(x, state) for x in t.items)
        if tag == "join":
            return all(self.aborts_now(x, state) for x in t.items)
        if tag == "sync":
            # abort-strictness of both parallel and weak conjunction
            return (self.aborts_now(t.args[1], state)
                    or self.aborts_now(t.args[2], state))
        if tag == "fin":
            return self.aborts_now(t.body, state)
        if tag in ("om", "inf"):
            # an iterable empty body diverges, and divergence is abort
            return (self.aborts_now(t.body, state)
                    or self.can_terminate(t.body, state))
        if tag == "rename":
            return self.aborts_now(t.args[1], state)
        if tag == "derived":
            raise SemanticsError("derived form in oracle; expand first: %s" % t)
        raise SemanticsError("unexpected term %s" % t)

    # -- merged (Brzozowski-style) derivative ----------------------------

    def derivative(self, t, s):
        key = (t, s)
        v = self._dv.get(key)
        if v is None:
            v = self._derivative(t, s)
            self._dv[key] = v
            self._work += 1
            if self._work > self.residual_cap:
                raise ResourceExhausted(
                    "residual cap %d exceeded while deriving %s" %
                    (self.residual_cap, t))
        return v

    def _derivative(self, t, s):
        state = self.uni.step_pre(s)
        if self.aborts_now(t, state):
            # abort-closure: everything is possible from here on
            return T.BOT
        tag = t.tag
        if tag in ("top", "nil", "test"):
            return T.TOP
        if tag == "atomic":
            return T.NIL if t.desc.contains_step(s) else T.TOP
        if tag == "seq":
            c, d = t.args
            alts = [T.seq(self.derivative(c, s), d)]
            if self.can_terminate(c, state):
                alts.append(self.derivative(d, s))
            return T.choice(*alts)
        if tag == "choice":
            return T.choice(*(self.derivative(x, s) for x in t.items))
        if tag == "join":
            return T.join(*(self.derivative(x, s) for x in t.items))
        if tag == "sync":
            # A branch where one side's residual is top needs care: top as a
            # residual means "engaged the step into infeasibility", which is
            # different from refusing the step.  An engaged-infeasible side
            # still shares the post-step instant, so the other side's abort
            # is strict there (bottom); anything else contributes nothing.
            mode, c, d = t.args
            tbl = self.uni.pair_table(mode)
            post = self.uni.step_post(s)
            alts = []
            for (s1, s2) in tbl.get(s, ()):
                c2 = self.derivative(c, s1)
                if c2 is T.TOP and not self.engages(c, s1):
                    continue
                d2 = self.derivative(d, s2)
                if d2 is T.TOP and not self.engages(d, s2):
                    continue
                if c2 is T.TOP or d2 is T.TOP:
                    other = d2 if c2 is T.TOP else c2
                    if other is not T.TOP and self.aborts_now(other, post):
                        alts.append(T.BOT)
                    continue
                alts.append(T.sync(mode, c2, d2))
            return T.choice(*alts)
        if tag in ("fin", "om", "inf"):
            b2 = self.derivative(t.body, s)
            if b2 is T.TOP:
                return T.TOP
            return T.seq(b2, t)
        if tag == "rename":
            rm, c = t.args
            alts = []
            for sp in rm.preimages(s):
                c2 = self.derivative(c, sp)
                if c2 is not T.TOP:
                    alts.append(T.rename(rm, c2))
            return T.choice(*alts)
        raise SemanticsError("cannot derive %s" % t)

    # -- finite membership -----------------------------------------------

    def member(self, t, b):
        check_behaviour(self.uni, b)
        cur = t
        state = b.init
        for s in b.steps:
            if self.aborts_now(cur, state):
                return True
            cur = self.derivative(cur, s)
            state = self.uni.step_post(s)
        if self.aborts_now(cur, state):
            return True
        if b.status == "aborted":
            return False
        return self.can_terminate(cur, state)

    # -- nondeterministic residuals for the lasso check ------------------

    def nd_derivatives(self, t, s):
        """Branches (t', restarted-finite-iteration?) after consuming s.

        Unlike the merged derivative, top residuals are kept: a branch
        ending in top means the step was engaged but nothing can follow,
        which is how engagement is distinguished from refusal.
        """
        key = (t, s)
        v = self._nd.get(key)
        if v is None:
            v = tuple(self._nd_derivatives(t, s))
            self._nd[key] = v
        return v

    def engages(self, t, s):
        """Can t take part in step s at all (possibly into infeasibility)?"""
        return bool(self.nd_derivatives(t, s))

    def _nd_derivatives(self, t, s):
        state = self.uni.step_pre(s)
        out = set()
        if self.aborts_now(t, state):
            # bottom admits every continuation, including infinite ones
            out.add((T.BOT, False))
        tag = t.tag
        if tag == "atomic":
            if t.desc.contains_step(s):
                out.add((T.NIL, False))
        elif tag == "seq":
            c, d = t.args
            for (c2, f) in self.nd_derivatives(c, s):
                out.add((T.seq(c2, d), f))
            if self.can_terminate(c, state):
                out.update(self.nd_derivatives(d, s))
        elif tag == "choice":
            for x in t.items:
                out.update(self.nd_derivatives(x, s))
        elif tag == "join":
            combos = [((), False)]
            for x in t.items:
                branches = self.nd_derivatives(x, s)
                combos = [(parts + (x2,), f or f2)
                          for (parts, f) in combos
                          for (x2, f2) in branches]
                if not combos:
                    break
            for (parts, f) in combos:
                out.add((T.join(*parts), f))
        elif tag == "sync":
            mode, c, d = t.args
            tbl = self.uni.pair_table(mode)
            post = self.uni.step_post(s)
            for (s1, s2) in tbl.get(s, ()):
                for (c2, f1) in self.nd_derivatives(c, s1):
                    for (d2, f2) in self.nd_derivatives(d, s2):
                        if c2 is T.TOP or d2 is T.TOP:
                            other = d2 if c2 is T.TOP else c2
                            if other is not T.TOP and self.aborts_now(other, post):
                                out.add((T.BOT, False))
                            continue
                        out.add((T.sync(mode, c2, d2), f1 or f2))
        elif tag == "fin":
            for (b2, _f) in self.nd_derivatives(t.body, s):
                out.add((T.seq(b2, t), True))
        elif tag in ("om", "inf"):
            for (b2, f) in self.nd_derivatives(t.body, s):
                out.add((T.seq(b2, t), f))
        elif tag == "rename":
            rm, c = t.args
            for sp in rm.preimages(s):
                for (c2, f) in self.nd_derivatives(c, sp):
                    out.add((T.TOP if c2 is T.TOP else T.rename(rm, c2), f))
        elif tag == "derived":
            raise SemanticsError("derived form in oracle; expand first: %s" % t)
        return out

    # -- lasso membership ------------------------------------------------

    def member_lasso(self, t, l):
        if l not in self._lv:
            check_lasso(self.uni, l)
            self._lv.add(l)
        word = l.prefix + l.loop
        n = len(word)
        wrap = len(l.prefix)

        def nxt(i):
            i += 1
            return wrap if i == n else i

        # Phase 1: walk the merged derivative; accept if the abort closure
        # triggers anywhere along the (eventually periodic) word.
        cur = t
        pos = 0
        seen = set()
        while (cur, pos) not in seen:
            seen.add((cur, pos))
            s = word[pos]
            if self.aborts_now(cur, self.uni.step_pre(s)):
                return True
            cur = self.derivative(cur, s)
            if cur is T.TOP:
                return False
            pos = nxt(pos)

        # Phase 2: search for a genuinely infinite run: a reachable cycle of
        # nondeterministic residuals that never restarts a finite iteration.
        start = (t, 0)
        adj = {}
        stack = [start]
        nodes = {start}
        while stack:
            (u, i) = stack.pop()
            s = word[i]
            edges = []
            for (u2, flag) in self.nd_derivatives(u, s):
                v = (u2, nxt(i))
                edges.append((v, flag))
                if v not in nodes:
                    nodes.add(v)
                    if len(nodes) > self.residual_cap:
                        raise ResourceExhausted(
                            "lasso residual cap exceeded for %s" % t)
                    stack.append(v)
            adj[(u, i)] = edges
        return _has_unflagged_cycle(adj)


def _has_unflagged_cycle(adj):
    """Cycle detection restricted to flag-free edges (iterative DFS)."""
    graph = {u: [v for (v, flag) in es if not flag] for u, es in adj.items()}
    color = {}
    for root in graph:
        if root in color:
            continue
        stack = [(root, iter(graph[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for v in it:
                if color.get(v) == 1:
                    return True
                if v not in color:
                    color[v] = 1
                    stack.append((v, iter(graph.get(v, ()))))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    return False


# -- behaviour enumeration -------------------------------------------------

def enumerate_finite(uni, maxlen):
    """Every chaining-consistent Behaviour with |steps| <= maxlen."""
    for init in uni.states:
        stack = [(init, ())]
        while stack:
            state, steps = stack.pop()
            yield Behaviour(init, steps, "terminated")
            yield Behaviour(init, steps, "aborted")
            if len(steps) < maxlen:
                for s in uni.steps_from(state):
                    stack.append((uni.step_post(s), steps + (s,)))


def enumerate_lassos(uni, maxlassolen):
    """Every Lasso with |prefix|+|loop| <= maxlassolen."""
    for init in uni.states:
        stack = [(init, ())]
        while stack:
            state, steps = stack.pop()
            m = len(steps)
            for k in range(m):
                if uni.step_pre(steps[k]) == state:
                    yield Lasso(init, steps[:k], steps[k:])
            if m < maxlassolen:
                for s in uni.steps_from(state):
                    stack.append((uni.step_post(s), steps + (s,)))


def enumerate_behaviours(uni, maxlen, maxlassolen):
    yield from enumerate_finite(uni, maxlen)
    yield from enumerate_lassos(uni, maxlassolen)


def canonical_lasso(l):
    """Canonical representative of the infinite word u.v^w.

    Reduces the loop to its primitive period and rolls the prefix back
    through the loop as far as possible, so two lassos denoting the same
    infinite word map to the same representative.
    """
    u, v = list(l.prefix), list(l.loop)
    # primitive period
    for p in range(1, len(v)):
        if len(v) % p == 0 and v == v[:p] * (len(v) // p):
            v = v[:p]
            break
    # roll the prefix into the loop: u.v^w == u[:-1].(rot(v))^w when
    # u's last step equals v's last step
    while u and u[-1] == v[-1]:
        u.pop()
        v = [v[-1]] + v[:-1]
    return (l.init if not u else l.init, tuple(u), tuple(v))


def distinct_lassos(uni, maxlassolen):
    """Lassos deduplicated up to denoting the same infinite word."""
    seen = set()
    out = []
    for l in enumerate_lassos(uni, maxlassolen):
        key = canonical_lasso(l)
        if key not in seen:
            seen.add(key)
            out.append(l)
    return out
