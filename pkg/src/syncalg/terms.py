"""Command terms: hash-consed syntax trees with normalizing constructors.

Terms are interned: structurally equal terms are the same object, so `is`
is structural equality and terms can key dicts/sets cheaply.  The smart
constructors apply local, semantics-preserving normalizations only:
sequence right-association and unit/annihilator laws, AC-flattening and
deduplication of choice/join sets, test fusion into atomic steps, and
canonicalization of empty tests/atoms.
"""

from __future__ import annotations

from .universe import AtomicDesc, RenameMap, UniverseError, JOIN, PARALLEL, WEAKCONJ


class TermError(ValueError):
    pass


_INTERN = {}


class Term:
    __slots__ = ("tag", "args", "_str")

    def __init__(self, tag, args, s):
        self.tag = tag
        self.args = args
        self._str = s

    # interned: default identity __eq__/__hash__

    def __repr__(self):
        return self._str

    # accessors (valid per tag)
    @property
    def left(self):
        return self.args[0] if self.tag == "seq" else self.args[1]

    @property
    def right(self):
        return self.args[1] if self.tag == "seq" else self.args[2]

    @property
    def items(self):
        return self.args[0]

    @property
    def mode(self):
        return self.args[0]

    @property
    def body(self):
        return self.args[0] if self.tag in ("fin", "om", "inf") else self.args[1]

    @property
    def desc(self):
        return self.args[0]

    @property
    def pred(self):
        return self.args[0]

    @property
    def rmap(self):
        return self.args[0]

    @property
    def dkind(self):
        return self.args[0]

    @property
    def dargs(self):
        return self.args[1]


def _mk(tag, args, s):
    key = (tag,) + tuple(_keypart(a) for a in args)
    t = _INTERN.get(key)
    if t is None:
        t = Term(tag, args, s)
        _INTERN[key] = t
    return t


def _keypart(a):
    if isinstance(a, frozenset):
        return tuple(sorted(a))
    if isinstance(a, tuple):
        return tuple(_keypart(x) for x in a)
    return a


BOT = _mk("bot", (), "bot")
TOP = _mk("top", (), "top")
NIL = _mk("nil", (), "nil")


def _set_str(s):
    return "{%s}" % ",".join(str(x) if isinstance(x, str) else
                             "(%s)" % ",".join(x) for x in sorted(s))


def test(pred, universe=None):
    """Instantaneous test; infeasible where the predicate fails.

    If a universe is given, a test over the full state set collapses to nil.
    The empty test is always infeasible (top).
    """
    pred = frozenset(pred)
    if not pred:
        return TOP
    if universe is not None and pred == universe.all_states:
        return NIL
    return _mk("test", (pred,), "test(%s)" % _set_str(pred))


def atomic(desc):
    if not isinstance(desc, AtomicDesc):
        raise TermError("atomic() takes an AtomicDesc")
    if desc.is_empty():
        return TOP
    return _mk("atomic", (desc,), "astep(%s)" % desc.render())


def seq(*parts):
    out = NIL
    for p in reversed(parts):
        out = _seq2(p, out)
    return out


def _seq2(a, b):
    _chk(a)
    _chk(b)
    if a is NIL:
        return b
    if b is NIL:
        return a
    if a is BOT:
        return BOT
    if a is TOP:
        return TOP
    if a.tag == "seq":
        # re-associate to the right
        return _seq2(a.args[0], _seq2(a.args[1], b))
    if a.tag == "test":
        if b.tag == "test":
            return test(a.pred & b.pred)
        if b.tag == "atomic":
            return atomic(b.desc.domain_restrict(a.pred))
        if b.tag == "seq" and b.args[0].tag in ("test", "atomic"):
            return _seq2(_seq2(a, b.args[0]), b.args[1])
    return _mk("seq", (a, b), "(%s ; %s)" % (a._str, b._str))


def choice(*parts):
    """Nondeterministic choice (lattice meet): union of behaviours."""
    items = set()
    for p in _flatten("choice", parts):
        _chk(p)
        if p is TOP:
            continue
        if p is BOT:
            return BOT
        items.add(p)
    if not items:
        return TOP
    if len(items) == 1:
        return next(iter(items))
    ordered = tuple(sorted(items, key=lambda t: t._str))
    return _mk("choice", (ordered,),
               "(%s)" % " \\/ ".join(t._str for t in ordered))


def join(*parts):
    """Strong conjunction (lattice join): intersection of behaviours."""
    items = set()
    for p in _flatten("join", parts):
        _chk(p)
        if p is BOT:
            continue
        if p is TOP:
            return TOP
        items.add(p)
    if not items:
        return BOT
    if len(items) == 1:
        return next(iter(items))
    ordered = tuple(sorted(items, key=lambda t: t._str))
    return _mk("join", (ordered,),
               "(%s)" % " /\\ ".join(t._str for t in ordered))


def _flatten(tag, parts):
    for p in parts:
        if isinstance(p, Term) and p.tag == tag:
            yield from p.items
        else:
            yield p


def sync(mode, a, b):
    if mode == JOIN:
        return join(a, b)
    if mode not in (PARALLEL, WEAKCONJ):
        raise TermError("unknown sync mode %r" % mode)
    _chk(a)
    _chk(b)
    op = "||" if mode == PARALLEL else "&&"
    return _mk("sync", (mode, a, b), "(%s %s %s)" % (a._str, op, b._str))


def parallel(a, b):
    return sync(PARALLEL, a, b)


def weak_conj(a, b):
    return sync(WEAKCONJ, a, b)


def fin_iter(body):
    _chk(body)
    return _mk("fin", (body,), "%s^*" % _wrap(body))


def om_iter(body):
    _chk(body)
    return _mk("om", (body,), "%s^w" % _wrap(body))


def inf_iter(body):
    _chk(body)
    return _mk("inf", (body,), "%s^inf" % _wrap(body))


def _wrap(t):
    if t.tag in ("bot", "top", "nil", "test", "atomic", "var", "derived"):
        return t._str
    return "(%s)" % t._str


def rename(rmap, body):
    if not isinstance(rmap, RenameMap):
        raise TermError("rename() takes a RenameMap")
    _chk(body)
    return _mk("rename", (rmap, body),
               "rename[%s](%s)" % (rmap.render(), body._str))


def metavar(name, sort="cmd"):
    """Pattern metavariable; only valid inside law patterns."""
    return _mk("var", (name, sort), "?%s" % name)


def _chk(t):
    if not isinstance(t, Term):
        raise TermError("expected a Term, got %r" % (t,))


# -- derived forms --------------------------------------------------------

def _derived(kind, dargs, s):
    return _mk("derived", (kind, dargs), s)


def assert_test(pred):
    return _derived("assert", (frozenset(pred),), "assert(%s)" % _set_str(pred))


def assume_step(desc):
    if not isinstance(desc, AtomicDesc):
        raise TermError("assume_step() takes an AtomicDesc")
    return _derived("assume", (desc,), "assumestep(%s)" % desc.render())


SKIP = _derived("skip", (), "skip")
CHAOS = _derived("chaos", (), "chaos")
TERM = _derived("term", (), "term")


def guar(labels):
    return _derived("guar", (frozenset(labels),), "guar(%s)" % _set_str(labels))


def rely(labels):
    return _derived("rely", (frozenset(labels),), "rely(%s)" % _set_str(labels))


def spec(q):
    return _derived("spec", (frozenset(q),), "spec(%s)" % _set_str(q))


def atev(e):
    return _derived("atev", (e,), "atev(%s)" % e)


def ccs_restrict_term(events, c):
    _chk(c)
    return _derived("ccsres", (frozenset(events), c),
                    "restrict[%s](%s)" % (_evl(events), c._str))


def csp_parallel_term(events, c, d):
    _chk(c)
    _chk(d)
    return _derived("csppar", (frozenset(events), c, d),
                    "parcsp[%s](%s,%s)" % (_evl(events), c._str, d._str))


def hide_term(events, c):
    _chk(c)
    return _derived("hide", (frozenset(events), c),
                    "hide[%s](%s)" % (_evl(events), c._str))


def _evl(events):
    return ",".join(sorted(events))


# -- expansion of derived forms -------------------------------------------

_EXPAND_CACHE = {}


def expand(t, uni):
    """Rewrite every derived form into core syntax.  Idempotent."""
    key = (id(uni), t)
    out = _EXPAND_CACHE.get(key)
    if out is None:
        out = _expand(t, uni)
        _EXPAND_CACHE[key] = out
    return out


def _expand(t, uni):
    tag = t.tag
    if tag in ("bot", "top", "nil", "test", "atomic", "var"):
        return t
    if tag == "seq":
        return _seq2(expand(t.args[0], uni), expand(t.args[1], uni))
    if tag == "choice":
        return choice(*(expand(x, uni) for x in t.items))
    if tag == "join":
        return join(*(expand(x, uni) for x in t.items))
    if tag == "sync":
        return sync(t.mode, expand(t.args[1], uni), expand(t.args[2], uni))
    if tag == "fin":
        return fin_iter(expand(t.body, uni))
    if tag == "om":
        return om_iter(expand(t.body, uni))
    if tag == "inf":
        return inf_iter(expand(t.body, uni))
    if tag == "rename":
        return rename(t.rmap, expand(t.args[1], uni))
    if tag == "derived":
        return _expand_derived(t, uni)
    raise TermError("unknown term tag %r" % tag)


def expand_derived(t, uni):
    """Public name used by callers that insist on core output."""
    return expand(t, uni)


def _expand_derived(t, uni):
    kind = t.dkind
    a = t.dargs
    if kind == "assert":
        (p,) = a
        return choice(test(p, uni), seq(test(uni.all_states - p, uni), BOT))
    if kind == "assume":
        (d,) = a
        return choice(atomic(d), seq(atomic(d.complement()), BOT))
    if kind == "skip":
        return om_iter(atomic(uni.ebot))
    if kind == "chaos":
        return om_iter(atomic(uni.alpha))
    if kind == "term":
        return seq(fin_iter(atomic(uni.alpha)), om_iter(atomic(uni.ebot)))
    if kind == "guar":
        (g,) = a
        return om_iter(choice(atomic(uni.pgm_atom(g)), atomic(uni.ebot)))
    if kind == "rely":
        (r,) = a
        d = uni.pibot.meet(uni.env_atom(r))
        return om_iter(expand(assume_step(d), uni))
    if kind == "spec":
        (q,) = a
        term_cmd = expand(TERM, uni)
        alts = []
        for s in uni.states:
            post = frozenset(b for (x, b) in q if x == s)
            alts.append(seq(test(frozenset([s]), uni), term_cmd, test(post, uni)))
        return choice(*alts)
    if kind == "atev":
        (e,) = a
        ew = om_iter(atomic(uni.ebot))
        return seq(ew, atomic(uni.pgm_atom(uni.labels_for_events({e}))), ew)
    if kind == "ccsres":
        E, c = a
        allowed = frozenset(uni.events) - E
        return weak_conj(expand(c, uni),
                         expand(guar(uni.labels_for_events(allowed)), uni))
    if kind == "csppar":
        E, c, d = a
        from .universe import untag_map, SILENT
        # allowed program labels: synchronised copies of E, plus everything
        # outside E that is not itself a sync tag
        tagged = frozenset(uni.tags[e] for e in E if e in uni.tags)
        plain = frozenset(e for e in uni.events
                          if e not in E and e not in set(uni.tags.values()))
        g = uni.labels_for_events(tagged | plain)
        body = weak_conj(parallel(expand(c, uni), expand(d, uni)),
                         expand(guar(g), uni))
        return rename(untag_map(uni, E), body)
    if kind == "hide":
        E, c = a
        from .universe import hide_map
        return rename(hide_map(uni, E), expand(c, uni))
    raise TermError("unknown derived form %r" % kind)


# -- structural utilities -------------------------------------------------

def children(t):
    tag = t.tag
    if tag in ("bot", "top", "nil", "test", "atomic", "var"):
        return ()
    if tag == "seq":
        return t.args
    if tag in ("choice", "join"):
        return t.items
    if tag == "sync":
        return t.args[1:]
    if tag in ("fin", "om", "inf"):
        return t.args
    if tag == "rename":
        return (t.args[1],)
    if tag == "derived":
        return tuple(x for x in t.dargs if isinstance(x, Term))
    raise TermError("unknown term tag %r" % tag)


def rebuild(t, new_children):
    tag = t.tag
    kids = tuple(new_children)
    if tag == "seq":
        return _seq2(*kids)
    if tag == "choice":
        return choice(*kids)
    if tag == "join":
        return join(*kids)
    if tag == "sync":
        return sync(t.mode, *kids)
    if tag == "fin":
        return fin_iter(kids[0])
    if tag == "om":
        return om_iter(kids[0])
    if tag == "inf":
        return inf_iter(kids[0])
    if tag == "rename":
        return rename(t.rmap, kids[0])
    if tag == "derived":
        it = iter(kids)
        newargs = tuple(next(it) if isinstance(x, Term) else x
                        for x in t.dargs)
        return _derived_rebuild(t.dkind, newargs)
    if kids:
        raise TermError("cannot rebuild %r with children" % tag)
    return t


def _derived_rebuild(kind, args):
    builders = {
        "assert": lambda p: assert_test(p),
        "assume": lambda d: assume_step(d),
        "guar": lambda g: guar(g),
        "rely": lambda r: rely(r),
        "spec": lambda q: spec(q),
        "atev": lambda e: atev(e),
        "ccsres": lambda E, c: ccs_restrict_term(E, c),
        "csppar": lambda E, c, d: csp_parallel_term(E, c, d),
        "hide": lambda E, c: hide_term(E, c),
        "skip": lambda: SKIP,
        "chaos": lambda: CHAOS,
        "term": lambda: TERM,
    }
    return builders[kind](*args)


def subterm_at(t, path):
    """path is a tuple of child indices; () is the root."""
    for i in path:
        kids = children(t)
        if i >= len(kids):
            raise TermError("path leads outside the term at index %d of %s" % (i, t))
        t = kids[i]
    return t


def replace_at(t, path, new):
    if not path:
        return new
    kids = list(children(t))
    i = path[0]
    if i >= len(kids):
        raise TermError("path leads outside the term")
    kids[i] = replace_at(kids[i], path[1:], new)
    return rebuild(t, kids)


def subterms(t):
    """All subterms including t itself (preorder, deduplicated)."""
    seen = []
    seen_set = set()
    stack = [t]
    while stack:
        x = stack.pop()
        if x in seen_set:
            continue
        seen_set.add(x)
        seen.append(x)
        stack.extend(children(x))
    return seen


def has_var(t):
    return any(x.tag == "var" for x in subterms(t))
