"""Finite model universes and the Boolean algebra of atomic step descriptors.

A universe fixes a finite state space and/or event alphabet.  Step labels are
state pairs (relational kind), events (event kind) or state-event-state
triples (combined kind).  An atomic step descriptor is a pair of label sets:
the labels the step may take as a *program* step and as an *environment*
step.  These descriptors form a Boolean algebra under componentwise set
operations; note the order is flipped relative to the subset order because
choice (the lattice meet) is union of behaviours.
"""

from __future__ import annotations

import itertools

SILENT = "tau"

PGM = "pgm"
ENV = "env"

# Sync modes. "join" is the lattice join used as a degenerate sync operator.
PARALLEL = "par"
WEAKCONJ = "conj"
JOIN = "join"

SYNC_MODES = (PARALLEL, WEAKCONJ, JOIN)


class UniverseError(ValueError):
    """Malformed universe or identifier resolution failure."""


def complement_name(e):
    return e[:-1] if e.endswith("~") else e + "~"


def tag_name(e):
    return e + "^"


class ModelUniverse:
    """Immutable description of a finite model.

    kind is one of 'rel', 'event', 'combined'.  Identity-hashed: build one
    universe per model and share it.
    """

    def __init__(self, kind, states, base_events=(), ccs=False, csp=False,
                 predicates=None, relations=None, eventsets=None,
                 renamings=None, name=""):
        self.kind = kind
        self.name = name
        self.ccs = ccs
        self.csp = csp
        if kind == "event":
            states = ("*",)
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states) or not self.states:
            raise UniverseError("states must be a non-empty set of distinct names")

        if kind == "rel":
            if base_events or ccs or csp:
                raise UniverseError("relational universe takes no events")
            self.events = ()
            self.complements = {}
            self.tags = {}
        else:
            base = list(base_events)
            if SILENT not in base:
                base.insert(0, SILENT)
            for e in base:
                if e.endswith("~") or e.endswith("^"):
                    raise UniverseError("base event names may not end in ~ or ^: %r" % e)
            events = list(base)
            self.complements = {}
            if ccs:
                for e in base:
                    if e == SILENT:
                        continue
                    eb = complement_name(e)
                    events.append(eb)
                    self.complements[e] = eb
                    self.complements[eb] = e
            self.tags = {}
            if csp:
                # every non-silent, non-tagged event gets a synchronised copy
                for e in list(events):
                    if e == SILENT:
                        continue
                    self.tags[e] = tag_name(e)
                    events.append(tag_name(e))
            self.base_events = tuple(base)
            self.events = tuple(events)

        # All step labels, in a fixed order.
        if kind == "rel":
            labels = [(a, b) for a in self.states for b in self.states]
        elif kind == "event":
            labels = list(self.events)
        elif kind == "combined":
            labels = [(a, e, b) for a in self.states for e in self.events
                      for b in self.states]
        else:
            raise UniverseError("unknown universe kind %r" % kind)
        self.labels = tuple(labels)
        self.full_labels = frozenset(labels)

        self.predicates = dict(predicates or {})
        self.relations = dict(relations or {})
        self.eventsets = dict(eventsets or {})
        self.renamings = {}

        self._validate_names()

        self.all_states = frozenset(self.states)

        # primitive steps and per-state fan-out
        self.steps = tuple((tag, l) for tag in (PGM, ENV) for l in self.labels)
        self._steps_from = {s: tuple(st for st in self.steps
                                     if self.step_pre(st) == s)
                            for s in self.states}

        # interning tables
        self._atoms = {}
        self._pair_tables = {}
        self._pp_table = None

        self.top_step = self.atom((), ())
        self.pibot = self.atom(self.labels, ())
        self.ebot = self.atom((), self.labels)
        self.alpha = self.atom(self.labels, self.labels)

        for nm, emap in (renamings or {}).items():
            self.renamings[nm] = RenameMap.from_event_map(self, emap, name=nm)

    def _validate_names(self):
        for nm, p in self.predicates.items():
            bad = set(p) - set(self.states)
            if bad:
                raise UniverseError("predicate %s mentions unknown states %s" % (nm, sorted(bad)))
            self.predicates[nm] = frozenset(p)
        for nm, r in self.relations.items():
            for (a, b) in r:
                if a not in self.states or b not in self.states:
                    raise UniverseError("relation %s mentions unknown state in (%s,%s)" % (nm, a, b))
            self.relations[nm] = frozenset(r)
        for nm, es in self.eventsets.items():
            bad = set(es) - set(self.events)
            if bad:
                raise UniverseError("eventset %s mentions unknown events %s" % (nm, sorted(bad)))
            self.eventsets[nm] = frozenset(es)

    # -- labels and steps ------------------------------------------------

    def label_pre(self, l):
        if self.kind == "rel":
            return l[0]
        if self.kind == "event":
            return "*"
        return l[0]

    def label_post(self, l):
        if self.kind == "rel":
            return l[1]
        if self.kind == "event":
            return "*"
        return l[2]

    def step_pre(self, s):
        return self.label_pre(s[1])

    def step_post(self, s):
        return self.label_post(s[1])

    def steps_from(self, state):
        return self._steps_from[state]

    def render_label(self, l):
        if self.kind == "rel":
            return "(%s,%s)" % l
        if self.kind == "event":
            return l
        return "(%s,%s,%s)" % l

    def render_step(self, s):
        glyph = "pi" if s[0] == PGM else "eps"
        return "%s:%s" % (glyph, self.render_label(s[1]))

    # -- label-set builders ----------------------------------------------

    def labels_for_relation(self, r):
        """Lift a state relation to a label set (kind-aware)."""
        r = frozenset(r)
        if self.kind == "rel":
            return r & self.full_labels
        if self.kind == "combined":
            return frozenset(l for l in self.labels if (l[0], l[2]) in r)
        raise UniverseError("state relations are not meaningful in an event universe")

    def labels_for_events(self, es):
        es = frozenset(es)
        if self.kind == "event":
            return es & self.full_labels
        if self.kind == "combined":
            return frozenset(l for l in self.labels if l[1] in es)
        raise UniverseError("event sets are not meaningful in a relational universe")

    # -- atomic descriptors ----------------------------------------------

    def atom(self, pgm, env):
        pgm = frozenset(pgm)
        env = frozenset(env)
        if not pgm <= self.full_labels or not env <= self.full_labels:
            raise UniverseError("atom labels outside the universe")
        key = (pgm, env)
        a = self._atoms.get(key)
        if a is None:
            a = AtomicDesc(self, pgm, env)
            self._atoms[key] = a
        return a

    def pgm_atom(self, labels):
        return self.atom(labels, ())

    def env_atom(self, labels):
        return self.atom((), labels)

    # -- synchronisation -------------------------------------------------

    def _pp_extras(self, l1, l2):
        """Program-program synchronisation contributions for Parallel."""
        out = []
        if self.kind == "rel":
            return out
        if self.kind == "event":
            if self.ccs and self.complements.get(l1) == l2:
                out.append(SILENT)
            if self.csp and l1 == l2 and l1 in self.tags:
                out.append(self.tags[l1])
            return out
        # combined: synchronise on the event component, states must agree
        a1, e1, b1 = l1
        a2, e2, b2 = l2
        if (a1, b1) == (a2, b2):
            if self.ccs and self.complements.get(e1) == e2:
                out.append((a1, SILENT, b1))
            if self.csp and e1 == e2 and e1 in self.tags:
                out.append((a1, self.tags[e1], b1))
        return out

    def pp_sync_labels(self, p1, p2):
        """All program labels obtainable by synchronising program steps."""
        if self._pp_table is None:
            tbl = {}
            for l1 in self.labels:
                for l2 in self.labels:
                    ex = self._pp_extras(l1, l2)
                    if ex:
                        tbl[(l1, l2)] = ex
            self._pp_table = tbl
        out = set()
        for l1 in p1:
            for l2 in p2:
                out.update(self._pp_table.get((l1, l2), ()))
        return out

    def pair_table(self, mode):
        """For each primitive step s, the pairs (s1, s2) with s in s1 (x) s2."""
        tbl = self._pair_tables.get(mode)
        if tbl is None:
            tbl = {}
            for s1 in self.steps:
                a1 = self.atom(*(({s1[1]}, ()) if s1[0] == PGM else ((), {s1[1]})))
                for s2 in self.steps:
                    a2 = self.atom(*(({s2[1]}, ()) if s2[0] == PGM else ((), {s2[1]})))
                    res = sync_prim(mode, a1, a2)
                    for s in res.steps():
                        tbl.setdefault(s, []).append((s1, s2))
            tbl = {s: tuple(ps) for s, ps in tbl.items()}
            self._pair_tables[mode] = tbl
        return tbl

    def __repr__(self):
        return "<ModelUniverse %s kind=%s |S|=%d |E|=%d>" % (
            self.name or "?", self.kind, len(self.states), len(self.events))


class AtomicDesc:
    """A pair (program labels, environment labels); interned per universe."""

    __slots__ = ("uni", "pgm", "env")

    def __init__(self, uni, pgm, env):
        self.uni = uni
        self.pgm = pgm
        self.env = env

    # interned: identity equality/hash

    def is_empty(self):
        return not self.pgm and not self.env

    def steps(self):
        return tuple((PGM, l) for l in sorted(self.pgm)) + \
               tuple((ENV, l) for l in sorted(self.env))

    def contains_step(self, s):
        return s[1] in (self.pgm if s[0] == PGM else self.env)

    def meet(self, other):
        _same_universe(self, other)
        return self.uni.atom(self.pgm | other.pgm, self.env | other.env)

    def join(self, other):
        _same_universe(self, other)
        return self.uni.atom(self.pgm & other.pgm, self.env & other.env)

    def complement(self):
        full = self.uni.full_labels
        return self.uni.atom(full - self.pgm, full - self.env)

    def domain_restrict(self, pred):
        """Keep only labels whose pre-state satisfies pred (t;a fusion)."""
        u = self.uni
        return u.atom({l for l in self.pgm if u.label_pre(l) in pred},
                      {l for l in self.env if u.label_pre(l) in pred})

    def key(self):
        return (tuple(sorted(self.pgm)), tuple(sorted(self.env)))

    def render(self):
        u = self.uni
        ps = ",".join(u.render_label(l) for l in sorted(self.pgm))
        es = ",".join(u.render_label(l) for l in sorted(self.env))
        return "{%s};{%s}" % (ps, es)

    def __repr__(self):
        return "AtomicDesc(%s)" % self.render()


def _same_universe(a, b):
    if a.uni is not b.uni:
        raise UniverseError("atomic descriptors from different universes")


def atom_bool(op, a, b=None):
    """Boolean-algebra operation on atomic descriptors."""
    if op == "meet":
        return a.meet(b)
    if op == "join":
        return a.join(b)
    if op == "complement":
        return a.complement()
    raise UniverseError("unknown atom operation %r" % op)


def sync_prim(mode, a, b):
    """Synchronise two atomic descriptors.

    WeakConj and Join act as conjunction on atoms (componentwise
    intersection).  Parallel matches program steps against environment
    steps (Aczel-style), with instantiation-specific program-program
    synchronisation (CCS complementary events meet in the silent event,
    CSP identical events meet in their tagged copy).
    """
    _same_universe(a, b)
    u = a.uni
    if mode in (WEAKCONJ, JOIN):
        return a.join(b)
    if mode != PARALLEL:
        raise UniverseError("unknown sync mode %r" % mode)
    env = a.env & b.env
    pgm = (a.pgm & b.env) | (a.env & b.pgm)
    pgm |= u.pp_sync_labels(a.pgm, b.pgm)
    return u.atom(pgm, env)


def sync_identity_atom(uni, mode):
    """The atomic-step identity of a sync mode."""
    if mode == PARALLEL:
        return uni.ebot
    if mode in (WEAKCONJ, JOIN):
        return uni.alpha
    raise UniverseError("unknown sync mode %r" % mode)


_RENAME_INTERN = {}


class RenameMap:
    """A total renaming of primitive steps, lifted from an event map.

    Program steps have their event component renamed; environment steps are
    fixed.  Identity outside the map's domain.  Interned per universe and
    event map, so equal renamings are the same object.
    """

    __slots__ = ("uni", "name", "event_map", "_fwd", "_inv", "_initd")

    def __new__(cls, uni, event_map, name=""):
        key = (id(uni), tuple(sorted(dict(event_map).items())))
        obj = _RENAME_INTERN.get(key)
        if obj is None:
            obj = super().__new__(cls)
            obj._initd = False
            _RENAME_INTERN[key] = obj
        return obj

    def __init__(self, uni, event_map, name=""):
        if self._initd:
            return
        self._initd = True
        self.uni = uni
        self.name = name
        self.event_map = dict(event_map)
        if uni.kind == "rel":
            raise UniverseError("renaming requires an event alphabet")
        for e, f in self.event_map.items():
            if e not in uni.events or f not in uni.events:
                raise UniverseError("renaming mentions unknown event %s->%s" % (e, f))
        fwd = {}
        for s in uni.steps:
            fwd[s] = self._apply(s)
        inv = {}
        for s, t in fwd.items():
            inv.setdefault(t, []).append(s)
        self._fwd = fwd
        self._inv = {t: tuple(ss) for t, ss in inv.items()}

    @classmethod
    def from_event_map(cls, uni, event_map, name=""):
        return cls(uni, event_map, name=name)

    def _apply(self, s):
        tag, l = s
        if tag != PGM:
            return s
        if self.uni.kind == "event":
            return (tag, self.event_map.get(l, l))
        a, e, b = l
        return (tag, (a, self.event_map.get(e, e), b))

    def apply(self, s):
        return self._fwd[s]

    def preimages(self, s):
        return self._inv.get(s, ())

    def key(self):
        return tuple(sorted(self.event_map.items()))

    def render(self):
        if self.name:
            return self.name
        return ",".join("%s->%s" % kv for kv in self.key())

    def __repr__(self):
        return "RenameMap(%s)" % self.render()


# -- convenience factories ------------------------------------------------

def rel_universe(states, predicates=None, relations=None, name="rel"):
    return ModelUniverse("rel", states, predicates=predicates,
                         relations=relations, name=name)


def event_universe(events, ccs=False, csp=False, eventsets=None,
                   renamings=None, name="event"):
    return ModelUniverse("event", ("*",), base_events=events, ccs=ccs,
                         csp=csp, eventsets=eventsets, renamings=renamings,
                         name=name)


def combined_universe(states, events, ccs=False, csp=False, predicates=None,
                      relations=None, eventsets=None, name="combined"):
    return ModelUniverse("combined", states, base_events=events, ccs=ccs,
                         csp=csp, predicates=predicates, relations=relations,
                         eventsets=eventsets, name=name)


def hide_map(uni, eventset, name=""):
    """Renaming that silences program steps on events in the set."""
    return RenameMap(uni, {e: SILENT for e in eventset}, name=name)


def untag_map(uni, eventset, name=""):
    """Renaming that strips CSP sync tags from events in the set."""
    emap = {uni.tags[e]: e for e in eventset if e in uni.tags}
    return RenameMap(uni, emap, name=name)


def all_subsets(items):
    items = sorted(items)
    for n in range(len(items) + 1):
        for combo in itertools.combinations(items, n):
            yield frozenset(combo)
