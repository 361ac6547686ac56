"""Model files: a line-oriented text format describing a finite universe.

    # comment
    model: two-state
    states: s0 s1
    events[ccs,csp]: a b
    pred p0: s0
    rel r0: s0>s1 s1>s1
    eventset E: a b
    rename phi: a>b

A file with only `states` yields a relational universe, only `events` an
event universe, and both a combined one.  Relations are state pairs
written pre>post; renamings map event>event.  All names are validated
against the declarations.
"""

from __future__ import annotations

import os

from .universe import (ModelUniverse, UniverseError, combined_universe,
                       event_universe, rel_universe)


class ModelError(ValueError):
    pass


def builtin_model_path(name):
    """Path of a model shipped with the package, e.g. 'two_state.model'."""
    return os.path.join(os.path.dirname(__file__), "models", name)


def load_model(path):
    """Load and validate a model file; returns a ModelUniverse."""
    if not os.path.exists(path):
        builtin = builtin_model_path(os.path.basename(path))
        if os.path.exists(builtin):
            path = builtin
        else:
            raise ModelError("no such model file: %s" % path)
    with open(path) as fh:
        return parse_model(fh.read(), name=os.path.basename(path))


def _pair(tok, what, lineno):
    if ">" not in tok:
        raise ModelError("line %d: %s entry %r is not of the form x>y"
                         % (lineno, what, tok))
    a, _, b = tok.partition(">")
    return a, b


def parse_model(text, name=""):
    states = None
    events = None
    ccs = csp = False
    predicates = {}
    relations = {}
    eventsets = {}
    renamings = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ModelError("line %d: expected 'key: values'" % lineno)
        key = key.strip()
        toks = rest.split()
        if key == "model":
            name = rest.strip() or name
        elif key == "states":
            if states is not None:
                raise ModelError("line %d: duplicate states section" % lineno)
            states = toks
        elif key == "events" or key.startswith("events["):
            if events is not None:
                raise ModelError("line %d: duplicate events section" % lineno)
            if key.startswith("events["):
                if not key.endswith("]"):
                    raise ModelError("line %d: malformed events flags" % lineno)
                flags = [f.strip() for f in key[len("events["):-1].split(",")]
                flags = [f for f in flags if f]
                bad = set(flags) - {"ccs", "csp"}
                if bad:
                    raise ModelError("line %d: unknown events flags %s"
                                     % (lineno, sorted(bad)))
                ccs = "ccs" in flags
                csp = "csp" in flags
            events = toks
        elif key.startswith("pred "):
            predicates[key[len("pred "):].strip()] = frozenset(toks)
        elif key.startswith("rel "):
            relations[key[len("rel "):].strip()] = frozenset(
                _pair(t, "relation", lineno) for t in toks)
        elif key.startswith("eventset "):
            eventsets[key[len("eventset "):].strip()] = frozenset(toks)
        elif key.startswith("rename "):
            renamings[key[len("rename "):].strip()] = dict(
                _pair(t, "renaming", lineno) for t in toks)
        else:
            raise ModelError("line %d: unknown section %r" % (lineno, key))
    try:
        if states and events:
            uni = combined_universe(states, events, ccs=ccs, csp=csp,
                                    predicates=predicates, relations=relations,
                                    eventsets=eventsets, name=name)
        elif states:
            if renamings:
                raise ModelError("renamings need an event alphabet")
            if eventsets:
                raise ModelError("eventsets need an event alphabet")
            uni = rel_universe(states, predicates=predicates,
                               relations=relations, name=name)
        elif events:
            if predicates or relations:
                raise ModelError("predicates/relations need states")
            uni = event_universe(events, ccs=ccs, csp=csp,
                                 eventsets=eventsets, renamings=renamings,
                                 name=name)
        else:
            raise ModelError("a model needs a states or events section")
    except UniverseError as e:
        raise ModelError(str(e))
    if states and events and renamings:
        # combined_universe has no renamings parameter; attach them here
        from .universe import RenameMap
        for nm, emap in renamings.items():
            uni.renamings[nm] = RenameMap(uni, emap, name=nm)
    return uni
