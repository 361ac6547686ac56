"""Event-based process layer: engaging in events, CCS restriction,
CSP alphabetized parallel, hiding, and renaming helpers.

These are validated wrappers over the derived term constructors: each
checks its events against the model universe up front, so errors surface
at construction time rather than at expansion time.
"""

from __future__ import annotations

from . import terms as T
from .universe import RenameMap, UniverseError


def _check_events(uni, events):
    events = frozenset(events)
    unknown = events - set(uni.events)
    if unknown:
        raise UniverseError("unknown events %s" % sorted(unknown))
    return events


def atev(uni, e):
    """The command that engages in event e: ε̲^ω ; π({e}) ; ε̲^ω."""
    if e not in uni.events:
        raise UniverseError("unknown event %r" % e)
    return T.atev(e)


def ccs_restrict(uni, events, c):
    """Restrict c to behaviours whose program steps avoid the given events."""
    return T.ccs_restrict_term(_check_events(uni, events), c)


def csp_parallel(uni, events, c, d):
    """CSP parallel of c and d synchronising on the given events only."""
    if not uni.tags:
        raise UniverseError("universe has no synchronisation tags; "
                            "construct it with csp=True")
    return T.csp_parallel_term(_check_events(uni, events), c, d)


def hide(uni, events, c):
    """Make the given events silent in c by renaming them away."""
    return T.hide_term(_check_events(uni, events), c)


def rename(uni, event_map, c):
    """Rename program-step events of c label-wise by a total event map."""
    emap = dict(event_map)
    _check_events(uni, set(emap) | set(emap.values()))
    return T.rename(RenameMap(uni, emap), c)
