"""Event-based process operators: engagement, restriction, CSP parallel,
hiding and renaming."""

import pytest

import syncalg.procalg as pa
import syncalg.terms as T
from syncalg.decide import equal_bounded, refines_bounded
from syncalg.parser import parse
from syncalg.universe import SILENT, UniverseError


def test_event_validation(ev_uni):
    u = ev_uni
    with pytest.raises(UniverseError):
        pa.atev(u, "nosuch")
    with pytest.raises(UniverseError):
        pa.ccs_restrict(u, {"nosuch"}, T.NIL)
    with pytest.raises(UniverseError):
        pa.rename(u, {"a": "nosuch"}, T.NIL)


def test_csp_parallel_needs_tags():
    from syncalg.models import parse_model
    u = parse_model("events[ccs]: e\n")  # ccs only: no sync tags
    with pytest.raises(UniverseError):
        pa.csp_parallel(u, {"e"}, T.NIL, T.NIL)


def test_constructors_match_parser(ev_uni):
    u = ev_uni
    assert pa.atev(u, "a") is parse("atev(a)", u)
    assert (pa.ccs_restrict(u, {"a", "a~"}, pa.atev(u, "b"))
            is parse("restrict[a,a~](atev(b))", u))
    assert (pa.hide(u, {"a"}, pa.atev(u, "a")) is parse("hide[a](atev(a))", u))
    assert (pa.csp_parallel(u, {"a"}, pa.atev(u, "a"), pa.atev(u, "a"))
            is parse("parcsp[a](atev(a), atev(a))", u))
    assert (pa.rename(u, {"a": "b"}, pa.atev(u, "a"))
            is parse("rename[a->b](atev(a))", u))


def test_ccs_synchronisation(ev_uni):
    """Restriction to a complementary pair forces a silent handshake."""
    u = ev_uni
    lhs = pa.ccs_restrict(u, {"a", "a~"},
                          T.parallel(pa.atev(u, "a"), pa.atev(u, "a~")))
    assert equal_bounded(u, lhs, pa.atev(u, SILENT)).holds


def test_ccs_restriction_blocks_foreign_events(ev_uni):
    u = ev_uni
    blocked = pa.ccs_restrict(u, {"b"}, pa.atev(u, "b"))
    # no behaviour of atev(b) survives; only environment stutters remain
    assert equal_bounded(u, blocked, parse("eps^w ; top", u)).holds


def test_csp_synchronisation_yields_one_event(ev_uni):
    """Both sides engage in a; the composition performs a single a."""
    u = ev_uni
    both = pa.csp_parallel(u, {"a"}, pa.atev(u, "a"), pa.atev(u, "a"))
    assert equal_bounded(u, both, pa.atev(u, "a")).holds


def test_csp_interleaving_outside_alphabet(ev_uni):
    u = ev_uni
    # b is not synchronised on, so it interleaves past a passive partner
    pair = pa.csp_parallel(u, {"a"}, pa.atev(u, "b"), T.SKIP)
    assert equal_bounded(u, pair, pa.atev(u, "b")).holds


def test_hiding_silences_events(ev_uni):
    u = ev_uni
    hidden = pa.hide(u, {"a"}, pa.atev(u, "a"))
    assert equal_bounded(u, hidden, pa.atev(u, SILENT)).holds


def test_rename_relabels_program_steps(ev_uni):
    u = ev_uni
    renamed = pa.rename(u, {"a": "b"}, pa.atev(u, "a"))
    assert equal_bounded(u, renamed, pa.atev(u, "b")).holds


def test_parallel_atev_offers_sync_and_interleave(ev_uni):
    u = ev_uni
    pair = T.parallel(pa.atev(u, "a"), pa.atev(u, "a~"))
    # the synchronised silent step is one of the offered behaviours
    assert refines_bounded(u, pair, pa.atev(u, SILENT)).holds
    # and so is each interleaving
    assert refines_bounded(u, pair,
                           T.seq(pa.atev(u, "a"), pa.atev(u, "a~"))).holds
