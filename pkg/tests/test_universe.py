"""Atomic-step descriptors and the finite universes they live in."""

import pytest

from syncalg.universe import (PARALLEL, WEAKCONJ, JOIN, SILENT, RenameMap,
                              UniverseError, sync_prim, sync_identity_atom)


def test_rel_universe_basics(rel_uni):
    u = rel_uni
    assert set(u.states) == {"s0", "s1"}
    # labels are state pairs, attributable to program or environment
    assert ("s0", "s1") in u.labels
    assert u.label_pre(("s0", "s1")) == "s0"
    assert u.label_post(("s0", "s1")) == "s1"
    assert u.predicates["p0"] == frozenset({"s0"})
    assert u.relations["id"] == frozenset({("s0", "s0"), ("s1", "s1")})


def test_event_universe_basics(ev_uni):
    u = ev_uni
    assert "a" in u.base_events and "b" in u.base_events
    assert u.complements["a"] == "a~"
    assert u.tags["a"] == "a^"
    assert SILENT in u.events
    # event universes run in a single implicit state
    assert len(u.all_states) == 1


def test_atom_boolean_structure(rel_uni):
    u = rel_uni
    a = u.pgm_atom(u.relations["r0"])
    b = u.env_atom(u.relations["id"])
    # meet unions the step labels, join intersects them
    assert set(a.meet(b).steps()) == set(a.steps()) | set(b.steps())
    assert set(a.join(b).steps()) == set(a.steps()) & set(b.steps())
    assert a.join(a.complement()).is_empty()
    assert a.meet(a.complement()) is u.alpha
    assert a.complement().complement() is a


def test_atoms_are_interned(rel_uni):
    u = rel_uni
    r = u.relations["r0"]
    assert u.pgm_atom(r) is u.pgm_atom(frozenset(r))
    assert u.pgm_atom(r) is not u.env_atom(r)


def test_alpha_and_bottom_atoms(rel_uni):
    u = rel_uni
    assert set(u.alpha.steps()) == set(u.pibot.steps()) | set(u.ebot.steps())
    assert not (set(u.pibot.steps()) & set(u.ebot.steps()))


@pytest.mark.parametrize("mode", [PARALLEL, WEAKCONJ, JOIN])
def test_sync_prim_identity(rel_uni, mode):
    u = rel_uni
    ident = sync_identity_atom(u, mode)
    for r in (u.relations["r0"], u.relations["id"]):
        for a in (u.pgm_atom(r), u.env_atom(r)):
            assert sync_prim(mode, a, ident) is a
            assert sync_prim(mode, ident, a) is a


def test_sync_prim_commutes(rel_uni):
    u = rel_uni
    a = u.pgm_atom(u.relations["r0"])
    b = u.env_atom(u.relations["full"])
    for mode in (PARALLEL, WEAKCONJ, JOIN):
        assert sync_prim(mode, a, b) is sync_prim(mode, b, a)


def test_aczel_parallel_of_atoms(rel_uni):
    """pgm || env synchronises on the common relation; pgm || pgm is empty."""
    u = rel_uni
    r0, full = u.relations["r0"], u.relations["full"]
    pe = sync_prim(PARALLEL, u.pgm_atom(r0), u.env_atom(full))
    assert pe is u.pgm_atom(r0 & full)
    pp = sync_prim(PARALLEL, u.pgm_atom(full), u.pgm_atom(full))
    assert pp.is_empty()


def test_domain_restrict(rel_uni):
    u = rel_uni
    a = u.pgm_atom(u.relations["full"])
    restricted = a.domain_restrict(frozenset({"s0"}))
    assert all(u.label_pre(l) == "s0" for (_k, l) in restricted.steps())


def test_rename_map_validation(ev_uni):
    u = ev_uni
    with pytest.raises(UniverseError):
        RenameMap(u, {"nosuch": "a"})
    rm = RenameMap(u, {"a": "b"})
    assert rm is RenameMap(u, {"a": "b"})  # interned


def test_rename_map_from_model(ev_uni):
    rm = ev_uni.renamings["swap"]
    assert rm.event_map["a"] == "b"
