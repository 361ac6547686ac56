"""Model-file parsing and validation."""

import pytest

from syncalg.models import (ModelError, builtin_model_path, load_model,
                            parse_model)


def test_bundled_models_load():
    for name in ("two_state.model", "two_event.model", "combined.model"):
        u = load_model(builtin_model_path(name))
        assert u.states


def test_load_by_bare_name_falls_back_to_bundled():
    u = load_model("two_state.model")
    assert set(u.states) == {"s0", "s1"}


def test_missing_model():
    with pytest.raises(ModelError):
        load_model("/nonexistent/nowhere.model")


def test_parse_rel_model():
    u = parse_model("""
        model: tiny
        states: x y
        pred all: x y
        rel step: x>y
    """)
    assert u.predicates["all"] == frozenset({"x", "y"})
    assert u.relations["step"] == frozenset({("x", "y")})


def test_parse_event_model_flags():
    u = parse_model("events[ccs]: e\n")
    assert u.complements["e"] == "e~"
    assert not u.tags
    u = parse_model("events[csp]: e\n")
    assert u.tags["e"] == "e^"


def test_parse_combined_model():
    u = parse_model("""
        states: s
        events[csp]: e
        pred p: s
        rename f: e>e
    """)
    assert u.predicates["p"] == frozenset({"s"})
    assert "f" in u.renamings


@pytest.mark.parametrize("text,msg", [
    ("", "states or events"),
    ("states: a\nstates: b\n", "duplicate"),
    ("junk: x\n", "unknown section"),
    ("states: s\nrel r: s-s\n", "x>y"),
    ("states: s\neventset E: a\n", "event alphabet"),
    ("events: e\npred p: x\n", "need states"),
    ("states: s\nrel r: s>t\n", ""),  # undeclared state in a relation
])
def test_model_errors(text, msg):
    with pytest.raises(ModelError) as exc:
        parse_model(text)
    assert msg in str(exc.value)


def test_comments_and_blank_lines_ignored():
    u = parse_model("# header\n\nstates: s0  # trailing\n")
    assert list(u.states) == ["s0"]
