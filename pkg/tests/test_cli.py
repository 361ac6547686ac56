"""Command-line interface: subcommands, output, exit codes."""

import io
import os

from syncalg.cli import main
from syncalg.models import builtin_model_path

DERIV = os.path.join(os.path.dirname(builtin_model_path("x")), os.pardir,
                     "derivations")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_normalize():
    code, out = run("normalize", "--model", "two_state.model",
                    "test({}) ; pgm(r0)")
    assert code == 0
    assert out.strip() == "top"


def test_refine_holds_and_fails():
    code, out = run("refine", "--model", "two_state.model", "term", "skip")
    assert code == 0 and "holds" in out
    code, out = run("refine", "--model", "two_state.model", "top", "bot")
    assert code == 1 and "fails" in out


def test_equal_mu_nu_distinction():
    code, out = run("equal", "--model", "two_state.model", "nil^w", "bot")
    assert code == 0
    code, out = run("equal", "--model", "two_state.model",
                    "alpha^*", "alpha^w")
    assert code == 1
    assert "loop@" in out  # lasso witness rendered


def test_check_laws_glob_and_exhaustive():
    code, out = run("check-laws", "--model", "two_state.model",
                    "--laws", "A-seq-*", "--exhaustive")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("LAW")]
    assert len(lines) == 5
    assert all("PASS" in l for l in lines)


def test_check_laws_unknown_glob_is_usage_error():
    code, _ = run("check-laws", "--model", "two_state.model",
                  "--laws", "zzz-*")
    assert code == 2


def test_replay_bundled_script():
    script = os.path.join(DERIV, "test-sync-test.txt")
    code, out = run("replay", "--model", "two_state.model", script)
    assert code == 0
    assert "replay holds" in out


def test_quintuple():
    code, out = run("quintuple", "--model", "two_state.model",
                    "{s0,s1}", "full", "full",
                    "{(s0,s0),(s0,s1),(s1,s0),(s1,s1)}",
                    "pgm(id)^* ; env(full)^w")
    assert code == 0 and "holds" in out


def test_bad_model_and_bad_expression():
    code, _ = run("refine", "--model", "/nope.model", "nil", "nil")
    assert code == 2
    code, _ = run("refine", "--model", "two_state.model", "nil", "(((")
    assert code == 2


def test_depth_flags_are_honoured():
    # at depth 1 a two-step difference is invisible
    code, _ = run("refine", "--model", "two_state.model", "--depth", "1",
                  "--lasso", "1", "alpha ; alpha", "alpha ; alpha ; alpha")
    assert code == 0
    code, _ = run("refine", "--model", "two_state.model",
                  "alpha ; alpha", "alpha ; alpha ; alpha")
    assert code == 1
