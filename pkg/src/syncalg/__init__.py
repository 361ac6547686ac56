"""Synchronous refinement algebra toolkit.

Command terms over finite models, a derivative-based behaviour oracle,
bounded refinement/equality checking, a machine-checked law catalog, and
rely/guarantee plus CCS/CSP process-algebra instantiations.
"""

from .universe import (ModelUniverse, AtomicDesc, RenameMap, UniverseError,
                       rel_universe, event_universe, combined_universe,
                       sync_prim, atom_bool, PARALLEL, WEAKCONJ, JOIN, SILENT)
from .terms import (Term, TermError, BOT, TOP, NIL, SKIP, CHAOS, TERM,
                    test, atomic, seq, choice, join, sync, parallel,
                    weak_conj, fin_iter, om_iter, inf_iter, rename,
                    assert_test, assume_step, guar, rely, spec, atev,
                    expand, expand_derived)
from .semantics import (Behaviour, Lasso, Semantics, ResourceExhausted,
                        enumerate_behaviours)
from .decide import Bounds, Verdict, refines_bounded, equal_bounded, check_quintuple
from .parser import ParseError, parse, render
from .laws import (CATALOG, LawEntry, LawError, LawReport, Oracle, Sampler,
                   check_law, get_law, select_laws, rewrite_step,
                   replay_derivation)
from .models import ModelError, load_model, parse_model, builtin_model_path

__all__ = [n for n in dir() if not n.startswith("_")]
