"""Concrete syntax for command terms.

The grammar mirrors the canonical rendering produced by the term
constructors, so parse(render(t)) returns the identical interned term.
Operator precedence, tightest first:

    postfix iteration   ^*  ^w  ^inf
    sequential          ;
    synchronisation     ||  &&  /\    (one level, left associative)
    choice              \/

Set literals are written in braces: {s0,s1} for predicates, {(s0,s1)}
for relations, {a,b} for event sets, {(s0,a,s1)} for state-event-state
triples.  Named predicates/relations/eventsets/renamings declared by the
model may be used wherever a literal is allowed.
"""

from __future__ import annotations

import re

from . import terms as T
from .universe import RenameMap, UniverseError


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"""
    \s*(
        \^\*|\^w|\^inf|
        \\/|/\\|\|\||&&|->|
        [(){}\[\],;?]|
        [A-Za-z0-9_*][A-Za-z0-9_*~]*(?:\^(?!\*|w\b|inf\b))?
    )""", re.VERBOSE)

_KEYWORDS = {
    "bot": T.BOT, "top": T.TOP, "nil": T.NIL,
    "skip": T.SKIP, "chaos": T.CHAOS, "term": T.TERM,
}


def tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError("bad character %r at offset %d" % (text[pos], pos))
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, uni):
        self.toks = tokenize(text)
        self.i = 0
        self.uni = uni

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return t

    def expect(self, tok):
        t = self.next()
        if t != tok:
            raise ParseError("expected %r, got %r" % (tok, t))
        return t

    # -- expression levels ------------------------------------------------

    def expr(self):
        parts = [self.sync_level()]
        while self.peek() == "\\/":
            self.next()
            parts.append(self.sync_level())
        return T.choice(*parts) if len(parts) > 1 else parts[0]

    def sync_level(self):
        left = self.seq_level()
        while self.peek() in ("||", "&&", "/\\"):
            op = self.next()
            right = self.seq_level()
            if op == "||":
                left = T.parallel(left, right)
            elif op == "&&":
                left = T.weak_conj(left, right)
            else:
                left = T.join(left, right)
        return left

    def seq_level(self):
        parts = [self.postfix()]
        while self.peek() == ";":
            self.next()
            parts.append(self.postfix())
        return T.seq(*parts) if len(parts) > 1 else parts[0]

    def postfix(self):
        t = self.atom()
        while self.peek() in ("^*", "^w", "^inf"):
            op = self.next()
            t = {"^*": T.fin_iter, "^w": T.om_iter, "^inf": T.inf_iter}[op](t)
        return t

    # -- atoms -------------------------------------------------------------

    def atom(self):
        tok = self.next()
        if tok == "(":
            t = self.expr()
            self.expect(")")
            return t
        if tok in _KEYWORDS:
            return _KEYWORDS[tok]
        if tok == "?":
            return T.metavar(self.next())
        u = self.uni
        if tok == "alpha":
            return T.atomic(u.alpha)
        if tok == "eps":
            return T.atomic(u.ebot)
        if tok == "pistep":
            return T.atomic(u.pibot)
        if tok == "test":
            return T.test(self.arg_set(u.predicates), u)
        if tok == "assert":
            return T.assert_test(self.arg_set(u.predicates))
        if tok == "pgm":
            return T.atomic(u.pgm_atom(self.arg_labels()))
        if tok == "env":
            return T.atomic(u.env_atom(self.arg_labels()))
        if tok == "astep":
            pg, en = self.desc_pair()
            return T.atomic(u.atom(pg, en))
        if tok == "assumestep":
            pg, en = self.desc_pair()
            return T.assume_step(u.atom(pg, en))
        if tok == "assume":
            r = self.arg_labels()
            return T.assume_step(u.pibot.meet(u.env_atom(r)))
        if tok == "guar":
            return T.guar(self.arg_labels())
        if tok == "rely":
            return T.rely(self.arg_labels())
        if tok == "spec":
            return T.spec(self.arg_set(u.relations))
        if tok == "atev":
            self.expect("(")
            e = self.next()
            self.expect(")")
            return T.atev(e)
        if tok == "restrict":
            es = self.bracket_events()
            self.expect("(")
            c = self.expr()
            self.expect(")")
            return T.ccs_restrict_term(es, c)
        if tok == "parcsp":
            es = self.bracket_events()
            self.expect("(")
            c = self.expr()
            self.expect(",")
            d = self.expr()
            self.expect(")")
            return T.csp_parallel_term(es, c, d)
        if tok == "hide":
            es = self.bracket_events()
            self.expect("(")
            c = self.expr()
            self.expect(")")
            return T.hide_term(es, c)
        if tok == "rename":
            rmap = self.bracket_rename()
            self.expect("(")
            c = self.expr()
            self.expect(")")
            return T.rename(rmap, c)
        raise ParseError("unexpected token %r" % tok)

    # -- sets and labels ---------------------------------------------------

    def set_literal(self):
        """{a,b} / {(s0,s1),...} / {(s0,e,s1),...}; empty sets allowed."""
        self.expect("{")
        items = set()
        while self.peek() != "}":
            if self.peek() == "(":
                self.next()
                parts = [self.next()]
                while self.peek() == ",":
                    self.next()
                    parts.append(self.next())
                self.expect(")")
                items.add(tuple(parts))
            else:
                items.add(self.next())
            if self.peek() == ",":
                self.next()
        self.expect("}")
        return frozenset(items)

    def named_or_set(self, table):
        if self.peek() == "{":
            return self.set_literal()
        name = self.next()
        if name not in table:
            raise ParseError("unknown name %r" % name)
        return table[name]

    def arg_set(self, table):
        self.expect("(")
        s = self.named_or_set(table)
        self.expect(")")
        return s

    def arg_labels(self):
        """A label set: a relation name/literal or eventset name/literal."""
        self.expect("(")
        if self.peek() == "{":
            s = self.set_literal()
        else:
            name = self.next()
            u = self.uni
            if name in u.relations:
                s = u.relations[name]
            elif name in u.eventsets:
                s = u.eventsets[name]
            else:
                raise ParseError("unknown relation or eventset %r" % name)
        self.expect(")")
        return s

    def desc_pair(self):
        self.expect("(")
        pg = self.set_literal()
        self.expect(";")
        en = self.set_literal()
        self.expect(")")
        return pg, en

    def bracket_events(self):
        self.expect("[")
        es = set()
        while self.peek() != "]":
            es.add(self.next())
            if self.peek() == ",":
                self.next()
        self.expect("]")
        u = self.uni
        if len(es) == 1:
            (nm,) = es
            if nm in u.eventsets:
                return u.eventsets[nm]
        return frozenset(es)

    def bracket_rename(self):
        self.expect("[")
        u = self.uni
        if self.peek() == "]":  # identity renaming
            self.next()
            return RenameMap(u, {})
        first = self.next()
        if self.peek() == "]" and first in u.renamings:
            self.next()
            return u.renamings[first]
        emap = {}
        while True:
            self.expect("->")
            emap[first] = self.next()
            if self.peek() == "]":
                self.next()
                return RenameMap(u, emap)
            self.expect(",")
            first = self.next()


def parse(text, uni):
    """Parse a command expression against a model universe."""
    p = _Parser(text, uni)
    try:
        t = p.expr()
    except UniverseError as e:
        raise ParseError(str(e))
    if p.peek() is not None:
        raise ParseError("trailing input at token %r" % p.peek())
    return t


def render(t):
    """Canonical concrete syntax; parse(render(t), uni) is t."""
    return t._str
