"""Reader and writer for the program surface syntax.

::

    % comment
    0.6::e(a,b).            probabilistic fact
    e(b,c).                 crisp fact (probability 1)
    path(X,Y) :- e(X,Z), path(Z,Y).

Variables start with an uppercase letter or ``_``; a lone ``_`` is a fresh
variable at each occurrence. Constants start with a lowercase letter or a
digit and may contain ``-`` between word characters; single-quoted
constants are also accepted.
"""
from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .errors import ParseError, ProgramError
from .logic import Atom, Const, ProbProgram, Rule, Var

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<float>\d+\.\d+(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<name>[a-z0-9][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\\n]|\\.)*')
  | (?P<punct>::|:-|[(),.])
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _tokenize(text: str) -> List[_Tok]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError("syntax", f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            k = chunk if kind == "punct" else kind
            out.append(_Tok(k, chunk, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.anon = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message, tok=None, code="syntax"):
        tok = tok or self.tok
        return ParseError(code, message, tok.line, tok.col)

    def expect(self, kind) -> _Tok:
        tok = self.tok
        if tok.kind != kind:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise self.error(f"expected {kind!r}, found {found}")
        self.i += 1
        return tok

    def accept(self, kind) -> Optional[_Tok]:
        if self.tok.kind == kind:
            self.i += 1
            return self.toks[self.i - 1]
        return None

    def term(self):
        tok = self.tok
        if tok.kind == "var":
            self.i += 1
            if tok.text == "_":
                self.anon += 1
                return Var(f"__{self.anon}")
            return Var(tok.text)
        if tok.kind in ("name", "float", "quoted"):
            self.i += 1
            return Const(tok.text)
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def atom(self) -> Atom:
        tok = self.tok
        if tok.kind != "name" or not tok.text[0].isalpha():
            raise self.error(f"expected a predicate name, found {tok.text or 'end of input'!r}")
        self.i += 1
        args = []
        if self.accept("("):
            if not self.accept(")"):
                args.append(self.term())
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
        return Atom(tok.text, args)

    def probability(self) -> Optional[Tuple[float, _Tok]]:
        tok = self.tok
        nxt = self.toks[self.i + 1]
        if nxt.kind == "::" and tok.kind in ("float", "name"):
            try:
                p = float(tok.text)
            except ValueError:
                raise self.error(f"invalid probability {tok.text!r}") from None
            self.i += 2
            return p, tok
        return None

    def clause(self, facts, pi, rules):
        start = self.tok
        self.anon = 0
        prob = self.probability()
        head = self.atom()
        if self.accept(":-"):
            if prob is not None:
                raise self.error("probabilistic rules are not supported; "
                                 "use a probabilistic fact in the body", start,
                                 code="probabilistic-rule")
            body = [self.atom()]
            while self.accept(","):
                body.append(self.atom())
            self.expect(".")
            try:
                rules.append(Rule(head, body))
            except ProgramError as e:
                raise ParseError(e.code, str(e), start.line, start.col) from None
            return
        self.expect(".")
        if not head.is_ground():
            raise self.error(f"fact {head} is not ground", start, code="nonground-fact")
        p = 1.0 if prob is None else prob[0]
        if not 0.0 <= p <= 1.0:
            raise self.error(f"probability {p} outside [0,1]", prob[1],
                             code="probability-range")
        if head in pi:
            raise self.error(f"fact {head} is declared twice", start, code="duplicate-fact")
        facts.append(head)
        pi[head] = p


def parse_program(text: str) -> ProbProgram:
    p = _Parser(text)
    facts: List[Atom] = []
    pi: Dict[Atom, float] = {}
    rules: List[Rule] = []
    while p.tok.kind != "eof":
        p.clause(facts, pi, rules)
    try:
        return ProbProgram(tuple(rules), tuple(facts), pi)
    except ProgramError as e:
        raise ParseError(e.code, str(e)) from None


def parse_query(text: str) -> Atom:
    p = _Parser(text)
    a = p.atom()
    p.accept(".")
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after query")
    return a


def parse_atom(text: str) -> Atom:
    return parse_query(text)


def render_program(program: ProbProgram) -> str:
    lines = []
    for f in program.facts:
        p = program.pi[f]
        lines.append(f"{f}." if p == 1.0 else f"{p!r}::{f}.")
    lines.extend(str(r) for r in program.rules)
    return "\n".join(lines) + "\n"
