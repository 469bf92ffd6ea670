"""Terms, atoms, rules and probabilistic programs.

Everything here is immutable once built. Ground atoms are hashed once at
construction, so they can be used directly as dictionary keys by the
evaluator's indexes and by the formula manager's variable table.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from .errors import ProgramError


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    symbol: str

    def __post_init__(self):
        if not self.symbol:
            raise ValueError("constant symbol must be nonempty")

    def __str__(self):
        return self.symbol


Term = Union[Var, Const]
Substitution = Dict[str, Const]


class Atom:
    """``pred(t1, ..., tn)``; a 0-ary atom renders as the bare predicate."""

    __slots__ = ("pred", "args", "_hash", "_ground")

    def __init__(self, pred: str, args: Iterable[Term] = ()):
        if not pred:
            raise ValueError("predicate name must be nonempty")
        args = tuple(args)
        for t in args:
            if not isinstance(t, (Var, Const)):
                raise TypeError(f"not a term: {t!r}")
        self.pred = pred
        self.args = args
        self._hash = hash((pred, args))
        self._ground = not any(isinstance(t, Var) for t in args)

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> Tuple[str, int]:
        return (self.pred, len(self.args))

    def is_ground(self) -> bool:
        return self._ground

    def vars(self) -> Tuple[str, ...]:
        """Variable names in order of first occurrence."""
        seen = []
        for t in self.args:
            if isinstance(t, Var) and t.name not in seen:
                seen.append(t.name)
        return tuple(seen)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Atom):
            return NotImplemented
        return (self._hash == other._hash and self.pred == other.pred
                and self.args == other.args)

    def __hash__(self):
        return self._hash

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(t) for t in self.args)})"

    def __repr__(self):
        return f"Atom({str(self)!r})"


def atom(pred: str, *args: str) -> Atom:
    """Build an atom from strings, using the surface-syntax convention.

    >>> str(atom("path", "X", "c"))
    'path(X,c)'
    """
    return Atom(pred, [term(a) for a in args])


def term(text: str) -> Term:
    if text[0].isupper() or text[0] == "_":
        return Var(text)
    return Const(text)


class Rule:
    """A definite clause ``head :- b1, ..., bn`` with a nonempty body."""

    __slots__ = ("head", "body", "_vars")

    def __init__(self, head: Atom, body: Iterable[Atom]):
        body = tuple(body)
        if not body:
            raise ProgramError("empty-body", f"rule for {head} has an empty body")
        body_vars = []
        for b in body:
            for v in b.vars():
                if v not in body_vars:
                    body_vars.append(v)
        missing = [v for v in head.vars() if v not in body_vars]
        if missing:
            raise ProgramError(
                "range-restriction",
                f"head variable(s) {', '.join(missing)} of {head} do not occur in the body",
            )
        self.head = head
        self.body = body
        self._vars = tuple(body_vars)

    @property
    def vars(self) -> Tuple[str, ...]:
        """All variables of the rule, in body order of first occurrence."""
        return self._vars

    def __eq__(self, other):
        if not isinstance(other, Rule):
            return NotImplemented
        return self.head == other.head and self.body == other.body

    def __hash__(self):
        return hash((self.head, self.body))

    def __str__(self):
        return f"{self.head} :- {', '.join(str(b) for b in self.body)}."

    def __repr__(self):
        return f"Rule({str(self)!r})"


def apply_subst(a: Atom, theta: Mapping[str, Const]) -> Atom:
    if a.is_ground() or not theta:
        return a
    return Atom(a.pred, [theta.get(t.name, t) if isinstance(t, Var) else t
                         for t in a.args])


def match_atom(pattern: Atom, ground: Atom,
               theta: Optional[Mapping[str, Const]] = None) -> Optional[Substitution]:
    """Least extension of ``theta`` mapping ``pattern`` onto ``ground``.

    Returns a new dict, or None when no extension exists. ``theta`` is
    never modified.
    """
    if pattern.pred != ground.pred or len(pattern.args) != len(ground.args):
        return None
    out = dict(theta) if theta else {}
    for p, g in zip(pattern.args, ground.args):
        if isinstance(p, Const):
            if p != g:
                return None
        else:
            bound = out.get(p.name)
            if bound is None:
                out[p.name] = g
            elif bound != g:
                return None
    return out


@dataclass(frozen=True)
class ProbProgram:
    """The triple (rules, facts, labels).

    ``facts`` keeps file order; it fixes the decision-diagram variable order.
    Crisp facts carry probability 1.
    """

    rules: Tuple[Rule, ...]
    facts: Tuple[Atom, ...]
    pi: Mapping[Atom, float] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "facts", tuple(self.facts))
        object.__setattr__(self, "pi", dict(self.pi))
        if len(set(self.facts)) != len(self.facts):
            dup = next(f for f in self.facts if self.facts.count(f) > 1)
            raise ProgramError("duplicate-fact", f"fact {dup} is declared twice")
        for f in self.facts:
            if not f.is_ground():
                raise ProgramError("nonground-fact", f"fact {f} is not ground")
            p = self.pi.get(f)
            if p is None:
                raise ProgramError("missing-probability", f"fact {f} has no probability")
            if not 0.0 <= p <= 1.0:
                raise ProgramError("probability-range",
                                   f"probability {p} of {f} is outside [0,1]")
        if set(self.pi) - set(self.facts):
            raise ProgramError("missing-probability", "label for an undeclared fact")
        self.arities()  # raises on conflicts
        overlap = self.fact_predicates() & self.rule_predicates()
        if overlap:
            raise ProgramError(
                "predicate-overlap",
                f"predicate(s) {', '.join(sorted(overlap))} defined by both facts and rules",
            )

    def arities(self) -> Dict[str, int]:
        seen: Dict[str, int] = {}
        atoms = itertools.chain(self.facts,
                                *((r.head,) + r.body for r in self.rules))
        for a in atoms:
            n = seen.setdefault(a.pred, a.arity)
            if n != a.arity:
                raise ProgramError(
                    "arity-conflict",
                    f"predicate {a.pred} used with arities {n} and {a.arity}",
                )
        return seen

    def fact_predicates(self) -> frozenset:
        return frozenset(f.pred for f in self.facts)

    def rule_predicates(self) -> frozenset:
        return frozenset(r.head.pred for r in self.rules)

    def constants(self) -> Tuple[Const, ...]:
        seen = {}
        atoms = itertools.chain(self.facts,
                                *((r.head,) + r.body for r in self.rules))
        for a in atoms:
            for t in a.args:
                if isinstance(t, Const):
                    seen.setdefault(t, None)
        return tuple(seen)

    def probabilistic_facts(self) -> Tuple[Atom, ...]:
        """Facts whose label is strictly between 0 and 1."""
        return tuple(f for f in self.facts if 0.0 < self.pi[f] < 1.0)


def herbrand_base(program: ProbProgram) -> Iterator[Atom]:
    """Lazily enumerate every ground atom over the program's vocabulary."""
    consts = program.constants()
    for pred, n in program.arities().items():
        if n and not consts:
            continue
        for combo in itertools.product(consts, repeat=n):
            yield Atom(pred, combo)
