"""Fixpoints of the lineage-building consequence operator.

The interpretation maps each derived ground atom to a decision-diagram
handle describing the total choices under which the atom holds. Two
strategies are provided:

* naive: recompute every rule grounding from the full interpretation each
  round and stop when nothing changes;
* semi-naive: only ground rules with at least one body atom whose formula
  changed in the previous round, and disjoin the new bodies into the old
  formula.

With a shared :class:`FormulaManager` both produce handle-identical
interpretations round by round.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from typing import (Callable, Dict, FrozenSet, Iterable, Iterator, List,
                    NamedTuple, Optional, Sequence, Set, Tuple)

from .formula import Formula, FormulaManager
from .logic import Atom, Const, ProbProgram, Rule, Var, apply_subst, match_atom


class ParamInterp:
    """Versioned store of ``atom -> formula`` entries.

    Updating an atom never overwrites: the previous version id is added to
    ``outdated`` and a fresh row is appended. :meth:`finalize` projects the
    store down to the current rows. Lookups by bound argument positions go
    through lazily built hash indexes.
    """

    def __init__(self):
        self._rows: Dict[int, Tuple[Atom, Formula]] = {}
        self._current: Dict[Atom, int] = {}
        self.outdated: Set[int] = set()
        self.delta: List[Atom] = []
        self._by_pred: Dict[str, List[Atom]] = defaultdict(list)
        self._indexes: Dict[Tuple[str, Tuple[int, ...]], Dict[tuple, List[Atom]]] = {}
        self._versions = itertools.count()

    def get(self, a: Atom) -> Optional[Formula]:
        v = self._current.get(a)
        return None if v is None else self._rows[v][1]

    def version(self, a: Atom) -> Optional[int]:
        return self._current.get(a)

    def __contains__(self, a: Atom) -> bool:
        return a in self._current

    def __len__(self):
        return len(self._current)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self._current)

    def items(self) -> Iterator[Tuple[Atom, Formula]]:
        for a, v in self._current.items():
            yield a, self._rows[v][1]

    def as_dict(self) -> Dict[Atom, Formula]:
        return dict(self.items())

    def set(self, a: Atom, f: Formula) -> None:
        if f.is_false():
            raise ValueError(f"refusing to store a false formula for {a}")
        old = self._current.get(a)
        if old is not None:
            self.outdated.add(old)
        else:
            self._add_to_indexes(a)
        v = next(self._versions)
        self._rows[v] = (a, f)
        self._current[a] = v

    def finalize(self) -> None:
        for v in self.outdated:
            del self._rows[v]
        self.outdated.clear()

    @property
    def row_count(self) -> int:
        return len(self._rows)

    def atoms_of(self, pred: str) -> Sequence[Atom]:
        return self._by_pred.get(pred, ())

    def lookup(self, pred: str, positions: Tuple[int, ...], key: tuple) -> Sequence[Atom]:
        if not positions:
            return self.atoms_of(pred)
        idx = self._indexes.get((pred, positions))
        if idx is None:
            idx = defaultdict(list)
            for a in self._by_pred.get(pred, ()):
                idx[tuple(a.args[i] for i in positions)].append(a)
            self._indexes[(pred, positions)] = idx
        return idx.get(key, ())

    def _add_to_indexes(self, a: Atom) -> None:
        self._by_pred[a.pred].append(a)
        for (pred, positions), idx in self._indexes.items():
            if pred == a.pred:
                idx[tuple(a.args[i] for i in positions)].append(a)

    def equivalent(self, other: "ParamInterp") -> bool:
        """Same atoms, handle-equal formulas."""
        if len(self) != len(other):
            return False
        return all(other.get(a) is f for a, f in self.items())

    def copy(self) -> "ParamInterp":
        out = ParamInterp()
        for a, f in self.items():
            out.set(a, f)
        return out


class BodyMatch(NamedTuple):
    head: Atom
    conj: Formula


class Fixpoint(NamedTuple):
    interp: ParamInterp
    converged: bool
    iterations: int


def fact_manager(program: ProbProgram, node_limit: Optional[int] = None,
                 manager: Optional[FormulaManager] = None) -> FormulaManager:
    """Manager with one variable per fact, registered in file order."""
    mgr = manager if manager is not None else FormulaManager(node_limit)
    for f in program.facts:
        mgr.add_var(f)
    return mgr


def initial_interp(program: ProbProgram, mgr: FormulaManager) -> ParamInterp:
    interp = ParamInterp()
    for f in program.facts:
        interp.set(f, mgr.mk_var(f))
    interp.delta = list(program.facts)
    return interp


# -- joins ------------------------------------------------------------------

def _join(interp: ParamInterp, body: Sequence[Atom], theta: dict,
          order: Sequence[int], grounds: List[Optional[Atom]]):
    """Yield substitutions extending ``theta`` that ground ``body[order]`` in ``interp``.

    ``grounds`` is filled in place with the matched atom per body position.
    """
    if not order:
        yield theta
        return
    i, rest = order[0], order[1:]
    lit = body[i]
    positions, key = [], []
    for j, t in enumerate(lit.args):
        if isinstance(t, Const):
            positions.append(j)
            key.append(t)
        else:
            c = theta.get(t.name)
            if c is not None:
                positions.append(j)
                key.append(c)
    for cand in interp.lookup(lit.pred, tuple(positions), tuple(key)):
        ext = match_atom(lit, cand, theta)
        if ext is None:
            continue
        grounds[i] = cand
        yield from _join(interp, body, ext, rest, grounds)


def _conjoin_body(mgr: FormulaManager, interp: ParamInterp, head: Atom,
                  grounds: Sequence[Atom]) -> Formula:
    out = mgr.true
    for g in grounds:
        out = mgr.and_(out, interp.get(g))
    return out


def _disjoin_bodies(mgr: FormulaManager, head: Atom, conjs: Iterable[Formula]) -> Formula:
    out = mgr.false
    seen = set()
    for c in conjs:
        if c.uid in seen:
            continue
        seen.add(c.uid)
        out = mgr.or_(out, c)
    return out


def _match(mgr, interp, rule, theta, grounds, magic):
    head = apply_subst(rule.head, theta)
    if head.pred in magic:
        # magic atoms are pure guards under the optimized operator
        return BodyMatch(head, mgr.true)
    return BodyMatch(head, _conjoin_body(mgr, interp, head, grounds))


def b_set(interp: ParamInterp, rules: Iterable[Rule], mgr: FormulaManager,
          magic: FrozenSet[str] = frozenset()) -> List[BodyMatch]:
    """One match per rule grounding whose body atoms all have formulas."""
    out = []
    for rule in rules:
        n = len(rule.body)
        grounds: List[Optional[Atom]] = [None] * n
        for theta in _join(interp, rule.body, {}, range(n), grounds):
            out.append(_match(mgr, interp, rule, theta, grounds, magic))
    return out


def d_set(interp: ParamInterp, delta: Iterable[Atom], rules: Iterable[Rule],
          mgr: FormulaManager, magic: FrozenSet[str] = frozenset()) -> List[BodyMatch]:
    """Matches of :func:`b_set` with at least one body atom in ``delta``.

    Runs one join plan per body position, seeded from the delta atoms at
    that position; a grounding found by several plans is kept once.
    """
    by_pred: Dict[str, List[Atom]] = defaultdict(list)
    for a in delta:
        by_pred[a.pred].append(a)
    if not by_pred:
        return []
    out: Dict[tuple, BodyMatch] = {}
    for ri, rule in enumerate(rules):
        n = len(rule.body)
        for k, lit in enumerate(rule.body):
            seeds = by_pred.get(lit.pred)
            if not seeds:
                continue
            order = [j for j in range(n) if j != k]
            for a in seeds:
                theta = match_atom(lit, a)
                if theta is None:
                    continue
                grounds: List[Optional[Atom]] = [None] * n
                grounds[k] = a
                for ext in _join(interp, rule.body, theta, order, grounds):
                    key = (ri, tuple(ext[v] for v in rule.vars))
                    if key not in out:
                        out[key] = _match(mgr, interp, rule, ext, grounds, magic)
    return list(out.values())


# -- naive ------------------------------------------------------------------

def tcp_step(interp: ParamInterp, program: ProbProgram, mgr: FormulaManager) -> ParamInterp:
    """One application of the operator to ``interp`` (a fresh store)."""
    bodies: Dict[Atom, List[Formula]] = {}
    for m in b_set(interp, program.rules, mgr):
        bodies.setdefault(m.head, []).append(m.conj)
    out = ParamInterp()
    for f in program.facts:
        out.set(f, mgr.mk_var(f))
    for a, conjs in bodies.items():
        lam = _disjoin_bodies(mgr, a, conjs)
        if not lam.is_false():
            out.set(a, lam)
    out.delta = [a for a, f in out.items() if interp.get(a) is not f]
    return out


def naive_fixpoint(program: ProbProgram, max_iters: Optional[int] = None,
                   mgr: Optional[FormulaManager] = None,
                   on_step: Optional[Callable[[int, ParamInterp], None]] = None) -> Fixpoint:
    """Iterate :func:`tcp_step` from the empty interpretation.

    ``iterations`` is the index ``i`` of the returned interpretation, i.e.
    the number of productive applications; the facts-only interpretation is
    iteration 1. ``max_iters=None`` means no budget.
    """
    mgr = fact_manager(program, manager=mgr)
    interp = ParamInterp()
    i = 0
    while max_iters is None or i < max_iters:
        nxt = tcp_step(interp, program, mgr)
        if nxt.equivalent(interp):
            return Fixpoint(interp, True, i)
        interp = nxt
        i += 1
        if on_step is not None:
            on_step(i, interp)
    return Fixpoint(interp, False, i)


# -- semi-naive -------------------------------------------------------------

def delta_tcp(interp: ParamInterp, delta: Iterable[Atom], rules: Iterable[Rule],
              mgr: FormulaManager, magic: FrozenSet[str] = frozenset()) -> Dict[Atom, Formula]:
    """Atoms whose formula changes, with their new formula.

    A new atom gets the disjunction of its fresh bodies; a known atom gets
    ``old or fresh`` and is reported only when that differs from ``old``.
    Atoms of a predicate in ``magic`` get ``true`` once and are never
    updated.
    """
    fresh: Dict[Atom, List[Formula]] = {}
    for m in d_set(interp, delta, rules, mgr, magic):
        fresh.setdefault(m.head, []).append(m.conj)
    out: Dict[Atom, Formula] = {}
    for a, conjs in fresh.items():
        old = interp.get(a)
        if a.pred in magic:
            if old is None:
                out[a] = mgr.true
            continue
        beta = _disjoin_bodies(mgr, a, conjs)
        if old is None:
            if not beta.is_false():
                out[a] = beta
        else:
            gamma = mgr.or_(old, beta)
            if gamma is not old:
                out[a] = gamma
    return out


def run_seminaive(interp: ParamInterp, rules: Sequence[Rule], mgr: FormulaManager,
                  max_steps: Optional[int] = None, delta: Optional[Iterable[Atom]] = None,
                  magic: FrozenSet[str] = frozenset(),
                  on_step: Optional[Callable[[ParamInterp], None]] = None) -> Tuple[int, bool]:
    """Apply the delta operator in place until nothing changes or the budget ends.

    Starts from ``delta`` (default: every atom in ``interp``). Returns the
    number of productive applications and whether the empty delta was
    observed.
    """
    delta = list(interp) if delta is None else list(delta)
    interp.delta = delta
    steps = 0
    while max_steps is None or steps < max_steps:
        changed = delta_tcp(interp, delta, rules, mgr, magic)
        if not changed:
            interp.delta = []
            return steps, True
        for a, f in changed.items():
            interp.set(a, f)
        delta = list(changed)
        interp.delta = delta
        steps += 1
        if on_step is not None:
            on_step(interp)
    return steps, False


def scp_fixpoint(program: ProbProgram, max_iters: Optional[int] = None,
                 mgr: Optional[FormulaManager] = None,
                 on_step: Optional[Callable[[int, ParamInterp], None]] = None) -> Fixpoint:
    """Semi-naive fixpoint; iteration numbering matches :func:`naive_fixpoint`."""
    mgr = fact_manager(program, manager=mgr)
    if max_iters is not None and max_iters < 1:
        return Fixpoint(ParamInterp(), False, 0)
    interp = initial_interp(program, mgr)
    start = 1 if program.facts else 0
    if on_step is not None and start:
        on_step(1, interp)
    counter = itertools.count(start + 1)
    hook = None if on_step is None else (lambda I: on_step(next(counter), I))
    budget = None if max_iters is None else max_iters - 1
    steps, converged = run_seminaive(interp, program.rules, mgr, budget, on_step=hook)
    interp.finalize()
    return Fixpoint(interp, converged, start + steps)
