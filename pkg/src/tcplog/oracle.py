"""Brute-force ground truth by enumerating total choices.

Nothing here touches the evaluator: least models are computed by a plain
nested-loop immediate-consequence iteration, and probabilities by summing
world weights directly.
"""
from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping, Set, Tuple

from .errors import EnumerationCapExceeded
from .formula import Formula, FormulaManager
from .logic import Atom, ProbProgram, Rule, apply_subst, match_atom

DEFAULT_CAP = 20


def _groundings(body, by_pred, theta):
    if not body:
        yield theta
        return
    lit = body[0]
    for a in by_pred.get(lit.pred, ()):
        ext = match_atom(lit, a, theta)
        if ext is not None:
            yield from _groundings(body[1:], by_pred, ext)


def boolean_tp_least_model(rules: Iterable[Rule], facts: Iterable[Atom]) -> Set[Atom]:
    """Least Herbrand model of ``facts`` plus ``rules`` by naive iteration."""
    rules = list(rules)
    model = set(facts)
    while True:
        by_pred: Dict[str, List[Atom]] = {}
        for a in model:
            by_pred.setdefault(a.pred, []).append(a)
        derived = set(model)
        for r in rules:
            for theta in _groundings(r.body, by_pred, {}):
                derived.add(apply_subst(r.head, theta))
        if derived == model:
            return model
        model = derived


def worlds(program: ProbProgram, cap: int = DEFAULT_CAP) -> Iterator[Tuple[FrozenSet[Atom], float]]:
    """Every total choice with nonzero weight, as (true facts, weight).

    Facts labelled 1 are always true and facts labelled 0 always false;
    every other choice for them has weight exactly 0, so skipping those
    worlds leaves the sum unchanged.
    """
    sure = [f for f in program.facts if program.pi[f] == 1.0]
    free = program.probabilistic_facts()
    if len(free) > cap:
        raise EnumerationCapExceeded(len(free), cap)
    for bits in itertools.product((False, True), repeat=len(free)):
        w = 1.0
        chosen = list(sure)
        for f, b in zip(free, bits):
            p = program.pi[f]
            if b:
                w *= p
                chosen.append(f)
            else:
                w *= 1.0 - p
        yield frozenset(chosen), w


def enumerate_probs(program: ProbProgram, rules: Iterable[Rule] = None,
                    cap: int = DEFAULT_CAP) -> Dict[Atom, float]:
    """Probability of every atom true in at least one world."""
    rules = program.rules if rules is None else tuple(rules)
    out: Dict[Atom, float] = {}
    for chosen, w in worlds(program, cap):
        for a in boolean_tp_least_model(rules, chosen):
            out[a] = out.get(a, 0.0) + w
    return out


def enumerate_prob(program: ProbProgram, a: Atom, cap: int = DEFAULT_CAP) -> float:
    total = 0.0
    for chosen, w in worlds(program, cap):
        if a in boolean_tp_least_model(program.rules, chosen):
            total += w
    return total


def world_models(program: ProbProgram, rules: Iterable[Rule] = None,
                 extra: Iterable[Atom] = (), cap: int = DEFAULT_CAP
                 ) -> List[Tuple[FrozenSet[Atom], float, Set[Atom]]]:
    """(choice, weight, least model) for every world; ``extra`` atoms are added to each choice."""
    rules = program.rules if rules is None else tuple(rules)
    extra = tuple(extra)
    return [(chosen, w, boolean_tp_least_model(rules, chosen.union(extra)))
            for chosen, w in worlds(program, cap)]


def brute_wmc(mgr: FormulaManager, x: Formula,
              weights: Mapping[Hashable, Tuple[float, float]],
              cap: int = DEFAULT_CAP) -> float:
    """Weighted model count by summing over all assignments to the support of ``x``."""
    vs = sorted(mgr.support(x), key=lambda v: str(v))
    if len(vs) > cap:
        raise EnumerationCapExceeded(len(vs), cap)
    total = 0.0
    for bits in itertools.product((False, True), repeat=len(vs)):
        true_vars = {v for v, b in zip(vs, bits) if b}
        if mgr.eval(x, true_vars):
            w = 1.0
            for v, b in zip(vs, bits):
                pos, neg = weights[v]
                w *= pos if b else neg
            total += w
    return total
