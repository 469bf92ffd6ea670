"""Query-directed evaluation with magic sets.

The query ``q`` is wrapped as ``goal :- q`` and the program is rewritten
so that every rule for a derived predicate is guarded by a magic atom that
records which bindings are relevant. Evaluation then runs the semi-naive
machinery over three rule groups in sequence (rules over base predicates,
non-recursive rules, recursive rules), with the iteration budget applied
to the recursive group only.

In the optimized mode magic atoms are stored with the constant formula
``true`` and never compiled.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import UnknownPredicate
from .evaluator import (Fixpoint, ParamInterp, fact_manager, initial_interp,
                        naive_fixpoint, run_seminaive, scp_fixpoint)
from .formula import FormulaManager, probability_weights
from .logic import Atom, Const, ProbProgram, Rule, Var, match_atom
from .report import Answer, SolveReport

MODES = ("naive", "seminaive", "magic-plain", "magic-opt")


def adorn(a: Atom, bound_vars: Iterable[str]) -> str:
    """``b`` for every argument whose variables are all in ``bound_vars``."""
    bound = set(bound_vars)
    return "".join("b" if isinstance(t, Const) or t.name in bound else "f"
                   for t in a.args)


def project(args: Sequence, adornment: str) -> Tuple:
    return tuple(t for t, c in zip(args, adornment) if c == "b")


@dataclass(frozen=True)
class MagicProgram:
    rules: Tuple[Rule, ...]
    seed: Atom
    query: Atom
    goal: Atom
    magic_preds: FrozenSet[str]
    strata: Tuple[Tuple[Rule, ...], Tuple[Rule, ...], Tuple[Rule, ...]] = field(repr=False)

    def render(self) -> str:
        """The rewritten program in input syntax; the seed appears as a crisp fact."""
        lines = [f"% magic program for query {self.query}", f"{self.seed}."]
        lines += [str(r) for r in self.rules]
        return "\n".join(lines) + "\n"


class _Names:
    """Fresh, injective predicate names that avoid the program's own."""

    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)
        self.assigned: Dict[tuple, str] = {}

    def fresh(self, base: str) -> str:
        name, k = base, 1
        while name in self.taken:
            k += 1
            name = f"{base}_{k}"
        self.taken.add(name)
        return name

    def magic(self, pred: str, adornment: str) -> str:
        key = (pred, adornment)
        if key not in self.assigned:
            base = f"m_{pred}_{adornment}" if adornment else f"m_{pred}"
            self.assigned[key] = self.fresh(base)
        return self.assigned[key]


def magic_transform(rules: Sequence[Rule], query: Atom,
                    extra_predicates: Iterable[str] = ()) -> MagicProgram:
    """Magic-sets rewrite of ``rules`` for ``query``.

    Follows the worklist algorithm over adorned predicates: each adorned
    predicate taken from the queue yields a guarded copy of every rule
    defining it, plus one magic rule per derived body atom, adorned with
    the variables bound by the guard and the preceding body atoms.
    ``extra_predicates`` are names the fresh predicates must avoid (e.g.
    fact predicates).
    """
    names = _Names([r.head.pred for r in rules]
                   + [b.pred for r in rules for b in r.body]
                   + [query.pred] + list(extra_predicates))
    goal = Atom(names.fresh("goal"))
    program = list(rules) + [Rule(goal, [query])]
    derived = {r.head.pred for r in program}

    out: List[Rule] = []
    seen_rules = set()

    def emit(rule):
        if rule not in seen_rules:
            seen_rules.add(rule)
            out.append(rule)

    start = (goal.pred, "")
    done = {start}
    queue = [start]
    while queue:
        pred, alpha = queue.pop(0)
        mpred = names.magic(pred, alpha)
        for rule in program:
            if rule.head.pred != pred:
                continue
            guard = Atom(mpred, project(rule.head.args, alpha))
            emit(Rule(rule.head, (guard,) + rule.body))
            bound = set(guard.vars())
            for i, b in enumerate(rule.body):
                if b.pred in derived:
                    gamma = adorn(b, bound)
                    head = Atom(names.magic(b.pred, gamma), project(b.args, gamma))
                    emit(Rule(head, (guard,) + rule.body[:i]))
                    if (b.pred, gamma) not in done:
                        done.add((b.pred, gamma))
                        queue.append((b.pred, gamma))
                bound.update(b.vars())
    seed = Atom(names.magic(*start))
    magic_preds = frozenset(names.assigned.values())
    rules_t = tuple(out)
    return MagicProgram(rules_t, seed, query, goal, magic_preds,
                        partition_rules(rules_t))


# -- rule partition ---------------------------------------------------------

def _sccs(graph: Dict[str, List[str]]) -> List[List[str]]:
    """Tarjan's algorithm, iterative."""
    index: Dict[str, int] = {}
    low: Dict[str, int] = {}
    on_stack = set()
    stack: List[str] = []
    out: List[List[str]] = []
    counter = 0
    for root in graph:
        if root in index:
            continue
        work = [(root, iter(graph[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(graph[child])))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(comp)
    return out


def dependency_graph(rules: Iterable[Rule]) -> Dict[str, List[str]]:
    graph: Dict[str, List[str]] = {}
    for r in rules:
        succ = graph.setdefault(r.head.pred, [])
        for b in r.body:
            graph.setdefault(b.pred, [])
            if b.pred not in succ:
                succ.append(b.pred)
    return graph


def recursive_predicates(rules: Iterable[Rule]) -> FrozenSet[str]:
    """Predicates inside, or depending on, a cycle of the dependency graph."""
    graph = dependency_graph(rules)
    cyclic = set()
    for comp in _sccs(graph):
        if len(comp) > 1 or comp[0] in graph[comp[0]]:
            cyclic.update(comp)
    # close under "depends on"
    changed = True
    while changed:
        changed = False
        for p, succ in graph.items():
            if p not in cyclic and any(s in cyclic for s in succ):
                cyclic.add(p)
                changed = True
    return frozenset(cyclic)


def partition_rules(rules) -> Tuple[Tuple[Rule, ...], Tuple[Rule, ...], Tuple[Rule, ...]]:
    """Split into (base-only bodies, non-recursive, recursive), keeping rule order.

    A body predicate with no defining rule is a base predicate (a fact
    predicate or the seed). The groups are tested in that order, so a rule
    over base predicates only lands in the first group even if its head is
    recursive.
    """
    if isinstance(rules, MagicProgram):
        rules = rules.rules
    rules = tuple(rules)
    defined = {r.head.pred for r in rules}
    rec = recursive_predicates(rules)
    r1, r2, r3 = [], [], []
    for r in rules:
        if all(b.pred not in defined for b in r.body):
            r1.append(r)
        elif r.head.pred in rec:
            r3.append(r)
        else:
            r2.append(r)
    return tuple(r1), tuple(r2), tuple(r3)


# -- evaluation -------------------------------------------------------------

def mcp_fixpoint(mp: MagicProgram, program: ProbProgram, d: Optional[int] = None,
                 opt: bool = True, mgr: Optional[FormulaManager] = None,
                 on_step: Optional[Callable[[str, ParamInterp], None]] = None) -> Fixpoint:
    """Materialize the magic program over the facts of ``program``.

    ``opt`` selects the optimized operator (magic atoms fixed to ``true``).
    The seed is inserted with formula ``true`` in both modes. The budget
    ``d`` bounds the delta applications over the recursive group;
    ``iterations`` counts the productive ones. ``on_step`` receives the
    group name (``"R1"``, ``"R2"``, ``"R3"``) after every productive
    application.
    """
    mgr = fact_manager(program, manager=mgr)
    interp = initial_interp(program, mgr)
    interp.set(mp.seed, mgr.true)
    magic = mp.magic_preds if opt else frozenset()
    r1, r2, r3 = mp.strata

    def hook(name):
        return None if on_step is None else (lambda I: on_step(name, I))

    run_seminaive(interp, r1, mgr, magic=magic, on_step=hook("R1"))
    run_seminaive(interp, r2, mgr, magic=magic, on_step=hook("R2"))
    steps, converged = run_seminaive(interp, r3, mgr, d, magic=magic, on_step=hook("R3"))
    interp.finalize()
    return Fixpoint(interp, converged, steps)


def _check_query(program: ProbProgram, q: Atom) -> None:
    arities = program.arities()
    if q.pred not in arities:
        raise UnknownPredicate(f"unknown predicate {q.pred}/{q.arity}")
    if arities[q.pred] != q.arity:
        raise UnknownPredicate(
            f"predicate {q.pred} has arity {arities[q.pred]}, query uses {q.arity}")


def solve(program: ProbProgram, q: Atom, mode: str = "magic-opt",
          d: Optional[int] = None, node_limit: Optional[int] = None,
          mgr: Optional[FormulaManager] = None) -> SolveReport:
    """Probabilities (exact or lower bounds) for every ground instance of ``q``.

    ``d=None`` runs to the fixpoint. Ground queries without an entry are
    reported with probability 0.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    _check_query(program, q)
    if mgr is None:
        mgr = FormulaManager(node_limit)
    fact_manager(program, manager=mgr)
    timings = {"parse_ms": 0.0, "transform_ms": 0.0, "materialize_ms": 0.0, "wmc_ms": 0.0}
    weights = probability_weights(program.pi)

    if q.pred in program.fact_predicates():
        t0 = time.perf_counter()
        answers = [Answer(f, program.pi[f], "exact", 0)
                   for f in program.facts if match_atom(q, f) is not None]
        if not answers and q.is_ground():
            answers = [Answer(q, 0.0, "exact", 0)]
        timings["wmc_ms"] = (time.perf_counter() - t0) * 1e3
        return SolveReport(answers, timings, len(mgr), entries=0, magic_entries=0, mode=mode)

    magic_preds: FrozenSet[str] = frozenset()
    wrapper = None
    t0 = time.perf_counter()
    if mode.startswith("magic"):
        mp = magic_transform(program.rules, q, program.fact_predicates())
        magic_preds = mp.magic_preds
        wrapper = mp.goal.pred
        t1 = time.perf_counter()
        timings["transform_ms"] = (t1 - t0) * 1e3
        fix = mcp_fixpoint(mp, program, d, opt=(mode == "magic-opt"), mgr=mgr)
    else:
        t1 = t0
        run = naive_fixpoint if mode == "naive" else scp_fixpoint
        fix = run(program, d, mgr=mgr)
    t2 = time.perf_counter()
    timings["materialize_ms"] = (t2 - t1) * 1e3

    bound = "exact" if fix.converged else "lower"
    answers = []
    for a, lam in fix.interp.items():
        if a.pred == q.pred and match_atom(q, a) is not None:
            answers.append(Answer(a, mgr.wmc(lam, weights), bound, fix.iterations))
    if not answers and q.is_ground():
        answers.append(Answer(q, 0.0, bound, fix.iterations))
    timings["wmc_ms"] = (time.perf_counter() - t2) * 1e3

    facts = set(program.facts)
    derived = [a for a in fix.interp if a not in facts and a.pred != wrapper]
    n_magic = sum(1 for a in derived if a.pred in magic_preds)
    return SolveReport(answers, timings, len(mgr), entries=len(derived) - n_magic,
                       magic_entries=n_magic, mode=mode)
