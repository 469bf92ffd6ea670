"""Benchmark and test-corpus program generators."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .logic import Atom, Const, ProbProgram, Rule, Var

SMOKERS_RULES = (
    "smokes(X) :- stress(X).",
    "smokes(X) :- friend(X,Y), influences(Y,X), smokes(Y).",
    "asthma(X) :- smokes(X), susceptible(X).",
)


@dataclass(frozen=True)
class SmokersNetwork:
    """Persons ``p1..pn`` and undirected friendships in attachment order.

    Every friendship becomes two directed edges, so that the recursive
    smoking rule (which reads ``friend(X,Y)`` together with
    ``influences(Y,X)``) can fire.
    """

    n: int
    friendships: Tuple[Tuple[int, int], ...]
    p_stress: float = 0.3
    p_influence: float = 0.2
    p_susceptible: float = 0.4

    def edges(self) -> List[Tuple[int, int]]:
        out = []
        for i, j in self.friendships:
            out += [(i, j), (j, i)]
        return out

    def n_probabilistic_facts(self) -> int:
        return 2 * self.n + 2 * len(self.friendships)

    def trimmed(self, max_facts: int) -> "SmokersNetwork":
        """Largest prefix of persons (with friendships among them, in order)
        whose probabilistic facts fit in ``max_facts``."""
        k = self.n
        while k > 1 and 2 * k + 2 * (k - 1) > max_facts:
            k -= 1
        kept = []
        for i, j in self.friendships:
            if i <= k and j <= k and 2 * k + 2 * (len(kept) + 1) <= max_facts:
                kept.append((i, j))
        return SmokersNetwork(k, tuple(kept), self.p_stress, self.p_influence,
                              self.p_susceptible)

    def render(self) -> str:
        lines = [f"% smokers network: {self.n} persons, {len(self.friendships)} friendships"]
        for i in range(1, self.n + 1):
            lines.append(f"{self.p_stress!r}::stress(p{i}).")
            lines.append(f"{self.p_susceptible!r}::susceptible(p{i}).")
        for i, j in self.edges():
            lines.append(f"friend(p{i},p{j}).")
            lines.append(f"{self.p_influence!r}::influences(p{i},p{j}).")
        lines.extend(SMOKERS_RULES)
        return "\n".join(lines) + "\n"


def smokers_network(n_persons: int, seed: int, **probs) -> SmokersNetwork:
    """Preferential attachment: each new person befriends up to two earlier
    persons drawn with weight ``degree + 1``."""
    if n_persons < 1:
        raise ValueError("need at least one person")
    rng = random.Random(seed)
    degree = [0] * (n_persons + 1)
    friendships = []
    for i in range(2, n_persons + 1):
        existing = list(range(1, i))
        targets: List[int] = []
        while len(targets) < min(2, len(existing)):
            j = rng.choices(existing, weights=[degree[x] + 1 for x in existing])[0]
            if j not in targets:
                targets.append(j)
        for j in targets:
            friendships.append((i, j))
            degree[i] += 1
            degree[j] += 1
    return SmokersNetwork(n_persons, tuple(friendships), **probs)


def generate_smokers(n_persons: int, seed: int, **probs) -> str:
    return smokers_network(n_persons, seed, **probs).render()


def chain_program_text(n: int, p: float = 0.9) -> str:
    """``e(v1,v2) ... e(v{n-1},vn)`` with transitive-closure rules."""
    lines = [f"{p!r}::e(v{i},v{i + 1})." for i in range(1, n)]
    lines += ["path(X,Y) :- e(X,Y).", "path(X,Y) :- e(X,Z), path(Z,Y)."]
    return "\n".join(lines) + "\n"


# -- random corpus ----------------------------------------------------------

FACT_PREDS = (("e", 2), ("s", 1))
DERIVED_PREDS = (("p", 1), ("q", 2), ("r", 2), ("t", 0))
CONSTANTS = ("a", "b", "c")
VARIABLES = ("X", "Y", "Z")


def random_program(rng: random.Random, max_facts: int = 12, max_rules: int = 8,
                   max_body: int = 2, constants: Sequence[str] = CONSTANTS) -> ProbProgram:
    """A small range-restricted program; recursion arises freely."""
    candidates = [Atom(p, [Const(c) for c in combo])
                  for p, n in FACT_PREDS
                  for combo in _combos(constants, n)]
    n_facts = rng.randint(1, min(max_facts, len(candidates)))
    facts = rng.sample(candidates, n_facts)
    pi = {}
    for f in facts:
        pi[f] = 1.0 if rng.random() < 0.1 else round(rng.uniform(0.05, 0.95), 2)

    preds = FACT_PREDS + DERIVED_PREDS
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        body = []
        for _ in range(rng.randint(1, max_body)):
            pred, n = rng.choice(preds)
            body.append(Atom(pred, [_random_term(rng, constants) for _ in range(n)]))
        body_vars = sorted({v for b in body for v in b.vars()})
        hp, hn = rng.choice(DERIVED_PREDS)
        args = []
        for _ in range(hn):
            if body_vars and rng.random() < 0.85:
                args.append(Var(rng.choice(body_vars)))
            else:
                args.append(Const(rng.choice(constants)))
        rules.append(Rule(Atom(hp, args), body))
    return ProbProgram(tuple(rules), tuple(facts), pi)


def _random_term(rng, constants):
    if rng.random() < 0.85:
        return Var(rng.choice(VARIABLES))
    return Const(rng.choice(constants))


def _combos(constants, n):
    if n == 0:
        return [()]
    return [(c,) + rest for c in constants for rest in _combos(constants, n - 1)]


def ground_queries(program: ProbProgram, rng: random.Random, k: int,
                   constants: Optional[Sequence[str]] = None) -> List[Atom]:
    """``k`` distinct ground atoms of derived predicates used by the program."""
    constants = constants or [c.symbol for c in program.constants()] or list(CONSTANTS)
    arities = program.arities()
    pool = [Atom(p, [Const(c) for c in combo])
            for p in sorted(program.rule_predicates())
            for combo in _combos(constants, arities[p])]
    return rng.sample(pool, min(k, len(pool)))
