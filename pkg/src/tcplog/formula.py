"""Canonical monotone propositional formulas as reduced ordered BDDs.

Every node is hash-consed through a per-manager unique table, so two
handles are the same object exactly when the formulas are equivalent.
Variables are ordered by registration; the evaluator registers the facts
of a program in file order.
"""
from __future__ import annotations

import itertools
from typing import Dict, Hashable, Iterable, Mapping, Optional, Set, Tuple

from .errors import (CompilationBlowup, ManagerMismatch, UnregisteredVariable,
                     WeightError)

_LEAF = 1 << 60
_AND, _OR = 0, 1


class Formula:
    """Handle to a node of a :class:`FormulaManager`.

    Handles are interned, so ``==`` is identity and doubles as logical
    equivalence.
    """

    __slots__ = ("level", "lo", "hi", "uid", "manager")

    def __init__(self, level, lo, hi, uid, manager):
        self.level = level
        self.lo = lo
        self.hi = hi
        self.uid = uid
        self.manager = manager

    def is_true(self) -> bool:
        return self is self.manager.true

    def is_false(self) -> bool:
        return self is self.manager.false

    def is_const(self) -> bool:
        return self.level == _LEAF

    def __hash__(self):
        return self.uid

    def __repr__(self):
        return f"<Formula {self.manager.to_expr(self)}>"


class FormulaManager:
    """Unique table, apply cache, evaluation and weighted model counting.

    ``node_limit`` bounds the number of internal nodes; creating one more
    raises :class:`CompilationBlowup`. Not safe for concurrent mutation.
    """

    def __init__(self, node_limit: Optional[int] = None):
        self.node_limit = node_limit
        self.false = Formula(_LEAF, None, None, 0, self)
        self.true = Formula(_LEAF, None, None, 1, self)
        self._unique: Dict[Tuple[int, int, int], Formula] = {}
        self._cache: Dict[Tuple[int, int, int], Formula] = {}
        self._names: list = []
        self._levels: Dict[Hashable, int] = {}
        self._next_uid = itertools.count(2)

    # -- variables ---------------------------------------------------------

    def add_var(self, name: Hashable) -> int:
        """Register ``name`` (idempotent) and return its level."""
        level = self._levels.get(name)
        if level is None:
            level = len(self._names)
            self._names.append(name)
            self._levels[name] = level
        return level

    def has_var(self, name: Hashable) -> bool:
        return name in self._levels

    @property
    def var_names(self) -> Tuple[Hashable, ...]:
        return tuple(self._names)

    def name_of(self, level: int) -> Hashable:
        return self._names[level]

    def mk_var(self, name: Hashable) -> Formula:
        try:
            level = self._levels[name]
        except KeyError:
            raise UnregisteredVariable(f"variable {name!s} is not registered") from None
        return self._mk(level, self.false, self.true)

    # -- construction ------------------------------------------------------

    def __len__(self):
        """Number of internal nodes ever created."""
        return len(self._unique)

    def _mk(self, level, lo, hi):
        if lo is hi:
            return lo
        key = (level, lo.uid, hi.uid)
        node = self._unique.get(key)
        if node is None:
            if self.node_limit is not None and len(self._unique) >= self.node_limit:
                raise CompilationBlowup(self.node_limit)
            node = Formula(level, lo, hi, next(self._next_uid), self)
            self._unique[key] = node
        return node

    def _check(self, *fs):
        for f in fs:
            if not isinstance(f, Formula):
                raise TypeError(f"not a formula handle: {f!r}")
            if f.manager is not self:
                raise ManagerMismatch("formula belongs to another manager")

    def and_(self, x: Formula, y: Formula) -> Formula:
        self._check(x, y)
        return self._apply(_AND, x, y)

    def or_(self, x: Formula, y: Formula) -> Formula:
        self._check(x, y)
        return self._apply(_OR, x, y)

    def conjoin(self, fs: Iterable[Formula]) -> Formula:
        out = self.true
        for f in fs:
            out = self.and_(out, f)
        return out

    def disjoin(self, fs: Iterable[Formula]) -> Formula:
        out = self.false
        for f in fs:
            out = self.or_(out, f)
        return out

    def _apply(self, op, x, y):
        t, f = self.true, self.false
        if op == _AND:
            if x is f or y is f:
                return f
            if x is t:
                return y
            if y is t or x is y:
                return x
        else:
            if x is t or y is t:
                return t
            if x is f:
                return y
            if y is f or x is y:
                return x
        if x.uid > y.uid:
            x, y = y, x
        key = (op, x.uid, y.uid)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if x.level == y.level:
            level = x.level
            r = self._mk(level, self._apply(op, x.lo, y.lo),
                         self._apply(op, x.hi, y.hi))
        elif x.level < y.level:
            level = x.level
            r = self._mk(level, self._apply(op, x.lo, y), self._apply(op, x.hi, y))
        else:
            level = y.level
            r = self._mk(level, self._apply(op, x, y.lo), self._apply(op, x, y.hi))
        self._cache[key] = r
        return r

    # -- queries -----------------------------------------------------------

    def equivalent(self, x: Formula, y: Formula) -> bool:
        self._check(x, y)
        return x is y

    def implies(self, x: Formula, y: Formula) -> bool:
        """True iff ``x -> y`` is valid (``x or y`` collapses to ``y``)."""
        return self.or_(x, y) is y

    def eval(self, x: Formula, true_vars) -> bool:
        """Truth value of ``x`` when exactly ``true_vars`` are true."""
        self._check(x)
        names = self._names
        while x.level != _LEAF:
            x = x.hi if names[x.level] in true_vars else x.lo
        return x is self.true

    def support(self, x: Formula) -> Set[Hashable]:
        return {self._names[n.level] for n in self.nodes(x)}

    def nodes(self, x: Formula):
        """Internal nodes reachable from ``x`` (each once)."""
        self._check(x)
        seen = set()
        stack = [x]
        while stack:
            n = stack.pop()
            if n.level == _LEAF or n.uid in seen:
                continue
            seen.add(n.uid)
            yield n
            stack.append(n.lo)
            stack.append(n.hi)

    def size(self, x: Formula) -> int:
        return sum(1 for _ in self.nodes(x))

    def wmc(self, x: Formula, weights: Mapping[Hashable, Tuple[float, float]],
            tol: float = 1e-9) -> float:
        """Weighted model count by one bottom-up pass over the nodes.

        Variables skipped along a path contribute ``w_pos + w_neg``, which
        must be 1, so every pair is checked.
        """
        self._check(x)
        names = self._names
        memo = {0: 0.0, 1: 1.0}
        checked = set()

        def weight(level):
            name = names[level]
            try:
                pos, neg = weights[name]
            except KeyError:
                raise WeightError(f"no weight for variable {name!s}") from None
            if level not in checked:
                if abs(pos + neg - 1.0) > tol:
                    raise WeightError(f"weights of {name!s} sum to {pos + neg}, not 1")
                checked.add(level)
            return pos, neg

        def go(n):
            v = memo.get(n.uid)
            if v is None:
                pos, neg = weight(n.level)
                v = neg * go(n.lo) + pos * go(n.hi)
                memo[n.uid] = v
            return v

        return go(x)

    # -- export ------------------------------------------------------------

    def to_expr(self, x: Formula, name=None) -> str:
        """Render as nested ``and``/``or``/variable text, e.g. ``or(and(v0, v1), v2)``.

        Uses the monotone expansion ``lo or (v and hi)``, which is exact for
        the positive formulas the evaluator builds.
        """
        self._check(x)
        if name is None:
            name = lambda level: f"v{level}"  # noqa: E731
        memo = {0: "false", 1: "true"}

        def go(n):
            if n.uid in memo:
                return memo[n.uid]
            v = name(n.level)
            hi = v if n.hi is self.true else f"and({v}, {go(n.hi)})"
            s = hi if n.lo is self.false else f"or({hi}, {go(n.lo)})"
            memo[n.uid] = s
            return s

        return go(x)

    def audit(self) -> None:
        """Assert the structural invariants of a reduced ordered diagram."""
        seen = set()
        for key, node in self._unique.items():
            assert node.lo is not node.hi, "redundant node"
            assert key == (node.level, node.lo.uid, node.hi.uid)
            assert key not in seen
            seen.add(key)
            for child in (node.lo, node.hi):
                assert child.level > node.level, "order violated"
                if child.level != _LEAF:
                    assert self._unique[(child.level, child.lo.uid, child.hi.uid)] is child


def probability_weights(pi: Mapping[Hashable, float]) -> Dict[Hashable, Tuple[float, float]]:
    return {f: (p, 1.0 - p) for f, p in pi.items()}
