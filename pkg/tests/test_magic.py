import networkx as nx
import pytest

from tcplog.errors import UnknownPredicate
from tcplog.evaluator import fact_manager
from tcplog.logic import Atom, Const, Rule, Var, atom
from tcplog.magic import (adorn, dependency_graph, magic_transform, mcp_fixpoint,
                          partition_rules, recursive_predicates, solve)
from tcplog.parser import parse_program, parse_query

from conftest import corpus

EX_MAGIC = """\
% magic program for query path(a,c)
m_goal.
goal :- m_goal, path(a,c).
m_path_bb(a,c) :- m_goal.
path(X,Y) :- m_path_bb(X,Y), e(X,Y).
path(X,Y) :- m_path_bb(X,Y), e(X,Z), path(Z,Y).
m_path_bb(Z,Y) :- m_path_bb(X,Y), e(X,Z).
"""


def test_adorn_examples():
    assert adorn(atom("path", "Z", "Y"), {"X", "Y", "Z"}) == "bb"
    assert adorn(atom("p", "X", "Y"), set()) == "ff"
    assert adorn(atom("p", "a", "Y"), set()) == "bf"


def test_transform_fixture(p_ex):
    mp = magic_transform(p_ex.rules, parse_query("path(a,c)"), p_ex.fact_predicates())
    assert mp.render() == EX_MAGIC
    assert mp.seed == Atom("m_goal")
    assert mp.magic_preds == {"m_goal", "m_path_bb"}
    # the rendering parses back into the same rule set
    back = parse_program(mp.render())
    assert back.rules == mp.rules and back.facts == (mp.seed,)


def test_transform_nonrecursive():
    rules = (Rule(atom("p", "X"), [atom("e", "X", "X")]),)
    mp = magic_transform(rules, atom("p", "V"), ["e"])
    assert [str(r) for r in mp.rules] == [
        "goal :- m_goal, p(V).", "m_p_f :- m_goal.", "p(X) :- m_p_f, e(X,X)."]


def test_fresh_names_avoid_clashes():
    rules = (Rule(atom("goal", "X"), [atom("m_goal", "X")]),)
    mp = magic_transform(rules, atom("goal", "a"), ["m_goal"])
    assert mp.goal.pred not in ("goal", "m_goal")
    assert mp.seed.pred != "m_goal"
    assert len(mp.magic_preds) == 2


def _nx_partition(rules):
    g = nx.DiGraph()
    for r in rules:
        g.add_node(r.head.pred)
        for b in r.body:
            g.add_edge(r.head.pred, b.pred)
    cyclic = set()
    for comp in nx.strongly_connected_components(g):
        node = next(iter(comp))
        if len(comp) > 1 or g.has_edge(node, node):
            cyclic |= comp
    recursive = {p for p in g if p in cyclic or nx.descendants(g, p) & cyclic}
    defined = {r.head.pred for r in rules}
    r1 = [r for r in rules if not any(b.pred in defined for b in r.body)]
    r3 = [r for r in rules if r not in r1 and r.head.pred in recursive]
    r2 = [r for r in rules if r not in r1 and r not in r3]
    return tuple(r1), tuple(r2), tuple(r3)


def test_partition_fixture(p_ex):
    mp = magic_transform(p_ex.rules, parse_query("path(a,c)"), p_ex.fact_predicates())
    r1, r2, r3 = partition_rules(mp)
    assert [str(r) for r in r1] == ["m_path_bb(a,c) :- m_goal."]
    assert r2 == ()
    assert len(r3) == 4
    assert (r1, r2, r3) == _nx_partition(mp.rules)
    assert recursive_predicates(mp.rules) == {"goal", "path", "m_path_bb"}
    assert set(dependency_graph(mp.rules)["goal"]) == {"m_goal", "path"}


def test_partition_matches_networkx_on_corpus():
    for P in corpus(80, seed=5):
        for q in sorted(P.rule_predicates()):
            n = P.arities()[q]
            mp = magic_transform(P.rules, Atom(q, [Var(f"Q{i}") for i in range(n)]),
                                 P.fact_predicates())
            assert partition_rules(mp) == _nx_partition(mp.rules)


def test_mcp_fixture_opt(p_ex):
    mgr = fact_manager(p_ex)
    ab, bc, ac = (mgr.mk_var(atom("e", *s)) for s in ("ab", "bc", "ac"))
    mp = magic_transform(p_ex.rules, parse_query("path(a,c)"), p_ex.fact_predicates())
    fx = mcp_fixpoint(mp, p_ex, mgr=mgr)
    assert fx.converged
    lam = fx.interp.as_dict()
    want = mgr.or_(ac, mgr.and_(ab, bc))
    assert lam[atom("path", "a", "c")] is want
    assert lam[atom("path", "b", "c")] is bc
    assert lam[Atom("goal")] is want
    assert atom("path", "a", "b") not in lam
    magic = {a for a in lam if a.pred in mp.magic_preds}
    assert magic == {Atom("m_goal"), atom("m_path_bb", "a", "c"),
                     atom("m_path_bb", "b", "c"), atom("m_path_bb", "c", "c")}
    assert all(lam[a].is_true() for a in magic)


def test_mcp_budget(p_ex):
    mgr = fact_manager(p_ex)
    mp = magic_transform(p_ex.rules, parse_query("path(a,c)"), p_ex.fact_predicates())
    fx = mcp_fixpoint(mp, p_ex, 1, mgr=mgr)
    assert not fx.converged and fx.iterations == 1
    assert fx.interp.get(atom("path", "a", "c")) is mgr.mk_var(atom("e", "a", "c"))


def test_opt_never_conjoins_for_magic_heads(p_ex, monkeypatch):
    import tcplog.evaluator as ev
    seen = []
    real_conj, real_disj = ev._conjoin_body, ev._disjoin_bodies

    def conj(mgr, interp, head, grounds):
        seen.append(head)
        return real_conj(mgr, interp, head, grounds)

    def disj(mgr, head, conjs):
        seen.append(head)
        return real_disj(mgr, head, conjs)

    monkeypatch.setattr(ev, "_conjoin_body", conj)
    monkeypatch.setattr(ev, "_disjoin_bodies", disj)
    mp = magic_transform(p_ex.rules, parse_query("path(a,c)"), p_ex.fact_predicates())
    mcp_fixpoint(mp, p_ex, opt=False)
    # the plain operator does build formulas for magic atoms
    assert atom("m_path_bb", "b", "c") in seen
    for P in [p_ex] + corpus(30, seed=9):
        for q in sorted(P.rule_predicates()):
            n = P.arities()[q]
            mp = magic_transform(P.rules, Atom(q, [Var(f"Q{i}") for i in range(n)]),
                                 P.fact_predicates())
            seen.clear()
            mcp_fixpoint(mp, P)
            assert not any(h.pred in mp.magic_preds for h in seen)


@pytest.mark.parametrize("mode", ["naive", "seminaive", "magic-plain", "magic-opt"])
def test_solve_examples(p_ex, mode):
    rep = solve(p_ex, parse_query("path(a,c)"), mode)
    (ans,) = rep.answers
    assert ans.probability == pytest.approx(0.51, abs=1e-12) and ans.bound == "exact"
    (none,) = solve(p_ex, parse_query("path(c,a)"), mode).answers
    assert none.probability == 0.0 and none.bound == "exact"


def test_solve_open_query(p_ex):
    rep = solve(p_ex, parse_query("path(X,Y)"), "seminaive")
    assert {str(a.atom): round(a.probability, 12) for a in rep.answers} == {
        "path(a,b)": 0.6, "path(b,c)": 0.5, "path(a,c)": 0.51}


def test_solve_budget_and_facts(p_ex):
    (ans,) = solve(p_ex, parse_query("path(a,c)"), "seminaive", 2).answers
    assert ans.probability == pytest.approx(0.3) and ans.bound == "lower"
    (fact,) = solve(p_ex, parse_query("e(a,b)"), "magic-opt").answers
    assert fact.probability == 0.6


def test_solve_unknown_predicate(p_ex):
    with pytest.raises(UnknownPredicate):
        solve(p_ex, parse_query("reach(a,c)"))
    with pytest.raises(UnknownPredicate):
        solve(p_ex, parse_query("path(a)"))
    with pytest.raises(ValueError):
        solve(p_ex, parse_query("path(a,c)"), "fast")


def test_entry_counts(p_ex):
    full = solve(p_ex, parse_query("path(a,c)"), "seminaive")
    assert full.entries == 3 and full.magic_entries == 0
    opt = solve(p_ex, parse_query("path(a,c)"), "magic-opt")
    assert opt.entries == 2 and opt.magic_entries == 4
