import pytest

from tcplog.errors import EnumerationCapExceeded
from tcplog.generate import chain_program_text
from tcplog.logic import atom
from tcplog.oracle import boolean_tp_least_model, enumerate_prob, enumerate_probs, worlds
from tcplog.parser import parse_program


def test_least_model_example(p_ex):
    C = {atom("e", "a", "b"), atom("e", "b", "c")}
    assert boolean_tp_least_model(p_ex.rules, C) == C | {
        atom("path", "a", "b"), atom("path", "b", "c"), atom("path", "a", "c")}
    assert boolean_tp_least_model(p_ex.rules, set()) == set()


def test_enumerate_examples(p_ex):
    assert enumerate_prob(p_ex, atom("path", "a", "c")) == pytest.approx(0.51, abs=1e-12)
    assert enumerate_prob(p_ex, atom("path", "c", "a")) == 0.0
    probs = enumerate_probs(p_ex)
    assert probs[atom("path", "b", "c")] == pytest.approx(0.5)


def test_world_weights_sum_to_one(p_ex):
    ws = list(worlds(p_ex))
    assert len(ws) == 8
    assert sum(w for _, w in ws) == pytest.approx(1.0, abs=1e-12)


def test_crisp_facts_are_not_enumerated():
    P = parse_program("friend(a,b).\n0.5::s(a).\nt(X) :- friend(X,Y), s(X).")
    assert len(list(worlds(P))) == 2
    assert enumerate_prob(P, atom("t", "a")) == 0.5


def test_cap():
    P = parse_program(chain_program_text(8))
    with pytest.raises(EnumerationCapExceeded) as e:
        list(worlds(P, cap=5))
    assert (e.value.size, e.value.cap) == (7, 5)
