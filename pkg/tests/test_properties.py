"""Randomised laws of the calculus core, each over at least 1000 generated terms."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from bpmnpc.calculus import (
    Choice,
    New,
    Nil,
    Par,
    Repl,
    Basic,
    alpha_canonical,
    alpha_equivalent,
    congruent,
    free_names,
    instantiate,
    normalize,
    is_system,
    parse_process,
    parse_system,
    print_term,
    subst,
)
from bpmnpc.semantics import Transition, derive, transition_key
from oracles import nominal_free_names, nominal_instantiate, nominal_subst
from strategies import bases, names, processes, shuffle, terms

MANY = settings(max_examples=1000)


@MANY
@given(processes())
def test_par_nil_is_unit(p):
    assert congruent(Par(p, Nil()), p)
    assert congruent(Par(Nil(), p), p)


@MANY
@given(processes(), processes(), processes())
def test_choice_is_idempotent_commutative_associative(p, q, r):
    assert congruent(Choice(p, p), p)
    assert congruent(Choice(p, q), Choice(q, p))
    assert congruent(Choice(Choice(p, q), r), Choice(p, Choice(q, r)))


@MANY
@given(processes(), processes(), processes())
def test_par_is_commutative_associative(p, q, r):
    assert congruent(Par(p, q), Par(q, p))
    assert congruent(Par(Par(p, q), r), Par(p, Par(q, r)))


@MANY
@given(bases)
def test_inert_terms_vanish(a):
    assert congruent(Repl(Nil()), Nil())
    assert congruent(New(a, Basic("T"), Nil()), Nil())


@MANY
@given(terms, terms, terms)
def test_congruence_is_an_equivalence(t, u, v):
    if type(t) is not type(u) or type(u) is not type(v):
        return
    assert congruent(t, t)
    if congruent(t, u):
        assert congruent(u, t)
        if congruent(u, v):
            assert congruent(t, v)


@MANY
@given(terms, names, names)
def test_subst_matches_nominal_oracle(t, a, b):
    assert subst(t, a, b) == nominal_subst(t, a, b)


@MANY
@given(terms, bases, names)
def test_instantiate_matches_nominal_oracle(t, a, v):
    assert instantiate(t, a, v) == nominal_instantiate(t, a, v)


@MANY
@given(terms)
def test_free_names_match_oracle(t):
    assert free_names(t) == nominal_free_names(t)


@MANY
@given(terms, names)
def test_subst_identity(t, a):
    assert alpha_equivalent(subst(t, a, a), t)


@MANY
@given(terms, names, names)
def test_subst_free_names(t, a, b):
    fn = free_names(t)
    expected = (fn - {a}) | ({b} if a in fn else set())
    assert free_names(subst(t, a, b)) == expected


@MANY
@given(terms)
def test_alpha_canonical_idempotent(t):
    c = alpha_canonical(t)
    assert alpha_canonical(c) == c
    assert normalize(normalize(t)) == normalize(t)


@MANY
@given(terms)
def test_parse_print_roundtrip(t):
    text = print_term(t)
    # a bare 0 or (new x:T)0 reads as either level, so name the level
    back = parse_system(text) if is_system(t) else parse_process(text)
    assert alpha_equivalent(back, t)
    assert print_term(back) == text


def _keys(t):
    return {transition_key(Transition(lab, normalize(tgt))) for lab, tgt in derive(t)}


@MANY
@given(terms, st.randoms(use_true_random=False))
def test_congruence_respects_transitions(t, rnd):
    u = shuffle(t, random.Random(rnd.random()))
    assert congruent(t, u)
    assert _keys(t) == _keys(u)
