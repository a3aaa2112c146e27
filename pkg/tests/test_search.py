import random

import pytest
from hypothesis import given, settings

from condseq.calculus import BoundedSequent, RuleId, System, parse_any
from condseq.formula import And, Atom, Cond, Imp, Or, iff, parse, render
from condseq.generate import equivalent_variant
from condseq.search import (
    NotProved, Proved, ResourceExceeded, SearchConfig, cond_l_targets, decide, is_valid,
    prove_bounded, prove_sequent,
)
from condseq.sequent import parse_item, parse_sequent

from conftest import (
    bookkeeping_violations, decide_checked, formulas, measure_violations, prove_checked, proved,
)

MP_AXIOM = "(a => b) -> a -> b"
CONTRACTION = "x0: true => b & ~(true => b) |-"


@pytest.mark.parametrize("goal, system, expected", [
    ("a => a", System.CK_ID, Proved),
    ("a => a", System.CK, NotProved),
    (MP_AXIOM, System.CK_MP, Proved),
    (MP_AXIOM, System.CK, NotProved),
    ("a => true", System.CK, Proved),
    ("(a => b) & (a => c) -> (a => b & c)", System.CK, Proved),
    ("(a => b) -> (a & c => b)", System.CK_MP_ID, NotProved),
    ("(a => b) | (a => ~b)", System.CK_MP_ID, NotProved),
])
def test_decide(goal, system, expected):
    assert isinstance(decide_checked(parse(goal), system), expected)


@pytest.mark.parametrize("text, expected", [
    ("x0: a => b & c |- x0: a => b", Proved),
    ("x0: b & c |- x0: a => b", NotProved),
    ("x0 -[b]-> x1, x0: b => c |- x0 -[a]-> x1", NotProved),
    ("x0 -[b]-> x1, x0: a => c |- x0 -[a & a]-> x1", NotProved),
    ("x0 -[a]-> x1, x0: a & a => c |- x1: c", Proved),
])
def test_prove_sequent_ck(text, expected):
    assert isinstance(prove_checked(parse_sequent(text), System.CK), expected)


def test_id_does_not_consume_needed_transitions():
    s = parse_sequent("x0 -[a]-> x1, x0: a => b |- x1: b & a")
    r = prove_checked(s, System.CK_ID)
    assert isinstance(r, Proved) and RuleId.ID in r.proof.rules()
    assert isinstance(prove_checked(s, System.CK), NotProved)


def test_contraction_needs_cond_l3():
    s = parse_sequent(CONTRACTION)
    r = prove_checked(s, System.CK_MP)
    assert isinstance(r, Proved)
    assert RuleId.COND_L3 in r.proof.rules()
    assert not bookkeeping_violations(r.proof)
    blocked = SearchConfig(disabled_rules=frozenset({RuleId.COND_L3}))
    assert isinstance(prove_bounded(s, System.CK_MP, blocked), NotProved)
    assert isinstance(prove_sequent(s, System.CK), NotProved)


def test_mp_axiom_closes_through_mp():
    r = prove_checked(BoundedSequent.wrap(parse_sequent("|- x0: " + MP_AXIOM)), System.CK_MP)
    mp_nodes = [n for n in r.proof.nodes() if n.rule is RuleId.MP]
    assert mp_nodes and mp_nodes[0].principal == parse_item("x0 -[a]-> x0")


def test_entry_points_check_their_inputs():
    with pytest.raises(ValueError):
        prove_sequent(parse_sequent("|- a"), System.CK_MP)
    with pytest.raises(ValueError):
        prove_bounded(parse_sequent("|- a"), System.CK)
    with pytest.raises(TypeError):
        prove_sequent(BoundedSequent.wrap(parse_sequent("|- a")), System.CK)
    with pytest.raises(ValueError):
        prove_sequent(parse_sequent("x0 -[a]-> x1, x1 -[a]-> x0 |- x0: b"), System.CK)
    with pytest.raises(ValueError):
        SearchConfig(depth_limit=0)


def test_bounded_input_is_used_as_given():
    s = parse_any("{x0: a => b} ; {} ; x0: a => b, x0: a |- x0: b")
    r = prove_checked(s, System.CK_MP)
    assert isinstance(r, Proved) and r.proof.rule is RuleId.COND_L2
    # the contraction example cannot be closed once its duplicate is spent
    spent = parse_any("{x0: true => b & ~(true => b)} ; {} ; x0: true => b & ~(true => b) |-")
    assert isinstance(prove_bounded(spent, System.CK_MP), NotProved)


def test_resource_limit_and_proof_collection():
    f = parse("(a => b => c) -> (a => b => c | d)")
    assert isinstance(decide(f, System.CK, SearchConfig(depth_limit=2)), ResourceExceeded)
    assert decide(f, System.CK, SearchConfig(collect_proof=False)) == Proved(None)
    assert is_valid(f, System.CK) and not is_valid(parse("a => a"), System.CK)


@pytest.mark.parametrize("text, system, expected", [
    ("x0: a => b, x0 -[c]-> x1, x0 -[d]-> x2 |-", System.CK, [1, 2]),
    ("x0: a => b |-", System.CK, []),
    ("x0: a => b |-", System.CK_MP, [0]),
    ("x0: a => b, x1 -[c]-> x2, x0 -[c]-> x3 |- x4: a", System.CK_MP_ID, [3, 0]),
])
def test_cond_l_targets(text, system, expected):
    s = parse_sequent(text)
    assert cond_l_targets(s, s.antecedent[0], system) == expected


def test_cond_l_targets_overrides():
    s = parse_sequent("x0: a => b, x0 -[c]-> x1 |- x2: a")
    assert cond_l_targets(s, s.antecedent[0], System.CK, SearchConfig(allow_self_target=True)) == [1, 0]
    assert cond_l_targets(s, s.antecedent[0], System.CK, SearchConfig(full_targets=True)) == [0, 1, 2]


@pytest.mark.parametrize("goal", [
    "(a => b => c) & (a => b => d) -> (a => b => c & d)",
    "((a => b) => c) -> ((a => ~~b) => c)",
    "(a => (b => c) & (b => d)) -> (a => b => c & d)",
])
@pytest.mark.parametrize("system", list(System))
def test_nested_valid(goal, system):
    r = decide_checked(parse(goal), system)
    assert isinstance(r, Proved)
    if system.has_mp:
        assert not bookkeeping_violations(r.proof)
    else:
        assert not measure_violations(r.proof)


@settings(max_examples=60, deadline=None)
@given(formulas(max_leaves=6))
def test_explored_sequents_stay_regular(f):
    for system in System:
        decide(f, system, SearchConfig(check_invariants=True, collect_proof=False))


@settings(max_examples=60, deadline=None)
@given(formulas(max_leaves=6))
def test_restricted_targets_agree_with_all_labels(f):
    for system in System:
        fast = decide(f, system, SearchConfig(collect_proof=False))
        full = decide(f, system, SearchConfig(collect_proof=False, full_targets=True))
        assert type(fast) is type(full)


@settings(max_examples=60, deadline=None)
@given(formulas(max_leaves=6))
def test_proofs_check_and_measures_hold(f):
    for system in System:
        r = decide_checked(f, system)
        if isinstance(r, Proved):
            if system.has_mp:
                assert not bookkeeping_violations(r.proof)
            else:
                assert not measure_violations(r.proof)


@settings(max_examples=60, deadline=None)
@given(formulas(max_leaves=6))
def test_monotone_across_systems(f):
    if proved(f, System.CK):
        assert all(proved(f, s) for s in System)
    if proved(f, System.CK_ID) or proved(f, System.CK_MP):
        assert proved(f, System.CK_MP_ID)


@settings(max_examples=40, deadline=None)
@given(formulas(max_leaves=3), formulas(max_leaves=3), formulas(max_leaves=3), formulas(max_leaves=3))
def test_disjunction_property(a1, b1, a2, b2):
    if proved(Or(Cond(a1, b1), Cond(a2, b2)), System.CK):
        assert proved(Cond(a1, b1), System.CK) or proved(Cond(a2, b2), System.CK)


@settings(max_examples=30, deadline=None)
@given(formulas(max_leaves=4), formulas(max_leaves=3))
def test_rcea(a, c):
    b = equivalent_variant(random.Random(render(a) + render(c)), a)
    assert proved(iff(a, b), System.CK)
    assert proved(iff(Cond(a, c), Cond(b, c)), System.CK)


def test_rck_small():
    a, b1, b2 = parse("p"), parse("q"), parse("r")
    assert proved(Imp(And(Cond(a, b1), Cond(a, b2)), Cond(a, And(b2, b1))), System.CK)
    assert proved(Imp(Cond(a, b1), Cond(a, Or(b1, b2))), System.CK)
    assert not proved(Imp(Cond(a, b1), Cond(a, b2)), System.CK_MP_ID)
    assert proved(Cond(Atom("a"), Imp(b1, b1)), System.CK)
