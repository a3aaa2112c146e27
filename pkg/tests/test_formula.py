import pytest
from hypothesis import given, settings

from condseq.formula import (
    FALSUM, VERUM, And, Atom, Cond, Imp, Neg, Or, ParseError, atoms_of, cond_depth,
    parse, render, subformulas, symbol_count,
)
from condseq.sequent import LabelledFormula, Transition, complexity

from conftest import formulas

a, b, c = Atom("a"), Atom("b"), Atom("c")


@pytest.mark.parametrize("text, expected", [
    ("a => a", Cond(a, a)),
    ("a => (b & c)", Cond(a, And(b, c))),
    ("true => (b & ~(true => b))", Cond(VERUM, And(b, Neg(Cond(VERUM, b))))),
    ("a => b => c", Cond(a, Cond(b, c))),
    ("a -> b -> c", Imp(a, Imp(b, c))),
    ("a & b & c", And(And(a, b), c)),
    ("a | b & c", Or(a, And(b, c))),
    ("~a -> b => c", Cond(Imp(Neg(a), b), c)),
    ("false", FALSUM),
    ("  a_1Z  ", Atom("a_1Z")),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("f, text", [
    (Cond(a, a), "a => a"),
    (Imp(Cond(a, b), Imp(a, b)), "(a => b) -> a -> b"),
    (And(a, Or(b, c)), "a & (b | c)"),
    (Cond(Cond(a, b), c), "(a => b) => c"),
    (Neg(And(a, b)), "~(a & b)"),
    (Neg(Neg(a)), "~~a"),
    (Or(a, Or(b, c)), "a | (b | c)"),
])
def test_render(f, text):
    assert render(f) == text
    assert parse(text) == f


@pytest.mark.parametrize("text, offset", [
    ("a =>", 4),
    ("(a & b", 6),
    ("a b", 2),
    ("A", 0),
    ("a $ b", 2),
    ("é => a", 0),
    ("a => é", 5),
])
def test_parse_errors_carry_byte_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse("a & ")
    assert {"(", "~", "atom"} <= info.value.expected


def test_keywords_are_not_atoms():
    assert parse("true") == VERUM
    assert parse("true_ish") == Atom("true_ish")


@pytest.mark.parametrize("f, n", [
    (a, 1),
    (Cond(a, b), 3),
    (Cond(VERUM, And(b, Neg(Cond(VERUM, b)))), 8),
    (parse("((a))"), 1),
])
def test_symbol_count(f, n):
    assert symbol_count(f) == n


def test_complexity():
    assert complexity(LabelledFormula(0, a)) == 2
    assert complexity(Transition(0, a, 1)) == 3
    assert complexity(LabelledFormula(0, Cond(a, b))) == 6


def test_measures():
    f = parse("(a => b => c) | ~(a => a)")
    assert cond_depth(f) == 2
    assert atoms_of(f) == {"a", "b", "c"}
    assert len(list(subformulas(f))) == symbol_count(f)


@settings(max_examples=300)
@given(formulas())
def test_round_trip(f):
    assert parse(render(f)) == f


@given(formulas())
def test_subformulas_are_smaller(f):
    for g in subformulas(f):
        kids = [g.sub] if isinstance(g, Neg) else [g.left, g.right] if hasattr(g, "left") else []
        for k in kids:
            assert symbol_count(k) < symbol_count(g)


@given(formulas())
def test_transition_costs_one_more(f):
    assert complexity(Transition(0, f, 1)) == complexity(LabelledFormula(3, f)) + 1
