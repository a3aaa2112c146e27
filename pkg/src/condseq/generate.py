"""Seeded random formulas for property tests and sweeps."""

from __future__ import annotations

import random
from typing import Sequence

from condseq.formula import FALSUM, VERUM, And, Atom, Cond, Formula, Imp, Neg, Or

_BINARY = (And, Or, Imp, Cond, Cond)  # conditionals weighted double


def formula_of_size(rng: random.Random, size: int, atoms: Sequence[str] = ("a", "b"),
                    constants: float = 0.1) -> Formula:
    """A random formula with exactly ``size`` symbols."""
    if size <= 1:
        if rng.random() < constants:
            return rng.choice((VERUM, FALSUM))
        return Atom(rng.choice(atoms))
    if size == 2 or rng.random() < 0.15:
        return Neg(formula_of_size(rng, size - 1, atoms, constants))
    left = rng.randint(1, size - 2)
    op = rng.choice(_BINARY)
    return op(formula_of_size(rng, left, atoms, constants),
              formula_of_size(rng, size - 1 - left, atoms, constants))


def random_formula(rng: random.Random, max_size: int, atoms: Sequence[str] = ("a", "b"),
                   constants: float = 0.1) -> Formula:
    return formula_of_size(rng, rng.randint(1, max_size), atoms, constants)


def equivalent_variant(rng: random.Random, f: Formula, rate: float = 0.5) -> Formula:
    """A random rewrite of ``f`` that is provably equivalent to it in CK.

    Rewrites are classical (commutation, double negation, De Morgan,
    implication as disjunction) and may fire under any connective,
    including both sides of a conditional.
    """
    if isinstance(f, Neg):
        f = Neg(equivalent_variant(rng, f.sub, rate))
    elif isinstance(f, (And, Or, Imp, Cond)):
        f = type(f)(equivalent_variant(rng, f.left, rate), equivalent_variant(rng, f.right, rate))
    if rng.random() >= rate:
        return f
    if isinstance(f, (And, Or)):
        if rng.random() < 0.5:
            return type(f)(f.right, f.left)
        dual = Or if isinstance(f, And) else And
        return Neg(dual(Neg(f.left), Neg(f.right)))
    if isinstance(f, Imp):
        return Or(Neg(f.left), f.right)
    return Neg(Neg(f))
