"""Selection-function models and a brute-force countermodel search.

A model has worlds ``0..n-1``, a selection function defined on every
(world, set of worlds) pair, and a valuation of atoms.  Keying the
selection function on extensions makes normality automatic.

:func:`find_countermodel` walks every model with at most two worlds in a
fixed order: world count, then valuations, then selection functions, both
lexicographic with subsets coded as bitmasks (bit i = world i).  The walk
is vectorised over selection functions with numpy; every model it returns
is re-checked with the plain evaluator below.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from condseq.calculus import System
from condseq.formula import (
    And, Atom, Cond, Falsum, Formula, Imp, Neg, Or, Verum, atoms_of,
)
from condseq.sequent import Item, Label, Sequent, Transition, label_name

World = int
WorldSet = frozenset


@dataclass(frozen=True)
class FiniteModel:
    size: int
    selection: dict  # (world, frozenset of worlds) -> frozenset of worlds
    valuation: dict  # atom name -> frozenset of worlds

    @property
    def worlds(self) -> range:
        return range(self.size)

    def select(self, w: World, ext: WorldSet) -> WorldSet:
        return self.selection[(w, ext)]


def all_subsets(n: int) -> list[WorldSet]:
    """Subsets of ``range(n)`` in bitmask order."""
    return [frozenset(i for i in range(n) if code >> i & 1) for code in range(1 << n)]


def extension(m: FiniteModel, f: Formula) -> WorldSet:
    if isinstance(f, Atom):
        return m.valuation.get(f.name, frozenset())
    if isinstance(f, Falsum):
        return frozenset()
    everything = frozenset(m.worlds)
    if isinstance(f, Verum):
        return everything
    if isinstance(f, Neg):
        return everything - extension(m, f.sub)
    if isinstance(f, Cond):
        ante, cons = extension(m, f.left), extension(m, f.right)
        return frozenset(w for w in m.worlds if m.select(w, ante) <= cons)
    left, right = extension(m, f.left), extension(m, f.right)
    if isinstance(f, And):
        return left & right
    if isinstance(f, Or):
        return left | right
    if isinstance(f, Imp):
        return (everything - left) | right
    raise TypeError(f"not a formula: {f!r}")


def evaluate(m: FiniteModel, w: World, f: Formula) -> bool:
    """Truth of ``f`` at world ``w``."""
    if w not in m.worlds:
        raise ValueError(f"world {w} not in model")
    return w in extension(m, f)


def satisfies(m: FiniteModel, mapping: dict, item: Item) -> bool:
    if isinstance(item, Transition):
        return mapping[item.dst] in m.select(mapping[item.src], extension(m, item.formula))
    return evaluate(m, mapping[item.label], item.formula)


def _mappings(labels: Iterable[Label], n: int):
    labels = sorted(labels)
    for worlds in itertools.product(range(n), repeat=len(labels)):
        yield dict(zip(labels, worlds))


def falsifying_mapping(m: FiniteModel, s: Sequent) -> Optional[dict]:
    for mapping in _mappings(s.labels(), m.size):
        if all(satisfies(m, mapping, i) for i in s.antecedent) and not any(
            satisfies(m, mapping, i) for i in s.consequent
        ):
            return mapping
    return None


def sequent_valid_in_model(m: FiniteModel, s: Sequent) -> bool:
    return falsifying_mapping(m, s) is None


def model_conditions_hold(m: FiniteModel, system: System) -> bool:
    for (w, ext), chosen in m.selection.items():
        if system.has_id and not chosen <= ext:
            return False
        if system.has_mp and w in ext and w not in chosen:
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class Countermodel:
    model: FiniteModel
    mapping: dict  # label -> world


@functools.lru_cache(maxsize=None)
def _selection_table(n: int, system: System) -> np.ndarray:
    """All admissible selection functions, one row each, lexicographic order.

    Column ``w * 2**n + code`` holds the bitmask of f(w, code).
    """
    nsub = 1 << n
    pairs = n * nsub
    rows = np.array(list(itertools.product(range(nsub), repeat=pairs)), dtype=np.uint8).reshape(-1, pairs)
    keep = np.ones(len(rows), dtype=bool)
    for w in range(n):
        for code in range(nsub):
            col = rows[:, w * nsub + code]
            if system.has_id:
                keep &= (col & ~np.uint8(code)) == 0
            if system.has_mp and code >> w & 1:
                keep &= (col >> w & 1) == 1
    return rows[keep]


class _Vectorised:
    """Extensions of formulas across every selection function at once."""

    def __init__(self, n: int, table: np.ndarray, valuation: dict):
        self.n = n
        self.nsub = 1 << n
        self.full = np.uint8(self.nsub - 1)
        self.table = table
        self.rows = np.arange(len(table))
        self.valuation = valuation
        self.cache: dict = {}

    def ext(self, f: Formula) -> np.ndarray:
        hit = self.cache.get(f)
        if hit is not None:
            return hit
        size = len(self.table)
        if isinstance(f, Atom):
            out = np.full(size, self.valuation.get(f.name, 0), dtype=np.uint8)
        elif isinstance(f, Falsum):
            out = np.zeros(size, dtype=np.uint8)
        elif isinstance(f, Verum):
            out = np.full(size, self.full, dtype=np.uint8)
        elif isinstance(f, Neg):
            out = ~self.ext(f.sub) & self.full
        elif isinstance(f, And):
            out = self.ext(f.left) & self.ext(f.right)
        elif isinstance(f, Or):
            out = self.ext(f.left) | self.ext(f.right)
        elif isinstance(f, Imp):
            out = (~self.ext(f.left) & self.full) | self.ext(f.right)
        elif isinstance(f, Cond):
            ante, cons = self.ext(f.left), self.ext(f.right)
            out = np.zeros(size, dtype=np.uint8)
            for w in range(self.n):
                chosen = self.table[self.rows, w * self.nsub + ante]
                out |= ((chosen & ~cons) == 0).astype(np.uint8) << w
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.cache[f] = out
        return out

    def sat(self, item: Item, mapping: dict) -> np.ndarray:
        if isinstance(item, Transition):
            chosen = self.table[self.rows, mapping[item.src] * self.nsub + self.ext(item.formula)]
            return (chosen >> mapping[item.dst] & 1).astype(bool)
        return (self.ext(item.formula) >> mapping[item.label] & 1).astype(bool)


def _build_model(n: int, row: np.ndarray, valuation: dict) -> FiniteModel:
    subsets = all_subsets(n)
    nsub = 1 << n
    selection = {(w, subsets[c]): subsets[int(row[w * nsub + c])] for w in range(n) for c in range(nsub)}
    return FiniteModel(n, selection, {a: subsets[c] for a, c in valuation.items()})


def sequent_atoms(s: Sequent) -> set[str]:
    out: set[str] = set()
    for item in s.antecedent + s.consequent:
        out |= atoms_of(item.formula)
    return out


def find_countermodel(s: Sequent, system: System, max_worlds: int = 2,
                      atoms: Optional[Iterable[str]] = None) -> Optional[Countermodel]:
    """First model (in enumeration order) meeting ``system``'s conditions that falsifies ``s``."""
    if not 1 <= max_worlds <= 2:
        raise ValueError("max_worlds must be 1 or 2")
    atoms = sorted(sequent_atoms(s) if atoms is None else set(atoms))
    labels = sorted(s.labels()) or [0]
    for n in range(1, max_worlds + 1):
        table = _selection_table(n, system)
        for codes in itertools.product(range(1 << n), repeat=len(atoms)):
            valuation = dict(zip(atoms, codes))
            vec = _Vectorised(n, table, valuation)
            best = None
            for mapping in _mappings(labels, n):
                bad = np.ones(len(table), dtype=bool)
                for item in s.antecedent:
                    bad &= vec.sat(item, mapping)
                for item in s.consequent:
                    bad &= ~vec.sat(item, mapping)
                if bad.any():
                    idx = int(np.argmax(bad))
                    if best is None or idx < best[0]:
                        best = (idx, mapping)
            if best is not None:
                idx, mapping = best
                model = _build_model(n, table[idx], valuation)
                # first falsifying mapping for this very model
                witness = falsifying_mapping(model, s)
                assert witness is not None and model_conditions_hold(model, system)
                return Countermodel(model, witness)
    return None


def _set_text(ws: Iterable[World]) -> str:
    return "{" + ",".join(f"w{w}" for w in sorted(ws)) + "}"


def render_countermodel(cm: Countermodel) -> str:
    m = cm.model
    lines = ["worlds: " + " ".join(f"w{w}" for w in m.worlds)]
    for atom in sorted(m.valuation):
        lines.append(f"val {atom}: {_set_text(m.valuation[atom])}")
    for w in m.worlds:
        for ext in all_subsets(m.size):
            lines.append(f"f(w{w}, {_set_text(ext)}) = {_set_text(m.select(w, ext))}")
    lines.append("mapping: " + " ".join(f"{label_name(x)}->w{w}" for x, w in sorted(cm.mapping.items())))
    return "\n".join(lines)
