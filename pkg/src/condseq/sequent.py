"""Labels, labelled formulas, transitions and sequents.

Labels are plain non-negative ints, printed ``x0``, ``x1``, ...  A sequent
is a pair of multisets; order inside a side is kept (it fixes the search
order) but equality and hashing ignore it.

Sequent syntax::

    x0: a => b, x0 -[a]-> x1 |- x1: b

A bare formula (no label) sits at ``x0``; ``x`` alone also means ``x0``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

from condseq.formula import Formula, ParseError, TokenStream, render, symbol_count

Label = int

LABEL_RE = re.compile(r"x(\d*)\Z")


def label_name(x: Label) -> str:
    return f"x{x}"


def parse_label(text: str) -> Label:
    m = LABEL_RE.match(text)
    if m is None:
        raise ValueError(f"not a label: {text!r}")
    return int(m.group(1) or 0)


@dataclass(frozen=True)
class LabelledFormula:
    label: Label
    formula: Formula

    def __str__(self):
        return f"{label_name(self.label)}: {render(self.formula)}"


@dataclass(frozen=True)
class Transition:
    """``src -[formula]-> dst``: dst is among the worlds selected for src and formula."""

    src: Label
    formula: Formula
    dst: Label

    def __str__(self):
        return f"{label_name(self.src)} -[{render(self.formula)}]-> {label_name(self.dst)}"


Item = Union[LabelledFormula, Transition]


def item_labels(item: Item) -> tuple[Label, ...]:
    if isinstance(item, Transition):
        return (item.src, item.dst)
    return (item.label,)


def complexity(item: Item) -> int:
    """2|A| for ``x: A``; 2|A| + 1 for a transition carrying A."""
    base = 2 * symbol_count(item.formula)
    return base + 1 if isinstance(item, Transition) else base


@dataclass(frozen=True, eq=False)
class Sequent:
    antecedent: tuple[Item, ...] = ()
    consequent: tuple[Item, ...] = ()

    @cached_property
    def _multisets(self):
        return (
            frozenset(Counter(self.antecedent).items()),
            frozenset(Counter(self.consequent).items()),
        )

    def __eq__(self, other):
        if not isinstance(other, Sequent):
            return NotImplemented
        return self._multisets == other._multisets

    def __hash__(self):
        return hash(self._multisets)

    def __str__(self):
        return render_sequent(self)

    def labels(self) -> set[Label]:
        out: set[Label] = set()
        for item in self.antecedent + self.consequent:
            out.update(item_labels(item))
        return out

    def complexity(self) -> int:
        return sum(map(complexity, self.antecedent)) + sum(map(complexity, self.consequent))


def labels_of(s: Sequent) -> set[Label]:
    return s.labels()


def fresh_label(s: Sequent) -> Label:
    """A label greater than every label occurring in ``s``."""
    return max(labels_of(s), default=-1) + 1


def remove_one(items: tuple[Item, ...], item: Item) -> tuple[Item, ...]:
    """Drop one occurrence of ``item``; KeyError if absent."""
    for i, it in enumerate(items):
        if it == item:
            return items[:i] + items[i + 1:]
    raise KeyError(item)


# ---------------------------------------------------------------------------
# multigraph of antecedent transitions


@dataclass(frozen=True)
class TransitionGraph:
    vertices: frozenset[Label]
    edges: tuple[tuple[Label, Label], ...] = field(default=())


def transition_graph(s: Sequent) -> TransitionGraph:
    edges = tuple((t.src, t.dst) for t in s.antecedent if isinstance(t, Transition))
    return TransitionGraph(frozenset(labels_of(s)), edges)


def is_regular(s: Sequent) -> bool:
    """True iff the antecedent transitions form a forest."""
    g = transition_graph(s)
    parent: dict[Label, Label] = {}
    for src, dst in g.edges:
        if src == dst or dst in parent:
            return False
        parent[dst] = src
    # in-degree <= 1 everywhere, so the only way to fail now is a directed cycle
    for start in parent:
        seen = {start}
        node = start
        while node in parent:
            node = parent[node]
            if node in seen:
                return False
            seen.add(node)
    return True


# ---------------------------------------------------------------------------
# concrete syntax


def render_sequent(s: Sequent) -> str:
    left = ", ".join(map(str, s.antecedent))
    right = ", ".join(map(str, s.consequent))
    return f"{left} |- {right}".strip()


def _is_label_token(ts: TokenStream) -> bool:
    tok = ts.peek
    return tok.kind == "ident" and LABEL_RE.match(tok.text) is not None and ts.peek_at(1).kind in (":", "-[")


def parse_item_from(ts: TokenStream) -> Item:
    if _is_label_token(ts):
        src = parse_label(ts.next().text)
        if ts.accept(":"):
            return LabelledFormula(src, ts.formula())
        ts.expect("-[")
        f = ts.formula()
        ts.expect("]->", also=("&", "|", "->", "=>"))
        tok = ts.expect("ident")
        try:
            dst = parse_label(tok.text)
        except ValueError:
            raise ParseError(f"bad label {tok.text!r}", tok.offset, {"label"}) from None
        return Transition(src, f, dst)
    return LabelledFormula(0, ts.formula())


def parse_items_from(ts: TokenStream, stop: Iterable[str]) -> tuple[Item, ...]:
    stop = set(stop)
    if ts.peek.kind in stop:
        return ()
    items = [parse_item_from(ts)]
    while ts.accept(","):
        items.append(parse_item_from(ts))
    if ts.peek.kind not in stop:
        raise ts.fail({",", "&", "|", "->", "=>", *stop})
    return tuple(items)


def parse_sequent_from(ts: TokenStream) -> Sequent:
    ant = parse_items_from(ts, {"|-"})
    ts.expect("|-")
    cons = parse_items_from(ts, {"eof"})
    return Sequent(ant, cons)


def parse_sequent(text: str) -> Sequent:
    return parse_sequent_from(TokenStream(text))


def parse_item(text: str) -> Item:
    ts = TokenStream(text)
    item = parse_item_from(ts)
    ts.expect("eof")
    return item
