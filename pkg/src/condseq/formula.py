"""Conditional-logic formulas: AST, concrete syntax, size measures.

Concrete syntax (ASCII)::

    ~A   A & B   A | B   A -> B   A => B   true   false   (A)

Precedence from tightest to loosest is ``~``, ``&``, ``|``, ``->``, ``=>``.
``->`` and ``=>`` associate to the right, ``&`` and ``|`` to the left.
Atoms match ``[a-z][a-zA-Z0-9_]*`` (``true`` and ``false`` are reserved).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Falsum:
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class Verum:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Neg:
    sub: "Formula"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Cond:
    """The conditional ``left => right``."""

    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render(self)


Formula = Union[Atom, Falsum, Verum, Neg, And, Or, Imp, Cond]
BINARY = (And, Or, Imp, Cond)

FALSUM = Falsum()
VERUM = Verum()

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
RESERVED = {"true", "false"}


def iff(a: Formula, b: Formula) -> Formula:
    """``(a -> b) & (b -> a)``; there is no primitive biconditional."""
    return And(Imp(a, b), Imp(b, a))


# ---------------------------------------------------------------------------
# size measures


def symbol_count(f: Formula) -> int:
    """Number of atoms, constants and connectives in ``f`` (parentheses excluded)."""
    if isinstance(f, Neg):
        return 1 + symbol_count(f.sub)
    if isinstance(f, BINARY):
        return 1 + symbol_count(f.left) + symbol_count(f.right)
    return 1


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    yield f
    if isinstance(f, Neg):
        yield from subformulas(f.sub)
    elif isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def atoms_of(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def cond_depth(f: Formula) -> int:
    """Nesting degree of ``=>``."""
    if isinstance(f, Neg):
        return cond_depth(f.sub)
    if isinstance(f, BINARY):
        inner = max(cond_depth(f.left), cond_depth(f.right))
        return inner + 1 if isinstance(f, Cond) else inner
    return 0


# ---------------------------------------------------------------------------
# tokenizer (shared with the sequent syntax)


class ParseError(ValueError):
    """Syntax error at a UTF-8 byte ``offset``; ``expected`` lists acceptable tokens."""

    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at byte {offset}{detail}")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<sym>\|-|->|=>|-\[|\]->|[()~&|:,{};])
  | (?P<ident>[a-zA-Z_][a-zA-Z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # a symbol's own text, "ident", or "eof"
    text: str
    offset: int  # byte offset


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    byte = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", byte)
        chunk = m.group()
        if m.lastgroup == "sym":
            tokens.append(Token(chunk, chunk, byte))
        elif m.lastgroup == "ident":
            tokens.append(Token("ident", chunk, byte))
        pos = m.end()
        byte += len(chunk.encode("utf-8"))
    tokens.append(Token("eof", "", byte))
    return tokens


_FORMULA_START = {"~", "(", "true", "false", "atom"}


class TokenStream:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def peek_at(self, k: int) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.peek.kind == kind:
            self.i += 1
            return True
        return False

    def expect(self, kind: str, also=()) -> Token:
        tok = self.peek
        if tok.kind != kind:
            raise ParseError(f"unexpected {_describe(tok)}", tok.offset, {kind, *also})
        return self.next()

    def fail(self, expected) -> ParseError:
        tok = self.peek
        return ParseError(f"unexpected {_describe(tok)}", tok.offset, expected)

    # grammar -------------------------------------------------------------

    def formula(self) -> Formula:
        left = self._imp()
        if self.accept("=>"):
            return Cond(left, self.formula())
        return left

    def _imp(self) -> Formula:
        left = self._or()
        if self.accept("->"):
            return Imp(left, self._imp())
        return left

    def _or(self) -> Formula:
        f = self._and()
        while self.accept("|"):
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._unary()
        while self.accept("&"):
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        tok = self.peek
        if self.accept("~"):
            return Neg(self._unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")", also=("&", "|", "->", "=>"))
            return f
        if tok.kind == "ident":
            self.next()
            if tok.text == "true":
                return VERUM
            if tok.text == "false":
                return FALSUM
            if not ATOM_RE.match(tok.text):
                raise ParseError(f"bad atom name {tok.text!r}", tok.offset, {"atom"})
            return Atom(tok.text)
        raise self.fail(_FORMULA_START)


def _describe(tok: Token) -> str:
    if tok.kind == "eof":
        return "end of input"
    return repr(tok.text)


def parse(text: str) -> Formula:
    """Parse a formula; raises :class:`ParseError` on bad input."""
    ts = TokenStream(text)
    f = ts.formula()
    if ts.peek.kind != "eof":
        raise ts.fail({"&", "|", "->", "=>", "end of input"})
    return f


# ---------------------------------------------------------------------------
# printer

_LEVEL = {Cond: 1, Imp: 2, Or: 3, And: 4, Neg: 5}
_OP = {Cond: "=>", Imp: "->", Or: "|", And: "&"}
_RIGHT_ASSOC = (Cond, Imp)


def _level(f: Formula) -> int:
    return _LEVEL.get(type(f), 6)


def render(f: Formula) -> str:
    """Minimal-parenthesis concrete syntax; ``parse(render(f)) == f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Verum):
        return "true"
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, Neg):
        return "~" + _wrap(f.sub, 5)
    lvl = _LEVEL[type(f)]
    if isinstance(f, _RIGHT_ASSOC):
        left, right = _wrap(f.left, lvl + 1), _wrap(f.right, lvl)
    else:
        left, right = _wrap(f.left, lvl), _wrap(f.right, lvl + 1)
    return f"{left} {_OP[type(f)]} {right}"


def _wrap(f: Formula, min_level: int) -> str:
    s = render(f)
    return s if _level(f) >= min_level else f"({s})"
