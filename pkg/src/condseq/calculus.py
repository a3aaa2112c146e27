"""Rules of the labelled calculi, proof objects and an independent checker.

Every rule is a pure premise generator: given a conclusion and the
instantiation data (principal item, labels) it returns the premises, or
raises :class:`RuleError` when the instance is not legal.  The search
engine and :func:`check_proof` both go through these functions.

Systems with MP use bounded sequents ``K | Psi | Gamma |- Delta``:
K records the conditionals already duplicated on the branch and Psi the
duplicates still waiting to be used.  Their text form is
``{K items} ; {Psi items} ; Gamma |- Delta``.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Union

from condseq.formula import (
    And, Cond, Falsum, Imp, Neg, Or, ParseError, TokenStream, Verum,
)
from condseq.sequent import (
    Item, Label, LabelledFormula, Sequent, Transition, fresh_label, item_labels,
    label_name, parse_item_from, parse_items_from, parse_label, parse_sequent_from,
    remove_one, render_sequent,
)


class System(enum.Enum):
    CK = "ck"
    CK_ID = "ck+id"
    CK_MP = "ck+mp"
    CK_MP_ID = "ck+mp+id"

    @property
    def has_id(self) -> bool:
        return self in (System.CK_ID, System.CK_MP_ID)

    @property
    def has_mp(self) -> bool:
        return self in (System.CK_MP, System.CK_MP_ID)

    @classmethod
    def parse(cls, name: str) -> "System":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown system {name!r}; use one of {[s.value for s in cls]}") from None


class RuleId(enum.Enum):
    AX = "AX"
    A_FALSUM = "A_FALSUM"
    A_VERUM = "A_VERUM"
    IMP_L = "IMP_L"
    IMP_R = "IMP_R"
    AND_L = "AND_L"
    AND_R = "AND_R"
    OR_L = "OR_L"
    OR_R = "OR_R"
    NEG_L = "NEG_L"
    NEG_R = "NEG_R"
    COND_L = "COND_L"
    COND_R = "COND_R"
    EQ = "EQ"
    ID = "ID"
    MP = "MP"
    COND_L1 = "COND_L1"
    COND_L2 = "COND_L2"
    COND_L3 = "COND_L3"


AXIOMS = frozenset({RuleId.AX, RuleId.A_FALSUM, RuleId.A_VERUM})
BOUNDED_COND_L = frozenset({RuleId.COND_L1, RuleId.COND_L2, RuleId.COND_L3})

# (connective, side) -> rule; side is "L" (antecedent) or "R" (consequent)
_PROP_RULES = {
    (Imp, "L"): RuleId.IMP_L, (Imp, "R"): RuleId.IMP_R,
    (And, "L"): RuleId.AND_L, (And, "R"): RuleId.AND_R,
    (Or, "L"): RuleId.OR_L, (Or, "R"): RuleId.OR_R,
    (Neg, "L"): RuleId.NEG_L, (Neg, "R"): RuleId.NEG_R,
}
PROPOSITIONAL = frozenset(_PROP_RULES.values())
_PROP_SIDE = {rule: side for (_, side), rule in _PROP_RULES.items()}


class RuleError(ValueError):
    """A rule was applied outside its preconditions."""


def is_conditional(item) -> bool:
    return isinstance(item, LabelledFormula) and isinstance(item.formula, Cond)


@dataclass(frozen=True, eq=False)
class BoundedSequent(Sequent):
    k: frozenset = field(default=frozenset())
    psi: frozenset = field(default=frozenset())

    def __post_init__(self):
        if not self.psi <= self.k:
            raise ValueError("Psi must be a subset of K")
        if not all(is_conditional(f) for f in self.k):
            raise ValueError("K and Psi may only hold labelled conditionals")

    @cached_property
    def _bounded_key(self):
        return (self.k, self.psi, self._multisets)

    def __eq__(self, other):
        if not isinstance(other, BoundedSequent):
            return NotImplemented if not isinstance(other, Sequent) else False
        return self._bounded_key == other._bounded_key

    def __hash__(self):
        return hash(self._bounded_key)

    def __str__(self):
        return render_any(self)

    def labels(self) -> set[Label]:
        out = super().labels()
        for f in self.k | self.psi:
            out.add(f.label)
        return out

    @property
    def sequent(self) -> Sequent:
        return Sequent(self.antecedent, self.consequent)

    @classmethod
    def wrap(cls, s: Sequent) -> "BoundedSequent":
        return cls(s.antecedent, s.consequent)


AnySequent = Union[Sequent, BoundedSequent]
Principal = Union[Item, tuple[Transition, Transition], None]


@dataclass(frozen=True)
class ProofNode:
    rule: RuleId
    conclusion: AnySequent
    principal: Principal = None
    used_labels: tuple[Label, ...] = ()
    premises: tuple["ProofNode", ...] = ()

    def nodes(self) -> Iterator["ProofNode"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def rules(self) -> list[RuleId]:
        return [n.rule for n in self.nodes()]


# ---------------------------------------------------------------------------
# axioms


def axiom_applies(s: Sequent, rule: RuleId) -> bool:
    if rule is RuleId.AX:
        right = set(s.consequent)
        return any(item in right for item in s.antecedent)
    if rule is RuleId.A_FALSUM:
        return any(isinstance(i, LabelledFormula) and isinstance(i.formula, Falsum) for i in s.antecedent)
    if rule is RuleId.A_VERUM:
        return any(isinstance(i, LabelledFormula) and isinstance(i.formula, Verum) for i in s.consequent)
    return False


def axiom_check(s: Sequent) -> Optional[RuleId]:
    """The first applicable axiom among AX, A_FALSUM, A_VERUM, else None."""
    for rule in (RuleId.AX, RuleId.A_FALSUM, RuleId.A_VERUM):
        if axiom_applies(s, rule):
            return rule
    return None


# ---------------------------------------------------------------------------
# premise generators


def _with(s: AnySequent, antecedent, consequent, **bounded) -> AnySequent:
    return dataclasses.replace(s, antecedent=tuple(antecedent), consequent=tuple(consequent), **bounded)


def _take(items, item, where: str):
    try:
        return remove_one(items, item)
    except KeyError:
        raise RuleError(f"{item} does not occur in the {where}") from None


def _check_cond(principal, rule: str):
    if not is_conditional(principal):
        raise RuleError(f"{rule}: principal must be a labelled conditional, got {principal}")


def apply_cond_r(s: AnySequent, principal: LabelledFormula, y: Optional[Label] = None) -> AnySequent:
    _check_cond(principal, "COND_R")
    cons = _take(s.consequent, principal, "consequent")
    if y is None:
        y = fresh_label(s)
    elif y in s.labels():
        raise RuleError(f"COND_R: label {label_name(y)} is not fresh")
    f = principal.formula
    return _with(s, s.antecedent + (Transition(principal.label, f.left, y),), cons + (LabelledFormula(y, f.right),))


def _cond_l_premises(s, gamma, principal: LabelledFormula, y: Label, **bounded):
    if y not in s.labels():
        raise RuleError(f"target {label_name(y)} does not occur in the sequent")
    f = principal.formula
    first = _with(s, gamma, s.consequent + (Transition(principal.label, f.left, y),), **bounded)
    second = _with(s, gamma + (LabelledFormula(y, f.right),), s.consequent, **bounded)
    return first, second


def apply_cond_l(s: AnySequent, principal: LabelledFormula, y: Label) -> tuple[AnySequent, AnySequent]:
    _check_cond(principal, "COND_L")
    gamma = _take(s.antecedent, principal, "antecedent")
    return _cond_l_premises(s, gamma, principal, y)


def apply_cond_l1(s: BoundedSequent, principal: LabelledFormula, y: Label):
    _check_cond(principal, "COND_L1")
    if principal in s.k:
        raise RuleError("COND_L1: principal already duplicated on this branch (use COND_L2)")
    gamma = _take(s.antecedent, principal, "antecedent")
    return _cond_l_premises(s, gamma, principal, y, k=s.k | {principal}, psi=s.psi | {principal})


def apply_cond_l2(s: BoundedSequent, principal: LabelledFormula, y: Label):
    _check_cond(principal, "COND_L2")
    if principal not in s.k:
        raise RuleError("COND_L2: principal was never duplicated (use COND_L1)")
    gamma = _take(s.antecedent, principal, "antecedent")
    return _cond_l_premises(s, gamma, principal, y)


def apply_cond_l3(s: BoundedSequent, principal: LabelledFormula, y: Label):
    _check_cond(principal, "COND_L3")
    if principal not in s.psi:
        raise RuleError("COND_L3: principal is not a pending duplicate")
    return _cond_l_premises(s, s.antecedent, principal, y, psi=s.psi - {principal})


def apply_eq(s: AnySequent, left: Transition, right: Transition, u: Optional[Label] = None):
    if not (isinstance(left, Transition) and isinstance(right, Transition)):
        raise RuleError("EQ acts on two transitions")
    if (left.src, left.dst) != (right.src, right.dst):
        raise RuleError("EQ: transitions must share both endpoints")
    _take(s.antecedent, left, "antecedent")
    _take(s.consequent, right, "consequent")
    if u is None:
        u = fresh_label(s)
    elif u in s.labels():
        raise RuleError(f"EQ: label {label_name(u)} is not fresh")
    a, b = LabelledFormula(u, left.formula), LabelledFormula(u, right.formula)
    if isinstance(s, BoundedSequent):
        return BoundedSequent((a,), (b,)), BoundedSequent((b,), (a,))
    return Sequent((a,), (b,)), Sequent((b,), (a,))


def apply_id(s: AnySequent, principal: Transition) -> AnySequent:
    if not isinstance(principal, Transition):
        raise RuleError("ID acts on a transition")
    gamma = _take(s.antecedent, principal, "antecedent")
    return _with(s, gamma + (LabelledFormula(principal.dst, principal.formula),), s.consequent)


def apply_mp(s: AnySequent, principal: Transition) -> AnySequent:
    if not isinstance(principal, Transition) or principal.src != principal.dst:
        raise RuleError("MP acts on a self-transition x -[A]-> x")
    delta = _take(s.consequent, principal, "consequent")
    return _with(s, s.antecedent, delta + (LabelledFormula(principal.src, principal.formula),))


def propositional_rule(principal, side: str) -> Optional[RuleId]:
    """Rule id for decomposing ``principal`` on ``side`` ("L" or "R"), if boolean."""
    if not isinstance(principal, LabelledFormula):
        return None
    return _PROP_RULES.get((type(principal.formula), side))


def apply_propositional(s: AnySequent, principal: LabelledFormula, side: str) -> tuple[AnySequent, ...]:
    side = {"antecedent": "L", "consequent": "R"}.get(side, side)
    rule = propositional_rule(principal, side)
    if rule is None:
        raise RuleError(f"no boolean rule for {principal} on side {side}")
    x, f = principal.label, principal.formula
    at = lambda g: LabelledFormula(x, g)  # noqa: E731
    if side == "L":
        gamma, delta = _take(s.antecedent, principal, "antecedent"), s.consequent
        if rule is RuleId.AND_L:
            return (_with(s, gamma + (at(f.left), at(f.right)), delta),)
        if rule is RuleId.OR_L:
            return _with(s, gamma + (at(f.left),), delta), _with(s, gamma + (at(f.right),), delta)
        if rule is RuleId.IMP_L:
            return _with(s, gamma, delta + (at(f.left),)), _with(s, gamma + (at(f.right),), delta)
        return (_with(s, gamma, delta + (at(f.sub),)),)  # NEG_L
    gamma, delta = s.antecedent, _take(s.consequent, principal, "consequent")
    if rule is RuleId.AND_R:
        return _with(s, gamma, delta + (at(f.left),)), _with(s, gamma, delta + (at(f.right),))
    if rule is RuleId.OR_R:
        return (_with(s, gamma, delta + (at(f.left), at(f.right))),)
    if rule is RuleId.IMP_R:
        return (_with(s, gamma + (at(f.left),), delta + (at(f.right),)),)
    return (_with(s, gamma + (at(f.sub),), delta),)  # NEG_R


def expand(rule: RuleId, s: AnySequent, principal: Principal, used_labels=()) -> tuple[AnySequent, ...]:
    """Premises of ``rule`` instantiated on ``s``; RuleError when not applicable."""
    if rule in AXIOMS or rule in PROPOSITIONAL or rule in (RuleId.ID, RuleId.MP):
        if used_labels:
            raise RuleError(f"{rule.value} takes no labels")
    if rule in AXIOMS:
        if not axiom_applies(s, rule):
            raise RuleError(f"{rule.value} does not close {render_any(s)}")
        return ()
    if rule in PROPOSITIONAL:
        if propositional_rule(principal, _PROP_SIDE[rule]) is not rule:
            raise RuleError(f"{rule.value} does not match principal {principal}")
        return apply_propositional(s, principal, _PROP_SIDE[rule])
    if rule is RuleId.ID:
        return (apply_id(s, principal),)
    if rule is RuleId.MP:
        return (apply_mp(s, principal),)
    if len(used_labels) != 1:
        raise RuleError(f"{rule.value} needs exactly one label")
    (y,) = used_labels
    if rule is RuleId.COND_R:
        return (apply_cond_r(s, principal, y),)
    if rule is RuleId.EQ:
        if not (isinstance(principal, tuple) and len(principal) == 2):
            raise RuleError("EQ principal must be a (left, right) transition pair")
        return apply_eq(s, principal[0], principal[1], y)
    if rule in BOUNDED_COND_L and not isinstance(s, BoundedSequent):
        raise RuleError(f"{rule.value} needs a bounded sequent")
    generator = {
        RuleId.COND_L: apply_cond_l,
        RuleId.COND_L1: apply_cond_l1,
        RuleId.COND_L2: apply_cond_l2,
        RuleId.COND_L3: apply_cond_l3,
    }[rule]
    return generator(s, principal, y)


# ---------------------------------------------------------------------------
# checker


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    path: tuple[int, ...] = ()  # premise indices from the root to the failing node
    message: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "proof ok"
        where = "root" if not self.path else "root/" + "/".join(map(str, self.path))
        return f"invalid proof at {where}: {self.message}"


def _gate(rule: RuleId, system: System) -> Optional[str]:
    if rule is RuleId.ID and not system.has_id:
        return f"ID is not a rule of {system.value}"
    if rule is RuleId.MP and not system.has_mp:
        return f"MP is not a rule of {system.value}"
    if rule in BOUNDED_COND_L and not system.has_mp:
        return f"{rule.value} only belongs to MP systems"
    if rule is RuleId.COND_L and system.has_mp:
        return "COND_L is replaced by COND_L1/2/3 in MP systems"
    return None


def check_proof(p: ProofNode, system: System) -> CheckResult:
    """Re-derive every node from its conclusion and instantiation data."""
    stack = [(p, ())]
    while stack:
        node, path = stack.pop()
        bounded = isinstance(node.conclusion, BoundedSequent)
        if bounded != system.has_mp:
            want = "bounded" if system.has_mp else "plain"
            return CheckResult(False, path, f"{system.value} proofs use {want} sequents")
        problem = _gate(node.rule, system)
        if problem:
            return CheckResult(False, path, problem)
        try:
            expected = expand(node.rule, node.conclusion, node.principal, node.used_labels)
        except (RuleError, ValueError) as exc:
            return CheckResult(False, path, str(exc))
        got = tuple(q.conclusion for q in node.premises)
        if len(got) != len(expected) or any(a != b for a, b in zip(got, expected)):
            return CheckResult(False, path, f"{node.rule.value} premises do not match the rule instance")
        for i, q in enumerate(node.premises):
            stack.append((q, path + (i,)))
    return CheckResult(True)


# ---------------------------------------------------------------------------
# text and JSON forms


def render_any(s: AnySequent) -> str:
    if isinstance(s, BoundedSequent):
        k = ", ".join(sorted(map(str, s.k)))
        psi = ", ".join(sorted(map(str, s.psi)))
        return f"{{{k}}} ; {{{psi}}} ; {render_sequent(s)}".rstrip()
    return render_sequent(s)


def parse_any(text: str) -> AnySequent:
    """Parse a plain sequent, or a bounded one when it starts with ``{``."""
    ts = TokenStream(text)
    if ts.peek.kind != "{":
        return parse_sequent_from(ts)
    sets = []
    for _ in range(2):
        ts.expect("{")
        items = parse_items_from(ts, {"}"})
        ts.expect("}")
        ts.expect(";")
        sets.append(frozenset(items))
    s = parse_sequent_from(ts)
    return BoundedSequent(s.antecedent, s.consequent, k=sets[0], psi=sets[1])


def _render_principal(principal: Principal) -> Optional[str]:
    if principal is None:
        return None
    if isinstance(principal, tuple):
        return render_sequent(Sequent((principal[0],), (principal[1],)))
    return str(principal)


def _parse_principal(text: Optional[str], rule: RuleId) -> Principal:
    if text is None:
        return None
    ts = TokenStream(text)
    if rule is RuleId.EQ:
        s = parse_sequent_from(ts)
        if len(s.antecedent) != 1 or len(s.consequent) != 1:
            raise ParseError("EQ principal needs one transition per side", 0)
        return (s.antecedent[0], s.consequent[0])
    item = parse_item_from(ts)
    ts.expect("eof")
    return item


def proof_to_dict(p: ProofNode) -> dict:
    return {
        "rule": p.rule.value,
        "sequent": render_any(p.conclusion),
        "principal": _render_principal(p.principal),
        "labels": [label_name(x) for x in p.used_labels],
        "premises": [proof_to_dict(q) for q in p.premises],
    }


def proof_from_dict(d: dict) -> ProofNode:
    rule = RuleId(d["rule"])
    return ProofNode(
        rule=rule,
        conclusion=parse_any(d["sequent"]),
        principal=_parse_principal(d["principal"], rule),
        used_labels=tuple(parse_label(x) for x in d["labels"]),
        premises=tuple(proof_from_dict(q) for q in d["premises"]),
    )


def proof_to_json(p: ProofNode, indent: Optional[int] = 2) -> str:
    return json.dumps(proof_to_dict(p), indent=indent, ensure_ascii=False)


def proof_from_json(text: str) -> ProofNode:
    return proof_from_dict(json.loads(text))


def render_proof(p: ProofNode, depth: int = 0) -> str:
    """One node per line, indented by depth: ``RULE: conclusion``."""
    lines = [f"{'  ' * depth}{p.rule.value}: {render_any(p.conclusion)}"]
    for q in p.premises:
        lines.append(render_proof(q, depth + 1))
    return "\n".join(lines)


def rule_counts(p: ProofNode) -> Counter:
    return Counter(p.rules())


__all__ = [
    "AXIOMS", "BoundedSequent", "CheckResult", "ProofNode", "RuleError", "RuleId", "System",
    "apply_cond_l", "apply_cond_l1", "apply_cond_l2", "apply_cond_l3", "apply_cond_r",
    "apply_eq", "apply_id", "apply_mp", "apply_propositional", "axiom_applies", "axiom_check",
    "check_proof", "expand", "item_labels", "parse_any", "proof_from_dict", "proof_from_json",
    "proof_to_dict", "proof_to_json", "propositional_rule", "render_any", "render_proof",
]
