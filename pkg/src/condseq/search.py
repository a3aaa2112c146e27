"""Backward proof search for CK, CK+ID, CK+MP and CK+MP+ID.

CK and CK+ID are searched contraction-free: every rule consumes its
principal item, so the sum of item complexities drops at each step and
every branch is finite.  The MP systems run on bounded sequents, where a
conditional may be duplicated once per branch through COND_L1/COND_L3.

Strategy per sequent: close by an axiom; otherwise apply the invertible
one-premise boolean rules, then the branching boolean rules, then COND_R
(all without backtracking).  Only then are the non-invertible choices
tried with backtracking: EQ pairs, COND_L instances over candidate target
labels, and ID.  Results are memoised per sequent within one session.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional, Union

from condseq.calculus import (
    BoundedSequent, ProofNode, RuleId, System, apply_cond_l, apply_cond_l1, apply_cond_l2,
    apply_cond_l3, apply_cond_r, apply_eq, apply_id, apply_mp, apply_propositional,
    axiom_check, is_conditional, propositional_rule,
)
from condseq.formula import Cond, Formula
from condseq.sequent import Label, LabelledFormula, Sequent, Transition, is_regular, labels_of


@dataclass(frozen=True)
class SearchConfig:
    depth_limit: int = 10000  # rule applications per branch; a safety net only
    collect_proof: bool = True
    allow_self_target: Optional[bool] = None  # None: follow the system's MP flag
    disabled_rules: frozenset = field(default=frozenset())  # diagnostics
    full_targets: bool = False  # COND_L over every label instead of transition successors
    check_invariants: bool = False

    def __post_init__(self):
        if self.depth_limit < 1:
            raise ValueError("depth_limit must be at least 1")


@dataclass(frozen=True)
class Proved:
    proof: Optional[ProofNode]


@dataclass(frozen=True)
class NotProved:
    pass


@dataclass(frozen=True)
class ResourceExceeded:
    depth: int


ProveResult = Union[Proved, NotProved, ResourceExceeded]


class _LimitHit(Exception):
    def __init__(self, depth: int):
        self.depth = depth


def cond_l_targets(s: Sequent, principal: LabelledFormula, system: System,
                   cfg: Optional[SearchConfig] = None) -> list[Label]:
    """Candidate labels y for decomposing ``principal`` = x: A => B on the left.

    Successors of x through antecedent transitions, in label order, then x
    itself when self targets are allowed (MP systems).
    """
    cfg = cfg or SearchConfig()
    x = principal.label
    if cfg.full_targets:
        return sorted(labels_of(s))
    targets = sorted({t.dst for t in s.antecedent if isinstance(t, Transition) and t.src == x})
    self_target = system.has_mp if cfg.allow_self_target is None else cfg.allow_self_target
    if self_target and x not in targets:
        targets.append(x)
    return targets


class _Session:
    def __init__(self, system: System, cfg: SearchConfig):
        self.system = system
        self.cfg = cfg
        self.memo: dict = {}
        self.equiv: dict = {}

    def enabled(self, rule: RuleId) -> bool:
        return rule not in self.cfg.disabled_rules

    def prove(self, s: Sequent, depth: int) -> Optional[ProofNode]:
        if depth > self.cfg.depth_limit:
            raise _LimitHit(depth)
        try:
            return self.memo[s]
        except KeyError:
            pass
        if self.cfg.check_invariants:
            assert is_regular(s), f"irregular sequent reached: {s}"
        node = self._expand(s, depth)
        self.memo[s] = node
        return node

    def _all(self, rule, s, premises, depth, principal=None, labels=()) -> Optional[ProofNode]:
        proofs = []
        for q in premises:
            p = self.prove(q, depth + 1)
            if p is None:
                return None
            proofs.append(p)
        return ProofNode(rule, s, principal, tuple(labels), tuple(proofs))

    def _expand(self, s: Sequent, depth: int) -> Optional[ProofNode]:
        rule = axiom_check(s)
        if rule is not None:
            return ProofNode(rule, s)

        # invertible, one premise
        for side, items in (("L", s.antecedent), ("R", s.consequent)):
            for item in items:
                rule = propositional_rule(item, side)
                if rule in (RuleId.AND_L, RuleId.NEG_L, RuleId.OR_R, RuleId.NEG_R, RuleId.IMP_R):
                    return self._all(rule, s, apply_propositional(s, item, side), depth, item)
        if self.system.has_mp and self.enabled(RuleId.MP):
            loops = {t.src for t in s.antecedent if isinstance(t, Transition) and t.src == t.dst}
            for item in s.consequent:
                if isinstance(item, Transition) and item.src == item.dst and item.src not in loops:
                    return self._all(RuleId.MP, s, (apply_mp(s, item),), depth, item)

        # invertible, branching
        for side, items in (("L", s.antecedent), ("R", s.consequent)):
            for item in items:
                rule = propositional_rule(item, side)
                if rule in (RuleId.OR_L, RuleId.IMP_L, RuleId.AND_R):
                    return self._all(rule, s, apply_propositional(s, item, side), depth, item)

        for item in s.consequent:
            if is_conditional(item):
                premise = apply_cond_r(s, item)
                y = premise.consequent[-1].label
                return self._all(RuleId.COND_R, s, (premise,), depth, item, (y,))

        return self._choose(s, depth)

    def _choose(self, s: Sequent, depth: int) -> Optional[ProofNode]:
        """Backtracking over EQ, left conditional rules and ID."""
        left_trans = list(dict.fromkeys(t for t in s.antecedent if isinstance(t, Transition)))
        right_trans = list(dict.fromkeys(t for t in s.consequent if isinstance(t, Transition)))

        if self.enabled(RuleId.EQ):
            for t in left_trans:
                for r in right_trans:
                    if (t.src, t.dst) == (r.src, r.dst):
                        premises = apply_eq(s, t, r)
                        u = premises[0].antecedent[0].label
                        node = self._all(RuleId.EQ, s, premises, depth, (t, r), (u,))
                        if node is not None:
                            return node

        for rule, principal, generator in self._cond_left_choices(s):
            for y in cond_l_targets(s, principal, self.system, self.cfg):
                if not self.cfg.full_targets and self._redundant(s, principal, y):
                    continue
                first, second = generator(s, principal, y)
                if self.cfg.full_targets or y == principal.label:
                    node = self._all(rule, s, (first, second), depth, principal, (y,))
                else:
                    node = self._cond_left_closed(rule, s, principal, y, first, second, depth)
                if node is not None:
                    return node

        if self.system.has_id and self.enabled(RuleId.ID):
            for t in left_trans:
                if not self.cfg.full_targets and LabelledFormula(t.dst, t.formula) in s.antecedent:
                    continue  # the premise only duplicates an item
                node = self._all(RuleId.ID, s, (apply_id(s, t),), depth, t)
                if node is not None:
                    return node
        return None

    def _redundant(self, s: Sequent, principal: LabelledFormula, y: Label) -> bool:
        # A premise that only adds a copy of a non-conditional item already
        # on its side equals the conclusion up to contraction, which is
        # admissible for such items; the instance cannot help.
        x, f = principal.label, principal.formula
        gained = LabelledFormula(y, f.right)
        if gained in s.antecedent:
            return True
        return y == x and LabelledFormula(x, f.left) in s.consequent

    def _cond_left_closed(self, rule, s, principal, y, first, second, depth) -> Optional[ProofNode]:
        # For y != x the premise "Gamma |- x -[A]-> y, Delta" is either
        # derivable without the new transition (then this COND_L step is
        # not needed at all) or closes by AX/EQ against an antecedent
        # transition x -[F]-> y.  Only the second case is explored.
        goal = Transition(principal.label, principal.formula.left, y)
        left = self._close_transition(first, goal, depth + 1)
        if left is None:
            return None
        right = self.prove(second, depth + 1)
        if right is None:
            return None
        return ProofNode(rule, s, principal, (y,), (left, right))

    def _close_transition(self, s: Sequent, goal: Transition, depth: int) -> Optional[ProofNode]:
        if depth > self.cfg.depth_limit:
            raise _LimitHit(depth)
        if goal in s.antecedent:
            return ProofNode(RuleId.AX, s)
        if not self.enabled(RuleId.EQ):
            return None
        for t in dict.fromkeys(s.antecedent):
            if isinstance(t, Transition) and (t.src, t.dst) == (goal.src, goal.dst):
                if not self._equivalent(t.formula, goal.formula, depth):
                    continue
                premises = apply_eq(s, t, goal)
                u = premises[0].antecedent[0].label
                node = self._all(RuleId.EQ, s, premises, depth, (t, goal), (u,))
                if node is not None:
                    return node
        return None

    def _equivalent(self, a: Formula, b: Formula, depth: int) -> bool:
        """Both EQ premises provable, decided once per formula pair."""
        key = (a, b)
        if key not in self.equiv:
            cls = BoundedSequent if self.system.has_mp else Sequent
            pair = (cls((LabelledFormula(0, a),), (LabelledFormula(0, b),)),
                    cls((LabelledFormula(0, b),), (LabelledFormula(0, a),)))
            self.equiv[key] = all(self.prove(q, depth + 1) is not None for q in pair)
        return self.equiv[key]

    def _cond_left_choices(self, s: Sequent):
        conds = list(dict.fromkeys(f for f in s.antecedent if is_conditional(f)))
        if not isinstance(s, BoundedSequent):
            if self.enabled(RuleId.COND_L):
                for f in conds:
                    yield RuleId.COND_L, f, apply_cond_l
            return
        for f in conds:
            if f in s.k:
                if self.enabled(RuleId.COND_L2):
                    yield RuleId.COND_L2, f, apply_cond_l2
            elif self.enabled(RuleId.COND_L1):
                yield RuleId.COND_L1, f, apply_cond_l1
        if self.enabled(RuleId.COND_L3):
            for f in sorted(s.psi, key=str):
                yield RuleId.COND_L3, f, apply_cond_l3

    def run(self, s: Sequent) -> ProveResult:
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 50000))
        try:
            node = self.prove(s, 0)
        except _LimitHit as exc:
            return ResourceExceeded(exc.depth)
        finally:
            sys.setrecursionlimit(old)
        if node is None:
            return NotProved()
        return Proved(node if self.cfg.collect_proof else None)


def prove_sequent(s: Sequent, system: System, cfg: Optional[SearchConfig] = None) -> ProveResult:
    """Search a plain sequent in CK or CK+ID."""
    if system.has_mp:
        raise ValueError(f"{system.value} is searched with prove_bounded")
    if isinstance(s, BoundedSequent):
        raise TypeError("CK and CK+ID work on plain sequents")
    if not is_regular(s):
        raise ValueError(f"sequent is not regular: {s}")
    return _Session(system, cfg or SearchConfig()).run(s)


def prove_bounded(s: Union[Sequent, BoundedSequent], system: System,
                  cfg: Optional[SearchConfig] = None) -> ProveResult:
    """Search in CK+MP or CK+MP+ID; a plain sequent is wrapped with empty K and Psi."""
    if not system.has_mp:
        raise ValueError(f"{system.value} is searched with prove_sequent")
    if not isinstance(s, BoundedSequent):
        s = BoundedSequent.wrap(s)
    if not is_regular(s):
        raise ValueError(f"sequent is not regular: {s}")
    return _Session(system, cfg or SearchConfig()).run(s)


def prove(s: Sequent, system: System, cfg: Optional[SearchConfig] = None) -> ProveResult:
    """Dispatch on the system."""
    if system.has_mp:
        return prove_bounded(s, system, cfg)
    return prove_sequent(s, system, cfg)


def root_sequent(goal: Formula) -> Sequent:
    return Sequent((), (LabelledFormula(0, goal),))


def decide(goal: Formula, system: System, cfg: Optional[SearchConfig] = None) -> ProveResult:
    """Search ``|- x0: goal``."""
    return prove(root_sequent(goal), system, cfg)


def is_valid(goal: Formula, system: System) -> bool:
    return isinstance(decide(goal, system, SearchConfig(collect_proof=False)), Proved)
