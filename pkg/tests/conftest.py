import random

from hypothesis import strategies as st

from condseq.calculus import ProofNode, System, check_proof, proof_from_json, proof_to_json
from condseq.formula import FALSUM, VERUM, And, Atom, Cond, Imp, Neg, Or
from condseq.search import Proved, SearchConfig, decide, prove

ATOMS = ("a", "b", "c")


def formulas(atoms=ATOMS, max_leaves=12):
    leaves = st.one_of(st.sampled_from([Atom(a) for a in atoms]), st.sampled_from([VERUM, FALSUM]))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(Neg, sub),
            *(st.builds(op, sub, sub) for op in (And, Or, Imp, Cond)),
        ),
        max_leaves=max_leaves,
    )


def kernel_ok(proof: ProofNode, system: System) -> None:
    """The proof checks, and so does its JSON round trip."""
    res = check_proof(proof, system)
    assert res, res.message
    again = proof_from_json(proof_to_json(proof))
    assert proof_to_json(again) == proof_to_json(proof)
    res = check_proof(again, system)
    assert res, res.message


def decide_checked(goal, system, cfg=None):
    r = decide(goal, system, cfg)
    if isinstance(r, Proved) and r.proof is not None:
        kernel_ok(r.proof, system)
    return r


def prove_checked(s, system, cfg=None):
    r = prove(s, system, cfg)
    if isinstance(r, Proved) and r.proof is not None:
        kernel_ok(r.proof, system)
    return r


def proved(goal, system, cfg=None) -> bool:
    return isinstance(decide_checked(goal, system, cfg), Proved)


def rng(seed=0):
    return random.Random(seed)


def measure_violations(proof: ProofNode) -> list[str]:
    """Complexity must drop from every node to each premise; depth is bounded by the root's."""
    bad = []
    for node in proof.nodes():
        for q in node.premises:
            if q.conclusion.complexity() >= node.conclusion.complexity():
                bad.append(f"{node.rule.value}: {node.conclusion} -> {q.conclusion}")
    if proof.height() - 1 > proof.conclusion.complexity():
        bad.append(f"height {proof.height()} exceeds root complexity")
    return bad


def bookkeeping_violations(proof: ProofNode) -> list[str]:
    """Along each branch K only grows and a conditional enters Psi at most once (EQ starts afresh)."""
    bad = []

    def walk(node, entered):
        for q in node.premises:
            if node.rule.value == "EQ":
                walk(q, frozenset())
                continue
            if not node.conclusion.k <= q.conclusion.k:
                bad.append(f"K shrank at {node.rule.value}")
            new = q.conclusion.psi - node.conclusion.psi
            if new & entered:
                bad.append(f"re-entered Psi at {node.rule.value}: {set(new & entered)}")
            walk(q, entered | new)

    walk(proof, frozenset(proof.conclusion.psi))
    return bad
