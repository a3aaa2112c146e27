"""Cross-check the prover against the finite-model oracle on random formulas.

    python scripts/oracle_sweep.py --count 500 --max-size 13 --seed 1

For every formula and system: a proof must check, a proof and a
countermodel must never coexist, and (unless --no-targets) restricting
COND_L targets must not change the verdict.  Verdicts with no proof and
no small countermodel are listed; they are not errors.
"""

from __future__ import annotations

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from condseq.calculus import System, check_proof
from condseq.formula import render
from condseq.generate import random_formula
from condseq.search import Proved, SearchConfig, decide, root_sequent
from condseq.semantics import find_countermodel


@dataclass(frozen=True)
class SweepConfig:
    count: int = 200
    max_size: int = 9
    atoms: tuple = ("a", "b")
    seed: int = 0
    compare_targets: bool = True
    slow_seconds: float = 2.0


def sweep(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    tally: Counter = Counter()
    errors = 0
    start = time.perf_counter()
    for _ in range(cfg.count):
        f = random_formula(rng, cfg.max_size, cfg.atoms)
        for system in System:
            t = time.perf_counter()
            r = decide(f, system, SearchConfig(check_invariants=True))
            dt = time.perf_counter() - t
            if dt > cfg.slow_seconds:
                print(f"slow   {system.value:9} {dt:6.2f}s  {render(f)}")
            cm = find_countermodel(root_sequent(f), system, 2)
            proved = isinstance(r, Proved)
            tally[system.value, "proved" if proved else "refuted" if cm else "open"] += 1
            if proved and not check_proof(r.proof, system):
                print(f"BADPROOF {system.value:9} {render(f)}")
                errors += 1
            if proved and cm is not None:
                print(f"UNSOUND  {system.value:9} {render(f)}")
                errors += 1
            if not proved and cm is None:
                print(f"open   {system.value:9} {render(f)}")
            if cfg.compare_targets:
                full = decide(f, system, SearchConfig(full_targets=True, collect_proof=False))
                if type(full) is not type(r):
                    print(f"TARGETS  {system.value:9} {render(f)}: {type(r).__name__} vs {type(full).__name__}")
                    errors += 1
    print(f"{cfg.count} formulas in {time.perf_counter() - start:.1f}s")
    for (system, verdict), n in sorted(tally.items()):
        print(f"  {system:9} {verdict:8} {n}")
    print(f"errors: {errors}")
    return errors


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-size", type=int, default=9)
    ap.add_argument("--atoms", default="a,b")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-targets", action="store_true", help="skip the all-labels comparison")
    args = ap.parse_args()
    cfg = SweepConfig(args.count, args.max_size, tuple(args.atoms.split(",")), args.seed, not args.no_targets)
    raise SystemExit(1 if sweep(cfg) else 0)


if __name__ == "__main__":
    main()
