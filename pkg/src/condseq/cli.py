"""Command-line front end.

    condseq prove --system ck+id "a => a"
    condseq prove --system ck "a => a" --countermodel
    condseq prove --system ck+mp "true => (b & ~(true => b)) |-"
    condseq bench corpus/

Exit codes: 0 proved, 1 not proved, 2 parse or usage error, 3 resource
limit hit.  ``bench`` exits 0 iff every case matches its expectation.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from condseq.calculus import BoundedSequent, System, parse_any, proof_to_json, render_proof
from condseq.formula import Formula, ParseError, parse
from condseq.search import NotProved, Proved, ResourceExceeded, SearchConfig, prove, root_sequent
from condseq.semantics import find_countermodel, render_countermodel
from condseq.sequent import Sequent

EXIT_PROVED, EXIT_NOT_PROVED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

GRAMMAR = """\
formula  ::= ~F | F & F | F | F | F -> F | F => F | true | false | atom | (F)
             binding tightest to loosest: ~ & | -> =>; -> and => group to the right
atom     ::= [a-z][a-zA-Z0-9_]*
sequent  ::= items |- items          items: comma separated, possibly empty
item     ::= xN: F | xN -[F]-> xM | F   (an unlabelled F sits at x0)
bounded  ::= {items} ; {items} ; sequent   (K, then Psi; MP systems only)"""


@dataclass(frozen=True)
class RunRequest:
    system: System
    goal: Union[Formula, Sequent]
    output_format: str = "text"
    want_countermodel: bool = False
    max_worlds: int = 2
    depth_limit: int = 10000

    def __post_init__(self):
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if not 1 <= self.max_worlds <= 2:
            raise ValueError("max_worlds must be 1 or 2")
        if self.depth_limit < 1:
            raise ValueError("depth_limit must be positive")

    @property
    def sequent(self) -> Sequent:
        return self.goal if isinstance(self.goal, Sequent) else root_sequent(self.goal)


def parse_goal(text: str) -> Union[Formula, Sequent]:
    """A formula, or a (bounded) sequent when the text contains ``|-``."""
    if "|-" in text or text.lstrip().startswith("{"):
        return parse_any(text)
    return parse(text)


# ---------------------------------------------------------------------------
# bench


@dataclass(frozen=True)
class BenchCase:
    name: str
    expected: Optional[str]  # "valid" | "invalid"; None if the header is unreadable
    actual: str  # "valid" | "invalid" | "resource" | "error"
    seconds: float
    error: str = ""

    @property
    def passed(self) -> bool:
        return self.expected is not None and self.expected == self.actual


@dataclass
class BenchReport:
    cases: list[BenchCase] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.cases)

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def render(self) -> str:
        lines = []
        for c in self.cases:
            mark = "ok  " if c.passed else "FAIL"
            extra = f"  ({c.error})" if c.error else ""
            lines.append(f"{mark} {c.name}: expected {c.expected}, got {c.actual} [{c.seconds:.3f}s]{extra}")
        lines.append(f"{self.passed} passed, {self.failed} failed")
        return "\n".join(lines)


class CorpusError(ValueError):
    pass


def read_case(path: Path) -> tuple[str, System, Sequent]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if len(lines) < 3:
        raise CorpusError("need an expect line, a system line and a goal")
    expect = _header(lines[0], "expect")
    if expect not in ("valid", "invalid"):
        raise CorpusError(f"bad expectation {expect!r}")
    try:
        system = System.parse(_header(lines[1], "system"))
    except ValueError as exc:
        raise CorpusError(str(exc)) from None
    goal = parse_goal("\n".join(lines[2:]))
    return expect, system, goal if isinstance(goal, Sequent) else root_sequent(goal)


def _header(line: str, key: str) -> str:
    head, sep, value = line.partition(":")
    if not sep or head.lstrip("#").strip() != key or not line.startswith("#"):
        raise CorpusError(f"expected '# {key}: ...', got {line!r}")
    return value.strip()


def run_bench(directory: Union[str, Path], depth_limit: int = 10000) -> BenchReport:
    """Run every ``*.seq`` file in ``directory`` (sorted by name)."""
    report = BenchReport()
    cfg = SearchConfig(depth_limit=depth_limit, collect_proof=False)
    for path in sorted(Path(directory).glob("*.seq")):
        expected = None
        start = time.perf_counter()
        try:
            expected = _header(path.read_text(encoding="utf-8").partition("\n")[0], "expect")
            expected, system, goal = read_case(path)
            result = prove(goal, system, cfg)
        except (CorpusError, ValueError, TypeError, OSError) as exc:
            if expected not in ("valid", "invalid"):
                expected = None
            report.cases.append(BenchCase(path.name, expected, "error", time.perf_counter() - start, str(exc)))
            continue
        actual = {Proved: "valid", NotProved: "invalid", ResourceExceeded: "resource"}[type(result)]
        report.cases.append(BenchCase(path.name, expected, actual, time.perf_counter() - start))
    return report


# ---------------------------------------------------------------------------
# prove


def execute(req: RunRequest, out=sys.stdout) -> int:
    goal = req.sequent
    if not req.system.has_mp and isinstance(goal, BoundedSequent):
        raise ValueError(f"bounded sequents need an MP system, not {req.system.value}")
    result = prove(goal, req.system, SearchConfig(depth_limit=req.depth_limit))
    if isinstance(result, ResourceExceeded):
        print(f"resource limit: branch depth {result.depth} exceeds {req.depth_limit}", file=out)
        return EXIT_RESOURCE
    if isinstance(result, Proved):
        if req.output_format == "json":
            print(proof_to_json(result.proof), file=out)
        else:
            print(f"proved in {req.system.value}", file=out)
            print(render_proof(result.proof), file=out)
        return EXIT_PROVED
    print("null" if req.output_format == "json" else f"not proved in {req.system.value}", file=out)
    if req.want_countermodel:
        cm = find_countermodel(goal, req.system, req.max_worlds)
        if cm is None:
            print(f"no countermodel within {req.max_worlds} worlds", file=out)
        else:
            print(render_countermodel(cm), file=out)
    return EXIT_NOT_PROVED


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n\n{GRAMMAR}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="condseq", description="Decide CK, CK+ID, CK+MP and CK+MP+ID.",
                     epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prove", help="search for a proof of a formula or sequent")
    p.add_argument("goal", nargs="?", help="formula, or sequent if it contains |-")
    p.add_argument("--system", choices=[s.value for s in System])
    p.add_argument("--file", type=Path, help="read the goal from a file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--countermodel", action="store_true")
    p.add_argument("--max-worlds", type=int, choices=(1, 2), default=2)
    p.add_argument("--depth-limit", type=int, default=10000)
    p.add_argument("--bench", type=Path, metavar="DIR", help="run a corpus directory instead")

    b = sub.add_parser("bench", help="run a corpus of .seq files")
    b.add_argument("dir", type=Path)
    b.add_argument("--depth-limit", type=int, default=10000)
    return parser


def _usage(message: str, err) -> int:
    print(f"condseq: {message}\n\n{GRAMMAR}", file=err)
    return EXIT_USAGE


def _bench(directory: Path, depth_limit: int, out, err) -> int:
    if not directory.is_dir():
        return _usage(f"not a directory: {directory}", err)
    report = run_bench(directory, depth_limit)
    print(report.render(), file=out)
    return 0 if report.ok else 1


def run(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.depth_limit < 1:
        return _usage("--depth-limit must be positive", err)
    if args.command == "bench":
        return _bench(args.dir, args.depth_limit, out, err)
    if args.bench is not None:
        return _bench(args.bench, args.depth_limit, out, err)

    if args.system is None:
        return _usage("--system is required", err)
    if (args.goal is None) == (args.file is None):
        return _usage("give exactly one of a goal or --file", err)
    try:
        text = args.goal if args.file is None else args.file.read_text(encoding="utf-8")
        req = RunRequest(System.parse(args.system), parse_goal(text), args.format,
                         args.countermodel, args.max_worlds, args.depth_limit)
        return execute(req, out)
    except ParseError as exc:
        return _usage(f"parse error: {exc}", err)
    except (ValueError, TypeError, OSError) as exc:
        return _usage(str(exc), err)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
