"""Command-line interface.

Verdicts are data, not exit codes: a command that ran prints a final
machine-readable line ``RESULT: key=value ...`` and exits 0 even when the
answer is negative.  Exit code 2 flags a syntax error in an input file,
3 a semantic error (bad automaton, wrong acceptance kind, unknown
symbols), and 4 a resource cap.  All configuration is explicit flags, so
identical command lines reproduce identical RESULT lines.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from typing import Optional, Sequence

from .core import CapacityError, Dvpa, PartialTableWarning, ValidationError, VpaError
from .diffing import diff
from .fileformat import ParseError, parse, serialize
from .lasso import accepts, format_lasso, parse_lasso
from .priority import stair_index
from .render import save_step_graph_figure, step_graph_dot
from .stair_removal import build_parity, check_removable, su_reducer
from .summaries import step_graph
from . import core


def _load(path: str) -> tuple[Dvpa, list[str]]:
    with open(path, "rb") as fh:
        text = fh.read()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PartialTableWarning)
        dvpa = parse(text)
    notes = [str(w.message) for w in caught if isinstance(w.message, PartialTableWarning)]
    return dvpa, notes


def _result(pairs: Sequence[tuple[str, object]]) -> None:
    def fmt(v: object) -> str:
        if isinstance(v, bool):
            return "true" if v else "false"
        return str(v)

    print("RESULT: " + " ".join(f"{k}={fmt(v)}" for k, v in pairs))


def _cmd_validate(args) -> None:
    dvpa, notes = _load(args.file)
    for note in notes:
        print(f"warning: {note}")
    print(f"{args.file}: valid {dvpa.acceptance.kind} automaton, "
          f"{len(dvpa.states)} states, {len(dvpa.stack_symbols)} stack symbols")
    _result([("valid", True), ("states", len(dvpa.states)), ("warnings", len(notes))])


def _cmd_run(args) -> None:
    dvpa, _ = _load(args.file)
    lasso = parse_lasso(args.lasso)
    verdict = accepts(dvpa, lasso)
    print(f"lasso {format_lasso(lasso)!r} on {args.file}: "
          f"{'accepted' if verdict.accepted else 'rejected'} ({verdict.reason})")
    pairs = [("accepted", verdict.accepted), ("reason", verdict.reason)]
    if verdict.death_pos is not None:
        pairs.append(("death_pos", verdict.death_pos))
    if verdict.boundary_pair is not None:
        pairs.append(("boundaries", "%d,%d" % verdict.boundary_pair))
    _result(pairs)


def _cmd_classify(args) -> None:
    dvpa, _ = _load(args.file)
    word = tuple(args.word.split())
    cls = core.classify_word(dvpa.alphabet, word)
    pairs = [("class", cls.kind)]
    if cls.k is not None:
        pairs.append(("k", cls.k))
    if cls.pos is not None:
        pairs.append(("pos", cls.pos))
    _result(pairs)


def _cmd_graph(args) -> None:
    dvpa, _ = _load(args.file)
    graph = step_graph(dvpa)
    dot = step_graph_dot(graph)
    dot_target = "-"
    if args.dot is not None and args.dot != "-":
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)
        dot_target = args.dot
    else:
        sys.stdout.write(dot)
    pairs = [("vertices", len(graph.vertices)), ("edges", len(graph.edges)),
             ("dot", dot_target)]
    if args.figure:
        save_step_graph_figure(graph, args.figure)
        pairs.append(("figure", args.figure))
    _result(pairs)


def _cmd_stair_index(args) -> None:
    dvpa, _ = _load(args.file)
    count, relabeled = stair_index(dvpa)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize(relabeled))
        print(f"relabeled automaton written to {args.output}")
    _result([("index", count)])


def _cmd_check_removable(args) -> None:
    dvpa, _ = _load(args.file)
    decision = check_removable(dvpa)
    if decision.pattern and args.witness:
        w = decision.pattern
        print(f"forbidden pattern on states q={w.q} q'={w.q_prime} q''={w.q_second}")
        for name in ("u", "v", "w", "x", "y", "z"):
            print(f"  {name} = {' '.join(getattr(w, name)) or '(empty)'}")
        print(f"  sigma = {' '.join(w.sigma)}")
        print(f"  sigma' = {' '.join(w.sigma_prime) or '(empty)'}")
    _result([("removable", decision.removable)])


def _cmd_remove_stair(args) -> None:
    dvpa, _ = _load(args.file)
    decision = check_removable(dvpa)
    if not decision.removable:
        print("the automaton contains a forbidden pattern; no equivalent parity DVPA exists")
        _result([("removable", False), ("written", False)])
        return
    parity = build_parity(dvpa, cap=args.cap)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(serialize(parity))
    used = sorted(set(parity.acceptance.priorities.values()))
    print(f"parity automaton with {len(parity.states)} states written to {args.output}")
    _result([("removable", True), ("states", len(parity.states)),
             ("priorities", len(used)), ("written", args.output)])


def _cmd_reduce_su(args) -> None:
    dvpa, _ = _load(args.file)
    decision = check_removable(dvpa)
    if decision.removable:
        print("no forbidden pattern: the reduction strategy does not exist")
        _result([("pattern", False)])
        return
    reducer = su_reducer(dvpa, decision.pattern)
    moves = tuple(args.input.split())
    result = reducer.transduce(moves)
    print(f"access word: {' '.join(reducer.access_word) or '(empty)'}")
    print(f"output: {' '.join(result.output) or '(empty)'}")
    last = result.states[-1]
    _result([("pattern", True), ("moves", len(moves)), ("output_len", len(result.output)),
             ("memory", last.memory or "-"), ("open_calls", last.open_calls)])


def _cmd_diff(args) -> None:
    a, _ = _load(args.file_a)
    b, _ = _load(args.file_b)
    report = diff(a, b, samples=args.samples, seed=args.seed, max_len=args.max_len)
    for lasso, va, vb in report.mismatches[:10]:
        print(f"mismatch: {format_lasso(lasso)!r} -> {str(va).lower()} vs {str(vb).lower()}")
    if len(report.mismatches) > 10:
        print(f"... and {len(report.mismatches) - 10} more")
    pairs = [("samples", report.samples), ("seed", report.seed),
             ("corpus", report.corpus_size), ("mismatches", len(report.mismatches))]
    if report.first_mismatch_shrunk is not None:
        pairs.append(("shrunk", f"\"{format_lasso(report.first_mismatch_shrunk)}\""))
    _result(pairs)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stairvpa",
        description="Analyze deterministic visibly pushdown automata on infinite words.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate an automaton file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("run", help="evaluate one ultimately periodic word")
    p.add_argument("file")
    p.add_argument("--lasso", required=True, metavar="'u ; v'")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("classify", help="classify a finite word by call/return balance")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("graph", help="emit the successive-step graph")
    p.add_argument("file")
    p.add_argument("--dot", nargs="?", const="-", default=None, metavar="PATH",
                   help="write DOT here instead of stdout")
    p.add_argument("--figure", metavar="PATH", help="also render a figure (png/pdf/svg)")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("stair-index", help="minimal stair priority count")
    p.add_argument("file")
    p.add_argument("-o", "--output", metavar="PATH", help="write the relabeled automaton")
    p.set_defaults(func=_cmd_stair_index)

    p = sub.add_parser("check-stair-removable",
                       help="decide whether an equivalent parity DVPA exists")
    p.add_argument("file")
    p.add_argument("--witness", action="store_true", help="print the forbidden pattern")
    p.set_defaults(func=_cmd_check_removable)

    p = sub.add_parser("remove-stair", help="construct the equivalent parity DVPA")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True, metavar="PATH")
    p.add_argument("--cap", type=int, default=1_000_000,
                   help="product-state cap (default 1000000)")
    p.set_defaults(func=_cmd_remove_stair)

    p = sub.add_parser("reduce-su", help="run the reduction strategy of a forbidden pattern")
    p.add_argument("file")
    p.add_argument("--witness-from-check", action="store_true", required=True,
                   help="derive the pattern witness from the removability check")
    p.add_argument("--input", required=True, metavar="'c c r ...'",
                   help="moves over the two-letter alphabet c/r")
    p.set_defaults(func=_cmd_reduce_su)

    p = sub.add_parser("diff", help="differential equivalence testing on lasso corpora")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-len", type=int, default=12)
    p.set_defaults(func=_cmd_diff)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ParseError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    except VpaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
