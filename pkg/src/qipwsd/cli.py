"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 solver/config incompatibility.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from .instance import Assignment, InstanceFormatError, load_corpus, save_corpus
from .model import SolverConfig, Variant
from .network import demonstrate_order_dependence
from .pipeline import CorpusMismatchError, EvalReport, compare_runs, run_pipeline
from .similarity import RelatednessParams, build_sim_tables
from .solvers import SOLVERS, SolverError
from .synthetic import random_corpus

EXIT_INPUT = 1
EXIT_SOLVER = 2


def _theta(text: str) -> float:
    val = float(text)
    if not 0.0 <= val <= 1.0:
        raise argparse.ArgumentTypeError(f"theta must lie in [0, 1], got {val}")
    return val


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qipwsd", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="disambiguate a corpus and write a report")
    s.add_argument("--corpus", required=True)
    s.add_argument("--lambda1", type=float, default=1.0)
    s.add_argument("--lambda2", type=float, default=1.0)
    s.add_argument("--lambda3", type=float, default=1.0)
    s.add_argument("--beta", type=float, default=1.0)
    s.add_argument("--theta", type=_theta, default=1.0)
    s.add_argument("--variant", choices=[v.value for v in Variant], default="full")
    s.add_argument("--solver", choices=sorted(SOLVERS), default="bnb")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=8)
    s.add_argument("--out", help="report path (default: stdout)")

    c = sub.add_parser("compare", help="diff two solve reports over the same corpus")
    c.add_argument("report_a")
    c.add_argument("report_b")
    c.add_argument("--out")

    o = sub.add_parser("order-demo", help="path length of one assignment under every word order")
    o.add_argument("--corpus", required=True)
    o.add_argument("--instance", type=int, default=0)
    o.add_argument("--choices", help="comma-separated sense indices (default: per-word argmax)")
    o.add_argument("--out", help="CSV table path (default: stdout)")

    g = sub.add_parser("generate", help="write a seeded synthetic corpus")
    g.add_argument("--out", required=True)
    g.add_argument("--instances", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--min-words", type=int, default=2)
    g.add_argument("--max-words", type=int, default=6)
    g.add_argument("--max-senses", type=int, default=5)
    g.add_argument("--dim", type=int, default=8)
    g.add_argument("--no-gold", action="store_true")
    return p


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def cmd_solve(args) -> int:
    cfg = SolverConfig(
        beta=args.beta,
        theta=args.theta,
        params=RelatednessParams(args.lambda1, args.lambda2, args.lambda3),
        variant=Variant(args.variant),
    )
    report = run_pipeline(args.corpus, cfg, args.solver, out=args.out,
                          seed=args.seed, restarts=args.restarts)
    if args.out is None:
        sys.stdout.write(report.dumps())
    else:
        agg = report.aggregate
        msg = f"{agg['instances']} instances, {agg['words']} words"
        if "accuracy" in agg:
            msg += f", accuracy {agg['accuracy']:.4f}"
        print(msg, file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    diff = compare_runs(EvalReport.read(args.report_a), EvalReport.read(args.report_b))
    _write_text(json.dumps(diff, indent=2) + "\n", args.out)
    return 0


def cmd_order_demo(args) -> int:
    corpus = load_corpus(args.corpus)
    if not 0 <= args.instance < len(corpus):
        raise InstanceFormatError(f"instance index {args.instance} out of range (corpus has {len(corpus)})")
    inst = corpus[args.instance]
    tables = build_sim_tables(inst)
    if args.choices:
        choices = tuple(int(x) for x in args.choices.split(","))
    else:
        choices = tuple(int(tables.c_row(i).argmax()) for i in range(len(inst.words)))
    report = demonstrate_order_dependence(inst, tables, Assignment(choices))
    ids = [w.word_id for w in inst.words]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["order", "length"])
        for order, length in report.rows:
            writer.writerow([">".join(ids[i] for i in order), repr(length)])
    finally:
        if args.out:
            out.close()
    summary = {
        "orders": len(report.rows),
        "exhaustive": report.exhaustive,
        "distinct_lengths": report.n_distinct(),
        "min": report.min,
        "max": report.max,
        "spread": report.spread,
    }
    print(json.dumps(summary), file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    corpus = random_corpus(args.seed, args.instances, min_words=args.min_words,
                           max_words=args.max_words, max_senses=args.max_senses,
                           dim=args.dim, with_gold=not args.no_gold)
    save_corpus(corpus, args.out)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "compare": cmd_compare,
    "order-demo": cmd_order_demo,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (InstanceFormatError, CorpusMismatchError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
