"""Command-line interface.

Subcommands:
  check    decide one datum, render the verdict as text or JSON
  scan     adjudicate every candidate in a range, emit JSONL rows
  family   generate doubled-uniform-fiber data with an oversized part
  corpus   run the embedded regression corpus

Exit codes: 0 decision completed, 1 usage or parse error, 2 internal error,
3 expectation mismatch (``--expect``, scan disagreement, corpus failure).
"""

from __future__ import annotations

import argparse
import json
import sys

from .corpus import run_corpus
from .criteria import family_instances
from .engine import DecisionEngine, scan
from .oracle import ConstellationWitness, SearchBudget
from .partitions import DatumParseError, parse_datum
from .reduction import ReductionChain
from .verdicts import EXCEPTIONAL, REALIZABLE, UNKNOWN


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 by default; the contract wants 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_budget_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--max-degree", type=int, default=12,
                     help="largest degree the search will attempt (default 12)")
    sub.add_argument("--max-nodes", type=int, default=100_000_000,
                     help="backtrack-node budget for one search (default 1e8)")
    sub.add_argument("--deterministic", action="store_true", default=True,
                     help="deterministic single-threaded search (default)")


def _budget(args) -> SearchBudget:
    return SearchBudget(max_degree=args.max_degree, max_nodes=args.max_nodes,
                        deterministic=args.deterministic)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _verdict_text(verdict, datum, input_text: str) -> str:
    lines = [
        f"input:     {input_text}",
        f"canonical: {datum.render()}",
        f"status:    {verdict.status}",
        f"method:    {verdict.method}",
    ]
    if verdict.limit:
        lines.append(f"limit:     {verdict.limit}")
    for report in verdict.reasons:
        lines.append(f"reason:    {report.rule}: {report.detail}")
    cert = verdict.certificate
    if isinstance(cert, ConstellationWitness):
        lines.append(f"witness:   {cert.render()}")
    elif isinstance(cert, ReductionChain):
        lines.append(f"chain:     {cert.render()}")
    stats = verdict.stats
    lines.append(f"stats:     nodes={stats.nodes} cache_hits={stats.cache_hits} millis={stats.millis}")
    return "\n".join(lines)


def cmd_check(args) -> int:
    datum = parse_datum(args.datum)
    engine = DecisionEngine(_budget(args), strict_corollaries=args.strict_corollaries)
    verdict = engine.decide(datum)
    if args.format == "json":
        print(json.dumps(verdict.to_json(datum, input_text=args.datum), sort_keys=True, indent=2))
    else:
        print(_verdict_text(verdict, datum, args.datum))
    if args.expect and verdict.status != args.expect:
        print(f"expected {args.expect}, got {verdict.status}", file=sys.stderr)
        return 3
    return 0


def cmd_scan(args) -> int:
    mode = "both"
    if args.oracle_only:
        mode = "oracle-only"
    elif args.pipeline_only:
        mode = "pipeline-only"
    report = scan(args.degree_max, args.branch_points_max, _budget(args), mode=mode,
                  jobs=args.jobs)
    lines = [_dump(row) for row in report.rows]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("".join(line + "\n" for line in lines))
        summary_stream = sys.stdout
    else:
        for line in lines:
            print(line)
        summary_stream = sys.stderr
    for line in report.summary_lines():
        print(line, file=summary_stream)
    return 3 if report.disagreements else 0


def cmd_family(args) -> int:
    engine = DecisionEngine(_budget(args)) if args.emit_verdicts else None
    count = 0
    for datum, rule in family_instances(args.s, args.k, args.t):
        count += 1
        if engine is not None:
            verdict = engine.decide(datum)
            row = verdict.to_json(datum)
            row["expected_rule"] = rule
            print(_dump(row))
        else:
            print(datum.render())
    if count == 0:
        print(
            f"warning: no family data for s={args.s} k={args.k} t={args.t};"
            " the length budget admits no free partitions with a part"
            f" >= {args.k + 1}",
            file=sys.stderr,
        )
    return 0


def cmd_corpus(args) -> int:
    results = run_corpus(_budget(args))
    failures = 0
    for result in results:
        mark = "ok  " if result.ok else "FAIL"
        line = (
            f"{mark} expected={result.entry.expected:<12} got={result.verdict.status:<12}"
            f" method={result.verdict.method:<20} {result.entry.datum_text}"
        )
        if args.format == "json":
            print(_dump({
                "datum": result.entry.datum_text,
                "expected": result.entry.expected,
                "status": result.verdict.status,
                "method": result.verdict.method,
                "ok": result.ok,
                "source": result.entry.source,
            }))
        else:
            print(line)
        if not result.ok:
            failures += 1
    print(f"{len(results) - failures}/{len(results)} corpus entries matched",
          file=sys.stderr if failures else sys.stdout)
    return 3 if failures else 0


def build_parser() -> _Parser:
    parser = _Parser(prog="hurwitz",
                     description="Decide realizability of sphere branched-cover data.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="decide one datum", parents=[])
    check.add_argument("datum", help='datum text, e.g. "4: [3,1] [2,2] [2,2]"')
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--jobs", type=int, default=1,
                       help="accepted for interface compatibility; the search is single-threaded")
    check.add_argument("--strict-corollaries", action="store_true",
                       help="use the strict (>) length bounds; over-rejects, see docs")
    check.add_argument("--expect", choices=(REALIZABLE, EXCEPTIONAL, UNKNOWN))
    _add_budget_flags(check)
    check.set_defaults(func=cmd_check)

    scan_cmd = sub.add_parser("scan", help="adjudicate every candidate in a range")
    scan_cmd.add_argument("--degree-max", type=int, required=True)
    scan_cmd.add_argument("--branch-points-max", type=int, required=True)
    group = scan_cmd.add_mutually_exclusive_group()
    group.add_argument("--oracle-only", action="store_true")
    group.add_argument("--pipeline-only", action="store_true")
    scan_cmd.add_argument("--out", help="write JSONL rows to this file")
    scan_cmd.add_argument("--jobs", type=int, default=1)
    _add_budget_flags(scan_cmd)
    scan_cmd.set_defaults(func=cmd_scan)

    family = sub.add_parser("family", help="generate exceptional family data")
    family.add_argument("--s", type=int, required=True, help="uniform fiber part size (>= 2)")
    family.add_argument("--k", type=int, required=True, help="uniform fiber length (>= 2)")
    family.add_argument("--t", type=int, required=True, help="number of free partitions")
    family.add_argument("--emit-verdicts", action="store_true")
    _add_budget_flags(family)
    family.set_defaults(func=cmd_family)

    corpus = sub.add_parser("corpus", help="run the embedded regression corpus")
    corpus.add_argument("--format", choices=("text", "json"), default="text")
    _add_budget_flags(corpus)
    corpus.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DatumParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
