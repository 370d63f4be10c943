"""Command-line entry point.

Subcommands mirror the working loop: build-kb validates and canonicalizes
a knowledge base, parse runs a corpus through the parser, learn mines
candidates from parse output, decide records a reviewer decision, iterate
chains parse+learn rounds, and serve hosts the review API and UI.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .candidates import load_candidates, save_candidates
from .config import apply_text_extensions, load_config
from .errors import SemkitError
from .grammar import load_grammar
from .kb import find_cycles, load_kb, save_kb
from .learn import apply_candidate, learn_all, records_from_parse_file
from .pipeline import (
    iterate_rounds,
    parse_corpus,
    persist_stores,
    write_parse_output,
)
from .report import IterationReport, render_report_figures, write_reports_tsv

log = logging.getLogger(__name__)


def cmd_build_kb(args) -> int:
    apply_text_extensions(load_config(args.config))
    kb = load_kb(args.input)
    cycles = find_cycles(kb)
    for cycle in cycles:
        print(f"cycle: {' -> '.join(str(c) for c in cycle)}", file=sys.stderr)
    save_kb(kb, args.out)
    counts = kb.counts()
    print(
        f"concepts={counts['concepts']} methods={counts['methods']} "
        f"words={counts['words']} relations={counts['relations']} cycles={len(cycles)}"
    )
    return 0


def _write_reports(reports, report_dir) -> None:
    if not report_dir:
        return
    import os

    os.makedirs(report_dir, exist_ok=True)
    write_reports_tsv(reports, os.path.join(report_dir, "reports.tsv"))
    for path in render_report_figures(reports, report_dir):
        log.info("wrote %s", path)


def cmd_parse(args) -> int:
    config = load_config(args.config)
    apply_text_extensions(config)
    kb = load_kb(args.kb)
    gb = load_grammar(args.grammar, kb)
    import time

    started = time.monotonic()
    run = parse_corpus(kb, gb, args.corpus, args.mode, workers=args.workers, config=config)
    wall = time.monotonic() - started
    write_parse_output(run, args.out)
    report = IterationReport(
        iteration=0,
        sentences_total=run.sentences_total,
        sentences_parsed=run.sentences_parsed,
        subsentence_coverage=run.coverage,
        candidates_emitted={},
        wall_time_seconds=wall,
    )
    print(report.format_line() + (f" malformed={run.malformed}" if run.malformed else ""))
    _write_reports([report], args.report_dir)
    if run.sentences_total == 0 and run.malformed > 0:
        return 1
    return 0


def cmd_learn(args) -> int:
    config = load_config(args.config)
    apply_text_extensions(config)
    kb = load_kb(args.kb)
    gb = load_grammar(args.grammar, kb)
    store = load_candidates(args.out)
    records = records_from_parse_file(args.parses)
    counts = learn_all(kb, gb, records, config, store, created_at=store.max_created_at() + 1)
    save_candidates(store, args.out)
    print(" ".join(f"{kind}={n}" for kind, n in counts.items()))
    return 0


def cmd_decide(args) -> int:
    apply_text_extensions(load_config(args.config))
    kb = load_kb(args.kb)
    gb = load_grammar(args.grammar, kb)
    store = load_candidates(args.candidates)
    cand = store.get(args.id)
    if cand is None:
        print(f"no candidate with id {args.id}", file=sys.stderr)
        return 1
    ok = apply_candidate(kb, gb, cand, args.decision, meaning=args.meaning)
    save_candidates(store, args.candidates)
    if not ok:
        print(f"decision not applied: {cand.error_note}", file=sys.stderr)
        return 1
    persist_stores(kb, gb, kb_dir=args.kb, grammar_dir=args.grammar)
    print(f"candidate {cand.id} {cand.status}")
    return 0


def cmd_iterate(args) -> int:
    if args.rounds <= 0:
        return 0
    config = load_config(args.config)
    kb = load_kb(args.kb)
    gb = load_grammar(args.grammar, kb)
    store = load_candidates(args.candidates)
    reports = iterate_rounds(
        kb,
        gb,
        store,
        args.corpus,
        config,
        args.rounds,
        mode=args.mode,
        kb_dir=args.kb,
        grammar_dir=args.grammar,
        candidates_path=args.candidates,
    )
    for report in reports:
        print(report.format_line())
    save_candidates(store, args.candidates)
    _write_reports(reports, args.report_dir)
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    config = load_config(args.config)
    apply_text_extensions(config)
    kb = load_kb(args.kb)
    gb = load_grammar(args.grammar, kb)
    store = load_candidates(args.candidates)
    host, _, port_s = args.bind.rpartition(":")
    try:
        port = int(port_s)
    except ValueError:
        print(f"bad bind address {args.bind!r}", file=sys.stderr)
        return 1
    return serve(
        kb,
        gb,
        store,
        host or "127.0.0.1",
        port,
        kb_dir=args.kb,
        grammar_dir=args.grammar,
        candidates_path=args.candidates,
        corpus_path=args.corpus,
        config=config,
        static_dir=args.static,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semkit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-kb", help="validate, lint, and canonicalize a knowledge base")
    p.add_argument("--in", dest="input", required=True, help="input TSV directory")
    p.add_argument("--out", required=True, help="output TSV directory")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_build_kb)

    p = sub.add_parser("parse", help="parse a corpus to JSONL")
    p.add_argument("--kb", required=True)
    p.add_argument("--grammar", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--mode", choices=["fast", "exhaustive"], default="fast")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--config", default=None)
    p.add_argument("--report-dir", default=None, help="write reports.tsv and figures here")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("learn", help="mine candidates from parse output")
    p.add_argument("--kb", required=True)
    p.add_argument("--grammar", required=True)
    p.add_argument("--parses", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True, help="candidates JSONL (appended)")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("decide", help="accept or reject one candidate")
    p.add_argument("--kb", required=True)
    p.add_argument("--grammar", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--id", type=int, required=True)
    p.add_argument("--decision", choices=["accept", "reject"], required=True)
    p.add_argument("--meaning", default=None, help="meaning string for subsentence candidates")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("iterate", help="run parse+learn rounds")
    p.add_argument("--kb", required=True)
    p.add_argument("--grammar", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--candidates", default="candidates.jsonl")
    p.add_argument("--mode", choices=["fast", "exhaustive"], default="fast")
    p.add_argument("--report-dir", default=None)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("serve", help="host the review API and UI")
    p.add_argument("--kb", required=True)
    p.add_argument("--grammar", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--bind", default="127.0.0.1:8754")
    p.add_argument("--corpus", default=None, help="corpus for POST /iterate")
    p.add_argument("--config", default=None)
    p.add_argument("--static", default=None, help="static files for the review UI")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except SemkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
