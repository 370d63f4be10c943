"""Corpus drivers wiring the stores, parser, and learner together.

The corpus format is one JSON object per line ({"text": ..., "tokens":
optional}); lines starting with '#' are ignored. Parsing a corpus is
embarrassingly parallel over lines; outputs are restored to input order so
serial and parallel runs are byte-identical.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .candidates import CandidateStore, save_candidates
from .config import Config
from .errors import FormatError, SemkitError
from .grammar import GrammarBase, save_grammar
from .kb import KnowledgeBase, save_kb
from .learn import (
    SubsentenceRecord,
    apply_queued_decisions,
    learn_all,
    records_from_sentence,
)
from .parse import SentenceParse, parse_sentence, sentence_to_json
from .report import IterationReport

log = logging.getLogger(__name__)


@dataclass
class ParseRun:
    out_lines: list[str] = field(default_factory=list)
    records: list[SubsentenceRecord] = field(default_factory=list)
    sentences_total: int = 0
    sentences_parsed: int = 0
    subsentences_total: int = 0
    subsentences_parsed: int = 0
    malformed: int = 0

    @property
    def coverage(self) -> float:
        if self.subsentences_total == 0:
            return 0.0
        return self.subsentences_parsed / self.subsentences_total


def read_corpus_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _parse_record(kb, gb, record, mode, max_elements, max_derivations) -> SentenceParse:
    return parse_sentence(
        kb,
        gb,
        record,
        mode,
        max_elements=max_elements,
        max_derivations=max_derivations,
    )


def _parse_line(kb, gb, line, mode, max_elements, max_derivations):
    """Parse one corpus line; returns (json_line, stats) or None for
    skippable/malformed lines (stats carries the malformed flag)."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    try:
        record = json.loads(stripped)
        if not isinstance(record, dict) or "text" not in record:
            raise FormatError("corpus line must be an object with a 'text' field")
        sp = _parse_record(kb, gb, record, mode, max_elements, max_derivations)
    except (json.JSONDecodeError, FormatError, SemkitError) as exc:
        return ("", str(exc))
    return (sentence_to_json(sp), sp)


_POOL_STATE: dict = {}


def _init_pool(kb, gb, mode, max_elements, max_derivations):
    _POOL_STATE["args"] = (kb, gb, mode, max_elements, max_derivations)


def _pool_parse_chunk(lines: list[str]):
    kb, gb, mode, max_elements, max_derivations = _POOL_STATE["args"]
    out = []
    for line in lines:
        result = _parse_line(kb, gb, line, mode, max_elements, max_derivations)
        if result is None:
            out.append(None)
        elif result[0] == "":
            out.append(("", result[1]))
        else:
            json_line, sp = result
            full = bool(sp.subsentences) and all(
                s.status == "parsed" for s in sp.subsentences
            )
            sub_total = len(sp.subsentences)
            sub_parsed = sum(1 for s in sp.subsentences if s.status == "parsed")
            out.append((json_line, (full, sub_total, sub_parsed)))
    return out


def parse_corpus(
    kb: KnowledgeBase,
    gb: GrammarBase,
    corpus_path: str,
    mode: str = "fast",
    *,
    workers: int = 1,
    config: Config | None = None,
    keep_records: bool = False,
) -> ParseRun:
    """Parse every corpus line in input order. Malformed lines are logged,
    counted, and skipped. With keep_records the flattened subsentence
    records are retained for a same-process learn step."""
    cfg = config or Config()
    lines = read_corpus_lines(corpus_path)
    run = ParseRun()

    if workers > 1 and not keep_records:
        chunk_size = max(1, (len(lines) + workers * 4 - 1) // (workers * 4))
        chunks = [lines[i : i + chunk_size] for i in range(0, len(lines), chunk_size)]
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_pool,
            initargs=(kb, gb, mode, cfg.exhaustive_max_elements, cfg.exhaustive_max_derivations),
        ) as pool:
            for chunk_result in pool.map(_pool_parse_chunk, chunks):
                for item in chunk_result:
                    if item is None:
                        continue
                    json_line, meta = item
                    if json_line == "":
                        run.malformed += 1
                        log.warning("skipped malformed corpus line: %s", meta)
                        continue
                    full, sub_total, sub_parsed = meta
                    run.out_lines.append(json_line)
                    run.sentences_total += 1
                    run.sentences_parsed += 1 if full else 0
                    run.subsentences_total += sub_total
                    run.subsentences_parsed += sub_parsed
        return run

    for line in lines:
        result = _parse_line(
            kb, gb, line, mode, cfg.exhaustive_max_elements, cfg.exhaustive_max_derivations
        )
        if result is None:
            continue
        if result[0] == "":
            run.malformed += 1
            log.warning("skipped malformed corpus line: %s", result[1])
            continue
        json_line, sp = result
        run.out_lines.append(json_line)
        run.sentences_total += 1
        if sp.subsentences and all(s.status == "parsed" for s in sp.subsentences):
            run.sentences_parsed += 1
        run.subsentences_total += len(sp.subsentences)
        run.subsentences_parsed += sum(1 for s in sp.subsentences if s.status == "parsed")
        if keep_records:
            run.records.extend(records_from_sentence(sp))
    return run


def run_iteration(
    kb: KnowledgeBase,
    gb: GrammarBase,
    store: CandidateStore,
    corpus_path: str,
    config: Config,
    iteration: int,
    *,
    mode: str = "fast",
) -> tuple[IterationReport, ParseRun]:
    """One parse+learn round. Candidate counts in the report reflect what
    discovery produced; the store only receives candidates it has not seen."""
    started = time.monotonic()
    run = parse_corpus(kb, gb, corpus_path, mode, config=config, keep_records=True)
    counts = learn_all(kb, gb, run.records, config, store, created_at=iteration)
    report = IterationReport(
        iteration=iteration,
        sentences_total=run.sentences_total,
        sentences_parsed=run.sentences_parsed,
        subsentence_coverage=run.coverage,
        candidates_emitted=counts,
        wall_time_seconds=time.monotonic() - started,
    )
    return report, run


def iterate_rounds(
    kb: KnowledgeBase,
    gb: GrammarBase,
    store: CandidateStore,
    corpus_path: str,
    config: Config,
    rounds: int,
    *,
    mode: str = "fast",
    kb_dir: str | None = None,
    grammar_dir: str | None = None,
    candidates_path: str | None = None,
    start_iteration: int | None = None,
) -> list[IterationReport]:
    """Run parse+learn rounds; queued reviewer decisions are applied between
    rounds and every applied decision is persisted immediately."""
    reports = []
    first = store.max_created_at() + 1 if start_iteration is None else start_iteration
    for i in range(rounds):
        iteration = first + i
        report, _ = run_iteration(kb, gb, store, corpus_path, config, iteration, mode=mode)
        reports.append(report)
        if candidates_path:
            save_candidates(store, candidates_path)
        if i + 1 < rounds:
            applied = apply_queued_decisions(kb, gb, store)
            if applied:
                log.info("applied %d queued decisions before round %d", applied, iteration + 1)
                persist_stores(kb, gb, store, kb_dir, grammar_dir, candidates_path)
    return reports


def persist_stores(
    kb: KnowledgeBase,
    gb: GrammarBase,
    store: CandidateStore | None = None,
    kb_dir: str | None = None,
    grammar_dir: str | None = None,
    candidates_path: str | None = None,
) -> None:
    if kb_dir:
        save_kb(kb, kb_dir)
    if grammar_dir:
        save_grammar(gb, grammar_dir)
    if store is not None and candidates_path:
        save_candidates(store, candidates_path)


def write_parse_output(run: ParseRun, path: str) -> None:
    data = "\n".join(run.out_lines) + ("\n" if run.out_lines else "")
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    from .tsv import atomic_write

    atomic_write(path, data)
