import json
import os
import shutil

import pytest

from semkit.cli import main
from semkit.candidates import load_candidates

from .conftest import fixture_path, write_kb_files


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture
def workdir(tmp_path):
    """Copies of the stores the CLI may mutate."""
    shutil.copytree(fixture_path("kb_toy"), tmp_path / "kb")
    shutil.copytree(fixture_path("grammar_seed"), tmp_path / "grammar")
    shutil.copy(fixture_path("corpus_unlock.jsonl"), tmp_path / "corpus.jsonl")
    shutil.copy(fixture_path("candidates_unlock.jsonl"), tmp_path / "candidates.jsonl")
    return tmp_path


# -- build-kb -----------------------------------------------------------------


def test_build_kb_prints_counts(workdir, capsys):
    assert run_cli("build-kb", "--in", str(workdir / "kb"), "--out", str(workdir / "out")) == 0
    out = capsys.readouterr().out
    assert "concepts=12 methods=3 words=20 relations=11" in out


def test_build_kb_dangling_id_fails(tmp_path, capsys):
    write_kb_files(tmp_path / "kb", words="ghost\t999\tconcept\tNN")
    assert run_cli("build-kb", "--in", str(tmp_path / "kb"), "--out", str(tmp_path / "out")) == 1
    assert "words.tsv" in capsys.readouterr().err


def test_build_kb_missing_files_fail(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    assert run_cli("build-kb", "--in", str(tmp_path / "empty"), "--out", str(tmp_path / "out")) == 1
    assert "missing" in capsys.readouterr().err


def test_build_kb_reports_cycles(tmp_path, capsys):
    shutil.copytree(fixture_path("kb_cycle"), tmp_path / "kb")
    assert run_cli("build-kb", "--in", str(tmp_path / "kb"), "--out", str(tmp_path / "out")) == 0
    captured = capsys.readouterr()
    assert "cycles=1" in captured.out
    assert "1 -> 2 -> 3" in captured.err


# -- parse ---------------------------------------------------------------------


def test_parse_unlock_corpus_reports_coverage(workdir, capsys):
    out_file = workdir / "parses.jsonl"
    assert run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", str(workdir / "corpus.jsonl"), "--mode", "fast", "--out", str(out_file),
    ) == 0
    stdout = capsys.readouterr().out
    assert "sentences=10" in stdout and "parsed=6" in stdout and "coverage=0.6000" in stdout
    lines = out_file.read_text().splitlines()
    assert len(lines) == 10
    first = json.loads(lines[0])
    assert first["coverage"] == 1.0


def test_parse_empty_corpus(workdir, tmp_path, capsys):
    corpus = tmp_path / "empty.jsonl"
    corpus.write_text("")
    assert run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", str(corpus), "--out", str(tmp_path / "o.jsonl"),
    ) == 0
    assert "sentences=0" in capsys.readouterr().out


def test_parse_skips_malformed_lines(workdir, tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text(
        '{"text": "XiaoMing plays basketball"}\n'
        "{this is not json}\n"
        '{"text": "x", "tokens": [{"w": "x", "pos": "ZZ"}]}\n'
        '{"text": "table"}\n'
    )
    out_file = tmp_path / "o.jsonl"
    assert run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", str(corpus), "--out", str(out_file),
    ) == 0
    stdout = capsys.readouterr().out
    assert "sentences=2" in stdout and "malformed=2" in stdout
    assert len(out_file.read_text().splitlines()) == 2


def test_parse_all_lines_malformed_fails(workdir, tmp_path):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text("{broken\n{also broken\n")
    assert run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", str(corpus), "--out", str(tmp_path / "o.jsonl"),
    ) == 1


def test_parse_byte_identical_across_runs_and_workers(workdir, tmp_path):
    outs = []
    for i, workers in enumerate(("1", "1", "2", "3")):
        out_file = tmp_path / f"out{i}.jsonl"
        assert run_cli(
            "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
            "--corpus", str(workdir / "corpus.jsonl"), "--out", str(out_file),
            "--workers", workers,
        ) == 0
        outs.append(out_file.read_bytes())
    assert all(o == outs[0] for o in outs)


def test_parse_report_dir_writes_tsv_and_figures(workdir, tmp_path):
    report_dir = tmp_path / "report"
    assert run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", str(workdir / "corpus.jsonl"), "--out", str(tmp_path / "o.jsonl"),
        "--report-dir", str(report_dir),
    ) == 0
    assert (report_dir / "reports.tsv").exists()
    assert (report_dir / "coverage.png").stat().st_size > 0
    assert (report_dir / "candidates.png").stat().st_size > 0
    header, row = (report_dir / "reports.tsv").read_text().splitlines()
    assert header.split("\t")[:4] == ["iteration", "sentences_total", "sentences_parsed", "subsentence_coverage"]
    assert row.split("\t")[1] == "10"


# -- learn ---------------------------------------------------------------------


def test_learn_emits_planted_candidates(workdir, tmp_path, capsys):
    parses = tmp_path / "parses.jsonl"
    run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", fixture_path("corpus_movies.jsonl"), "--out", str(parses),
    )
    capsys.readouterr()
    candidates = tmp_path / "cands.jsonl"
    assert run_cli(
        "learn", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--parses", str(parses), "--out", str(candidates),
    ) == 0
    store = load_candidates(str(candidates))
    features = [c for c in store.candidates if c.kind == "concept_feature"]
    assert any(c.payload["anchor"] == "movie" and c.payload["side"] == "before" for c in features)


def test_learn_fully_parsed_corpus_yields_nothing(workdir, tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text('{"text": "XiaoMing plays basketball"}\n')
    parses = tmp_path / "parses.jsonl"
    run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", str(corpus), "--out", str(parses),
    )
    candidates = tmp_path / "cands.jsonl"
    # concept-rule mining works off the kb, not the corpus; keep the test
    # focused on corpus-driven discovery
    config = tmp_path / "conf"
    config.write_text("enable_concept_rules = false\n")
    assert run_cli(
        "learn", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--parses", str(parses), "--config", str(config), "--out", str(candidates),
    ) == 0
    assert len(load_candidates(str(candidates))) == 0


def test_learn_toggle_disables_kind(workdir, tmp_path, capsys):
    parses = tmp_path / "parses.jsonl"
    run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", fixture_path("corpus_movies.jsonl"), "--out", str(parses),
    )
    config = tmp_path / "conf"
    config.write_text("enable_concept_features = false\n")
    candidates = tmp_path / "cands.jsonl"
    assert run_cli(
        "learn", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--parses", str(parses), "--config", str(config), "--out", str(candidates),
    ) == 0
    store = load_candidates(str(candidates))
    assert not [c for c in store.candidates if c.kind == "concept_feature"]


def test_learn_bad_config_fails(workdir, tmp_path, capsys):
    config = tmp_path / "conf"
    config.write_text("no_such_key = 1\n")
    assert run_cli(
        "learn", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--parses", str(workdir / "corpus.jsonl"), "--config", str(config),
        "--out", str(tmp_path / "c.jsonl"),
    ) == 1
    assert "no_such_key" in capsys.readouterr().err


def test_learn_appends_with_fresh_ids(workdir, tmp_path, capsys):
    parses = tmp_path / "parses.jsonl"
    run_cli(
        "parse", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", fixture_path("corpus_movies.jsonl"), "--out", str(parses),
    )
    candidates = tmp_path / "cands.jsonl"
    run_cli("learn", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
            "--parses", str(parses), "--out", str(candidates))
    first = load_candidates(str(candidates))
    run_cli("learn", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
            "--parses", str(parses), "--out", str(candidates))
    second = load_candidates(str(candidates))
    assert len(second) == len(first)  # rediscoveries deduplicated
    ids = [c.id for c in second.candidates]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)


# -- decide ---------------------------------------------------------------------


def test_decide_accept_updates_stores(workdir, capsys):
    assert run_cli(
        "decide", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--candidates", str(workdir / "candidates.jsonl"), "--id", "1", "--decision", "accept",
    ) == 0
    store = load_candidates(str(workdir / "candidates.jsonl"))
    assert store.get(1).status == "accepted"
    grammar_text = (workdir / "grammar" / "phrase_patterns.tsv").read_text()
    assert "word:stock|word:price" in grammar_text


def test_decide_unknown_id(workdir, capsys):
    assert run_cli(
        "decide", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--candidates", str(workdir / "candidates.jsonl"), "--id", "99", "--decision", "accept",
    ) == 1


def test_decide_subsentence_needs_meaning(workdir, capsys):
    assert run_cli(
        "decide", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--candidates", str(workdir / "candidates.jsonl"), "--id", "2", "--decision", "accept",
    ) == 1
    store = load_candidates(str(workdir / "candidates.jsonl"))
    assert store.get(2).status == "pending" and store.get(2).error_note
    assert run_cli(
        "decide", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--candidates", str(workdir / "candidates.jsonl"), "--id", "2", "--decision", "accept",
        "--meaning", "nsubj:0:1",
    ) == 0
    assert load_candidates(str(workdir / "candidates.jsonl")).get(2).status == "accepted"


# -- iterate -----------------------------------------------------------------------


def iterate_args(workdir, rounds, report_dir=None):
    args = [
        "iterate", "--kb", str(workdir / "kb"), "--grammar", str(workdir / "grammar"),
        "--corpus", str(workdir / "corpus.jsonl"), "--rounds", str(rounds),
        "--candidates", str(workdir / "candidates.jsonl"),
    ]
    if report_dir:
        args += ["--report-dir", str(report_dir)]
    return args


def test_iterate_zero_rounds(workdir, capsys):
    assert run_cli(*iterate_args(workdir, 0)) == 0
    assert capsys.readouterr().out == ""


def test_iterate_fixpoint_without_accepts(workdir, capsys):
    assert run_cli(*iterate_args(workdir, 2)) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith("round=")]
    assert len(lines) == 2
    strip = lambda l: l.split(" ", 1)[1].rsplit(" wall=", 1)[0]
    assert strip(lines[0]) == strip(lines[1])
    assert "coverage=0.6000" in lines[0]


def test_iterate_applies_queued_decision_between_rounds(workdir, capsys):
    store = load_candidates(str(workdir / "candidates.jsonl"))
    store.get(1).decision = "accept"
    from semkit.candidates import save_candidates

    save_candidates(store, str(workdir / "candidates.jsonl"))
    assert run_cli(*iterate_args(workdir, 2)) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith("round=")]
    assert "coverage=0.6000" in lines[0]
    assert "coverage=0.8000" in lines[1]
    assert load_candidates(str(workdir / "candidates.jsonl")).get(1).status == "accepted"


def test_iterate_report_dir(workdir, tmp_path, capsys):
    report_dir = tmp_path / "r"
    assert run_cli(*iterate_args(workdir, 2, report_dir)) == 0
    rows = (report_dir / "reports.tsv").read_text().splitlines()
    assert len(rows) == 3  # header + 2 rounds
    assert (report_dir / "coverage.png").exists()
