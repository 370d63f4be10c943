"""Per-round run reports: console line, delimited file, and figures.

Each parse or iterate round produces one IterationReport. Reports print as
a single console line, accumulate into reports.tsv, and optionally render
to PNG figures (coverage across rounds, candidate counts per kind) next to
the TSV when a report directory is given.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .tsv import write_tsv

CANDIDATE_KINDS = (
    "concept_rule",
    "new_concept",
    "concept_feature",
    "phrase_pattern",
    "subsentence_pattern",
)

_REPORT_HEADER = [
    "iteration",
    "sentences_total",
    "sentences_parsed",
    "subsentence_coverage",
    *CANDIDATE_KINDS,
    "wall_time_seconds",
]


@dataclass
class IterationReport:
    iteration: int
    sentences_total: int
    sentences_parsed: int  # sentences with every subsentence parsed
    subsentence_coverage: float
    candidates_emitted: dict[str, int] = field(default_factory=dict)
    wall_time_seconds: float = 0.0

    def format_line(self) -> str:
        cand = ",".join(f"{k}={self.candidates_emitted.get(k, 0)}" for k in CANDIDATE_KINDS)
        return (
            f"round={self.iteration} sentences={self.sentences_total} "
            f"parsed={self.sentences_parsed} coverage={self.subsentence_coverage:.4f} "
            f"candidates[{cand}] wall={self.wall_time_seconds:.2f}s"
        )


def write_reports_tsv(reports: list[IterationReport], path: str) -> None:
    rows = []
    for r in reports:
        rows.append(
            [
                str(r.iteration),
                str(r.sentences_total),
                str(r.sentences_parsed),
                f"{r.subsentence_coverage:.6f}",
                *(str(r.candidates_emitted.get(k, 0)) for k in CANDIDATE_KINDS),
                f"{r.wall_time_seconds:.3f}",
            ]
        )
    write_tsv(path, _REPORT_HEADER, rows)


def render_report_figures(reports: list[IterationReport], out_dir: str) -> list[str]:
    """Render coverage and candidate-count figures; returns written paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    written = []

    rounds = [r.iteration for r in reports]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(rounds, [r.subsentence_coverage for r in reports], marker="o", label="subsentence coverage")
    totals = [r.sentences_total for r in reports]
    if any(totals):
        ax.plot(
            rounds,
            [r.sentences_parsed / r.sentences_total if r.sentences_total else 0.0 for r in reports],
            marker="s",
            label="fully parsed sentences",
        )
    ax.set_xlabel("round")
    ax.set_ylabel("fraction")
    ax.set_ylim(0.0, 1.05)
    ax.set_xticks(rounds)
    ax.legend()
    ax.set_title("Parse coverage per round")
    fig.tight_layout()
    path = os.path.join(out_dir, "coverage.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(7, 4))
    bottoms = [0] * len(reports)
    for kind in CANDIDATE_KINDS:
        values = [r.candidates_emitted.get(kind, 0) for r in reports]
        ax.bar(rounds, values, bottom=bottoms, label=kind)
        bottoms = [b + v for b, v in zip(bottoms, values)]
    ax.set_xlabel("round")
    ax.set_ylabel("candidates discovered")
    ax.set_xticks(rounds)
    ax.legend(fontsize=8)
    ax.set_title("Discovered candidates per round")
    fig.tight_layout()
    path = os.path.join(out_dir, "candidates.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
