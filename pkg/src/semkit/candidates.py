"""Candidate rules awaiting human review, persisted as JSONL.

One JSON object per line with fields id, kind, payload, support,
confidence, evidence, status, created_at, plus error_note when a failed
accept left a note and decision when a reviewer queued a decision for the
next iteration to apply. Output is sorted by id and byte-deterministic.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import FormatError
from .tsv import atomic_write

KINDS = (
    "concept_rule",
    "new_concept",
    "concept_feature",
    "phrase_pattern",
    "subsentence_pattern",
)
STATUSES = ("pending", "accepted", "rejected")

EVIDENCE_CAP = 20


@dataclass
class CandidateRule:
    id: int
    kind: str
    payload: dict
    support: int
    confidence: float | None
    evidence: list[str]
    status: str = "pending"
    created_at: int = 0
    error_note: str | None = None
    decision: str | None = None
    # Ids of overlapping candidates mined from the same evidence (helps the
    # reviewer pick the right kind, e.g. subsentence vs concept-feature).
    related_ids: list[int] = field(default_factory=list)
    # Transient: indices of the source subsentences this candidate was mined
    # from; used to compute related_ids, never persisted.
    sources: frozenset = field(default_factory=frozenset, compare=False, repr=False)

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "kind": self.kind,
            "payload": self.payload,
            "support": self.support,
            "confidence": self.confidence,
            "evidence": self.evidence,
            "status": self.status,
            "created_at": self.created_at,
        }
        if self.error_note is not None:
            d["error_note"] = self.error_note
        if self.decision is not None:
            d["decision"] = self.decision
        if self.related_ids:
            d["related_ids"] = self.related_ids
        return d

    def identity(self) -> tuple:
        """Dedup key: a candidate is the same discovery if kind and payload match."""
        return (self.kind, json.dumps(self.payload, sort_keys=True, ensure_ascii=False))


class CandidateStore:
    def __init__(self, candidates: list[CandidateRule] | None = None):
        self.candidates: list[CandidateRule] = list(candidates or ())
        self._by_id = {c.id: c for c in self.candidates}

    def __len__(self):
        return len(self.candidates)

    def __eq__(self, other):
        if not isinstance(other, CandidateStore):
            return NotImplemented
        return [c.to_dict() for c in self.candidates] == [c.to_dict() for c in other.candidates]

    def get(self, cid: int) -> CandidateRule | None:
        return self._by_id.get(cid)

    def next_id(self) -> int:
        return max(self._by_id, default=0) + 1

    def identities(self) -> set[tuple]:
        return {c.identity() for c in self.candidates}

    def append(self, cand: CandidateRule) -> None:
        if cand.id in self._by_id:
            raise FormatError(f"duplicate candidate id {cand.id}")
        self.candidates.append(cand)
        self._by_id[cand.id] = cand

    def add_new(self, discovered: list[CandidateRule], created_at: int) -> int:
        """Append discoveries not already in the store (same kind+payload),
        assigning fresh monotonically increasing ids. Returns how many were
        actually added."""
        known = self.identities()
        added = 0
        for cand in discovered:
            if cand.identity() in known:
                continue
            known.add(cand.identity())
            cand.id = self.next_id()
            cand.created_at = created_at
            self.append(cand)
            added += 1
        return added

    def filter(self, status: str | None = None, kind: str | None = None) -> list[CandidateRule]:
        out = self.candidates
        if status is not None:
            out = [c for c in out if c.status == status]
        if kind is not None:
            out = [c for c in out if c.kind == kind]
        return list(out)

    def max_created_at(self) -> int:
        return max((c.created_at for c in self.candidates), default=0)


def load_candidates(path: str) -> CandidateStore:
    store = CandidateStore()
    if not os.path.isfile(path):
        return store
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: bad JSON: {exc}") from None
            try:
                cand = CandidateRule(
                    id=int(obj["id"]),
                    kind=obj["kind"],
                    payload=obj["payload"],
                    support=int(obj["support"]),
                    confidence=obj.get("confidence"),
                    evidence=list(obj.get("evidence", [])),
                    status=obj.get("status", "pending"),
                    created_at=int(obj.get("created_at", 0)),
                    error_note=obj.get("error_note"),
                    decision=obj.get("decision"),
                    related_ids=list(obj.get("related_ids", [])),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: bad candidate record: {exc}") from None
            if cand.kind not in KINDS:
                raise FormatError(f"{path}:{lineno}: unknown kind {cand.kind!r}")
            if cand.status not in STATUSES:
                raise FormatError(f"{path}:{lineno}: unknown status {cand.status!r}")
            store.append(cand)
    store.candidates.sort(key=lambda c: c.id)
    return store


def save_candidates(store: CandidateStore, path: str) -> None:
    lines = [
        json.dumps(c.to_dict(), ensure_ascii=False, separators=(",", ":"))
        for c in sorted(store.candidates, key=lambda c: c.id)
    ]
    atomic_write(path, "\n".join(lines) + ("\n" if lines else ""))
