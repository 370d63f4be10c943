"""Grammar base: phrase patterns and subsentence patterns.

A phrase pattern is an ordered list of features; each feature matches one
element by exact word, by concept membership, or by part of speech.
Matching elements are merged into a single phrase whose pos comes from the
pattern's pos_tag and whose core word is picked by core_word_index.

A subsentence pattern classifies whatever element sequence is left after
merging. Its key is the parse_str: the elements' pos tags joined by "|".
The meaning string lists the relations to extract, e.g. "nsubj:0:1,dobj:1:2"
(type, head element index, tail element index).

Application order for phrase patterns is the list order of the grammar
file; canonical saves order by id, so authors control priority through id
assignment. Candidate-status patterns ride along in the same files but are
ignored by parsing.

On-disk layout (directory of TSV files):

    phrase_patterns.tsv       id, features, core_word_index, pos_tag, meaning, status
    subsentence_patterns.tsv  parse_str, ss_type, ss_type2, meaning, status

The features field joins "kind:value" tokens with "|"; values are
percent-escaped so literal '|' or ':' never break the structure.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import DuplicateError, FormatError, IntegrityError, ValidationError
from .kb import KnowledgeBase
from .tags import POS_TAGS
from .tsv import escape_field, read_tsv, unescape_field, write_tsv

PHRASE_FILE = "phrase_patterns.tsv"
SUBSENTENCE_FILE = "subsentence_patterns.tsv"

_PHRASE_HEADER = ["id", "features", "core_word_index", "pos_tag", "meaning", "status"]
_SUBSENTENCE_HEADER = ["parse_str", "ss_type", "ss_type2", "meaning", "status"]

FEATURE_KINDS = ("word", "concept", "pos")
REL_TYPES = ("nsubj", "dobj")
SS_TYPES = ("sentence", "half_sentence", "phrase")
SS_TYPES2 = ("d", "q", "i", "e")
STATUSES = ("accepted", "candidate")


@dataclass(frozen=True)
class Feature:
    kind: str  # "word" | "concept" | "pos"
    value: str | int  # concept features carry an object id

    def __post_init__(self):
        if self.kind not in FEATURE_KINDS:
            raise ValidationError(f"unknown feature kind {self.kind!r}")
        if self.kind == "concept" and not isinstance(self.value, int):
            raise ValidationError(f"concept feature value must be an id, got {self.value!r}")

    def encode(self) -> str:
        return f"{self.kind}:{escape_field(str(self.value))}"


@dataclass
class PhrasePattern:
    id: int | None  # None until assigned by add_phrase_pattern
    features: list[Feature]
    core_word_index: int | None
    pos_tag: str
    meaning: str = ""  # stored and round-tripped, not yet interpreted
    status: str = "accepted"

    def feature_key(self) -> tuple:
        return tuple((f.kind, f.value) for f in self.features)


@dataclass(frozen=True)
class RelationSpec:
    rel_type: str
    head_index: int
    tail_index: int


@dataclass
class SubsentencePattern:
    parse_str: str
    ss_type: str
    ss_type2: str
    meaning: list[RelationSpec] = field(default_factory=list)
    status: str = "accepted"

    def components(self) -> list[str]:
        return self.parse_str.split("|")


@dataclass
class GrammarBase:
    phrase_patterns: list[PhrasePattern] = field(default_factory=list)
    subsentence_patterns: dict[str, SubsentencePattern] = field(default_factory=dict)

    def accepted_phrase_patterns(self) -> list[PhrasePattern]:
        return [p for p in self.phrase_patterns if p.status == "accepted"]

    def lookup_subsentence(self, parse_str: str) -> SubsentencePattern | None:
        sp = self.subsentence_patterns.get(parse_str)
        if sp is not None and sp.status == "accepted":
            return sp
        return None

    def accepted_parse_strs(self) -> set[str]:
        return {k for k, sp in self.subsentence_patterns.items() if sp.status == "accepted"}

    def __eq__(self, other):
        if not isinstance(other, GrammarBase):
            return NotImplemented
        return (
            sorted(self.phrase_patterns, key=lambda p: p.id)
            == sorted(other.phrase_patterns, key=lambda p: p.id)
            and self.subsentence_patterns == other.subsentence_patterns
        )


def parse_meaning_string(s: str) -> list[RelationSpec]:
    """Parse a meaning string like "nsubj:0:1,dobj:1:2" into relation specs.

    The empty string means no relations. Each comma-separated item must be
    rel_type:head_index:tail_index with a supported type and distinct
    non-negative indices.
    """
    if s == "":
        return []
    specs = []
    for item in s.split(","):
        parts = item.split(":")
        if len(parts) != 3:
            raise FormatError(f"meaning item {item!r}: expected 3 colon-separated fields")
        rel_type, head_s, tail_s = parts
        if rel_type not in REL_TYPES:
            raise FormatError(f"meaning item {item!r}: unsupported relation type {rel_type!r}")
        try:
            head, tail = int(head_s), int(tail_s)
        except ValueError:
            raise FormatError(f"meaning item {item!r}: indices must be integers") from None
        if head < 0 or tail < 0:
            raise FormatError(f"meaning item {item!r}: negative index")
        if head == tail:
            raise FormatError(f"meaning item {item!r}: head and tail must differ")
        specs.append(RelationSpec(rel_type, head, tail))
    return specs


def serialize_meaning(specs: list[RelationSpec]) -> str:
    """Inverse of parse_meaning_string; order is preserved, never sorted."""
    return ",".join(f"{r.rel_type}:{r.head_index}:{r.tail_index}" for r in specs)


def _validate_phrase_pattern(gb: GrammarBase, kb: KnowledgeBase, p: PhrasePattern) -> None:
    if len(p.features) < 2:
        raise ValidationError(f"pattern needs at least 2 features, got {len(p.features)}")
    if p.core_word_index is not None and not 0 <= p.core_word_index < len(p.features):
        raise ValidationError(
            f"core_word_index {p.core_word_index} out of range for {len(p.features)} features"
        )
    if p.pos_tag not in POS_TAGS:
        raise ValidationError(f"unknown pos_tag {p.pos_tag!r}")
    if p.status not in STATUSES:
        raise ValidationError(f"unknown status {p.status!r}")
    for f in p.features:
        if f.kind == "concept" and f.value not in kb.concepts:
            raise ValidationError(f"concept feature id {f.value} does not resolve")
        if f.kind == "pos" and f.value not in POS_TAGS:
            raise ValidationError(f"pos feature value {f.value!r} not in tag set")
        if f.kind == "word" and not f.value:
            raise ValidationError("word feature with empty value")
    if p.status == "accepted":
        key = p.feature_key()
        for existing in gb.phrase_patterns:
            if existing.status == "accepted" and existing.feature_key() == key:
                raise DuplicateError(f"duplicate feature list (pattern id {existing.id})")


def add_phrase_pattern(gb: GrammarBase, kb: KnowledgeBase, p: PhrasePattern) -> PhrasePattern:
    """Validate and append a phrase pattern; assigns max+1 id when unset."""
    _validate_phrase_pattern(gb, kb, p)
    if p.id is None or p.id < 0:
        p.id = max((q.id for q in gb.phrase_patterns), default=0) + 1
    elif any(q.id == p.id for q in gb.phrase_patterns):
        raise DuplicateError(f"phrase pattern id {p.id} already used")
    gb.phrase_patterns.append(p)
    return p


def _validate_subsentence_pattern(gb: GrammarBase, sp: SubsentencePattern) -> None:
    comps = sp.components()
    if not sp.parse_str or any(c not in POS_TAGS for c in comps):
        raise ValidationError(f"parse_str {sp.parse_str!r} is not a |-join of pos tags")
    if sp.ss_type not in SS_TYPES:
        raise ValidationError(f"unknown ss_type {sp.ss_type!r}")
    if sp.ss_type2 not in SS_TYPES2:
        raise ValidationError(f"unknown ss_type2 {sp.ss_type2!r}")
    if sp.status not in STATUSES:
        raise ValidationError(f"unknown status {sp.status!r}")
    for r in sp.meaning:
        if r.head_index >= len(comps) or r.tail_index >= len(comps):
            raise ValidationError(
                f"relation index out of range for {len(comps)} components: {r}"
            )
    if sp.parse_str in gb.subsentence_patterns:
        raise DuplicateError(f"parse_str {sp.parse_str!r} already present")


def add_subsentence_pattern(gb: GrammarBase, sp: SubsentencePattern) -> SubsentencePattern:
    _validate_subsentence_pattern(gb, sp)
    gb.subsentence_patterns[sp.parse_str] = sp
    return sp


def _decode_features(raw: str, path: str, lineno: int) -> list[Feature]:
    features = []
    for token in raw.split("|"):
        kind, sep, value = token.partition(":")
        if not sep or kind not in FEATURE_KINDS:
            raise FormatError(f"{path}:{lineno}: malformed feature token {token!r}")
        value = unescape_field(value)
        if kind == "concept":
            try:
                features.append(Feature("concept", int(value)))
            except ValueError:
                raise FormatError(
                    f"{path}:{lineno}: concept feature value {value!r} is not an id"
                ) from None
        else:
            features.append(Feature(kind, value))
    return features


def load_grammar(path: str, kb: KnowledgeBase | None = None) -> GrammarBase:
    """Load a grammar base; with a knowledge base given, concept features are
    re-checked against it."""
    gb = GrammarBase()
    ppath = os.path.join(path, PHRASE_FILE)
    seen_keys: dict[tuple, int] = {}
    for lineno, f in read_tsv(ppath, _PHRASE_HEADER):
        try:
            pid = int(f[0])
        except ValueError:
            raise FormatError(f"{ppath}:{lineno}: bad id {f[0]!r}") from None
        features = _decode_features(f[1], ppath, lineno)
        if f[2] == "":
            cwi = None
        else:
            try:
                cwi = int(f[2])
            except ValueError:
                raise FormatError(f"{ppath}:{lineno}: bad core_word_index {f[2]!r}") from None
        p = PhrasePattern(pid, features, cwi, f[3], unescape_field(f[4]), f[5])
        _check_loaded_phrase(p, kb, ppath, lineno, seen_keys)
        if any(q.id == pid for q in gb.phrase_patterns):
            raise IntegrityError(f"{ppath}:{lineno}: duplicate pattern id {pid}")
        gb.phrase_patterns.append(p)

    spath = os.path.join(path, SUBSENTENCE_FILE)
    for lineno, f in read_tsv(spath, _SUBSENTENCE_HEADER):
        try:
            meaning = parse_meaning_string(f[3])
        except FormatError as exc:
            raise FormatError(f"{spath}:{lineno}: {exc}") from None
        sp = SubsentencePattern(f[0], f[1], f[2], meaning, f[4])
        try:
            _validate_subsentence_pattern(gb, sp)
        except (ValidationError, DuplicateError) as exc:
            raise IntegrityError(f"{spath}:{lineno}: {exc}") from None
        gb.subsentence_patterns[sp.parse_str] = sp
    return gb


def _check_loaded_phrase(
    p: PhrasePattern,
    kb: KnowledgeBase | None,
    path: str,
    lineno: int,
    seen_keys: dict[tuple, int],
) -> None:
    if len(p.features) < 2:
        raise IntegrityError(f"{path}:{lineno}: pattern needs at least 2 features")
    if p.core_word_index is not None and not 0 <= p.core_word_index < len(p.features):
        raise IntegrityError(f"{path}:{lineno}: core_word_index out of range")
    if p.pos_tag not in POS_TAGS:
        raise IntegrityError(f"{path}:{lineno}: unknown pos_tag {p.pos_tag!r}")
    if p.status not in STATUSES:
        raise IntegrityError(f"{path}:{lineno}: unknown status {p.status!r}")
    for f in p.features:
        if f.kind == "pos" and f.value not in POS_TAGS:
            raise IntegrityError(f"{path}:{lineno}: pos feature {f.value!r} not in tag set")
        if f.kind == "concept" and kb is not None and f.value not in kb.concepts:
            raise IntegrityError(f"{path}:{lineno}: concept feature id {f.value} does not resolve")
    if p.status == "accepted":
        key = p.feature_key()
        if key in seen_keys:
            raise IntegrityError(
                f"{path}:{lineno}: duplicate feature list (first at line {seen_keys[key]})"
            )
        seen_keys[key] = lineno


def save_grammar(gb: GrammarBase, path: str) -> None:
    """Write the grammar back; phrase patterns ordered by id, subsentence
    patterns by parse_str."""
    os.makedirs(path, exist_ok=True)
    write_tsv(
        os.path.join(path, PHRASE_FILE),
        _PHRASE_HEADER,
        (
            [
                str(p.id),
                "|".join(f.encode() for f in p.features),
                "" if p.core_word_index is None else str(p.core_word_index),
                p.pos_tag,
                escape_field(p.meaning),
                p.status,
            ]
            for p in sorted(gb.phrase_patterns, key=lambda p: p.id)
        ),
    )
    write_tsv(
        os.path.join(path, SUBSENTENCE_FILE),
        _SUBSENTENCE_HEADER,
        (
            [sp.parse_str, sp.ss_type, sp.ss_type2, serialize_meaning(sp.meaning), sp.status]
            for sp in sorted(gb.subsentence_patterns.values(), key=lambda s: s.parse_str)
        ),
    )
