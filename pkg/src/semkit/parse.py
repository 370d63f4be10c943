"""Bottom-up parsing: merge words into phrases, classify the residual
sequence, extract relations.

Words and phrases are processed uniformly as elements carrying value, pos,
and a recursively resolved core word. The fast path is single recursion:
loop over phrase patterns in grammar order, scan windows left to right,
replace the first match, restart from the first pattern, and stop when a
full pass matches nothing. The exhaustive path explores every possible
replacement sequence and is the fast path's correctness oracle on short
inputs.

After merging, the remaining elements' pos tags joined by "|" form the
parse_str, which is looked up among accepted subsentence patterns; a match
classifies the subsentence and drives relation extraction through the
pattern's meaning list.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .errors import ResourceLimitError
from .grammar import Feature, GrammarBase, PhrasePattern, SubsentencePattern
from .kb import KnowledgeBase, is_descendant, lookup_word, method_applicable
from .segment import SubsentenceText, Word, load_pretagged, segment, split_subsentences
from .tags import DELIMITERS

log = logging.getLogger(__name__)

DEFAULT_MAX_ELEMENTS = 10
DEFAULT_MAX_DERIVATIONS = 10_000


@dataclass(frozen=True)
class Phrase:
    pattern_id: int
    children: tuple  # tuple[Element, ...]
    value: str
    pos: str
    core_word_index: int | None

    @property
    def core(self) -> str:
        if self.core_word_index is None:
            return self.value
        return self.children[self.core_word_index].core


Element = Word | Phrase


def core_word(e: Element) -> str:
    """Core word of an element: a word is its own core; a phrase delegates
    to the child at its pattern's core_word_index, recursively, falling
    back to its full value when the pattern has no core index."""
    return e.core


def element_key(e: Element) -> tuple:
    """Structural identity of an element tree (for memoization and dedup)."""
    if isinstance(e, Word):
        return ("w", e.value, e.pos)
    return ("p", e.pattern_id, tuple(element_key(c) for c in e.children))


@dataclass(frozen=True)
class ExtractedRelation:
    rel_type: str
    head: str
    tail: str
    head_index: int
    tail_index: int


@dataclass
class SubsentenceParse:
    elements: list[Element]
    parse_str: str
    matched_pattern: SubsentencePattern | None
    relations: list[ExtractedRelation]
    status: str  # "parsed" | "unparsed"
    trailing_delimiter: str | None = None


@dataclass
class SentenceParse:
    text: str
    subsentences: list[SubsentenceParse]
    coverage: float


def match_feature(kb: KnowledgeBase, f: Feature, e: Element) -> bool:
    """Word features demand an exact core-word match, pos features an exact
    pos match, and concept features accept any element whose core word
    links to a concept descending from the feature's concept."""
    if f.kind == "word":
        return f.value == e.core
    if f.kind == "pos":
        return f.value == e.pos
    for link in lookup_word(kb, e.core):
        if link.object_kind == "concept" and is_descendant(kb, link.object_id, f.value):
            return True
    return False


def make_phrase(p: PhrasePattern, children: tuple, joiner: str) -> Phrase:
    return Phrase(
        pattern_id=p.id,
        children=children,
        value=joiner.join(c.value for c in children),
        pos=p.pos_tag,
        core_word_index=p.core_word_index,
    )


def match_phrase_pattern(
    kb: KnowledgeBase,
    p: PhrasePattern,
    elems: list[Element],
    start: int,
    joiner: str = "",
) -> Phrase | None:
    """Match a pattern against the contiguous window starting at start;
    returns the merged phrase or None."""
    width = len(p.features)
    if start < 0 or start + width > len(elems):
        raise ValueError(f"window [{start}, {start + width}) out of range for {len(elems)} elements")
    window = elems[start : start + width]
    for f, e in zip(p.features, window):
        if not match_feature(kb, f, e):
            return None
    return make_phrase(p, tuple(window), joiner)


def classify_subsentence(
    gb: GrammarBase, elements: list[Element]
) -> tuple[str, SubsentencePattern | None]:
    parse_str = "|".join(e.pos for e in elements)
    return parse_str, gb.lookup_subsentence(parse_str)


def extract_relations(parse: SubsentenceParse) -> list[ExtractedRelation]:
    """Materialize the matched pattern's meaning list against the final
    elements, reading head/tail core words at each relation's indices."""
    assert parse.matched_pattern is not None
    out = []
    for spec in parse.matched_pattern.meaning:
        out.append(
            ExtractedRelation(
                rel_type=spec.rel_type,
                head=parse.elements[spec.head_index].core,
                tail=parse.elements[spec.tail_index].core,
                head_index=spec.head_index,
                tail_index=spec.tail_index,
            )
        )
    return out


def _finish(gb: GrammarBase, elements: list[Element]) -> SubsentenceParse:
    parse_str, pattern = classify_subsentence(gb, elements)
    parse = SubsentenceParse(
        elements=elements,
        parse_str=parse_str,
        matched_pattern=pattern,
        relations=[],
        status="parsed" if pattern is not None else "unparsed",
    )
    if pattern is not None:
        parse.relations = extract_relations(parse)
    return parse


def single_recursion_parse(
    kb: KnowledgeBase,
    gb: GrammarBase,
    words: list[Word],
    *,
    spaced: bool = False,
) -> SubsentenceParse:
    """Fast bottom-up parse: first matching (pattern, window) replaces its
    window and the pattern loop restarts from the first pattern; earlier
    patterns therefore dominate. Terminates because every merge removes at
    least one element."""
    if not words:
        raise ValueError("single_recursion_parse needs a non-empty word list")
    joiner = " " if spaced else ""
    patterns = gb.accepted_phrase_patterns()
    elements: list[Element] = list(words)
    progress = True
    while progress:
        progress = False
        for p in patterns:
            width = len(p.features)
            for start in range(len(elements) - width + 1):
                phrase = match_phrase_pattern(kb, p, elements, start, joiner)
                if phrase is not None:
                    elements[start : start + width] = [phrase]
                    progress = True
                    break
            if progress:
                break
    return _finish(gb, elements)


def _successors(
    kb: KnowledgeBase, patterns: list[PhrasePattern], elements: tuple, joiner: str
) -> list[tuple]:
    succs = []
    for p in patterns:
        width = len(p.features)
        for start in range(len(elements) - width + 1):
            phrase = match_phrase_pattern(kb, p, list(elements), start, joiner)
            if phrase is not None:
                succs.append(elements[:start] + (phrase,) + elements[start + width :])
    return succs


def _relation_violates_kb(kb: KnowledgeBase, rel: ExtractedRelation) -> bool:
    """A verb-object relation violates the knowledge base when its word pair
    resolves to (method, concept) in some orientation and no such pairing is
    applicable. Only dobj pairs are checked: a method's recorded objects say
    what it can act on, nothing about who performs it, so checking nsubj
    pairs this way would flag ordinary subjects. Pairs that do not resolve
    on both sides are never violations."""
    if rel.rel_type != "dobj":
        return False
    head_links = lookup_word(kb, rel.head)
    tail_links = lookup_word(kb, rel.tail)
    head_methods = [l.object_id for l in head_links if l.object_kind == "method"]
    head_concepts = [l.object_id for l in head_links if l.object_kind == "concept"]
    tail_methods = [l.object_id for l in tail_links if l.object_kind == "method"]
    tail_concepts = [l.object_id for l in tail_links if l.object_kind == "concept"]
    checks = [(m, c) for m in head_methods for c in tail_concepts]
    checks += [(m, c) for m in tail_methods for c in head_concepts]
    if not checks:
        return False
    return not any(method_applicable(kb, m, c) for m, c in checks)


def kb_conformance_violated(kb: KnowledgeBase, parse: SubsentenceParse) -> bool:
    return any(_relation_violates_kb(kb, rel) for rel in parse.relations)


def exhaustive_parse(
    kb: KnowledgeBase,
    gb: GrammarBase,
    words: list[Word],
    *,
    spaced: bool = False,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    max_derivations: int = DEFAULT_MAX_DERIVATIONS,
) -> list[SubsentenceParse]:
    """Enumerate every terminal state reachable by any replacement sequence.

    Depth-first search with memoization on element-sequence identity;
    terminal states (no pattern matches anywhere) are deduplicated by
    structure. Results are sorted best-first: parsed before unparsed,
    knowledge-base-conforming before violating, fewer elements first, then
    parse_str and structural key as tiebreaks.
    """
    if not words:
        raise ValueError("exhaustive_parse needs a non-empty word list")
    if len(words) > max_elements:
        raise ResourceLimitError(f"{len(words)} elements exceeds max_elements={max_elements}")
    joiner = " " if spaced else ""
    patterns = gb.accepted_phrase_patterns()
    initial = tuple(words)
    seen = {tuple(element_key(e) for e in initial)}
    terminals: dict[tuple, tuple] = {}
    stack = [initial]
    while stack:
        state = stack.pop()
        succs = _successors(kb, patterns, state, joiner)
        if not succs:
            terminals[tuple(element_key(e) for e in state)] = state
            if len(terminals) > max_derivations:
                raise ResourceLimitError(f"more than {max_derivations} terminal states")
            continue
        for succ in succs:
            key = tuple(element_key(e) for e in succ)
            if key not in seen:
                seen.add(key)
                if len(seen) > max_derivations:
                    raise ResourceLimitError(f"more than {max_derivations} explored states")
                stack.append(succ)

    results = []
    for key in terminals:
        parse = _finish(gb, list(terminals[key]))
        violated = kb_conformance_violated(kb, parse)
        results.append((parse.status != "parsed", violated, len(parse.elements), parse.parse_str, key, parse))
    results.sort(key=lambda r: r[:5])
    return [r[5] for r in results]


def _split_pretagged(words: list[Word]) -> list[tuple[list[Word], str | None]]:
    """Group pre-tagged tokens into subsentences at punctuation tokens."""
    groups: list[tuple[list[Word], str | None]] = []
    current: list[Word] = []
    for w in words:
        if w.pos == "PU" or w.value in DELIMITERS:
            if current:
                groups.append((current, w.value))
                current = []
        else:
            current.append(w)
    if current:
        groups.append((current, None))
    return groups


def parse_sentence(
    kb: KnowledgeBase,
    gb: GrammarBase,
    source: str | dict,
    mode: str = "fast",
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    max_derivations: int = DEFAULT_MAX_DERIVATIONS,
) -> SentenceParse:
    """Split, tokenize, and parse one sentence (raw text or pre-tagged
    corpus record). In exhaustive mode a subsentence over the search limits
    falls back to the fast parser with a logged notice."""
    if mode not in ("fast", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    groups: list[tuple[list[Word], str | None, bool]] = []
    if isinstance(source, dict):
        text = source.get("text", "")
        if "tokens" in source and source["tokens"] is not None:
            words = load_pretagged(source, kb)
            spaced = " " in text if text else True
            groups = [(g, d, spaced) for g, d in _split_pretagged(words)]
        else:
            source = text
    if isinstance(source, str):
        text = source
        for sub in split_subsentences(text):
            words = segment(kb, sub)
            if words:
                groups.append((words, sub.trailing_delimiter, " " in sub.text))

    subparses = []
    for words, delim, spaced in groups:
        if mode == "fast":
            sub = single_recursion_parse(kb, gb, words, spaced=spaced)
        else:
            try:
                sub = exhaustive_parse(
                    kb,
                    gb,
                    words,
                    spaced=spaced,
                    max_elements=max_elements,
                    max_derivations=max_derivations,
                )[0]
            except ResourceLimitError as exc:
                log.info("exhaustive parse fell back to fast mode: %s", exc)
                sub = single_recursion_parse(kb, gb, words, spaced=spaced)
        sub.trailing_delimiter = delim
        subparses.append(sub)

    parsed = sum(1 for s in subparses if s.status == "parsed")
    coverage = parsed / len(subparses) if subparses else 0.0
    return SentenceParse(text=text, subsentences=subparses, coverage=coverage)


def element_to_dict(e: Element) -> dict:
    return {"value": e.value, "pos": e.pos, "core_word": e.core}


def sentence_to_dict(sp: SentenceParse) -> dict:
    subs = []
    for s in sp.subsentences:
        subs.append(
            {
                "parse_str": s.parse_str,
                "status": s.status,
                "ss_type": s.matched_pattern.ss_type if s.matched_pattern else None,
                "ss_type2": s.matched_pattern.ss_type2 if s.matched_pattern else None,
                "elements": [element_to_dict(e) for e in s.elements],
                "relations": [
                    {
                        "type": r.rel_type,
                        "head": r.head,
                        "tail": r.tail,
                        "head_index": r.head_index,
                        "tail_index": r.tail_index,
                    }
                    for r in s.relations
                ],
            }
        )
    return {"text": sp.text, "subsentences": subs, "coverage": sp.coverage}


def sentence_to_json(sp: SentenceParse) -> str:
    return json.dumps(sentence_to_dict(sp), ensure_ascii=False, separators=(",", ":"))
