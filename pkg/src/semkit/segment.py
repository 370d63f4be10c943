"""Subsentence splitting and tokenization.

Raw text is first split into subsentences at punctuation. Each subsentence
is then tokenized into Words: space-separated text is split on spaces and
tagged via lexicon lookup, unspaced text is segmented by greedy
longest-match against the lexicon surfaces. Tokens not in the lexicon get
pos UNK (or a provisional concept link when an accepted lexicon rule
matches their shape); segmentation never fails.

Pre-tagged corpus records bypass tagging entirely: the corpus format is one
JSON object per line, {"text": ..., "tokens": [{"w": ..., "pos": ...}]},
with the tokens array optional.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError
from .kb import KnowledgeBase, lookup_word, match_lexicon_rule
from .tags import DELIMITERS, POS_TAGS


@dataclass(frozen=True)
class SubsentenceText:
    text: str
    trailing_delimiter: str | None = None


@dataclass(frozen=True)
class Word:
    value: str
    pos: str
    object_ids: tuple[int, ...] = ()

    @property
    def core(self) -> str:
        return self.value


def split_subsentences(text: str, delimiters: frozenset[str] = DELIMITERS) -> list[SubsentenceText]:
    """Split text at delimiter characters; pieces are trimmed and empty
    pieces dropped (together with their delimiter)."""
    out = []
    buf: list[str] = []
    for ch in text:
        if ch in delimiters:
            piece = "".join(buf).strip()
            if piece:
                out.append(SubsentenceText(piece, ch))
            buf.clear()
        else:
            buf.append(ch)
    piece = "".join(buf).strip()
    if piece:
        out.append(SubsentenceText(piece, None))
    return out


def _tag_surface(kb: KnowledgeBase, surface: str) -> Word:
    links = lookup_word(kb, surface)
    if links:
        return Word(surface, links[0].pos, tuple(l.object_id for l in links))
    rule = match_lexicon_rule(kb, surface)
    if rule is not None:
        return Word(surface, rule.pos, (rule.concept_id,))
    return Word(surface, "UNK")


def segment(kb: KnowledgeBase, text: str | SubsentenceText) -> list[Word]:
    """Tokenize one subsentence.

    Text containing ASCII spaces is split on whitespace and each token
    looked up directly. Unspaced text is segmented greedily: at each
    position the longest lexicon surface wins; with no match a
    single-character UNK word is emitted and the scan advances one
    character, so no input character is ever lost.
    """
    if isinstance(text, SubsentenceText):
        text = text.text
    if not text:
        return []
    if " " in text:
        return [_tag_surface(kb, token) for token in text.split()]
    words = []
    i = 0
    n = len(text)
    max_len = max(kb.max_surface_len, 1)
    while i < n:
        matched = None
        for length in range(min(max_len, n - i), 0, -1):
            candidate = text[i : i + length]
            if candidate in kb.words:
                matched = candidate
                break
        if matched is None:
            words.append(_tag_surface(kb, text[i]))
            i += 1
        else:
            words.append(_tag_surface(kb, matched))
            i += len(matched)
    return words


def load_pretagged(record: dict, kb: KnowledgeBase) -> list[Word]:
    """Build Words from a pre-tagged corpus record's tokens array.

    Tags must come from the closed tag set; object ids are still resolved
    through the lexicon so concept features can match pre-tagged input.
    """
    tokens = record["tokens"]
    words = []
    for i, tok in enumerate(tokens):
        if not isinstance(tok, dict) or "w" not in tok or "pos" not in tok:
            raise FormatError(f"token {i}: expected an object with 'w' and 'pos'")
        value, pos = tok["w"], tok["pos"]
        if not value:
            raise FormatError(f"token {i}: empty surface")
        if pos not in POS_TAGS:
            raise FormatError(f"token {i}: unknown pos tag {pos!r}")
        links = lookup_word(kb, value)
        if links:
            ids = tuple(l.object_id for l in links)
        else:
            rule = match_lexicon_rule(kb, value)
            ids = (rule.concept_id,) if rule is not None else ()
        words.append(Word(value, pos, ids))
    return words
