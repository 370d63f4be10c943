"""Rule mining over parse results, and application of reviewed candidates.

Five discovery procedures produce CandidateRule records for human review:

  concept_rule        shared prefix/suffix among a concept's member words
  new_concept         high-frequency fixed n-gram in unparsed subsentences
  concept_feature     distinct words flanking a frequent anchor word
  phrase_pattern      noun trigrams generalized through the concept
                      hierarchy, and high-frequency co-occurring pairs
  subsentence_pattern recurring parse_str among unparsed subsentences

Discovery never mutates the stores; apply_candidate does, once a reviewer
accepts. Every procedure is deterministic: identical inputs produce the
identical candidate list, order included.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass

from .candidates import EVIDENCE_CAP, CandidateRule, CandidateStore
from .config import Config
from .errors import DuplicateError, FormatError, IntegrityError, ValidationError
from .grammar import (
    Feature,
    GrammarBase,
    PhrasePattern,
    SubsentencePattern,
    add_phrase_pattern,
    add_subsentence_pattern,
    parse_meaning_string,
)
from .kb import (
    KnowledgeBase,
    LexiconRule,
    add_concept,
    add_lexicon_rule,
    add_relation,
    link_word,
    lookup_word,
)
from .parse import SentenceParse
from .tags import POS_TAGS


@dataclass(frozen=True)
class SubsentenceRecord:
    """One subsentence of a parse result, flattened for mining."""

    values: tuple[str, ...]
    poses: tuple[str, ...]
    cores: tuple[str, ...]
    parse_str: str
    status: str  # "parsed" | "unparsed"
    joiner: str  # "" or " "

    @property
    def text(self) -> str:
        return self.joiner.join(self.values)

    def window(self, start: int, stop: int) -> str:
        return self.joiner.join(self.values[start:stop])


def records_from_sentence(sp: SentenceParse) -> list[SubsentenceRecord]:
    joiner = " " if " " in sp.text else ""
    out = []
    for sub in sp.subsentences:
        out.append(
            SubsentenceRecord(
                values=tuple(e.value for e in sub.elements),
                poses=tuple(e.pos for e in sub.elements),
                cores=tuple(e.core for e in sub.elements),
                parse_str=sub.parse_str,
                status=sub.status,
                joiner=joiner,
            )
        )
    return out


def records_from_parse_file(path: str) -> list[SubsentenceRecord]:
    """Flatten a parse-output JSONL file into mining records."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: bad JSON: {exc}") from None
            joiner = " " if " " in obj.get("text", "") else ""
            for sub in obj.get("subsentences", []):
                elements = sub.get("elements", [])
                out.append(
                    SubsentenceRecord(
                        values=tuple(e["value"] for e in elements),
                        poses=tuple(e["pos"] for e in elements),
                        cores=tuple(e.get("core_word", e["value"]) for e in elements),
                        parse_str=sub["parse_str"],
                        status=sub["status"],
                        joiner=joiner,
                    )
                )
    return out


def _cap(evidence: list[str]) -> list[str]:
    return evidence[:EVIDENCE_CAP]


def _majority(counter: Counter) -> str:
    """Most common entry; ties go to the lexicographically smallest."""
    top = max(counter.values())
    return sorted(k for k, v in counter.items() if v == top)[0]


# ---------------------------------------------------------------------------
# 1. Concept formation rules: shared prefixes/suffixes among a concept's words


def _unit_chunk(surface: str, position: str, count: int, unit: str) -> str | None:
    """First/last `count` characters or tokens of a surface; None when the
    surface is too short to have one."""
    if unit == "char":
        if len(surface) < count:
            return None
        return surface[:count] if position == "prefix" else surface[-count:]
    tokens = surface.split(" ")
    if len(tokens) < count:
        return None
    picked = tokens[:count] if position == "prefix" else tokens[-count:]
    return " ".join(picked)


def _concept_members(kb: KnowledgeBase, concept_id: int) -> set[str]:
    """Surfaces linked to the concept itself or to its direct sub-concepts."""
    ids = {concept_id} | kb.children.get(concept_id, set())
    members = set()
    for surface, links in kb.words.items():
        for link in links:
            if link.object_kind == "concept" and link.object_id in ids:
                members.add(surface)
                break
    return members


def discover_concept_rules(
    kb: KnowledgeBase,
    min_coverage: float,
    min_precision: float,
    *,
    min_members: int = 3,
    unit: str = "token",
) -> list[CandidateRule]:
    """Find shared 1-2 unit prefixes/suffixes among each concept's member
    words. A rule is emitted when enough members share it (coverage) and
    the share is specific to the concept across the whole lexicon
    (precision)."""
    if not 0 < min_coverage <= 1 or not 0 < min_precision <= 1:
        raise ValidationError("thresholds must be in (0, 1]")
    if unit not in ("char", "token"):
        raise ValidationError(f"unknown unit {unit!r}")
    all_surfaces = sorted(kb.words)
    out = []
    for cid in sorted(kb.concepts):
        members = _concept_members(kb, cid)
        if len(members) < min_members:
            continue
        for position in ("prefix", "suffix"):
            for count in (1, 2):
                chunks = Counter()
                for m in members:
                    chunk = _unit_chunk(m, position, count, unit)
                    if chunk is not None:
                        chunks[chunk] += 1
                if not chunks:
                    continue
                chars = _majority(chunks)
                matching_members = sorted(
                    m for m in members if _unit_chunk(m, position, count, unit) == chars
                )
                coverage = len(matching_members) / len(members)
                matching_all = [
                    s for s in all_surfaces if _unit_chunk(s, position, count, unit) == chars
                ]
                precision = len(matching_members) / len(matching_all) if matching_all else 0.0
                if coverage < min_coverage or precision < min_precision:
                    continue
                pos_votes = Counter()
                for m in matching_members:
                    for link in kb.words[m]:
                        pos_votes[link.pos] += 1
                out.append(
                    CandidateRule(
                        id=0,
                        kind="concept_rule",
                        payload={
                            "position": position,
                            "char_count": count,
                            "chars": chars,
                            "concept_id": cid,
                            "coverage_ratio": coverage,
                            "precision_ratio": precision,
                            "pos": _majority(pos_votes) if pos_votes else "NN",
                            "unit": unit,
                        },
                        support=len(matching_members),
                        confidence=precision,
                        evidence=_cap(matching_members),
                    )
                )
    return out


# ---------------------------------------------------------------------------
# 2. New concepts: fixed n-grams in unparsed subsentences


def discover_new_concepts(
    kb: KnowledgeBase,
    unparsed: list[SubsentenceRecord],
    min_freq: int,
    max_n: int = 3,
    *,
    cohesion: float = 0.5,
) -> list[CandidateRule]:
    """Contiguous n-grams that recur in unparsed subsentences, are not
    already lexicon surfaces, and stick to their constituents (n-gram count
    relative to its most frequent constituent word)."""
    if min_freq < 2:
        raise ValidationError("min_freq must be >= 2")
    word_counts = Counter()
    for r in unparsed:
        word_counts.update(r.values)
    grams: dict[tuple, int] = defaultdict(int)
    evidence: dict[tuple, list[str]] = defaultdict(list)
    sources: dict[tuple, set[int]] = defaultdict(set)
    for idx, r in enumerate(unparsed):
        for n in range(2, max_n + 1):
            for i in range(len(r.values) - n + 1):
                key = (r.joiner,) + r.values[i : i + n]
                grams[key] += 1
                evidence[key].append(r.text)
                sources[key].add(idx)
    out = []
    for key, count in grams.items():
        if count < min_freq:
            continue
        joiner, tokens = key[0], key[1:]
        surface = joiner.join(tokens)
        if surface in kb.words:
            continue
        top_constituent = max(word_counts[t] for t in tokens)
        ratio = count / top_constituent
        if ratio < cohesion:
            continue
        out.append(
            CandidateRule(
                id=0,
                kind="new_concept",
                payload={"surface": surface, "tokens": list(tokens), "joiner": joiner, "n": len(tokens)},
                support=count,
                confidence=ratio,
                evidence=_cap(evidence[key]),
                sources=frozenset(sources[key]),
            )
        )
    out.sort(key=lambda c: (-c.support, c.payload["surface"]))
    return out


# ---------------------------------------------------------------------------
# 3. New concept features: words flanking a frequent anchor


def discover_concept_features(
    unparsed: list[SubsentenceRecord], min_freq: int
) -> list[CandidateRule]:
    """For each high-frequency word, group the distinct words appearing
    immediately before (or after) it into a proposed concept, paired with a
    phrase pattern [concept, anchor] (or [anchor, concept])."""
    if min_freq < 2:
        raise ValidationError("min_freq must be >= 2")
    counts = Counter()
    for r in unparsed:
        counts.update(r.values)
    anchors = sorted(w for w, c in counts.items() if c >= min_freq)
    out = []
    for anchor in anchors:
        for side in ("before", "after"):
            neighbor_counts = Counter()
            neighbor_pos = defaultdict(Counter)
            anchor_pos = Counter()
            windows = []
            srcs = set()
            for idx, r in enumerate(unparsed):
                for i, v in enumerate(r.values):
                    if v != anchor:
                        continue
                    j = i - 1 if side == "before" else i + 1
                    if not 0 <= j < len(r.values):
                        continue
                    neighbor = r.values[j]
                    neighbor_counts[neighbor] += 1
                    neighbor_pos[neighbor][r.poses[j]] += 1
                    anchor_pos[r.poses[i]] += 1
                    windows.append(r.window(min(i, j), max(i, j) + 1))
                    srcs.add(idx)
            if len(neighbor_counts) < 2:
                continue
            members = sorted(neighbor_counts)
            a_pos = _majority(anchor_pos)
            member_pos = {m: _majority(neighbor_pos[m]) for m in members}
            # Head-final default: the merged phrase takes the pos of its
            # last element and the core word is that element.
            if side == "before":
                pattern_pos = a_pos
            else:
                combined = Counter()
                for m in members:
                    combined.update(neighbor_pos[m])
                pattern_pos = _majority(combined)
            out.append(
                CandidateRule(
                    id=0,
                    kind="concept_feature",
                    payload={
                        "anchor": anchor,
                        "side": side,
                        "members": members,
                        "anchor_pos": a_pos,
                        "member_pos": member_pos,
                        "pattern_pos": pattern_pos,
                        "name": f"{anchor}_{side}_group",
                    },
                    support=sum(neighbor_counts.values()),
                    confidence=None,
                    evidence=_cap(windows),
                    sources=frozenset(srcs),
                )
            )
    out.sort(key=lambda c: (-c.support, c.payload["anchor"], c.payload["side"]))
    return out


# ---------------------------------------------------------------------------
# 4. New phrase patterns: generalized noun trigrams and co-occurring pairs


def _generalizations(kb: KnowledgeBase, word: str, max_levels: int) -> list[tuple]:
    """The word itself plus every concept reachable from its concept links
    within max_levels belongs_to steps (the linked concepts count as step 0)."""
    concepts: set[int] = set()
    frontier = {l.object_id for l in lookup_word(kb, word) if l.object_kind == "concept"}
    for _ in range(max_levels + 1):
        new = frontier - concepts
        if not new:
            break
        concepts |= new
        frontier = {p for cid in new for p in kb.parents.get(cid, ())}
    gens: list[tuple] = [("word", word)]
    gens.extend(("concept", cid) for cid in sorted(concepts))
    return gens


def _slot_more_general(kb: KnowledgeBase, a: tuple, b: tuple) -> bool:
    """True iff slot a is at least as general as slot b."""
    if a == b:
        return True
    if a[0] != "concept":
        return False
    if b[0] == "word":
        return any(
            l.object_kind == "concept"
            and (l.object_id == a[1] or _is_ancestor(kb, a[1], l.object_id))
            for l in lookup_word(kb, b[1])
        )
    return _is_ancestor(kb, a[1], b[1])


def _is_ancestor(kb: KnowledgeBase, ancestor: int, child: int) -> bool:
    from .kb import is_descendant

    if ancestor not in kb.concepts or child not in kb.concepts:
        return False
    return is_descendant(kb, child, ancestor)


def _combo_more_general(kb: KnowledgeBase, a: tuple, b: tuple) -> bool:
    return all(_slot_more_general(kb, sa, sb) for sa, sb in zip(a, b))


def discover_phrase_patterns_trigram(
    kb: KnowledgeBase,
    records: list[SubsentenceRecord],
    min_freq: int,
    *,
    max_levels: int = 3,
) -> list[CandidateRule]:
    """Count all-noun element trigrams under every word/concept
    generalization of each slot; keep combinations that recur, preferring
    the least general combination covering a given occurrence set (a
    generalization must buy new occurrences to displace its specializations).
    """
    if min_freq < 2:
        raise ValidationError("min_freq must be >= 2")
    occurrences: dict[tuple, set[tuple]] = defaultdict(set)
    windows: dict[tuple, list[str]] = defaultdict(list)
    sources: dict[tuple, set[int]] = defaultdict(set)
    gen_cache: dict[str, list[tuple]] = {}
    for idx, r in enumerate(records):
        for i in range(len(r.values) - 2):
            if r.poses[i] != "NN" or r.poses[i + 1] != "NN" or r.poses[i + 2] != "NN":
                continue
            slot_gens = []
            for k in range(3):
                core = r.cores[i + k]
                if core not in gen_cache:
                    gen_cache[core] = _generalizations(kb, core, max_levels)
                slot_gens.append(gen_cache[core])
            for g0 in slot_gens[0]:
                for g1 in slot_gens[1]:
                    for g2 in slot_gens[2]:
                        combo = (g0, g1, g2)
                        occurrences[combo].add((idx, i))
                        windows[combo].append(r.window(i, i + 3))
                        sources[combo].add(idx)

    frequent = {c: occs for c, occs in occurrences.items() if len(occs) >= min_freq}
    # Group combos covering the same occurrences; keep the least general.
    by_occset: dict[frozenset, list[tuple]] = defaultdict(list)
    for combo, occs in frequent.items():
        by_occset[frozenset(occs)].append(combo)
    kept = []
    for occset, combos in by_occset.items():
        for combo in combos:
            dominated = any(
                other != combo
                and _combo_more_general(kb, combo, other)
                for other in combos
            )
            if not dominated:
                kept.append((combo, len(occset)))

    out = []
    for combo, support in kept:
        features = [{"kind": k, "value": v} for k, v in combo]
        out.append(
            CandidateRule(
                id=0,
                kind="phrase_pattern",
                payload={"features": features, "core_word_index": 2, "pos_tag": "NN"},
                support=support,
                confidence=None,
                evidence=_cap(sorted(set(windows[combo]))),
                sources=frozenset(sources[combo]),
            )
        )
    out.sort(key=lambda c: (-c.support, json.dumps(c.payload["features"])))
    return out


def discover_phrase_patterns_cooccur(
    unparsed: list[SubsentenceRecord], min_freq: int, window: int = 2
) -> list[CandidateRule]:
    """Pairs of words co-occurring near a high-frequency word in unparsed
    subsentences; proposed as a two-word phrase pattern in the dominant
    observed order."""
    if min_freq < 2:
        raise ValidationError("min_freq must be >= 2")
    if not 1 <= window <= 3:
        raise ValidationError("window must be in 1..3")
    counts = Counter()
    for r in unparsed:
        counts.update(r.values)
    hf = {w for w, c in counts.items() if c >= min_freq}
    ordered: dict[tuple, int] = Counter()
    first_seen: dict[frozenset, tuple] = {}
    pos_of = defaultdict(Counter)
    windows: dict[frozenset, list[str]] = defaultdict(list)
    srcs: dict[frozenset, set[int]] = defaultdict(set)
    for idx, r in enumerate(unparsed):
        for i in range(len(r.values)):
            for j in range(i + 1, min(i + window + 1, len(r.values))):
                a, b = r.values[i], r.values[j]
                if a not in hf and b not in hf:
                    continue
                ordered[(a, b)] += 1
                pair = frozenset((a, b)) if a != b else frozenset((a,))
                if pair not in first_seen:
                    first_seen[pair] = (a, b)
                windows[pair].append(r.window(i, j + 1))
                srcs[pair].add(idx)
                pos_of[a][r.poses[i]] += 1
                pos_of[b][r.poses[j]] += 1
    out = []
    for pair, first in first_seen.items():
        a, b = first
        joint = ordered[(a, b)] + (ordered[(b, a)] if a != b else 0)
        if joint < min_freq:
            continue
        if a != b and ordered[(b, a)] > ordered[(a, b)]:
            a, b = b, a
        out.append(
            CandidateRule(
                id=0,
                kind="phrase_pattern",
                payload={
                    "features": [
                        {"kind": "word", "value": a},
                        {"kind": "word", "value": b},
                    ],
                    "core_word_index": 1,
                    "pos_tag": _majority(pos_of[b]),
                },
                support=joint,
                confidence=None,
                evidence=_cap(windows[pair]),
                sources=frozenset(srcs[pair]),
            )
        )
    out.sort(key=lambda c: (-c.support, json.dumps(c.payload["features"])))
    return out


# ---------------------------------------------------------------------------
# 5. New subsentence patterns: recurring parse_str among unparsed


def discover_subsentence_patterns(
    unparsed: list[SubsentenceRecord],
    min_freq: int,
    accepted_parse_strs: frozenset = frozenset(),
) -> list[CandidateRule]:
    """Group unparsed subsentences by parse_str. The meaning is left empty:
    the reviewer supplies relation assignments at accept time."""
    if min_freq < 2:
        raise ValidationError("min_freq must be >= 2")
    groups: dict[str, list[int]] = defaultdict(list)
    for idx, r in enumerate(unparsed):
        groups[r.parse_str].append(idx)
    out = []
    for parse_str in sorted(groups):
        idxs = groups[parse_str]
        if len(idxs) < min_freq or parse_str in accepted_parse_strs or not parse_str:
            continue
        comps = parse_str.split("|")
        out.append(
            CandidateRule(
                id=0,
                kind="subsentence_pattern",
                payload={
                    "parse_str": parse_str,
                    "ss_type": "phrase" if len(comps) == 1 else "sentence",
                    "ss_type2": "q" if "QA" in comps else "d",
                    "meaning": "",
                },
                support=len(idxs),
                confidence=None,
                evidence=_cap([unparsed[i].text for i in idxs]),
                sources=frozenset(idxs),
            )
        )
    out.sort(key=lambda c: (-c.support, c.payload["parse_str"]))
    return out


# ---------------------------------------------------------------------------
# Driver and candidate application


def learn_all(
    kb: KnowledgeBase,
    gb: GrammarBase,
    records: list[SubsentenceRecord],
    config: Config,
    store: CandidateStore,
    created_at: int,
) -> dict[str, int]:
    """Run every enabled discovery procedure, cross-reference overlapping
    candidates, and append novel ones to the store. Returns per-kind counts
    of discovered candidates (before store-level deduplication)."""
    unparsed = [r for r in records if r.status == "unparsed"]
    discovered: list[CandidateRule] = []
    counts = {k: 0 for k in ("concept_rule", "new_concept", "concept_feature",
                             "phrase_pattern", "subsentence_pattern")}

    if config.enable_concept_rules:
        found = discover_concept_rules(
            kb,
            config.min_coverage,
            config.min_precision,
            min_members=config.min_members,
            unit=config.concept_rule_unit,
        )
        counts["concept_rule"] += len(found)
        discovered.extend(found)
    if config.enable_new_concepts:
        found = discover_new_concepts(
            kb, unparsed, config.min_freq, config.max_n, cohesion=config.cohesion
        )
        counts["new_concept"] += len(found)
        discovered.extend(found)
    concept_features: list[CandidateRule] = []
    if config.enable_concept_features:
        concept_features = discover_concept_features(unparsed, config.min_freq)
        counts["concept_feature"] += len(concept_features)
        discovered.extend(concept_features)
    if config.enable_phrase_trigram:
        found = discover_phrase_patterns_trigram(
            kb, records, config.min_freq, max_levels=config.generalization_levels
        )
        counts["phrase_pattern"] += len(found)
        discovered.extend(found)
    if config.enable_phrase_cooccur:
        found = discover_phrase_patterns_cooccur(unparsed, config.min_freq, config.window)
        counts["phrase_pattern"] += len(found)
        discovered.extend(found)
    subsentence_cands: list[CandidateRule] = []
    if config.enable_subsentence:
        subsentence_cands = discover_subsentence_patterns(
            unparsed, config.min_freq, frozenset(gb.accepted_parse_strs())
        )
        counts["subsentence_pattern"] += len(subsentence_cands)
        discovered.extend(subsentence_cands)

    store.add_new(discovered, created_at)

    # Most recurring unparsed structures are really an unrecognized concept
    # feature; link the two candidate kinds when they share evidence.
    by_identity = {c.identity(): c for c in store.candidates}
    for ss in subsentence_cands:
        stored = by_identity.get(ss.identity())
        if stored is None:
            continue
        related = sorted(
            by_identity[cf.identity()].id
            for cf in concept_features
            if cf.sources & ss.sources and cf.identity() in by_identity
        )
        if related:
            stored.related_ids = related
    return counts


def _features_from_payload(raw: list[dict]) -> list[Feature]:
    features = []
    for f in raw:
        if f["kind"] == "concept":
            features.append(Feature("concept", int(f["value"])))
        else:
            features.append(Feature(f["kind"], f["value"]))
    return features


def _apply_accept(kb: KnowledgeBase, gb: GrammarBase, cand: CandidateRule, meaning: str | None) -> None:
    payload = cand.payload
    if cand.kind == "concept_rule":
        add_lexicon_rule(
            kb,
            LexiconRule(
                position=payload["position"],
                chars=payload["chars"],
                concept_id=int(payload["concept_id"]),
                pos=payload.get("pos", "NN"),
            ),
        )
    elif cand.kind == "new_concept":
        surface = payload["surface"]
        if not surface:
            raise ValidationError("new_concept: empty surface")
        cid = add_concept(kb, surface)
        link_word(kb, surface, cid, "concept", "NN")
    elif cand.kind == "concept_feature":
        anchor = payload["anchor"]
        members = list(payload["members"])
        pattern_pos = payload.get("pattern_pos", "NN")
        member_pos = payload.get("member_pos", {})
        if not anchor or not members:
            raise ValidationError("concept_feature: anchor and members required")
        if pattern_pos not in POS_TAGS:
            raise ValidationError(f"concept_feature: unknown pattern pos {pattern_pos!r}")
        for m in members:
            if member_pos.get(m, "NN") not in POS_TAGS:
                raise ValidationError(f"concept_feature: unknown member pos for {m!r}")
        group_id = add_concept(kb, payload.get("name", f"{anchor}_group"))
        for m in members:
            concept_links = [l for l in lookup_word(kb, m) if l.object_kind == "concept"]
            if concept_links:
                member_id = concept_links[0].object_id
            else:
                member_id = add_concept(kb, m)
                link_word(kb, m, member_id, "concept", member_pos.get(m, "NN"))
            add_relation(kb, member_id, group_id)
        if payload["side"] == "before":
            features = [Feature("concept", group_id), Feature("word", anchor)]
        else:
            features = [Feature("word", anchor), Feature("concept", group_id)]
        add_phrase_pattern(gb, kb, PhrasePattern(None, features, 1, pattern_pos))
    elif cand.kind == "phrase_pattern":
        features = _features_from_payload(payload["features"])
        cwi = payload.get("core_word_index")
        add_phrase_pattern(
            gb, kb, PhrasePattern(None, features, cwi, payload["pos_tag"])
        )
    elif cand.kind == "subsentence_pattern":
        meaning_str = meaning if meaning is not None else payload.get("meaning", "")
        if not meaning_str:
            raise ValidationError("subsentence_pattern: meaning required at accept time")
        specs = parse_meaning_string(meaning_str)
        sp = SubsentencePattern(
            parse_str=payload["parse_str"],
            ss_type=payload["ss_type"],
            ss_type2=payload["ss_type2"],
            meaning=specs,
        )
        add_subsentence_pattern(gb, sp)
        payload["meaning"] = meaning_str
    else:
        raise ValidationError(f"unknown candidate kind {cand.kind!r}")


def apply_candidate(
    kb: KnowledgeBase,
    gb: GrammarBase,
    cand: CandidateRule,
    decision: str,
    meaning: str | None = None,
) -> bool:
    """Apply a reviewer decision to a pending candidate.

    Reject never touches the stores. Accept routes the payload into the
    right store; a validation failure leaves the candidate pending with an
    error note and the stores unchanged. Returns True when the decision
    took effect.
    """
    if cand.status != "pending":
        raise ValidationError(f"candidate {cand.id} is not pending (status={cand.status})")
    if decision not in ("accept", "reject"):
        raise ValidationError(f"unknown decision {decision!r}")
    if decision == "reject":
        cand.status = "rejected"
        cand.decision = None
        return True
    try:
        _apply_accept(kb, gb, cand, meaning)
    except (ValidationError, DuplicateError, IntegrityError, FormatError) as exc:
        cand.error_note = str(exc)
        return False
    cand.status = "accepted"
    cand.error_note = None
    cand.decision = None
    return True


def apply_queued_decisions(kb: KnowledgeBase, gb: GrammarBase, store: CandidateStore) -> int:
    """Apply decisions queued on pending candidates (the file-review path);
    returns how many decisions took effect."""
    applied = 0
    for cand in store.candidates:
        if cand.status == "pending" and cand.decision in ("accept", "reject"):
            meaning = cand.payload.get("meaning") or None
            if apply_candidate(kb, gb, cand, cand.decision, meaning=meaning):
                applied += 1
    return applied
