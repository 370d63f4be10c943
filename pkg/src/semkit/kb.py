"""Object-linked knowledge base: concepts, methods, word links, and the
belongs_to hierarchy.

Everything in the store is an object with a numeric id. Concepts and
methods live in separate id spaces (a concept and a method may share the
same number). Words map surfaces to object ids many-to-many; they are the
only interface between raw text and the store. The single relation type,
belongs_to, induces the concept hierarchy used by descendant queries and
method inheritance.

A loaded KnowledgeBase is treated as an immutable snapshot: queries are
pure and thread-safe. Mutations require exclusive access and invalidate
internal caches.

On-disk layout (directory of TSV files, see the tsv module for escaping):

    concepts.tsv   id, name, properties, methods, method_exclusions
    methods.tsv    id, name, objects, code
    words.tsv      surface, object_id, object_kind, pos
    relations.tsv  head_id, tail_id, rel_type

plus an optional lexicon_rules.tsv (position, chars, concept_id, pos) that
holds accepted surface-shape rules consulted when tagging unknown words.
"""

from __future__ import annotations

import os
from bisect import insort
from dataclasses import dataclass, field

from .errors import DuplicateError, IntegrityError, ValidationError
from .tags import POS_TAGS
from .tsv import escape_field, join_ids, parse_id_list, read_tsv, unescape_field, write_tsv

REL_BELONGS_TO = "belongs_to"

CONCEPTS_FILE = "concepts.tsv"
METHODS_FILE = "methods.tsv"
WORDS_FILE = "words.tsv"
RELATIONS_FILE = "relations.tsv"
LEXICON_RULES_FILE = "lexicon_rules.tsv"

_CONCEPT_HEADER = ["id", "name", "properties", "methods", "method_exclusions"]
_METHOD_HEADER = ["id", "name", "objects", "code"]
_WORD_HEADER = ["surface", "object_id", "object_kind", "pos"]
_RELATION_HEADER = ["head_id", "tail_id", "rel_type"]
_RULE_HEADER = ["position", "chars", "concept_id", "pos"]


@dataclass
class Concept:
    id: int
    name: str
    properties: set[int] = field(default_factory=set)
    methods: set[int] = field(default_factory=set)
    method_exclusions: set[int] = field(default_factory=set)


@dataclass
class Method:
    id: int
    name: str
    objects: set[int] = field(default_factory=set)
    code: str = ""  # stored verbatim, never executed


@dataclass(frozen=True, order=True)
class WordLink:
    surface: str
    object_id: int
    object_kind: str  # "concept" | "method"
    pos: str

    def sort_key(self):
        return (self.object_kind, self.object_id, self.pos)


@dataclass(frozen=True, order=True)
class LexiconRule:
    """Surface-shape rule: unknown words with the given prefix/suffix get a
    provisional link to concept_id."""

    position: str  # "prefix" | "suffix"
    chars: str
    concept_id: int
    pos: str

    def matches(self, surface: str) -> bool:
        if self.position == "prefix":
            return surface.startswith(self.chars)
        return surface.endswith(self.chars)


class KnowledgeBase:
    def __init__(self):
        self.concepts: dict[int, Concept] = {}
        self.methods: dict[int, Method] = {}
        self.words: dict[str, list[WordLink]] = {}
        self.parents: dict[int, set[int]] = {}  # child -> belongs_to targets
        self.children: dict[int, set[int]] = {}
        self.lexicon_rules: list[LexiconRule] = []
        self._desc_cache: dict[tuple[int, int], bool] = {}
        self.max_surface_len = 0

    def __eq__(self, other):
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return (
            self.concepts == other.concepts
            and self.methods == other.methods
            and self.words == other.words
            and self.relations() == other.relations()
            and sorted(self.lexicon_rules) == sorted(other.lexicon_rules)
        )

    def relations(self) -> list[tuple[int, int]]:
        return sorted((h, t) for h, tails in self.parents.items() for t in tails)

    def counts(self) -> dict[str, int]:
        return {
            "concepts": len(self.concepts),
            "methods": len(self.methods),
            "words": sum(len(v) for v in self.words.values()),
            "relations": len(self.relations()),
        }

    def invalidate_caches(self) -> None:
        self._desc_cache.clear()


def _require_concept(kb: KnowledgeBase, cid: int, context: str) -> Concept:
    concept = kb.concepts.get(cid)
    if concept is None:
        raise IntegrityError(f"{context}: unknown concept id {cid}")
    return concept


def _require_method(kb: KnowledgeBase, mid: int, context: str) -> Method:
    method = kb.methods.get(mid)
    if method is None:
        raise IntegrityError(f"{context}: unknown method id {mid}")
    return method


def load_kb(path: str) -> KnowledgeBase:
    """Load and index a knowledge base from a directory of TSV files.

    Integrity violations name the offending file and line.
    """
    kb = KnowledgeBase()
    concept_rows: list[tuple[int, Concept]] = []
    method_rows: list[tuple[int, Method]] = []

    cpath = os.path.join(path, CONCEPTS_FILE)
    for lineno, f in read_tsv(cpath, _CONCEPT_HEADER):
        cid = _parse_int(f[0], cpath, lineno)
        if cid in kb.concepts:
            raise IntegrityError(f"{cpath}:{lineno}: duplicate concept id {cid}")
        concept = Concept(
            id=cid,
            name=unescape_field(f[1]),
            properties=set(parse_id_list(f[2], cpath, lineno)),
            methods=set(parse_id_list(f[3], cpath, lineno)),
            method_exclusions=set(parse_id_list(f[4], cpath, lineno)),
        )
        kb.concepts[cid] = concept
        concept_rows.append((lineno, concept))

    mpath = os.path.join(path, METHODS_FILE)
    for lineno, f in read_tsv(mpath, _METHOD_HEADER):
        mid = _parse_int(f[0], mpath, lineno)
        if mid in kb.methods:
            raise IntegrityError(f"{mpath}:{lineno}: duplicate method id {mid}")
        method = Method(
            id=mid,
            name=unescape_field(f[1]),
            objects=set(parse_id_list(f[2], mpath, lineno)),
            code=unescape_field(f[3]),
        )
        kb.methods[mid] = method
        method_rows.append((lineno, method))

    # Cross-table references can only be checked once both tables are read.
    for lineno, concept in concept_rows:
        for pid in concept.properties:
            if pid not in kb.concepts:
                raise IntegrityError(f"{cpath}:{lineno}: property id {pid} does not resolve")
        for mid in concept.methods:
            if mid not in kb.methods:
                raise IntegrityError(f"{cpath}:{lineno}: method id {mid} does not resolve")
        for mid in concept.method_exclusions:
            if mid not in kb.methods:
                raise IntegrityError(f"{cpath}:{lineno}: excluded method id {mid} does not resolve")
        overlap = concept.methods & concept.method_exclusions
        if overlap:
            raise IntegrityError(
                f"{cpath}:{lineno}: methods also listed in method_exclusions: {sorted(overlap)}"
            )
    for lineno, method in method_rows:
        for cid in method.objects:
            if cid not in kb.concepts:
                raise IntegrityError(f"{mpath}:{lineno}: object concept id {cid} does not resolve")

    wpath = os.path.join(path, WORDS_FILE)
    seen_links = set()
    for lineno, f in read_tsv(wpath, _WORD_HEADER):
        surface = unescape_field(f[0])
        oid = _parse_int(f[1], wpath, lineno)
        kind = f[2]
        pos = f[3]
        if not surface:
            raise IntegrityError(f"{wpath}:{lineno}: empty surface")
        if kind not in ("concept", "method"):
            raise IntegrityError(f"{wpath}:{lineno}: bad object_kind {kind!r}")
        if pos not in POS_TAGS:
            raise IntegrityError(f"{wpath}:{lineno}: unknown pos tag {pos!r}")
        table = kb.concepts if kind == "concept" else kb.methods
        if oid not in table:
            raise IntegrityError(f"{wpath}:{lineno}: {kind} id {oid} does not resolve")
        key = (surface, oid, pos)
        if key in seen_links:
            raise IntegrityError(f"{wpath}:{lineno}: duplicate link {key}")
        seen_links.add(key)
        kb.words.setdefault(surface, []).append(WordLink(surface, oid, kind, pos))

    for links in kb.words.values():
        links.sort(key=WordLink.sort_key)
    if kb.words:
        kb.max_surface_len = max(len(s) for s in kb.words)

    rpath = os.path.join(path, RELATIONS_FILE)
    for lineno, f in read_tsv(rpath, _RELATION_HEADER):
        head = _parse_int(f[0], rpath, lineno)
        tail = _parse_int(f[1], rpath, lineno)
        if f[2] != REL_BELONGS_TO:
            raise IntegrityError(f"{rpath}:{lineno}: unsupported rel_type {f[2]!r}")
        for cid in (head, tail):
            if cid not in kb.concepts:
                raise IntegrityError(f"{rpath}:{lineno}: concept id {cid} does not resolve")
        kb.parents.setdefault(head, set()).add(tail)
        kb.children.setdefault(tail, set()).add(head)

    lpath = os.path.join(path, LEXICON_RULES_FILE)
    if os.path.isfile(lpath):
        for lineno, f in read_tsv(lpath, _RULE_HEADER):
            position = f[0]
            if position not in ("prefix", "suffix"):
                raise IntegrityError(f"{lpath}:{lineno}: bad position {position!r}")
            cid = _parse_int(f[2], lpath, lineno)
            if cid not in kb.concepts:
                raise IntegrityError(f"{lpath}:{lineno}: concept id {cid} does not resolve")
            if f[3] not in POS_TAGS:
                raise IntegrityError(f"{lpath}:{lineno}: unknown pos tag {f[3]!r}")
            kb.lexicon_rules.append(LexiconRule(position, unescape_field(f[1]), cid, f[3]))
        kb.lexicon_rules.sort()

    return kb


def _parse_int(s: str, path: str, lineno: int) -> int:
    try:
        value = int(s)
    except ValueError:
        raise IntegrityError(f"{path}:{lineno}: bad id {s!r}") from None
    if value < 0:
        raise IntegrityError(f"{path}:{lineno}: negative id {value}")
    return value


def save_kb(kb: KnowledgeBase, path: str) -> None:
    """Write the store back to a directory; output is byte-deterministic."""
    os.makedirs(path, exist_ok=True)
    write_tsv(
        os.path.join(path, CONCEPTS_FILE),
        _CONCEPT_HEADER,
        (
            [
                str(c.id),
                escape_field(c.name),
                join_ids(c.properties),
                join_ids(c.methods),
                join_ids(c.method_exclusions),
            ]
            for c in sorted(kb.concepts.values(), key=lambda c: c.id)
        ),
    )
    write_tsv(
        os.path.join(path, METHODS_FILE),
        _METHOD_HEADER,
        (
            [str(m.id), escape_field(m.name), join_ids(m.objects), escape_field(m.code)]
            for m in sorted(kb.methods.values(), key=lambda m: m.id)
        ),
    )
    all_links = sorted(
        (link for links in kb.words.values() for link in links),
        key=lambda l: (l.surface, l.object_id, l.object_kind, l.pos),
    )
    write_tsv(
        os.path.join(path, WORDS_FILE),
        _WORD_HEADER,
        ([escape_field(l.surface), str(l.object_id), l.object_kind, l.pos] for l in all_links),
    )
    write_tsv(
        os.path.join(path, RELATIONS_FILE),
        _RELATION_HEADER,
        ([str(h), str(t), REL_BELONGS_TO] for h, t in kb.relations()),
    )
    rules_path = os.path.join(path, LEXICON_RULES_FILE)
    if kb.lexicon_rules:
        write_tsv(
            rules_path,
            _RULE_HEADER,
            (
                [r.position, escape_field(r.chars), str(r.concept_id), r.pos]
                for r in sorted(kb.lexicon_rules)
            ),
        )
    elif os.path.exists(rules_path):
        os.unlink(rules_path)


def lookup_word(kb: KnowledgeBase, surface: str) -> list[WordLink]:
    """All links for an exact surface, sorted by (object_kind, object_id, pos)."""
    return list(kb.words.get(surface, ()))


def is_descendant(kb: KnowledgeBase, child: int, ancestor: int) -> bool:
    """True iff child == ancestor or a belongs_to path leads from child to
    ancestor. Cycle-safe."""
    _require_concept(kb, child, "is_descendant")
    _require_concept(kb, ancestor, "is_descendant")
    if child == ancestor:
        return True
    cached = kb._desc_cache.get((child, ancestor))
    if cached is not None:
        return cached
    seen = {child}
    stack = [child]
    found = False
    while stack:
        node = stack.pop()
        for parent in kb.parents.get(node, ()):
            if parent == ancestor:
                found = True
                stack.clear()
                break
            if parent not in seen:
                seen.add(parent)
                stack.append(parent)
    kb._desc_cache[(child, ancestor)] = found
    return found


def concept_methods(kb: KnowledgeBase, concept: int) -> set[int]:
    """Methods a concept can implement: its own plus everything inherited
    through belongs_to, where an exclusion on any concept along the
    inheriting path blocks that path (another clean path may still deliver
    the method).

    Computed as the least fixpoint of
        allowed(c) = (own_methods(c) | union of allowed(parents)) - exclusions(c)
    which terminates on cyclic graphs because the sets only grow.
    """
    _require_concept(kb, concept, "concept_methods")
    nodes = {concept}
    stack = [concept]
    while stack:
        node = stack.pop()
        for parent in kb.parents.get(node, ()):
            if parent not in nodes:
                nodes.add(parent)
                stack.append(parent)
    allowed = {n: set(kb.concepts[n].methods) for n in nodes}
    changed = True
    while changed:
        changed = False
        for n in nodes:
            merged = set(kb.concepts[n].methods)
            for parent in kb.parents.get(n, ()):
                if parent in nodes:
                    merged |= allowed[parent]
            merged -= kb.concepts[n].method_exclusions
            if merged != allowed[n]:
                allowed[n] = merged
                changed = True
    return allowed[concept]


def method_applicable(kb: KnowledgeBase, method: int, object_concept: int) -> bool:
    """True iff the concept descends from any concept the method can act on.
    A method with no recorded objects is unconstrained and applies to
    anything."""
    m = _require_method(kb, method, "method_applicable")
    _require_concept(kb, object_concept, "method_applicable")
    if not m.objects:
        return True
    return any(is_descendant(kb, object_concept, target) for target in sorted(m.objects))


def find_cycles(kb: KnowledgeBase) -> list[list[int]]:
    """Report belongs_to cycles as sorted strongly-connected components.

    Cycles are tolerated by every traversal; this exists so a lint pass can
    surface dirty data for manual repair.
    """
    import networkx as nx  # imported lazily: only the lint path needs it

    graph = nx.DiGraph()
    graph.add_nodes_from(kb.concepts)
    for child, parents in kb.parents.items():
        for parent in parents:
            graph.add_edge(child, parent)
    cycles = [sorted(scc) for scc in nx.strongly_connected_components(graph) if len(scc) > 1]
    cycles.extend([node] for node in sorted(kb.concepts) if node in kb.parents.get(node, ()))
    return sorted(cycles)


def add_concept(
    kb: KnowledgeBase,
    name: str,
    properties: set[int] | None = None,
    methods: set[int] | None = None,
    method_exclusions: set[int] | None = None,
) -> int:
    """Add a concept with a fresh id (max existing + 1) and return the id."""
    properties = set(properties or ())
    methods = set(methods or ())
    method_exclusions = set(method_exclusions or ())
    for pid in properties:
        _require_concept(kb, pid, "add_concept")
    for mid in methods | method_exclusions:
        _require_method(kb, mid, "add_concept")
    if methods & method_exclusions:
        raise ValidationError("add_concept: methods overlap method_exclusions")
    new_id = max(kb.concepts, default=0) + 1
    kb.concepts[new_id] = Concept(new_id, name, properties, methods, method_exclusions)
    return new_id


def add_relation(kb: KnowledgeBase, head: int, tail: int, rel_type: str = REL_BELONGS_TO) -> None:
    if rel_type != REL_BELONGS_TO:
        raise ValidationError(f"unsupported rel_type {rel_type!r}")
    _require_concept(kb, head, "add_relation")
    _require_concept(kb, tail, "add_relation")
    kb.parents.setdefault(head, set()).add(tail)
    kb.children.setdefault(tail, set()).add(head)
    kb.invalidate_caches()


def link_word(kb: KnowledgeBase, surface: str, object_id: int, object_kind: str, pos: str) -> None:
    if not surface:
        raise ValidationError("link_word: empty surface")
    if object_kind not in ("concept", "method"):
        raise ValidationError(f"link_word: bad object_kind {object_kind!r}")
    if pos not in POS_TAGS:
        raise ValidationError(f"link_word: unknown pos tag {pos!r}")
    table = kb.concepts if object_kind == "concept" else kb.methods
    if object_id not in table:
        raise IntegrityError(f"link_word: {object_kind} id {object_id} does not resolve")
    links = kb.words.setdefault(surface, [])
    if any(l.object_id == object_id and l.pos == pos for l in links):
        raise DuplicateError(f"link_word: duplicate link ({surface!r}, {object_id}, {pos})")
    insort(links, WordLink(surface, object_id, object_kind, pos), key=WordLink.sort_key)
    kb.max_surface_len = max(kb.max_surface_len, len(surface))


def add_lexicon_rule(kb: KnowledgeBase, rule: LexiconRule) -> None:
    if rule.position not in ("prefix", "suffix"):
        raise ValidationError(f"bad rule position {rule.position!r}")
    if rule.pos not in POS_TAGS:
        raise ValidationError(f"unknown pos tag {rule.pos!r}")
    _require_concept(kb, rule.concept_id, "add_lexicon_rule")
    if rule in kb.lexicon_rules:
        raise DuplicateError(f"lexicon rule already present: {rule}")
    insort(kb.lexicon_rules, rule)


def match_lexicon_rule(kb: KnowledgeBase, surface: str) -> LexiconRule | None:
    """First rule (in canonical order) matching an unknown surface."""
    for rule in kb.lexicon_rules:
        if rule.matches(surface):
            return rule
    return None
