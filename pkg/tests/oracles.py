"""Independent reference implementations used to cross-check the engine.

These deliberately re-derive results by the most naive route available
(plain recursion, full recounts) and share no code with the production
paths they verify.
"""

import random

from semkit import Feature, GrammarBase, PhrasePattern, Word, match_feature
from semkit.kb import KnowledgeBase, Concept, link_word
from semkit.parse import Phrase, element_key


def make_phrase(pattern, children, joiner=""):
    return Phrase(
        pattern_id=pattern.id,
        children=tuple(children),
        value=joiner.join(c.value for c in children),
        pos=pattern.pos_tag,
        core_word_index=pattern.core_word_index,
    )


def brute_force_terminals(kb, gb, words, joiner=""):
    """Enumerate terminal states by plain recursion over every
    (pattern, window) choice; no memoization."""
    patterns = [p for p in gb.phrase_patterns if p.status == "accepted"]
    terminals = {}

    def successors(elems):
        succ = []
        for p in patterns:
            width = len(p.features)
            for start in range(len(elems) - width + 1):
                window = elems[start : start + width]
                if all(match_feature(kb, f, e) for f, e in zip(p.features, window)):
                    merged = make_phrase(p, window, joiner)
                    succ.append(elems[:start] + (merged,) + elems[start + width :])
        return succ

    def walk(elems):
        succ = successors(elems)
        if not succ:
            terminals[tuple(element_key(e) for e in elems)] = elems
            return
        for s in succ:
            walk(s)

    walk(tuple(words))
    return terminals


def random_case(rng: random.Random):
    """A small random knowledge base, grammar (<= 6 patterns), and input
    (<= 8 tokens) for oracle-containment checks."""
    kb = KnowledgeBase()
    n_concepts = rng.randint(2, 4)
    for i in range(1, n_concepts + 1):
        kb.concepts[i] = Concept(i, f"c{i}")
    for child in range(2, n_concepts + 1):
        if rng.random() < 0.6:
            parent = rng.randint(1, child - 1)
            kb.parents.setdefault(child, set()).add(parent)
            kb.children.setdefault(parent, set()).add(child)
    vocab = [f"w{i}" for i in range(6)]
    poses = ["NN", "VV", "JJ"]
    for i, w in enumerate(vocab):
        if rng.random() < 0.7:
            link_word(kb, w, rng.randint(1, n_concepts), "concept", poses[i % 3])
    patterns = []
    for pid in range(1, rng.randint(1, 6) + 1):
        n = rng.randint(2, 3)
        features = []
        for _ in range(n):
            kind = rng.choice(["word", "pos", "concept"])
            if kind == "word":
                features.append(Feature("word", rng.choice(vocab)))
            elif kind == "pos":
                features.append(Feature("pos", rng.choice(poses)))
            else:
                features.append(Feature("concept", rng.randint(1, n_concepts)))
        cwi = rng.choice([None] + list(range(n)))
        patterns.append(PhrasePattern(pid, features, cwi, rng.choice(poses)))
    gb = GrammarBase()
    gb.phrase_patterns = patterns
    words = []
    for _ in range(rng.randint(1, 8)):
        w = rng.choice(vocab)
        links = kb.words.get(w, [])
        pos = links[0].pos if links else rng.choice(poses)
        words.append(Word(w, pos, tuple(l.object_id for l in links)))
    return kb, gb, words
