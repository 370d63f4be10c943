#!/usr/bin/env python3
"""Generate the bundled synthetic benchmark corpus and its grammar.

Writes tests/fixtures/grammar_bench/ and tests/fixtures/corpus_10k.jsonl.
Deterministic: a fixed seed always reproduces the committed files.
"""

import json
import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from semkit.grammar import (  # noqa: E402
    Feature,
    GrammarBase,
    PhrasePattern,
    SubsentencePattern,
    parse_meaning_string,
    save_grammar,
)

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")

NOUNS = [
    "car", "dog", "city", "river", "team", "song", "book", "market", "stone",
    "cloud", "engine", "garden", "window", "basketball", "football", "player",
    "table", "game", "road", "signal",
]
VERBS = ["moves", "wins", "falls", "sings", "grows", "stops", "plays", "turns"]
ADJS = ["big", "red", "quiet", "bright", "old", "sharp", "beautiful"]
ADVS = ["slowly", "often", "never", "early"]
DETS = ["a", "the", "this"]
PRONOUNS = ["it", "she", "he"]
QAS = ["what", "who"]

PREPS = ["on", "in", "near"]

POOLS = {
    "NN": NOUNS, "VV": VERBS, "JJ": ADJS, "AD": ADVS,
    "DT": DETS, "PN": PRONOUNS, "QA": QAS, "P": PREPS,
}

# Roughly half the templates reduce to a seeded parse_str; the rest stay
# unparsed so the learner always has material.
TEMPLATES = [
    ("NN VV NN", True),
    ("NN VV", True),
    ("DT JJ NN VV DT NN", True),
    ("DT NN VV", True),
    ("PN VV DT NN", True),
    ("QA VV NN", True),
    ("DT JJ JJ NN VV", True),
    ("NN", True),
    ("NN NN VV", False),
    ("P DT NN VV NN", False),
    ("AD VV NN", False),
    ("NN VV AD AD", False),
    ("PN NN VV NN NN", False),
    ("JJ VV", False),
]


def build_grammar() -> GrammarBase:
    gb = GrammarBase()
    specs = [
        (["pos:DT", "pos:JJ", "pos:NN"], 2, "NN"),
        (["pos:JJ", "pos:NN"], 1, "NN"),
        (["pos:DT", "pos:NN"], 1, "NN"),
        (["pos:JJ", "pos:JJ", "pos:NN"], 2, "NN"),
        (["pos:CD", "pos:M", "pos:NN"], 2, "NN"),
        (["pos:CD", "pos:NN"], 1, "NN"),
        (["pos:AD", "pos:VV"], 1, "VV"),
        (["pos:VV", "pos:AD"], 0, "VV"),
        (["pos:P", "pos:NN"], 1, "P"),
        (["word:basketball", "word:player"], 1, "NN"),
        (["word:football", "word:player"], 1, "NN"),
        (["concept:332", "word:player"], 1, "NN"),
        (["concept:60", "word:game"], 1, "NN"),
        (["word:city", "word:road"], 1, "NN"),
        (["word:market", "word:signal"], 1, "NN"),
        (["word:engine", "word:room"], 1, "NN"),
        (["word:river", "word:stone"], 1, "NN"),
        (["word:team", "word:song"], 1, "NN"),
        (["pos:DT", "pos:JJ", "pos:JJ", "pos:NN"], 3, "NN"),
        (["pos:PN", "pos:NN"], 1, "NN"),
        (["word:old", "word:garden"], 1, "NN"),
        (["word:bright", "word:signal"], 1, "NN"),
        (["word:sharp", "word:turn"], 1, "NN"),
        (["word:quiet", "word:night"], 1, "NN"),
    ]
    for i, (raw, cwi, pos) in enumerate(specs, start=1):
        features = []
        for tok in raw:
            kind, value = tok.split(":", 1)
            features.append(Feature(kind, int(value) if kind == "concept" else value))
        gb.phrase_patterns.append(PhrasePattern(i, features, cwi, pos))
    subs = [
        ("NN|VV|NN", "sentence", "d", "nsubj:0:1,dobj:1:2"),
        ("NN|VV", "sentence", "d", "nsubj:0:1"),
        ("PN|VV|NN", "sentence", "d", "nsubj:0:1,dobj:1:2"),
        ("QA|VV|NN", "sentence", "q", "nsubj:0:1,dobj:1:2"),
        ("NN", "phrase", "d", ""),
        ("QA", "phrase", "q", ""),
        ("VV|NN", "half_sentence", "d", "dobj:0:1"),
        ("NN|VV|AD", "sentence", "d", "nsubj:0:1"),
    ]
    for ps, t1, t2, meaning in subs:
        gb.subsentence_patterns[ps] = SubsentencePattern(ps, t1, t2, parse_meaning_string(meaning))
    return gb


def make_sentence(rng: random.Random) -> dict:
    n_subs = rng.choices([1, 2, 3], weights=[70, 25, 5])[0]
    tokens = []
    pieces = []
    for k in range(n_subs):
        template, _ = rng.choice(TEMPLATES)
        poses = template.split()
        words = [rng.choice(POOLS[p]) for p in poses]
        pieces.append(" ".join(words))
        tokens.extend({"w": w, "pos": p} for w, p in zip(words, poses))
        delim = "," if k + 1 < n_subs else "."
        tokens.append({"w": delim, "pos": "PU"})
    text = ", ".join(pieces) + "."
    return {"text": text, "tokens": tokens}


def main():
    rng = random.Random(20240611)
    gb = build_grammar()
    save_grammar(gb, os.path.join(FIXTURES, "grammar_bench"))
    out_path = os.path.join(FIXTURES, "corpus_10k.jsonl")
    with open(out_path, "w", encoding="utf-8") as fh:
        for _ in range(10_000):
            fh.write(json.dumps(make_sentence(rng), ensure_ascii=False) + "\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
