"""Closed part-of-speech tag set and subsentence delimiter inventory.

The tag set is a small subset of the Stanford Chinese tags plus two
additions: QA for question words and UNK for out-of-lexicon tokens.
Every pos field anywhere in the system (word links, pattern features,
pattern pos_tags, pretagged corpus tokens) must come from this set.
"""

POS_TAGS = {
    "NN",   # noun
    "VV",   # verb
    "JJ",   # adjective
    "DT",   # determiner
    "AD",   # adverb
    "PN",   # pronoun
    "CD",   # number
    "M",    # measure word
    "P",    # preposition
    "CC",   # conjunction
    "QA",   # question word
    "PU",   # punctuation
    "UNK",  # unknown / out of lexicon
}

# Subsentence boundaries: ASCII and full-width comma/semicolon plus
# terminal punctuation in both widths.
DELIMITERS = {",", ";", "。", "，", "；", "！", "？", ".", "!", "?"}

# Both sets may be extended (never shrunk) at process startup from the
# config file; every importer shares these set objects, so in-place
# updates are visible everywhere.
