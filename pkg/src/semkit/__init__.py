"""semkit: rule-based semantic parsing over an object-linked knowledge base.

The toolkit couples two stores: a knowledge base (concepts, methods, word
links, belongs_to hierarchy) and a grammar base (phrase patterns,
subsentence patterns). The parser merges words bottom-up into phrases,
classifies the residue against subsentence patterns, and extracts
subject-predicate / verb-object relations. A learner mines candidate
rules from text the grammar cannot parse yet; humans accept or reject
them, and accepted rules feed the next parsing round.
"""

from .candidates import CandidateRule, CandidateStore, load_candidates, save_candidates
from .config import Config, load_config
from .errors import (
    ConfigError,
    DuplicateError,
    FormatError,
    IntegrityError,
    ResourceLimitError,
    SemkitError,
    StorageError,
    ValidationError,
)
from .grammar import (
    Feature,
    GrammarBase,
    PhrasePattern,
    RelationSpec,
    SubsentencePattern,
    add_phrase_pattern,
    add_subsentence_pattern,
    load_grammar,
    parse_meaning_string,
    save_grammar,
    serialize_meaning,
)
from .kb import (
    Concept,
    KnowledgeBase,
    LexiconRule,
    Method,
    WordLink,
    add_concept,
    add_relation,
    concept_methods,
    find_cycles,
    is_descendant,
    link_word,
    load_kb,
    lookup_word,
    method_applicable,
    save_kb,
)
from .parse import (
    Element,
    ExtractedRelation,
    Phrase,
    SentenceParse,
    SubsentenceParse,
    classify_subsentence,
    core_word,
    exhaustive_parse,
    extract_relations,
    match_feature,
    match_phrase_pattern,
    parse_sentence,
    single_recursion_parse,
)
from .segment import SubsentenceText, Word, load_pretagged, segment, split_subsentences

__version__ = "0.1.0"
