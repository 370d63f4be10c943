import pytest
from hypothesis import given
from hypothesis import strategies as st

from semkit import (
    DuplicateError,
    Feature,
    FormatError,
    GrammarBase,
    IntegrityError,
    PhrasePattern,
    RelationSpec,
    SubsentencePattern,
    ValidationError,
    add_phrase_pattern,
    add_subsentence_pattern,
    load_grammar,
    parse_meaning_string,
    save_grammar,
    serialize_meaning,
)

from .conftest import fixture_path


# -- meaning strings ----------------------------------------------------------


def test_parse_meaning_paper_example():
    assert parse_meaning_string("nsubj:0:1,dobj:1:2") == [
        RelationSpec("nsubj", 0, 1),
        RelationSpec("dobj", 1, 2),
    ]


def test_parse_meaning_empty():
    assert parse_meaning_string("") == []


@pytest.mark.parametrize(
    "bad",
    ["amod:0:1", "nsubj:0", "nsubj:0:1:2", "nsubj:a:1", "nsubj:-1:0", "nsubj:1:1", "nsubj:0:1,,"],
)
def test_parse_meaning_rejects(bad):
    with pytest.raises(FormatError):
        parse_meaning_string(bad)


def test_serialize_meaning_preserves_order():
    specs = [RelationSpec("dobj", 1, 2), RelationSpec("nsubj", 0, 1)]
    assert serialize_meaning(specs) == "dobj:1:2,nsubj:0:1"


@given(
    st.lists(
        st.builds(
            lambda t, a, b: RelationSpec(t, a, a + 1 + b),
            st.sampled_from(["nsubj", "dobj"]),
            st.integers(0, 8),
            st.integers(0, 8),
        ),
        max_size=6,
    )
)
def test_meaning_roundtrip(specs):
    assert parse_meaning_string(serialize_meaning(specs)) == specs


# -- phrase patterns ------------------------------------------------------------


def test_add_word_pattern(toy_kb):
    gb = GrammarBase()
    p = PhrasePattern(None, [Feature("word", "basketball"), Feature("word", "player")], 1, "NN")
    added = add_phrase_pattern(gb, toy_kb, p)
    assert added.id == 1
    assert gb.phrase_patterns == [p]


def test_add_concept_pattern(toy_kb):
    gb = GrammarBase()
    p = PhrasePattern(None, [Feature("concept", 332), Feature("word", "player")], 1, "NN")
    add_phrase_pattern(gb, toy_kb, p)


def test_core_word_index_out_of_range(toy_kb):
    gb = GrammarBase()
    p = PhrasePattern(None, [Feature("word", "a"), Feature("word", "b")], 5, "NN")
    with pytest.raises(ValidationError):
        add_phrase_pattern(gb, toy_kb, p)


def test_unresolvable_concept_feature(toy_kb):
    gb = GrammarBase()
    p = PhrasePattern(None, [Feature("concept", 40404), Feature("word", "x")], None, "NN")
    with pytest.raises(ValidationError):
        add_phrase_pattern(gb, toy_kb, p)


def test_single_feature_pattern_rejected(toy_kb):
    gb = GrammarBase()
    with pytest.raises(ValidationError):
        add_phrase_pattern(gb, toy_kb, PhrasePattern(None, [Feature("word", "x")], None, "NN"))


def test_duplicate_feature_list_rejected(toy_kb):
    gb = GrammarBase()
    features = [Feature("pos", "JJ"), Feature("pos", "NN")]
    add_phrase_pattern(gb, toy_kb, PhrasePattern(None, list(features), 1, "NN"))
    with pytest.raises(DuplicateError):
        add_phrase_pattern(gb, toy_kb, PhrasePattern(None, list(features), 0, "NN"))


def test_bad_pos_tag_rejected(toy_kb):
    gb = GrammarBase()
    p = PhrasePattern(None, [Feature("pos", "NN"), Feature("pos", "NN")], None, "NP")
    with pytest.raises(ValidationError):
        add_phrase_pattern(gb, toy_kb, p)


def test_id_assignment_is_max_plus_one(toy_kb):
    gb = GrammarBase()
    add_phrase_pattern(gb, toy_kb, PhrasePattern(7, [Feature("pos", "JJ"), Feature("pos", "NN")], None, "NN"))
    p = add_phrase_pattern(gb, toy_kb, PhrasePattern(None, [Feature("pos", "DT"), Feature("pos", "NN")], None, "NN"))
    assert p.id == 8


# -- subsentence patterns ---------------------------------------------------------


def test_add_subsentence_pattern():
    gb = GrammarBase()
    sp = SubsentencePattern("NN|VV|NN", "sentence", "d", parse_meaning_string("nsubj:0:1,dobj:1:2"))
    add_subsentence_pattern(gb, sp)
    assert gb.lookup_subsentence("NN|VV|NN") is sp


def test_duplicate_parse_str_rejected():
    gb = GrammarBase()
    add_subsentence_pattern(gb, SubsentencePattern("NN|VV|NN", "sentence", "d", []))
    with pytest.raises(DuplicateError):
        add_subsentence_pattern(gb, SubsentencePattern("NN|VV|NN", "sentence", "q", []))


def test_relation_index_out_of_range():
    gb = GrammarBase()
    sp = SubsentencePattern("NN|VV", "sentence", "d", parse_meaning_string("dobj:1:2"))
    with pytest.raises(ValidationError):
        add_subsentence_pattern(gb, sp)


def test_bad_parse_str_component():
    gb = GrammarBase()
    with pytest.raises(ValidationError):
        add_subsentence_pattern(gb, SubsentencePattern("NN|XX", "sentence", "d", []))


def test_candidate_patterns_ignored_by_lookup():
    gb = GrammarBase()
    add_subsentence_pattern(gb, SubsentencePattern("NN|VV", "sentence", "d", [], status="candidate"))
    assert gb.lookup_subsentence("NN|VV") is None
    assert gb.accepted_parse_strs() == set()


# -- persistence --------------------------------------------------------------------


def test_seed_grammar_roundtrip(toy_kb, seed_grammar, tmp_path):
    assert len(seed_grammar.phrase_patterns) == 4
    assert len(seed_grammar.subsentence_patterns) == 4
    save_grammar(seed_grammar, str(tmp_path / "g"))
    again = load_grammar(str(tmp_path / "g"), toy_kb)
    assert again == seed_grammar


def test_empty_grammar_files(tmp_path):
    (tmp_path / "phrase_patterns.tsv").write_text(
        "id\tfeatures\tcore_word_index\tpos_tag\tmeaning\tstatus\n"
    )
    (tmp_path / "subsentence_patterns.tsv").write_text(
        "parse_str\tss_type\tss_type2\tmeaning\tstatus\n"
    )
    gb = load_grammar(str(tmp_path))
    assert gb.phrase_patterns == [] and gb.subsentence_patterns == {}


def test_malformed_feature_token_names_line(tmp_path):
    (tmp_path / "phrase_patterns.tsv").write_text(
        "id\tfeatures\tcore_word_index\tpos_tag\tmeaning\tstatus\n"
        "1\txyz:abc|pos:NN\t\tNN\t\taccepted\n"
    )
    (tmp_path / "subsentence_patterns.tsv").write_text(
        "parse_str\tss_type\tss_type2\tmeaning\tstatus\n"
    )
    with pytest.raises(FormatError, match=r"phrase_patterns\.tsv:2"):
        load_grammar(str(tmp_path))


def test_load_rechecks_concept_features_against_kb(tmp_path, toy_kb):
    (tmp_path / "phrase_patterns.tsv").write_text(
        "id\tfeatures\tcore_word_index\tpos_tag\tmeaning\tstatus\n"
        "1\tconcept:40404|pos:NN\t\tNN\t\taccepted\n"
    )
    (tmp_path / "subsentence_patterns.tsv").write_text(
        "parse_str\tss_type\tss_type2\tmeaning\tstatus\n"
    )
    load_grammar(str(tmp_path))  # without a kb the id is not checkable
    with pytest.raises(IntegrityError, match="40404"):
        load_grammar(str(tmp_path), toy_kb)


def test_special_characters_in_word_features_roundtrip(toy_kb, tmp_path):
    gb = GrammarBase()
    weird = "a|b:c\td%e"
    add_phrase_pattern(
        gb, toy_kb, PhrasePattern(None, [Feature("word", weird), Feature("pos", "NN")], None, "NN")
    )
    save_grammar(gb, str(tmp_path / "g"))
    again = load_grammar(str(tmp_path / "g"), toy_kb)
    assert again.phrase_patterns[0].features[0].value == weird


def test_phrase_pattern_order_stable_across_roundtrip(toy_kb, seed_grammar, tmp_path):
    save_grammar(seed_grammar, str(tmp_path / "g"))
    again = load_grammar(str(tmp_path / "g"), toy_kb)
    assert [p.id for p in again.phrase_patterns] == [p.id for p in seed_grammar.phrase_patterns]
