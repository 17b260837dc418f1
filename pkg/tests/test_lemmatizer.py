import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_lexicon
from morphtag.errors import DataError, FormatError
from morphtag.lemmatizer import (LemmaRule, LemmaRuleSet, dump_rules,
                                 generate_rules, lemma_impact, lemmatize,
                                 load_rules)
from morphtag.synthetic import generate_lemma_lexicon


class TestGeneration:
    def test_aorist_to_infinitive_stem(self):
        lex = make_lexicon({"четох": {"Vpitf-o1s": "чета"}})
        rules = generate_rules(lex)
        assert rules.rules() == [LemmaRule("Vpitf-o1s", "ох", "а")]

    def test_identity_reading(self):
        lex = make_lexicon({"чета": {"Vpitf-r1s": "чета"}})
        rules = generate_rules(lex)
        assert rules.rules() == [LemmaRule("Vpitf-r1s", "", "")]

    def test_disjoint_forms(self):
        lex = make_lexicon({"съм": {"Vx": "бъда"}})
        assert generate_rules(lex).rules() == [LemmaRule("Vx", "съм", "бъда")]

    def test_deduplication_counts(self):
        lex = make_lexicon({"четох": {"V1": "чета"}, "плетох": {"V1": "плета"}})
        rules = generate_rules(lex)
        assert rules.counts == {LemmaRule("V1", "ох", "а"): 2}

    def test_conflict_detected(self):
        # both forms map -ох to different endings under the same tag
        lex = make_lexicon({"плетох": {"V1": "плетя"},
                            "четох": {"V1": "чета"}})
        with pytest.raises(DataError):
            generate_rules(lex)

    def test_lemmaless_reading_rejected(self):
        with pytest.raises(DataError):
            generate_rules(make_lexicon({"а": ["X"]}))


class TestApplication:
    def test_generalizes_to_unseen_form(self):
        lex = make_lexicon({"четох": {"V1": "чета"}})
        rules = generate_rules(lex)
        assert lemmatize("плетох", "V1", rules) == "плета"

    def test_longest_suffix_wins(self):
        rules = LemmaRuleSet()
        rules.add(LemmaRule("V1", "х", "м"))
        rules.add(LemmaRule("V1", "ох", "а"))
        assert lemmatize("четох", "V1", rules) == "чета"
        assert lemmatize("видях", "V1", rules) == "видям"

    def test_lexicon_lookup_preferred(self):
        lex = make_lexicon({"съм": {"Vx": "бъда"}})
        rules = LemmaRuleSet()
        rules.add(LemmaRule("Vx", "м", "к"))
        assert lemmatize("съм", "Vx", rules, lexicon=lex) == "бъда"
        assert lemmatize("съм", "Vx", rules) == "сък"

    def test_identity_fallback(self):
        assert lemmatize("слово", "N1", LemmaRuleSet()) == "слово"

    def test_empty_old_end_appends(self):
        rules = LemmaRuleSet()
        rules.add(LemmaRule("N1", "", "та"))
        assert lemmatize("вода", "N1", rules) == "водата"

    def test_rules_are_per_tag(self):
        rules = LemmaRuleSet()
        rules.add(LemmaRule("V1", "ох", "а"))
        assert lemmatize("четох", "V2", rules) == "четох"

    @settings(max_examples=30)
    @given(st.integers(0, 2 ** 31))
    def test_roundtrip_over_generated_lexicon(self, seed):
        lex = generate_lemma_lexicon(paradigm_count=6, forms_per_paradigm=4,
                                     stems_per_paradigm=5, seed=seed)
        rules = generate_rules(lex)
        for surface, entry in lex.items():
            for tag, lemma in entry.readings.items():
                assert lemmatize(surface, tag, rules) == lemma


class TestSerialization:
    def test_roundtrip(self):
        lex = make_lexicon({"четох": {"V1": "чета"}, "плетох": {"V1": "плета"},
                            "съм": {"Vx": "бъда"}})
        rules = generate_rules(lex)
        loaded = load_rules(dump_rules(rules))
        assert loaded.counts == rules.counts
        assert lemmatize("метох", "V1", loaded) == "мета"

    def test_bad_line(self):
        with pytest.raises(FormatError):
            load_rules("V1\tох\n")
        with pytest.raises(FormatError):
            load_rules("V1\tох\tа\tmany\n")

    def test_load_conflict(self):
        with pytest.raises(DataError):
            load_rules("V1\tох\tа\t1\nV1\tох\tб\t1\n")


class TestLemmaImpact:
    def test_counts(self, schema):
        gold = ["Vpitf-o3s", "Ncmsf", "Ansi"]
        pred = ["Vpitf-r3s", "Ncmsf", "Dm"]
        errors, harmless, fraction = lemma_impact(gold, pred, schema)
        assert (errors, harmless) == (2, 1)
        assert fraction == pytest.approx(0.5)

    def test_no_errors(self, schema):
        assert lemma_impact(["Dm"], ["Dm"], schema) == (0, 0, 0.0)

    def test_length_mismatch(self, schema):
        with pytest.raises(ValueError):
            lemma_impact(["Dm"], [], schema)
