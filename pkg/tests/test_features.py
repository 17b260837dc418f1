import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_lexicon
from morphtag.errors import ConfigError
from morphtag.features import (FeatureConfig, PartialContext, extract,
                               suggested_tags, tag_features, word_features)
from morphtag.rules import parse_rules

words_strategy = st.lists(st.text(alphabet="абвгд-5A", min_size=1, max_size=6),
                          min_size=1, max_size=6)


class TestConfig:
    def test_roundtrip(self):
        cfg = FeatureConfig(max_affix_len=4, use_ortho=False)
        assert FeatureConfig.from_dict(cfg.to_dict()) == cfg

    def test_invalid(self):
        with pytest.raises(ConfigError):
            FeatureConfig(max_affix_len=0)
        with pytest.raises(ConfigError):
            FeatureConfig(lexicon_filter="bogus")


class TestWordFeatures:
    def test_affix_lengths_bounded(self):
        cfg = FeatureConfig(max_affix_len=3, use_lexicon_features=False)
        feats = word_features(["неочаквано"], 0, cfg)
        prefixes = [f for f in feats if f.startswith("pre")]
        assert prefixes == ["pre1=н", "pre2=не", "pre3=нео"]
        suffixes = [f for f in feats if f.startswith("suf")]
        assert suffixes == ["suf1=о", "suf2=но", "suf3=ано"]

    def test_short_word_affixes_capped_by_length(self):
        cfg = FeatureConfig(use_lexicon_features=False)
        feats = word_features(["на"], 0, cfg)
        assert sum(1 for f in feats if f.startswith("pre")) == 2

    def test_boundary_padding(self):
        cfg = FeatureConfig(use_lexicon_features=False)
        feats = word_features(["а", "б"], 0, cfg)
        assert "w-1=<s>" in feats and "w+1=б" in feats and "w+2=</s>" in feats

    def test_ortho_flags(self):
        cfg = FeatureConfig(use_lexicon_features=False)
        feats = word_features(["По-5"], 0, cfg)
        assert {"ortho=digit", "ortho=hyphen", "ortho=init-upper"} <= set(feats)

    def test_lexicon_suggestions(self):
        cfg = FeatureConfig()
        feats = word_features(["да"], 0, cfg, suggested=frozenset({"Tx", "Ta"}))
        assert "lex=Ta" in feats and "lex=Tx" in feats
        assert "lexclass=Ta;Tx" in feats

    def test_unknown_word_flag(self):
        feats = word_features(["х"], 0, FeatureConfig(), suggested=None)
        assert "lex=<unk>" in feats

    def test_groups_toggle_off(self):
        cfg = FeatureConfig(use_affixes=False, use_ortho=False,
                            use_context_words=False, use_word_bigrams=False,
                            use_lexicon_features=False)
        assert word_features(["По-5"], 0, cfg) == ["w0=По-5"]


class TestTagFeatures:
    def test_empty_when_nothing_assigned(self):
        assert tag_features(["а", "б"], 0, {}, FeatureConfig()) == []

    def test_distant_neighbour_visible(self):
        feats = tag_features(["а", "б", "в"], 2, {0: "X"}, FeatureConfig())
        assert feats == ["t-2=X"]

    def test_pair_templates(self):
        feats = tag_features(["а", "б", "в"], 1, {0: "X", 2: "Y"},
                             FeatureConfig())
        assert "t-1,t+1=X|Y" in feats
        assert "w0t-1=б|X" in feats and "w0t+1=б|Y" in feats

    @settings(max_examples=60)
    @given(words_strategy, st.data())
    def test_monotone_in_assignment(self, words, data):
        cfg = FeatureConfig()
        i = data.draw(st.integers(0, len(words) - 1))
        others = [j for j in range(len(words)) if j != i]
        assigned = data.draw(st.lists(st.sampled_from(others or [0]),
                                      unique=True) if others else st.just([]))
        tags = {j: f"T{j}" for j in assigned}
        full = set(tag_features(words, i, tags, cfg))
        sub = {j: t for j, t in tags.items() if j in set(assigned[:1])}
        assert set(tag_features(words, i, sub, cfg)) <= full


class TestExtract:
    def test_position_validation(self):
        with pytest.raises(ValueError):
            PartialContext(("а",), 1, {})
        with pytest.raises(ValueError):
            PartialContext(("а",), 0, {0: "X"})

    def test_pure(self):
        ctx = PartialContext(("а", "б"), 0, {1: "X"})
        cfg = FeatureConfig()
        assert extract(ctx, cfg) == extract(ctx, cfg)

    def test_no_lexicon_means_no_suggestion_features(self):
        ctx = PartialContext(("а",), 0, {})
        feats = extract(ctx, FeatureConfig(use_lexicon_features=True))
        assert not any(f.startswith("lex") for f in feats)

    def test_lexicon_independence_when_disabled(self):
        ctx = PartialContext(("да",), 0, {})
        cfg = FeatureConfig(use_lexicon_features=False)
        lex = make_lexicon({"да": ["Ta", "Tx"]})
        assert extract(ctx, cfg, lexicon=lex) == extract(ctx, cfg)


class TestSuggestedTags:
    def test_plain_lookup(self):
        lex = make_lexicon({"да": ["Ta", "Tx"]})
        out = suggested_tags(["да", "х"], lex, None, FeatureConfig())
        assert out == [frozenset({"Ta", "Tx"}), None]

    def test_rule_filtering(self):
        lex = make_lexicon({"да": ["Ta", "Tx"]})
        cascade = parse_rules(
            "RULE r\nIF 0 SURFACE-IN да\nTHEN RETAIN Ta\nEND\n")
        cfg = FeatureConfig(lexicon_filter="rules")
        out = suggested_tags(["да"], lex, cascade, cfg)
        assert out == [frozenset({"Ta"})]

    def test_filter_off_ignores_rules(self):
        lex = make_lexicon({"да": ["Ta", "Tx"]})
        cascade = parse_rules(
            "RULE r\nIF 0 SURFACE-IN да\nTHEN RETAIN Ta\nEND\n")
        out = suggested_tags(["да"], lex, cascade, FeatureConfig())
        assert out == [frozenset({"Ta", "Tx"})]

    def test_oov_stays_none_under_rules(self):
        lex = make_lexicon({"да": ["Ta", "Tx"]})
        cfg = FeatureConfig(lexicon_filter="rules")
        cascade = parse_rules(
            "RULE r\nIF 0 SURFACE-IN да\nTHEN RETAIN Ta\nEND\n")
        out = suggested_tags(["х", "да"], lex, cascade, cfg,
                             fallback={"Ta", "Tx"})
        assert out[0] is None and out[1] == frozenset({"Ta"})
