"""Sparse feature extraction for a token inside a partially tagged sentence.

Every feature is a namespaced string with implicit value 1.  Word-shape
templates depend only on the surfaces; tag-context templates fire for
whichever neighbour positions already carry an assigned tag, so vectors
grow monotonically as the bidirectional search commits more tags.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .errors import ConfigError


@dataclass(frozen=True)
class FeatureConfig:
    max_affix_len: int = 9
    use_lexicon_features: bool = True
    lexicon_filter: str = "none"  # "none" | "rules"
    use_affixes: bool = True
    use_ortho: bool = True
    use_context_words: bool = True
    use_tag_context: bool = True
    use_bilexical: bool = True
    use_word_bigrams: bool = True

    def __post_init__(self):
        if self.max_affix_len < 1:
            raise ConfigError(f"max_affix_len must be >= 1, got {self.max_affix_len}")
        if self.lexicon_filter not in ("none", "rules"):
            raise ConfigError(f"unknown lexicon_filter {self.lexicon_filter!r}")

    def to_dict(self):
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass(frozen=True)
class PartialContext:
    """A token position plus whatever neighbour tags are already assigned."""

    words: tuple[str, ...]
    position: int
    tags: Mapping[int, str]  # absolute position -> assigned tag

    def __post_init__(self):
        if not 0 <= self.position < len(self.words):
            raise ValueError("position outside sentence")
        if self.position in self.tags:
            raise ValueError("current position must not carry an assigned tag")


def word_features(words: Sequence[str], i: int, cfg: FeatureConfig,
                  suggested: frozenset[str] | set[str] | None = None) -> list[str]:
    """Surface-only templates plus, optionally, lexicon-suggestion features.

    `suggested` is the (possibly rule-filtered) lexicon tag set for the
    current word, or None when the word is unknown to the lexicon; pass it
    only when lexicon features are enabled.
    """
    w = words[i]
    n = len(words)
    feats = [f"w0={w}"]
    if cfg.use_context_words:
        feats.append(f"w-1={words[i - 1]}" if i >= 1 else "w-1=<s>")
        feats.append(f"w-2={words[i - 2]}" if i >= 2 else "w-2=<s>")
        feats.append(f"w+1={words[i + 1]}" if i + 1 < n else "w+1=</s>")
        feats.append(f"w+2={words[i + 2]}" if i + 2 < n else "w+2=</s>")
    if cfg.use_affixes:
        for k in range(1, min(cfg.max_affix_len, len(w)) + 1):
            feats.append(f"pre{k}={w[:k]}")
            feats.append(f"suf{k}={w[-k:]}")
    if cfg.use_ortho:
        if any(ch.isdigit() for ch in w):
            feats.append("ortho=digit")
        if "-" in w:
            feats.append("ortho=hyphen")
        if w[0].isupper():
            feats.append("ortho=init-upper")
    if cfg.use_word_bigrams:
        left = words[i - 1] if i >= 1 else "<s>"
        right = words[i + 1] if i + 1 < n else "</s>"
        feats.append(f"wb-1={left}|{w}")
        feats.append(f"wb+1={w}|{right}")
    if cfg.use_lexicon_features:
        if suggested is None:
            feats.append("lex=<unk>")
        else:
            for tag in sorted(suggested):
                feats.append(f"lex={tag}")
            feats.append("lexclass=" + ";".join(sorted(suggested)))
    return feats


def tag_features(words: Sequence[str], i: int, tags: Mapping[int, str],
                 cfg: FeatureConfig) -> list[str]:
    """Templates over assigned neighbour tags; empty when nothing nearby is
    assigned yet."""
    if not cfg.use_tag_context:
        return []
    t_m1 = tags.get(i - 1)
    t_m2 = tags.get(i - 2)
    t_p1 = tags.get(i + 1)
    t_p2 = tags.get(i + 2)
    feats = []
    if t_m1 is not None:
        feats.append(f"t-1={t_m1}")
    if t_m2 is not None:
        feats.append(f"t-2={t_m2}")
    if t_p1 is not None:
        feats.append(f"t+1={t_p1}")
    if t_p2 is not None:
        feats.append(f"t+2={t_p2}")
    if t_m2 is not None and t_m1 is not None:
        feats.append(f"t-2,t-1={t_m2}|{t_m1}")
    if t_p1 is not None and t_p2 is not None:
        feats.append(f"t+1,t+2={t_p1}|{t_p2}")
    if t_m1 is not None and t_p1 is not None:
        feats.append(f"t-1,t+1={t_m1}|{t_p1}")
    if cfg.use_bilexical:
        w = words[i]
        if t_m1 is not None:
            feats.append(f"w0t-1={w}|{t_m1}")
        if t_p1 is not None:
            feats.append(f"w0t+1={w}|{t_p1}")
    return feats


def suggested_tags(words: Sequence[str], lexicon, rules, cfg: FeatureConfig,
                   fallback: set[str] | None = None) -> list[frozenset[str] | None]:
    """Per-position lexicon tag sets for feature emission, rule-filtered when
    the config asks for it.  None marks out-of-lexicon positions.

    For cascade evaluation, unknown positions are given `fallback` (or their
    surface as an opaque singleton) so that neighbouring conditions can still
    be tested; the returned value for those positions stays None.
    """
    if lexicon is None:
        return [None] * len(words)
    raw = [lexicon.tags(w) for w in words]
    if cfg.lexicon_filter == "rules" and rules is not None and len(rules) > 0:
        from .corpus import Sentence, Token
        from .rules import apply_cascade

        sent = Sentence(tuple(Token(w) for w in words))
        sets = [set(t) if t is not None else (set(fallback) if fallback else {w})
                for t, w in zip(raw, words)]
        filtered = apply_cascade(rules, sent, sets)
        return [frozenset(f) if t is not None else None for t, f in zip(raw, filtered)]
    return [frozenset(t) if t is not None else None for t in raw]


def extract(ctx: PartialContext, cfg: FeatureConfig, lexicon=None, rules=None) -> list[str]:
    """Full feature vector for one position; pure and deterministic."""
    suggested = None
    if cfg.use_lexicon_features and lexicon is not None:
        suggested = suggested_tags(ctx.words, lexicon, rules, cfg)[ctx.position]
    elif cfg.use_lexicon_features:
        # No lexicon at hand: emit no suggestion features rather than
        # flagging every word unknown.
        cfg = replace(cfg, use_lexicon_features=False)
    feats = word_features(ctx.words, ctx.position, cfg, suggested)
    feats.extend(tag_features(ctx.words, ctx.position, ctx.tags, cfg))
    return feats
