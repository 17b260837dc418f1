"""Guided-learning tagger: easiest-first bidirectional beam inference with a
passive-aggressive averaged perceptron.

Inference repeatedly scores every (untagged position, candidate tag) action
given the neighbour tags already committed, and commits the single
highest-scoring action anywhere in the sentence, growing tagged spans from
both directions.  Each span keeps up to B hypotheses; a hypothesis'
accumulated score is the sum of the action scores that built it.  Context
tags are only visible through a contiguous run of committed positions
(offset -2 counts only when -1 is committed too), which keeps every
hypothesis' score exactly replayable from its commit order.

Training is beam-1: when the best action disagrees with gold, a
passive-aggressive update promotes the gold action and demotes the
predicted one with step size tau = min(C, (margin + s_pred - s_gold) /
||delta features||^2), then scoring restarts.  Raw weights drive training;
decoding uses the averaged weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, Sentence
from .errors import ConfigError, DataError
from .features import FeatureConfig, suggested_tags, tag_features, word_features
from .lexicon import Lexicon
from .rules import RuleCascade, apply_cascade
from .tagset import TagInventory

CANDIDATE_SOURCES = ("all", "lexicon", "lexicon+rules")


@dataclass(frozen=True)
class TrainOptions:
    epochs: int = 5
    seed: int = 0
    aggressiveness: float = 1.0  # PA cap C
    margin: float = 1.0
    candidate_source: str = "all"

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.aggressiveness <= 0:
            raise ConfigError("aggressiveness cap C must be > 0")
        if self.margin <= 0:
            raise ConfigError("margin must be > 0")
        if self.candidate_source not in CANDIDATE_SOURCES:
            raise ConfigError(f"unknown candidate_source {self.candidate_source!r}")


@dataclass(frozen=True)
class DecodeOptions:
    beam_size: int = 1
    candidate_source: str = "all"
    hard_output_rules: RuleCascade | None = None

    def __post_init__(self):
        if self.beam_size < 1:
            raise ConfigError("beam_size must be >= 1")
        if self.candidate_source not in CANDIDATE_SOURCES:
            raise ConfigError(f"unknown candidate_source {self.candidate_source!r}")


class Model:
    """Sparse linear weights over (feature, tag), raw and averaged."""

    FORMAT_VERSION = 1

    def __init__(self, inventory: TagInventory, cfg: FeatureConfig, meta=None):
        self.inventory = inventory
        self.cfg = cfg
        self.feature_ids: dict[str, int] = {}
        self.weights: dict[int, np.ndarray] = {}
        self.averaged: dict[int, np.ndarray] = {}
        self.meta: dict = meta or {}

    def intern(self, feature: str) -> int:
        fid = self.feature_ids.get(feature)
        if fid is None:
            fid = len(self.feature_ids)
            self.feature_ids[feature] = fid
        return fid

    def save(self, path):
        def sparse(table):
            return {str(fid): {str(tid): float(w) for tid, w in enumerate(row) if w != 0.0}
                    for fid, row in table.items()}
        payload = {
            "format": self.FORMAT_VERSION,
            "tags": self.inventory.tags,
            "features": self.feature_ids,
            "config": self.cfg.to_dict(),
            "weights": sparse(self.weights),
            "averaged": sparse(self.averaged),
            "meta": self.meta,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False)

    @classmethod
    def load(cls, path) -> "Model":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format") != cls.FORMAT_VERSION:
            raise DataError(f"unsupported model format {payload.get('format')!r}")
        model = cls(TagInventory(payload["tags"]),
                    FeatureConfig.from_dict(payload["config"]),
                    payload.get("meta", {}))
        model.feature_ids = {f: int(i) for f, i in payload["features"].items()}
        T = len(model.inventory)
        for name, table in (("weights", model.weights), ("averaged", model.averaged)):
            for fid, row in payload[name].items():
                arr = np.zeros(T)
                for tid, w in row.items():
                    arr[int(tid)] = w
                table[int(fid)] = arr
        return model


# Candidate construction --------------------------------------------------

def _candidate_ids(sentence: Sentence, inventory: TagInventory,
                   lexicon: Lexicon | None, soft_rules: RuleCascade | None,
                   source: str, hard_rules: RuleCascade | None) -> list[list[int]]:
    """Per-token candidate tag ids.

    Hard output rules override the source: candidates become the
    cascade-filtered lexicon sets.  Out-of-lexicon tokens (and lexicon tags
    unknown to the inventory) fall back to the full inventory.
    """
    n = len(sentence.tokens)
    all_ids = list(range(len(inventory)))
    if hard_rules is not None and len(hard_rules) > 0:
        source = "lexicon+rules"
        soft_rules = hard_rules
    if source == "all" or lexicon is None:
        return [all_ids] * n
    full = set(inventory.tags)
    raw = [lexicon.tags(tok.surface) for tok in sentence.tokens]
    sets = [set(t) if t is not None else set(full) for t in raw]
    if source == "lexicon+rules" and soft_rules is not None and len(soft_rules) > 0:
        sets = apply_cascade(soft_rules, sentence, sets)
    out = []
    for tags in sets:
        ids = sorted(inventory.index[t] for t in tags if t in inventory.index)
        out.append(ids if ids else all_ids)
    return out


# Scoring -----------------------------------------------------------------

class _SentenceScorer:
    """Feature extraction + scoring for one sentence against one weight
    table.  Static (surface/lexicon) features are computed once per
    position; tag-context features per visible-context query."""

    def __init__(self, model: Model, words, table: dict[int, np.ndarray],
                 lexicon, soft_rules, grow: bool,
                 cfg: FeatureConfig | None = None):
        self.model = model
        self.words = words
        self.table = table
        self.grow = grow
        self.T = len(model.inventory)
        cfg = self.cfg = cfg if cfg is not None else model.cfg
        suggested = [None] * len(words)
        if cfg.use_lexicon_features and lexicon is not None:
            suggested = suggested_tags(words, lexicon, soft_rules, cfg,
                                       fallback=set(model.inventory.tags))
        self._static = [self._intern(word_features(words, i, cfg, suggested[i]))
                        for i in range(len(words))]

    def _intern(self, feats) -> list[int]:
        if self.grow:
            return [self.model.intern(f) for f in feats]
        ids = self.model.feature_ids
        return [fid for f in feats if (fid := ids.get(f)) is not None]

    def feature_ids(self, i: int, visible_ids: dict[int, int]) -> list[int]:
        visible = {j: self.model.inventory.tags[t] for j, t in visible_ids.items()}
        dynamic = tag_features(self.words, i, visible, self.cfg)
        return self._static[i] + self._intern(dynamic)

    def score_vector(self, fids) -> np.ndarray:
        vec = np.zeros(self.T)
        for fid in fids:
            row = self.table.get(fid)
            if row is not None:
                vec += row
        return vec

    def score(self, i: int, visible_ids: dict[int, int]) -> np.ndarray:
        return self.score_vector(self.feature_ids(i, visible_ids))


def _visible_context(p: int, assigned: dict[int, int]) -> dict[int, int]:
    """Neighbour tags visible through contiguous committed runs only."""
    vis = {}
    if p - 1 in assigned:
        vis[p - 1] = assigned[p - 1]
        if p - 2 in assigned:
            vis[p - 2] = assigned[p - 2]
    if p + 1 in assigned:
        vis[p + 1] = assigned[p + 1]
        if p + 2 in assigned:
            vis[p + 2] = assigned[p + 2]
    return vis


# Beam decoding -----------------------------------------------------------

@dataclass
class _Span:
    start: int
    end: int
    hyps: list  # [(score, tags tuple of ids)] sorted best-first


@dataclass
class TraceStep:
    position: int
    tag_id: int
    score: float  # local action score of the committed action
    available: dict  # position -> best local action score at that step


def _decode_beam(scorer: _SentenceScorer, cand_ids, beam: int):
    """Easiest-first beam search; returns (tag ids, score, trace, order)."""
    n = len(scorer.words)
    span_at: list[_Span | None] = [None] * n
    untagged = set(range(n))
    prio_cache: dict[int, tuple[float, int]] = {}
    trace: list[TraceStep] = []
    order: list[int] = []

    def combos(p):
        left = span_at[p - 1] if p > 0 else None
        right = span_at[p + 1] if p < n - 1 else None
        for lh in (left.hyps if left else [None]):
            for rh in (right.hyps if right else [None]):
                visible = {}
                if lh is not None:
                    visible[p - 1] = lh[1][p - 1 - left.start]
                    if p - 2 >= left.start:
                        visible[p - 2] = lh[1][p - 2 - left.start]
                if rh is not None:
                    visible[p + 1] = rh[1][0]
                    if p + 2 <= right.end:
                        visible[p + 2] = rh[1][1]
                yield lh, rh, visible

    def priority(p):
        cached = prio_cache.get(p)
        if cached is not None:
            return cached
        best = (-np.inf, -1)
        for _, _, visible in combos(p):
            vec = scorer.score(p, visible)
            for c in cand_ids[p]:
                if vec[c] > best[0]:
                    best = (float(vec[c]), c)
        prio_cache[p] = best
        return best

    while untagged:
        available = {p: priority(p) for p in sorted(untagged)}
        best_p = None
        best = (-np.inf, -1)
        for p in sorted(available):
            local, c = available[p]
            if local > best[0]:
                best_p, best = p, (local, c)
        # Commit: merge adjacent spans through position best_p.
        p = best_p
        left = span_at[p - 1] if p > 0 else None
        right = span_at[p + 1] if p < n - 1 else None
        merged = []
        for lh, rh, visible in combos(p):
            vec = scorer.score(p, visible)
            base = (lh[0] if lh else 0.0) + (rh[0] if rh else 0.0)
            ltags = lh[1] if lh else ()
            rtags = rh[1] if rh else ()
            for c in cand_ids[p]:
                merged.append((base + float(vec[c]), ltags + (c,) + rtags))
        merged.sort(key=lambda h: (-h[0], h[1]))
        span = _Span(left.start if left else p, right.end if right else p,
                     merged[:beam])
        for i in range(span.start, span.end + 1):
            span_at[i] = span
        untagged.discard(p)
        order.append(p)
        for q in range(span.start - 2, span.end + 3):
            prio_cache.pop(q, None)
        trace.append(TraceStep(p, best[1], best[0],
                               {q: available[q][0] for q in available}))
    final = span_at[0]
    assert final is not None and final.start == 0 and final.end == n - 1
    score, tags = final.hyps[0]
    return list(tags), float(score), trace, order


def decode(sentence: Sentence, model: Model, lexicon: Lexicon | None = None,
           rules: RuleCascade | None = None,
           dopts: DecodeOptions = DecodeOptions(),
           cfg: FeatureConfig | None = None):
    """Tag one sentence with the averaged weights; returns (tags, score)."""
    tags, score, _, _ = decode_with_trace(sentence, model, lexicon, rules, dopts, cfg)
    return tags, score


def decode_with_trace(sentence: Sentence, model: Model,
                      lexicon: Lexicon | None = None,
                      rules: RuleCascade | None = None,
                      dopts: DecodeOptions = DecodeOptions(),
                      cfg: FeatureConfig | None = None):
    """decode() plus the per-step trace and commit order, for audits.

    `cfg` overrides the model's feature config at decode time (used for
    test-only rule filtering of the lexicon features)."""
    words = [tok.surface for tok in sentence.tokens]
    cand_ids = _candidate_ids(sentence, model.inventory, lexicon, rules,
                              dopts.candidate_source, dopts.hard_output_rules)
    scorer = _SentenceScorer(model, words, model.averaged, lexicon, rules,
                             grow=False, cfg=cfg)
    ids, score, trace, order = _decode_beam(scorer, cand_ids, dopts.beam_size)
    return [model.inventory.tags[t] for t in ids], score, trace, order


def rescore(sentence: Sentence, tags, commit_order, model: Model,
            lexicon: Lexicon | None = None,
            rules: RuleCascade | None = None,
            cfg: FeatureConfig | None = None) -> float:
    """Replay a commit order over a fixed assignment, summing action scores.

    Replaying decode's own commit order and output tags reproduces its
    reported score (up to float association)."""
    n = len(sentence.tokens)
    if sorted(commit_order) != list(range(n)):
        raise ValueError("commit_order is not a permutation of positions")
    if len(tags) != n:
        raise ValueError("tags/sentence length mismatch")
    words = [tok.surface for tok in sentence.tokens]
    scorer = _SentenceScorer(model, words, model.averaged, lexicon, rules,
                             grow=False, cfg=cfg)
    tag_ids = [model.inventory.id(t) for t in tags]
    assigned: dict[int, int] = {}
    total = 0.0
    for p in commit_order:
        vec = scorer.score(p, _visible_context(p, assigned))
        total += float(vec[tag_ids[p]])
        assigned[p] = tag_ids[p]
    return total


# Training ----------------------------------------------------------------

@dataclass
class UpdateRecord:
    """One passive-aggressive update, for post-condition audits."""

    position: int
    gold_id: int
    predicted_id: int
    tau: float
    capped: bool
    margin_after: float


class _AveragedAccumulator:
    """Running sum of post-update weight snapshots, maintained lazily."""

    def __init__(self, T: int):
        self.T = T
        self.acc: dict[int, np.ndarray] = {}
        self.last: dict[int, int] = {}
        self.k = 0  # number of updates so far

    def touch(self, fid: int, row: np.ndarray):
        """Credit pending snapshots for fid before it changes in update k+1."""
        pending = self.k - self.last.get(fid, 0)
        if pending:
            acc = self.acc.get(fid)
            if acc is None:
                acc = self.acc[fid] = np.zeros(self.T)
            acc += row * pending
        self.last[fid] = self.k

    def finalize(self, weights: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
        if self.k == 0:
            return {}
        out = {}
        for fid, row in weights.items():
            acc = self.acc.get(fid, np.zeros(self.T)).copy()
            acc += row * (self.k - self.last.get(fid, 0))
            out[fid] = acc / self.k
        return out


def train(corpus: Corpus, lexicon: Lexicon | None = None,
          rules: RuleCascade | None = None,
          topts: TrainOptions = TrainOptions(),
          cfg: FeatureConfig = FeatureConfig(),
          inventory: TagInventory | None = None,
          update_log: list | None = None):
    """Train a model; returns (model, per-epoch training accuracies).

    The inventory defaults to all tags in the corpus plus all lexicon tags,
    sorted.  Pass `update_log` to capture every PA update for audits.
    """
    if not corpus.sentences:
        raise ConfigError("cannot train on an empty corpus")
    for tok in corpus.tokens():
        if tok.gold_tag is None:
            raise DataError(f"training token {tok.surface!r} has no gold tag")
    if inventory is None:
        tags = {tok.gold_tag for tok in corpus.tokens()}
        if lexicon is not None:
            tags |= lexicon.all_tags()
        inventory = TagInventory(sorted(tags))
    for tok in corpus.tokens():
        if tok.gold_tag not in inventory:
            raise DataError(f"gold tag {tok.gold_tag!r} missing from inventory")

    model = Model(inventory, cfg, meta={"epochs": topts.epochs, "seed": topts.seed,
                                        "candidate_source": topts.candidate_source})
    avg = _AveragedAccumulator(len(inventory))
    C, margin = topts.aggressiveness, topts.margin
    epoch_accuracy = []

    # Per-sentence candidate sets are fixed across epochs.
    sent_cands = []
    for sent in corpus:
        cands = _candidate_ids(sent, inventory, lexicon, rules,
                               topts.candidate_source, None)
        for tok, ids in zip(sent.tokens, cands):
            if inventory.id(tok.gold_tag) not in ids:
                raise DataError(
                    f"gold tag {tok.gold_tag!r} of token {tok.surface!r} is not "
                    f"among its candidates under source {topts.candidate_source!r}")
        sent_cands.append(cands)

    for _ in range(topts.epochs):
        total_tokens = 0
        clean_tokens = 0
        for sent, cand_ids in zip(corpus.sentences, sent_cands):
            words = [tok.surface for tok in sent.tokens]
            gold = [inventory.id(tok.gold_tag) for tok in sent.tokens]
            scorer = _SentenceScorer(model, words, model.weights, lexicon,
                                     rules, grow=True)
            n = len(words)
            assigned: dict[int, int] = {}
            untagged = set(range(n))
            dirty: set[int] = set()  # positions that triggered an update
            cache: dict[int, tuple[float, int]] = {}
            guard = 0
            guard_limit = 50 + 10 * n
            while untagged:
                best_p, best = None, (-np.inf, -1)
                for p in sorted(untagged):
                    entry = cache.get(p)
                    if entry is None:
                        vec = scorer.score(p, _visible_context(p, assigned))
                        entry = (-np.inf, -1)
                        for c in cand_ids[p]:
                            if vec[c] > entry[0]:
                                entry = (float(vec[c]), c)
                        cache[p] = entry
                    if entry[0] > best[0]:
                        best_p, best = p, entry
                p, (_, c) = best_p, best
                if c == gold[p] or guard > guard_limit:
                    assigned[p] = gold[p]
                    untagged.discard(p)
                    for q in range(p - 2, p + 3):
                        cache.pop(q, None)
                    continue
                # Passive-aggressive update on the violating action.
                dirty.add(p)
                guard += 1
                fids = scorer.feature_ids(p, _visible_context(p, assigned))
                vec = scorer.score_vector(fids)
                s_pred, s_gold = float(vec[c]), float(vec[gold[p]])
                denom = 2.0 * len(fids)
                tau = min(C, (margin + s_pred - s_gold) / denom)
                for fid in set(fids):
                    row = model.weights.get(fid)
                    if row is None:
                        row = model.weights[fid] = np.zeros(len(inventory))
                    avg.touch(fid, row)
                mult = {f: fids.count(f) for f in set(fids)}
                for fid, m in mult.items():
                    row = model.weights[fid]
                    row[gold[p]] += tau * m
                    row[c] -= tau * m
                avg.k += 1
                if update_log is not None:
                    vec2 = scorer.score_vector(fids)
                    update_log.append(UpdateRecord(
                        p, gold[p], c, tau, tau >= C,
                        float(vec2[gold[p]] - vec2[c])))
                cache.clear()
            total_tokens += n
            clean_tokens += n - len(dirty)
        epoch_accuracy.append(clean_tokens / total_tokens)

    model.averaged = avg.finalize(model.weights)
    model.meta["updates"] = avg.k
    model.meta["epoch_accuracy"] = epoch_accuracy
    return model, epoch_accuracy
