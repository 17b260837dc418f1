"""Declarative experiment grid: train/decode/evaluate one row per
configuration of lexicon features, rule filtering, hard constraints, and
beam size.

Spec file format (line-oriented, '#' comments):

    train=path/to/train.tsv
    test=path/to/test.tsv
    lexicon=path/to/lexicon.tsv      # optional
    rules=path/to/rules.dsl          # optional
    seed=0
    epochs=5
    row: id=1 lexicon_features=off rule_filter=off hard_rules=off beam=1
    row: id=5 lexicon_features=on rule_filter=test-only hard_rules=off beam=1

rule_filter is one of off | train+test | test-only and controls whether the
cascade filters the lexicon-suggestion features; hard_rules additionally
restricts the decoder's output tags to the cascade-filtered sets.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .corpus import read_vertical
from .errors import ConfigError, FormatError
from .evaluation import evaluate
from .features import FeatureConfig
from .lexicon import load_lexicon
from .rules import parse_rules
from .tagger import DecodeOptions, TrainOptions, decode, train

RULE_FILTER_MODES = ("off", "train+test", "test-only")


@dataclass(frozen=True)
class GridRow:
    row_id: str
    use_lexicon_features: bool
    rule_filter: str = "off"
    hard_rules: bool = False
    beam: int = 1

    def __post_init__(self):
        if self.rule_filter not in RULE_FILTER_MODES:
            raise ConfigError(f"unknown rule_filter {self.rule_filter!r}")
        if self.beam < 1:
            raise ConfigError("beam must be >= 1")


@dataclass
class ExperimentSpec:
    train_path: str
    test_path: str
    lexicon_path: str | None = None
    rules_path: str | None = None
    seed: int = 0
    epochs: int = 5
    rows: list[GridRow] = field(default_factory=list)


def _parse_bool(value, lineno, path):
    if value in ("on", "yes", "true", "1"):
        return True
    if value in ("off", "no", "false", "0"):
        return False
    raise FormatError(f"bad boolean {value!r}", lineno, path)


def parse_spec(text: str, base_dir: str = ".", path=None) -> ExperimentSpec:
    keys: dict[str, str] = {}
    rows: list[GridRow] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("row:"):
            fields = {}
            for token in line[4:].split():
                if "=" not in token:
                    raise FormatError(f"expected key=value, got {token!r}", lineno, path)
                k, v = token.split("=", 1)
                fields[k] = v
            if "id" not in fields:
                raise FormatError("row needs an id", lineno, path)
            try:
                rows.append(GridRow(
                    row_id=fields["id"],
                    use_lexicon_features=_parse_bool(
                        fields.get("lexicon_features", "off"), lineno, path),
                    rule_filter=fields.get("rule_filter", "off"),
                    hard_rules=_parse_bool(fields.get("hard_rules", "off"), lineno, path),
                    beam=int(fields.get("beam", "1")),
                ))
            except (ConfigError, ValueError) as exc:
                raise FormatError(str(exc), lineno, path) from None
        elif "=" in line:
            k, v = line.split("=", 1)
            keys[k.strip()] = v.strip()
        else:
            raise FormatError(f"unexpected line {line!r}", lineno, path)
    for required in ("train", "test"):
        if required not in keys:
            raise ConfigError(f"experiment spec is missing {required!r}")

    def resolve(key):
        value = keys.get(key)
        if value is None:
            return None
        return value if os.path.isabs(value) else os.path.join(base_dir, value)

    return ExperimentSpec(
        train_path=resolve("train"),
        test_path=resolve("test"),
        lexicon_path=resolve("lexicon"),
        rules_path=resolve("rules"),
        seed=int(keys.get("seed", "0")),
        epochs=int(keys.get("epochs", "5")),
        rows=rows,
    )


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def run_experiment(spec: ExperimentSpec, progress=None):
    """Run every grid row end-to-end; returns a list of
    (row_id, sentence_accuracy, token_accuracy).

    Rows sharing the same training configuration share one trained model.
    Row failures propagate with the row id attached.
    """
    train_corpus = read_vertical(_read(spec.train_path), spec.train_path)
    test_corpus = read_vertical(_read(spec.test_path), spec.test_path)
    lexicon = load_lexicon(_read(spec.lexicon_path), spec.lexicon_path) \
        if spec.lexicon_path else None
    rules = parse_rules(_read(spec.rules_path), spec.rules_path) \
        if spec.rules_path else None

    models = {}
    results = []
    for row in spec.rows:
        try:
            if row.use_lexicon_features and lexicon is None:
                raise ConfigError("row uses lexicon features but no lexicon is given")
            if (row.rule_filter != "off" or row.hard_rules) and rules is None:
                raise ConfigError("row uses rules but no rules file is given")
            train_filter = "rules" if row.rule_filter == "train+test" else "none"
            test_filter = "rules" if row.rule_filter in ("train+test", "test-only") \
                else "none"
            train_cfg = FeatureConfig(use_lexicon_features=row.use_lexicon_features,
                                      lexicon_filter=train_filter)
            key = (row.use_lexicon_features, train_filter)
            if key not in models:
                if progress:
                    progress(f"training model for {key}")
                models[key], _ = train(
                    train_corpus, lexicon, rules,
                    TrainOptions(epochs=spec.epochs, seed=spec.seed),
                    train_cfg)
            model = models[key]
            decode_cfg = replace(train_cfg, lexicon_filter=test_filter)
            dopts = DecodeOptions(
                beam_size=row.beam,
                hard_output_rules=rules if row.hard_rules else None)
            predictions = [decode(sent, model, lexicon, rules, dopts, decode_cfg)[0]
                           for sent in test_corpus]
            vocab = {tok.surface for tok in train_corpus.tokens()}
            report = evaluate(test_corpus, predictions, vocab)
            results.append((row.row_id, report.sentence_accuracy,
                            report.token_accuracy))
            if progress:
                progress(f"row {row.row_id}: sentence {report.sentence_accuracy:.4f} "
                         f"token {report.token_accuracy:.4f}")
        except Exception as exc:
            raise type(exc)(f"row {row.row_id}: {exc}") from exc
    return results


def format_results(results) -> str:
    lines = [f"{row_id}\t{sent_acc:.4f}\t{tok_acc:.4f}"
             for row_id, sent_acc, tok_acc in results]
    return "\n".join(lines) + ("\n" if lines else "")
