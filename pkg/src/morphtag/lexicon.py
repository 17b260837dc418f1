"""Morphological lexicon: wordform -> admissible tags (optionally with lemmas).

File format: one `surface<TAB>tag[<TAB>lemma]` line per reading; repeated
surfaces accumulate readings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Corpus
from .errors import DataError, FormatError


@dataclass(frozen=True)
class TagClass:
    """Canonicalized set of tags a wordform can take."""

    tags: frozenset[str]

    def __post_init__(self):
        if not self.tags:
            raise ValueError("empty tag class")

    @property
    def key(self) -> str:
        return ";".join(sorted(self.tags))

    def __contains__(self, tag):
        return tag in self.tags

    def __len__(self):
        return len(self.tags)


@dataclass
class LexiconEntry:
    surface: str
    readings: dict[str, str | None] = field(default_factory=dict)  # tag -> lemma

    @property
    def tags(self) -> frozenset[str]:
        return frozenset(self.readings)


class Lexicon:
    """Immutable-by-convention surface -> entry map; lookups are pure."""

    def __init__(self, entries: dict[str, LexiconEntry] | None = None):
        self.entries: dict[str, LexiconEntry] = entries or {}

    def __len__(self):
        return len(self.entries)

    def __contains__(self, surface):
        return surface in self.entries

    def lookup(self, surface: str) -> TagClass | None:
        entry = self.entries.get(surface)
        if entry is None:
            return None
        return TagClass(entry.tags)

    def tags(self, surface: str) -> frozenset[str] | None:
        entry = self.entries.get(surface)
        return entry.tags if entry is not None else None

    def lemma(self, surface: str, tag: str) -> str | None:
        entry = self.entries.get(surface)
        if entry is None:
            return None
        return entry.readings.get(tag)

    def all_tags(self) -> set[str]:
        out: set[str] = set()
        for entry in self.entries.values():
            out.update(entry.readings)
        return out

    def items(self):
        return self.entries.items()


def load_lexicon(text: str, path=None) -> Lexicon:
    entries: dict[str, LexiconEntry] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise FormatError(f"expected 2 or 3 tab-separated fields, got {len(fields)}",
                              lineno, path)
        surface, tag = fields[0], fields[1]
        if not surface or not tag:
            raise FormatError("empty surface or tag", lineno, path)
        lemma = fields[2] if len(fields) == 3 and fields[2] else None
        entry = entries.setdefault(surface, LexiconEntry(surface))
        if tag in entry.readings:
            old = entry.readings[tag]
            if lemma is not None and old is not None and lemma != old:
                raise DataError(
                    f"{path or '<lexicon>'}:{lineno}: conflicting lemmas for "
                    f"({surface!r}, {tag!r}): {old!r} vs {lemma!r}")
            if lemma is not None:
                entry.readings[tag] = lemma
        else:
            entry.readings[tag] = lemma
    return Lexicon(entries)


def dump_lexicon(lexicon: Lexicon) -> str:
    lines = []
    for surface in sorted(lexicon.entries):
        entry = lexicon.entries[surface]
        for tag in sorted(entry.readings):
            lemma = entry.readings[tag]
            if lemma is None:
                lines.append(f"{surface}\t{tag}")
            else:
                lines.append(f"{surface}\t{tag}\t{lemma}")
    return "\n".join(lines) + ("\n" if lines else "")


def ambiguity_stats(lexicon: Lexicon, corpus: Corpus, rules=None,
                    punct_class: str | None = "U"):
    """(ambiguous_token_fraction, mean_tags_per_token) over non-punctuation
    tokens.

    Candidate sets come from the lexicon, optionally reduced by a rule
    cascade; out-of-lexicon tokens count as having a single tag.  A token is
    punctuation when its gold tag (or, lacking one, every lexicon tag) is in
    the punctuation class.
    """
    from .rules import apply_cascade  # local import to avoid a cycle

    n = 0
    ambiguous = 0
    total_tags = 0
    for sent in corpus:
        sets = []
        for tok in sent.tokens:
            tags = lexicon.tags(tok.surface)
            sets.append(set(tags) if tags else {tok.gold_tag or tok.surface})
        if rules is not None:
            sets = apply_cascade(rules, sent, sets)
        for tok, cands in zip(sent.tokens, sets):
            if punct_class is not None:
                if tok.gold_tag is not None:
                    if tok.gold_tag.startswith(punct_class):
                        continue
                elif all(t.startswith(punct_class) for t in cands):
                    continue
            n += 1
            total_tags += len(cands)
            if len(cands) > 1:
                ambiguous += 1
    if n == 0:
        return 0.0, 1.0
    return ambiguous / n, total_tags / n
