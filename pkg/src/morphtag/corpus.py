"""Tagged corpora in the vertical one-token-per-line format, plus statistics.

Format: each non-blank line is `surface<TAB>tag` or a bare `surface`; a
blank line ends a sentence.  UTF-8, LF canonical (CRLF tolerated on read).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError, FormatError


@dataclass(frozen=True)
class Token:
    surface: str
    gold_tag: str | None = None

    def __post_init__(self):
        if not self.surface or any(ch.isspace() for ch in self.surface):
            raise ValueError(f"bad token surface {self.surface!r}")


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("empty sentence")

    def __len__(self):
        return len(self.tokens)

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def gold_tags(self) -> list[str | None]:
        return [t.gold_tag for t in self.tokens]


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...]

    def __len__(self):
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def tokens(self):
        for sent in self.sentences:
            yield from sent.tokens


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    token_count: int
    type_count: int
    tag_type_count: int


def read_vertical(text: str, path=None) -> Corpus:
    """Parse a vertical-format corpus; a trailing sentence without a final
    blank line is accepted."""
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r")
        if not line.strip():
            if tokens:
                sentences.append(Sentence(tuple(tokens)))
                tokens = []
            continue
        fields = line.split("\t")
        if len(fields) > 2:
            raise FormatError(f"expected at most 2 tab-separated fields, got {len(fields)}",
                              lineno, path)
        surface = fields[0]
        if not surface:
            raise FormatError("empty surface form", lineno, path)
        tag = fields[1] if len(fields) == 2 and fields[1] else None
        try:
            tokens.append(Token(surface, tag))
        except ValueError as exc:
            raise FormatError(str(exc), lineno, path) from None
    if tokens:
        sentences.append(Sentence(tuple(tokens)))
    return Corpus(tuple(sentences))


def write_vertical(corpus: Corpus) -> str:
    """Inverse of read_vertical: read_vertical(write_vertical(c)) == c."""
    lines: list[str] = []
    for sent in corpus.sentences:
        for tok in sent.tokens:
            if tok.gold_tag is None:
                lines.append(tok.surface)
            else:
                lines.append(f"{tok.surface}\t{tok.gold_tag}")
        lines.append("")
    return "\n".join(lines) + ("\n" if lines else "")


def stats(corpus: Corpus) -> CorpusStats:
    """Exact sentence/token/type/tag-type counts; every token must carry a
    gold tag.  Type counting is case-sensitive on the raw surface."""
    surfaces: set[str] = set()
    tags: set[str] = set()
    n_tokens = 0
    for tok in corpus.tokens():
        if tok.gold_tag is None:
            raise DataError(f"token {tok.surface!r} has no gold tag")
        surfaces.add(tok.surface)
        tags.add(tok.gold_tag)
        n_tokens += 1
    return CorpusStats(len(corpus.sentences), n_tokens, len(surfaces), len(tags))
