"""CoNLL-U reading: 10-column, tab-separated, UTF-8.

Only the ID, FORM, LEMMA, UPOS, HEAD and DEPREL columns are used.
Multiword-token ranges (ID "1-2") and empty nodes (ID "1.1") are skipped.
Lemmas are lower-cased on load; a "_" lemma falls back to the form.
"""

import gzip
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

from .errors import ConlluParseError, SentenceStructureError

TextSource = Union[str, Path, IO[str], Iterable[str]]


@dataclass(frozen=True)
class Token:
    index: int
    surface: str
    lemma: str
    upos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: tuple[Token, ...] = field(default_factory=tuple)

    def token_at(self, index: int) -> Token:
        """Tokens are 1-based and contiguous, so position maps directly."""
        return self.tokens[index - 1]

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    def validate(self) -> "Sentence":
        indices = [t.index for t in self.tokens]
        if indices != list(range(1, len(self.tokens) + 1)):
            raise SentenceStructureError(
                "token indices are not 1-based and contiguous", self.id)
        n = len(self.tokens)
        for t in self.tokens:
            if t.head == t.index:
                raise SentenceStructureError(
                    f"token {t.index} is its own head", self.id)
            if not 0 <= t.head <= n:
                raise SentenceStructureError(
                    f"token {t.index} has dangling head {t.head}", self.id)
        return self


def _open_lines(source: TextSource) -> Iterator[str]:
    if isinstance(source, str):
        # strings holding CoNLL-U text (tabs/newlines) are read directly;
        # anything else is taken as a filesystem path
        if source == "" or "\n" in source or "\t" in source:
            yield from io.StringIO(source)
            return
        source = Path(source)
    if isinstance(source, Path):
        with open(source, "rb") as raw:
            head = raw.read(2)
        opener = gzip.open if head == b"\x1f\x8b" else open
        with opener(source, "rt", encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def iter_sentences(source: TextSource) -> Iterator[Sentence]:
    """Stream sentences from CoNLL-U text, a path, or an open file.

    Raises ConlluParseError for malformed lines (with line number) and
    SentenceStructureError for dangling heads (with sentence id).
    """
    rows: list[Token] = []
    sent_id = None
    count = 0

    def flush():
        nonlocal rows, sent_id, count
        if not rows:
            sent_id = None
            return None
        count += 1
        sent = Sentence(sent_id if sent_id is not None else f"s{count}", tuple(rows))
        rows = []
        sent_id = None
        return sent.validate()

    for lineno, line in enumerate(_open_lines(source), start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip():
            sent = flush()
            if sent is not None:
                yield sent
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sent_id"):
                _, _, value = body.partition("=")
                if value.strip():
                    sent_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluParseError(
                f"expected 10 tab-separated columns, got {len(cols)}", lineno)
        tok_id, form, lemma, upos, _, _, head, deprel = cols[:8]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword-token range / empty node
        try:
            index = int(tok_id)
        except ValueError:
            raise ConlluParseError(f"non-numeric ID {tok_id!r}", lineno) from None
        try:
            head_idx = int(head)
        except ValueError:
            raise ConlluParseError(f"non-numeric HEAD {head!r}", lineno) from None
        lemma = lemma if lemma and lemma != "_" else form
        rows.append(Token(index, form, lemma.lower(), upos, head_idx, deprel))

    sent = flush()
    if sent is not None:
        yield sent


def parse_conllu(source: TextSource) -> list[Sentence]:
    """Read an entire CoNLL-U stream into a list of validated sentences."""
    return list(iter_sentences(source))
