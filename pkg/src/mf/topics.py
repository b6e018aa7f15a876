"""Per-word topic probability vectors and dot-product relatedness.

File format: a header line "T=<topic count>", then one row per word,
"lexeme <TAB> p1 <TAB> ... <TAB> pT". Words missing from the matrix are
out of vocabulary; their relatedness to anything is 0 and downstream
filtering must keep them.
"""

import gzip
from pathlib import Path
from typing import IO, Iterable, Union

import numpy as np

from .errors import FormatError


class TopicMatrix:
    def __init__(self, topics: int, phi: dict[str, np.ndarray]):
        if topics < 1:
            raise FormatError(f"topic count must be >= 1, got {topics}")
        for word, vec in phi.items():
            if vec.shape != (topics,):
                raise FormatError(f"{word!r}: expected {topics} probabilities")
            if np.any(vec < 0):
                raise FormatError(f"{word!r}: negative probability")
        self.topics = topics
        self._phi = {w: np.asarray(v, dtype=float) for w, v in phi.items()}

    def __contains__(self, word: str) -> bool:
        return word in self._phi

    def __len__(self) -> int:
        return len(self._phi)

    def vocabulary(self) -> set[str]:
        return set(self._phi)

    def vector(self, word: str) -> np.ndarray:
        return self._phi[word]

    def is_oov(self, word: str) -> bool:
        return word not in self._phi

    def relatedness(self, w1: str, w2: str) -> float:
        """Sum over topics of phi(w1) * phi(w2); 0.0 when either word is OOV."""
        if w1 not in self._phi or w2 not in self._phi:
            return 0.0
        return float(np.dot(self._phi[w1], self._phi[w2]))

    def is_normalized(self, tol: float = 1e-6) -> bool:
        """Whether each topic's probabilities sum to 1 over this vocabulary.

        Complete topic-model output satisfies this; fixture slices need not.
        """
        if not self._phi:
            return False
        sums = np.sum(list(self._phi.values()), axis=0)
        return bool(np.all(np.abs(sums - 1.0) <= tol))


def relatedness(w1: str, w2: str, tm: TopicMatrix) -> float:
    return tm.relatedness(w1, w2)


def load_topic_matrix(source: Union[str, Path, IO[str], Iterable[str]]) -> TopicMatrix:
    if isinstance(source, (str, Path)):
        path = Path(source)
        with open(path, "rb") as raw:
            head = raw.read(2)
        opener = gzip.open if head == b"\x1f\x8b" else open
        with opener(path, "rt", encoding="utf-8") as fh:
            return _read(fh)
    return _read(source)


def _read(lines: Iterable[str]) -> TopicMatrix:
    topics = None
    phi: dict[str, np.ndarray] = {}
    for rowno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        if topics is None:
            if not line.startswith("T="):
                raise FormatError("first row must be the header T=<count>", rowno)
            try:
                topics = int(line[2:])
            except ValueError:
                raise FormatError(f"bad topic count {line[2:]!r}", rowno) from None
            continue
        cols = line.split("\t")
        if len(cols) != topics + 1:
            raise FormatError(
                f"expected lexeme plus {topics} probabilities, got {len(cols) - 1}",
                rowno)
        try:
            vec = np.array([float(x) for x in cols[1:]], dtype=float)
        except ValueError:
            raise FormatError("non-numeric probability", rowno) from None
        if np.any(vec < 0):
            raise FormatError("negative probability", rowno)
        phi[cols[0]] = vec
    if topics is None:
        raise FormatError("missing T=<count> header")
    return TopicMatrix(topics, phi)


def save_topic_matrix(tm: TopicMatrix, target: Union[str, Path, IO[str]]) -> None:
    def write(fh):
        fh.write(f"T={tm.topics}\n")
        for word in sorted(tm.vocabulary()):
            probs = "\t".join(repr(float(x)) for x in tm.vector(word))
            fh.write(f"{word}\t{probs}\n")

    if isinstance(target, (str, Path)):
        path = Path(target)
        opener = gzip.open if path.suffix == ".gz" else open
        with opener(path, "wt", encoding="utf-8") as fh:
            write(fh)
    else:
        write(target)
