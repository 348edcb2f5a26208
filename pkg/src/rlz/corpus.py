"""Corpus loading.

Two on-disk shapes are supported:

* a single data file holding every document back to back, plus a lengths
  file with one decimal byte count per line, in document order;
* a directory whose files are the documents, taken in lexicographic
  filename order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import FormatError

__all__ = ["Corpus", "load_corpus", "load_corpus_dir", "write_corpus"]


@dataclass(frozen=True)
class Corpus:
    data: bytes
    lengths: list[int]
    offsets: list[int] = field(init=False, compare=False)

    def __post_init__(self):
        offs = [0]
        for n in self.lengths:
            offs.append(offs[-1] + n)
        object.__setattr__(self, "offsets", offs)

    def __len__(self) -> int:
        return len(self.lengths)

    def document(self, i: int) -> bytes:
        return self.data[self.offsets[i] : self.offsets[i + 1]]

    def __iter__(self):
        for i in range(len(self.lengths)):
            yield self.document(i)

    @property
    def total_len(self) -> int:
        return len(self.data)


def _parse_lengths(path) -> list[int]:
    lengths = []
    with open(path, "r", encoding="ascii") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                n = int(line, 10)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: not a decimal length: {line!r}") from None
            if n < 0:
                raise FormatError(f"{path}:{lineno}: negative length {n}")
            lengths.append(n)
    return lengths


def load_corpus(data_path, lengths_path) -> Corpus:
    """Load the concatenated-file corpus shape, checking the byte accounting."""
    with open(data_path, "rb") as f:
        data = f.read()
    lengths = _parse_lengths(lengths_path)
    total = sum(lengths)
    if total != len(data):
        raise FormatError(
            f"{lengths_path}: lengths sum to {total} bytes but {data_path} holds {len(data)}"
        )
    return Corpus(data, lengths)


def load_corpus_dir(directory) -> Corpus:
    """Load one document per file, in lexicographic filename order."""
    names = sorted(e.name for e in os.scandir(directory) if e.is_file())
    parts = []
    lengths = []
    for name in names:
        with open(os.path.join(directory, name), "rb") as f:
            doc = f.read()
        parts.append(doc)
        lengths.append(len(doc))
    return Corpus(b"".join(parts), lengths)


def write_corpus(data_path, lengths_path, docs) -> None:
    """Write documents in the concatenated-file shape (test and tooling helper)."""
    docs = list(docs)
    with open(data_path, "wb") as f:
        for d in docs:
            f.write(d)
    with open(lengths_path, "w", encoding="ascii") as f:
        for d in docs:
            f.write(f"{len(d)}\n")
