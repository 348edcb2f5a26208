"""Greedy factorization of documents against the dictionary, and the inverse.

A document is parsed left to right; at each position the longest dictionary
substring starting there becomes a copy factor (position, length). A byte
that occurs nowhere in the dictionary becomes a literal factor: length 0,
with the byte value carried in the position field. Parsing never crosses the
end of the document.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .dictionary import Dictionary
from .errors import CorruptFactor
from .suffix_index import SearchCounters, SuffixArray, _match_range, build_suffix_array

__all__ = [
    "Factor",
    "FactorDocument",
    "DictionaryIndex",
    "factorize_document",
    "materialize",
    "coverage",
    "unused_fraction",
]


class Factor(NamedTuple):
    """A copy factor (dictionary offset, length >= 1) or a literal (byte, 0)."""

    position: int
    length: int

    @property
    def is_literal(self) -> bool:
        return self.length == 0

    @classmethod
    def literal(cls, byte_value: int) -> "Factor":
        return cls(byte_value, 0)

    @property
    def source_len(self) -> int:
        """Bytes of the original document this factor covers."""
        return self.length if self.length > 0 else 1


@dataclass
class FactorDocument:
    """The factor parse of one document plus its original byte length."""

    factors: list[Factor]
    original_len: int


@dataclass
class DictionaryIndex:
    """A dictionary paired with the suffix array of its bytes."""

    dictionary: Dictionary
    sa: SuffixArray

    @classmethod
    def build(cls, dictionary: Dictionary) -> "DictionaryIndex":
        return cls(dictionary, build_suffix_array(dictionary.data))


def factorize_document(
    index: DictionaryIndex, doc, counters: SearchCounters | None = None
) -> FactorDocument:
    """Parse `doc` into factors relative to the indexed dictionary."""
    text = index.dictionary.data
    sa = index.sa
    end = len(doc)
    factors: list[Factor] = []
    i = 0
    while i < end:
        pos, length = _match_range(sa, text, doc, i, end, counters)
        if length == 0:
            factors.append(Factor(pos, 0))
            i += 1
        else:
            factors.append(Factor(pos, length))
            i += length
    return FactorDocument(factors, end)


def materialize(dictionary: Dictionary, fdoc: FactorDocument) -> bytes:
    """Expand a factor parse back into the original document bytes."""
    text = dictionary.data
    n = len(text)
    parts = []
    for pos, length in fdoc.factors:
        if length == 0:
            if not 0 <= pos <= 255:
                raise CorruptFactor(f"literal byte value {pos} outside [0, 255]")
            parts.append(bytes((pos,)))
        else:
            if pos < 0 or pos + length > n:
                raise CorruptFactor(
                    f"copy factor ({pos}, {length}) exceeds dictionary length {n}"
                )
            parts.append(text[pos : pos + length])
    out = b"".join(parts)
    return out


def coverage(fdocs: Iterable[FactorDocument], dict_len: int) -> np.ndarray:
    """Boolean map of dictionary offsets touched by any copy factor."""
    touched = np.zeros(dict_len, dtype=bool)
    for fdoc in fdocs:
        for pos, length in fdoc.factors:
            if length > 0:
                touched[pos : pos + length] = True
    return touched


def unused_fraction(touched: np.ndarray) -> float:
    """Fraction of dictionary offsets never referenced, in [0, 1]."""
    if touched.size == 0:
        return 0.0
    return float(np.count_nonzero(~touched)) / touched.size
