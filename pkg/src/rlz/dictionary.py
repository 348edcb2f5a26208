"""Dictionary construction by evenly spaced sampling, plus on-disk persistence.

The collection is treated as one concatenated string of n bytes. A dictionary
budget of m bytes with samples of s bytes takes k = floor(m/s) samples at
offsets round(j*n/k) for j = 0..k-1 (each clamped so the full sample fits),
and concatenates them in offset order. When m >= n the dictionary is simply
the whole collection.

Dictionary file layout (all integers little-endian):

    magic       "RLZD"   4 bytes
    version     u16      currently 1
    reserved    u16      0
    sample_size u64
    dict_len    u64
    checksum    u64      FNV-1a-64 of the dictionary bytes
    data        dict_len raw bytes
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .errors import ChecksumMismatch, EmptyCorpus, FormatError, InvalidParams

__all__ = [
    "Dictionary",
    "DEFAULT_SAMPLE_SIZE",
    "fnv1a_64",
    "sample_offsets",
    "sample_dictionary",
    "extend_dictionary",
    "write_dictionary",
    "read_dictionary",
    "dictionary_file_size",
]

DEFAULT_SAMPLE_SIZE = 1024

_MAGIC = b"RLZD"
_VERSION = 1
_HEADER = struct.Struct("<4sHHQQQ")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """FNV-1a 64-bit digest of `data`."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _U64
    return h


@dataclass(frozen=True)
class Dictionary:
    """The sampled reference text plus its identifying metadata.

    `source_len` is the collection length at build time; it is not persisted
    and is excluded from equality.
    """

    data: bytes
    sample_size: int
    checksum: int
    source_len: int = field(compare=False)

    def __len__(self) -> int:
        return len(self.data)


def _make(data: bytes, sample_size: int, source_len: int) -> Dictionary:
    return Dictionary(data, sample_size, fnv1a_64(data), source_len)


def _concat(corpus) -> bytes:
    if isinstance(corpus, (bytes, bytearray, memoryview)):
        return bytes(corpus)
    return b"".join(bytes(doc) for doc in corpus)


def _round_half_even(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and q % 2 == 1):
        q += 1
    return q


def sample_offsets(n: int, dict_size: int, sample_size: int) -> list[int]:
    """Start offsets of the k = floor(dict_size/sample_size) samples.

    Offsets are round(j*n/k), clamped into [0, n - sample_size]; exact integer
    arithmetic with ties rounded to even, so results are platform independent.
    """
    k = dict_size // sample_size
    last = n - sample_size
    offsets = []
    for j in range(k):
        off = _round_half_even(j * n, k)
        offsets.append(min(max(off, 0), last))
    return offsets


def sample_dictionary(corpus, dict_size: int, sample_size: int = DEFAULT_SAMPLE_SIZE) -> Dictionary:
    """Build a dictionary of up to `dict_size` bytes from evenly spaced samples.

    `corpus` is a sequence of byte-string documents (or a single byte string),
    treated as one concatenated string. Raises EmptyCorpus for an empty
    collection and InvalidParams for sample_size < 1 or dict_size < sample_size.
    """
    if sample_size < 1 or dict_size < sample_size:
        raise InvalidParams(
            f"need sample_size >= 1 and dict_size >= sample_size, "
            f"got dict_size={dict_size} sample_size={sample_size}"
        )
    text = _concat(corpus)
    n = len(text)
    if n == 0:
        raise EmptyCorpus("cannot sample an empty collection")
    if dict_size >= n:
        return _make(text, sample_size, n)
    parts = [
        text[off : off + sample_size] for off in sample_offsets(n, dict_size, sample_size)
    ]
    return _make(b"".join(parts), sample_size, n)


def extend_dictionary(
    dictionary: Dictionary, new_docs, added_size: int, sample_size: int
) -> Dictionary:
    """Append samples of `new_docs` to an existing dictionary.

    The old bytes stay a prefix of the result, so positions encoded against
    the old dictionary remain valid; the caller must rebuild the suffix
    index. The stored sample_size keeps the original build's value.
    """
    grown = sample_dictionary(new_docs, added_size, sample_size)
    return _make(
        dictionary.data + grown.data,
        dictionary.sample_size,
        dictionary.source_len + grown.source_len,
    )


def write_dictionary(dictionary: Dictionary, path) -> None:
    header = _HEADER.pack(
        _MAGIC,
        _VERSION,
        0,
        dictionary.sample_size,
        len(dictionary.data),
        dictionary.checksum,
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(dictionary.data)


def read_dictionary(path) -> Dictionary:
    """Read a dictionary file, validating magic, version and checksum.

    The returned Dictionary has source_len = 0 (the build-time collection
    length is not persisted).
    """
    with open(path, "rb") as f:
        header = f.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise FormatError(f"{path}: truncated dictionary header")
        magic, version, _, sample_size, dict_len, checksum = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {_MAGIC!r}")
        if version != _VERSION:
            raise FormatError(f"{path}: unsupported dictionary version {version}")
        data = f.read(dict_len)
    if len(data) != dict_len:
        raise FormatError(f"{path}: dictionary payload truncated")
    actual = fnv1a_64(data)
    if actual != checksum:
        raise ChecksumMismatch(
            f"{path}: checksum {actual:#018x} does not match stored {checksum:#018x}"
        )
    return Dictionary(data, sample_size, checksum, 0)


def dictionary_file_size(dictionary: Dictionary) -> int:
    """Size in bytes of the serialized dictionary file."""
    return _HEADER.size + len(dictionary.data)
