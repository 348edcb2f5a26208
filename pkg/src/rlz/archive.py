"""Random-access archive of encoded documents.

File layout (all integers little-endian):

    magic         "RLZA"  4 bytes
    version       u16     currently 1
    scheme        u8      high nibble position code (0=U, 1=Z),
                          low nibble length code (0=V, 1=Z)
    reserved      u8      0
    dict_checksum u64     FNV-1a-64 of the dictionary the archive encodes against
    doc_count     u64
    table_offset  u64     file offset of the document map
    payload       doc_count regions, each position stream then length stream
    document map  doc_count packed 28-byte entries:
                  u64 payload_offset, u32 pos_len, u32 len_len,
                  u32 factor_count, u64 original_len

The header is written with zero doc_count/table_offset and patched at
finalize, so payloads stream straight to disk in one pass. The document map
is loaded fully into memory on open; retrieval of one document then touches
exactly its own payload region and nothing else.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

from .codec import EncodedDocument, Scheme, decode_document
from .dictionary import Dictionary, _FNV_OFFSET, _FNV_PRIME, _U64
from .errors import DictMismatch, FormatError, OutOfRange, UseAfterFinalize
from .factorize import materialize

__all__ = [
    "DocumentMapEntry",
    "ArchiveWriter",
    "ArchiveReader",
    "create_archive",
    "open_archive",
    "ARCHIVE_MAGIC",
]

ARCHIVE_MAGIC = b"RLZA"
_VERSION = 1
_HEADER = struct.Struct("<4sHBBQQQ")
_ENTRY = struct.Struct("<QIIIQ")

HEADER_SIZE = _HEADER.size  # 32
ENTRY_SIZE = _ENTRY.size  # 28


@dataclass(frozen=True)
class DocumentMapEntry:
    payload_offset: int
    pos_len: int
    len_len: int
    factor_count: int
    original_len: int

    @property
    def payload_size(self) -> int:
        return self.pos_len + self.len_len


class ArchiveWriter:
    """Single-owner, append-only archive writer."""

    def __init__(self, path, dictionary: Dictionary, scheme: Scheme):
        self.path = path
        self.scheme = scheme
        self._dict_checksum = dictionary.checksum
        self._entries: list[DocumentMapEntry] = []
        self._file = open(path, "wb")
        self._file.write(_HEADER.pack(ARCHIVE_MAGIC, _VERSION, scheme.wire_byte, 0, dictionary.checksum, 0, 0))
        self._offset = HEADER_SIZE
        self._finalized = False

    def append(self, enc: EncodedDocument) -> int:
        """Write one encoded document; returns its 0-based document id."""
        if self._finalized:
            raise UseAfterFinalize("append() on a finalized archive writer")
        self._file.write(enc.pos_stream)
        self._file.write(enc.len_stream)
        self._entries.append(
            DocumentMapEntry(
                self._offset,
                len(enc.pos_stream),
                len(enc.len_stream),
                enc.factor_count,
                enc.original_len,
            )
        )
        self._offset += len(enc.pos_stream) + len(enc.len_stream)
        return len(self._entries) - 1

    def finalize(self) -> None:
        """Write the document map, patch the header, close the file."""
        if self._finalized:
            raise UseAfterFinalize("finalize() on a finalized archive writer")
        table_offset = self._offset
        for e in self._entries:
            self._file.write(
                _ENTRY.pack(e.payload_offset, e.pos_len, e.len_len, e.factor_count, e.original_len)
            )
        self._file.seek(0)
        self._file.write(
            _HEADER.pack(
                ARCHIVE_MAGIC,
                _VERSION,
                self.scheme.wire_byte,
                0,
                self._dict_checksum,
                len(self._entries),
                table_offset,
            )
        )
        self._file.close()
        self._finalized = True

    def __enter__(self) -> "ArchiveWriter":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            if not self._finalized:
                self.finalize()
        elif not self._file.closed:
            self._file.close()


def create_archive(path, dictionary: Dictionary, scheme: Scheme) -> ArchiveWriter:
    return ArchiveWriter(path, dictionary, scheme)


def _checksum_matches_prefix(data: bytes, target: int) -> bool:
    """True if FNV-1a-64 of any prefix of `data` (including all of it) equals target."""
    h = _FNV_OFFSET
    if h == target:
        return True
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _U64
        if h == target:
            return True
    return False


class ArchiveReader:
    """Memory-resident document map over an archive file; safe for concurrent reads."""

    def __init__(self, path, dictionary: Dictionary, allow_extended: bool = False, trace_reads: bool = False):
        self.path = path
        self.dictionary = dictionary
        self.read_log: list[tuple[int, int]] | None = [] if trace_reads else None
        self._file = open(path, "rb")
        self._fd = self._file.fileno()
        header = os.pread(self._fd, HEADER_SIZE, 0)
        if len(header) < HEADER_SIZE:
            raise FormatError(f"{path}: truncated archive header")
        magic, version, scheme_byte, _, dict_checksum, doc_count, table_offset = _HEADER.unpack(header)
        if magic != ARCHIVE_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {ARCHIVE_MAGIC!r}")
        if version != _VERSION:
            raise FormatError(f"{path}: unsupported archive version {version}")
        self.scheme = Scheme.from_wire(scheme_byte)
        if dict_checksum != dictionary.checksum:
            if not (allow_extended and _checksum_matches_prefix(dictionary.data, dict_checksum)):
                raise DictMismatch(
                    f"{path}: archive was encoded against a different dictionary "
                    f"(stored checksum {dict_checksum:#018x}, supplied {dictionary.checksum:#018x})"
                )
        table = os.pread(self._fd, ENTRY_SIZE * doc_count, table_offset)
        if len(table) != ENTRY_SIZE * doc_count:
            raise FormatError(f"{path}: truncated document map")
        if table_offset + ENTRY_SIZE * doc_count != os.fstat(self._fd).st_size:
            raise FormatError(f"{path}: file size does not match header accounting")
        self.entries = [
            DocumentMapEntry(*_ENTRY.unpack_from(table, i * ENTRY_SIZE)) for i in range(doc_count)
        ]
        prev_end = HEADER_SIZE
        for e in self.entries:
            if e.payload_offset != prev_end:
                raise FormatError(f"{path}: document map regions are not contiguous")
            prev_end = e.payload_offset + e.payload_size
        if self.entries and prev_end != table_offset:
            raise FormatError(f"{path}: payload region does not end at the document map")

    @property
    def doc_count(self) -> int:
        return len(self.entries)

    def _entry(self, doc_id: int) -> DocumentMapEntry:
        if not 0 <= doc_id < len(self.entries):
            raise OutOfRange(f"document id {doc_id} outside [0, {len(self.entries)})")
        return self.entries[doc_id]

    def read_encoded(self, doc_id: int) -> EncodedDocument:
        """Fetch one document's streams; touches exactly one payload region."""
        e = self._entry(doc_id)
        raw = os.pread(self._fd, e.payload_size, e.payload_offset)
        if len(raw) != e.payload_size:
            raise FormatError(f"{self.path}: short read of payload region {doc_id}")
        if self.read_log is not None:
            self.read_log.append((e.payload_offset, e.payload_size))
        return EncodedDocument(raw[: e.pos_len], raw[e.pos_len :], e.factor_count, e.original_len)

    def get_document(self, doc_id: int) -> bytes:
        return materialize(self.dictionary, decode_document(self.read_encoded(doc_id), self.scheme))

    def stream_all(self):
        """Yield every document in order; one forward pass over the payload."""
        for doc_id in range(len(self.entries)):
            yield self.get_document(doc_id)

    def file_size(self) -> int:
        return os.fstat(self._fd).st_size

    def close(self) -> None:
        self._file.close()

    def __enter__(self) -> "ArchiveReader":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


def open_archive(path, dictionary: Dictionary, allow_extended: bool = False, trace_reads: bool = False) -> ArchiveReader:
    return ArchiveReader(path, dictionary, allow_extended=allow_extended, trace_reads=trace_reads)
