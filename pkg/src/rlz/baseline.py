"""Blocked zlib baseline store.

Documents are packed greedily into fixed-size raw blocks and each block is
deflated independently. Retrieving one document therefore decompresses its
block only up to the end of that document; the reader counts how many raw
bytes that forced, which is the quantity the access benchmarks compare
against true random access.

File layout (little-endian):

    magic        "RLZB"  4 bytes
    version      u16     currently 1
    reserved     u16     0
    block_size   u64     packing target in raw bytes (0 = one doc per block)
    doc_count    u64
    block_count  u64
    table_offset u64
    payload      compressed blocks back to back
    block table  block_count entries: u64 file_offset, u64 comp_len, u64 raw_len
    doc table    doc_count entries:   u64 block_idx, u64 offset_in_block, u64 doc_len
"""

from __future__ import annotations

import os
import struct
import zlib
from dataclasses import dataclass

from .errors import FormatError, InvalidParams, OutOfRange

__all__ = [
    "BlockedArchive",
    "BlockedReader",
    "compress_blocked",
    "write_blocked",
    "open_blocked",
    "BASELINE_MAGIC",
]

BASELINE_MAGIC = b"RLZB"
_VERSION = 1
_HEADER = struct.Struct("<4sHHQQQQ")
_BLOCK_ENTRY = struct.Struct("<QQQ")
_DOC_ENTRY = struct.Struct("<QQQ")


@dataclass(frozen=True)
class BlockedArchive:
    """In-memory form: compressed blocks plus the two lookup tables."""

    block_size: int
    blocks: list[bytes]
    block_raw_lens: list[int]
    docs: list[tuple[int, int, int]]  # (block_idx, offset_in_block, doc_len)

    @property
    def doc_count(self) -> int:
        return len(self.docs)


def compress_blocked(docs, block_size: int, level: int = zlib.Z_BEST_COMPRESSION) -> BlockedArchive:
    """Pack documents into blocks of at most block_size raw bytes and deflate each.

    A document longer than block_size still goes into a single (oversized)
    block of its own; documents are never split. block_size 0 means one
    document per block.
    """
    if not 1 <= level <= 9:
        raise InvalidParams(f"zlib level {level} outside [1, 9]")
    if block_size < 0:
        raise InvalidParams(f"block size {block_size} is negative")
    blocks: list[bytes] = []
    raw_lens: list[int] = []
    doc_table: list[tuple[int, int, int]] = []
    pending: list[bytes] = []
    pending_len = 0

    def flush():
        nonlocal pending, pending_len
        if pending:
            raw = b"".join(pending)
            blocks.append(zlib.compress(raw, level))
            raw_lens.append(len(raw))
            pending = []
            pending_len = 0

    for doc in docs:
        doc = bytes(doc)
        if pending and (block_size == 0 or pending_len + len(doc) > block_size):
            flush()
        doc_table.append((len(blocks), pending_len, len(doc)))
        pending.append(doc)
        pending_len += len(doc)
        if block_size == 0 or pending_len >= block_size:
            flush()
    flush()
    return BlockedArchive(block_size, blocks, raw_lens, doc_table)


def write_blocked(path, archive: BlockedArchive) -> None:
    with open(path, "wb") as f:
        f.write(_HEADER.pack(BASELINE_MAGIC, _VERSION, 0, archive.block_size, len(archive.docs), len(archive.blocks), 0))
        offset = _HEADER.size
        block_offsets = []
        for comp in archive.blocks:
            block_offsets.append(offset)
            f.write(comp)
            offset += len(comp)
        table_offset = offset
        for off, comp, raw in zip(block_offsets, archive.blocks, archive.block_raw_lens):
            f.write(_BLOCK_ENTRY.pack(off, len(comp), raw))
        for entry in archive.docs:
            f.write(_DOC_ENTRY.pack(*entry))
        f.seek(0)
        f.write(_HEADER.pack(BASELINE_MAGIC, _VERSION, 0, archive.block_size, len(archive.docs), len(archive.blocks), table_offset))


class BlockedReader:
    """Random access over a written blocked store.

    bytes_read counts compressed bytes fetched from disk (one block per
    retrieval); decompressed_bytes accumulates the raw bytes each retrieval
    had to inflate, which for mid-block documents exceeds the document size.
    """

    def __init__(self, path):
        self.path = path
        self._file = open(path, "rb")
        self._fd = self._file.fileno()
        header = os.pread(self._fd, _HEADER.size, 0)
        if len(header) < _HEADER.size:
            raise FormatError(f"{path}: truncated header")
        magic, version, _, block_size, doc_count, block_count, table_offset = _HEADER.unpack(header)
        if magic != BASELINE_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {BASELINE_MAGIC!r}")
        if version != _VERSION:
            raise FormatError(f"{path}: unsupported version {version}")
        self.block_size = block_size
        table_len = _BLOCK_ENTRY.size * block_count + _DOC_ENTRY.size * doc_count
        table = os.pread(self._fd, table_len, table_offset)
        if len(table) != table_len:
            raise FormatError(f"{path}: truncated tables")
        self.block_entries = [
            _BLOCK_ENTRY.unpack_from(table, i * _BLOCK_ENTRY.size) for i in range(block_count)
        ]
        doc_base = _BLOCK_ENTRY.size * block_count
        self.doc_entries = [
            _DOC_ENTRY.unpack_from(table, doc_base + i * _DOC_ENTRY.size) for i in range(doc_count)
        ]
        self.decompressed_bytes = 0
        self.bytes_read = 0

    @property
    def doc_count(self) -> int:
        return len(self.doc_entries)

    def get_document(self, doc_id: int) -> bytes:
        """Inflate the owning block only as far as the document's end."""
        if not 0 <= doc_id < len(self.doc_entries):
            raise OutOfRange(f"document id {doc_id} outside [0, {len(self.doc_entries)})")
        block_idx, offset, doc_len = self.doc_entries[doc_id]
        file_offset, comp_len, _ = self.block_entries[block_idx]
        comp = os.pread(self._fd, comp_len, file_offset)
        self.bytes_read += comp_len
        d = zlib.decompressobj()
        raw = d.decompress(comp, offset + doc_len)
        if len(raw) < offset + doc_len:
            raise FormatError(f"{self.path}: block {block_idx} shorter than document map claims")
        self.decompressed_bytes += len(raw)
        return raw[offset : offset + doc_len]

    def stream_all(self):
        """Yield every document in order, inflating each block exactly once."""
        current_idx = -1
        current_raw = b""
        for block_idx, offset, doc_len in self.doc_entries:
            if block_idx != current_idx:
                file_offset, comp_len, raw_len = self.block_entries[block_idx]
                current_raw = zlib.decompress(os.pread(self._fd, comp_len, file_offset))
                self.bytes_read += comp_len
                if len(current_raw) != raw_len:
                    raise FormatError(f"{self.path}: block {block_idx} raw length mismatch")
                current_idx = block_idx
                self.decompressed_bytes += len(current_raw)
            yield current_raw[offset : offset + doc_len]

    def file_size(self) -> int:
        return os.fstat(self._fd).st_size

    def close(self) -> None:
        self._file.close()

    def __enter__(self) -> "BlockedReader":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


def open_blocked(path) -> BlockedReader:
    return BlockedReader(path)
