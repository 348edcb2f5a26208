"""Per-document serialization of factor streams.

Positions and lengths are carried in two separate streams per document. Each
stream has two codings, combined into four schemes (UV, UZ, ZV, ZZ):

  positions  U  raw unsigned 32-bit little-endian, one per factor
             Z  the raw u32 serialization deflated as one zlib unit
  lengths    V  variable-byte, 7-bit groups least-significant first,
                stop bit (0x80) on the final byte
             Z  as for positions

A literal factor's byte value rides in the position slot; its length of 0 is
what marks it as a literal. Zlib units use maximum compression. An empty
factor list encodes to two empty streams under every scheme.
"""

from __future__ import annotations

import enum
import struct
import zlib
from dataclasses import dataclass

from .errors import CorruptStream, FormatError, InvalidParams, TruncatedCode
from .factorize import Factor, FactorDocument

__all__ = [
    "Scheme",
    "EncodedDocument",
    "vbyte_encode",
    "vbyte_decode",
    "encode_document",
    "decode_document",
]

_ZLEVEL = zlib.Z_BEST_COMPRESSION
_U32_MAX = 0xFFFFFFFF


class Scheme(enum.Enum):
    """Position/length stream coding combination."""

    UV = ("U", "V")
    UZ = ("U", "Z")
    ZV = ("Z", "V")
    ZZ = ("Z", "Z")

    @property
    def pos_code(self) -> str:
        return self.value[0]

    @property
    def len_code(self) -> str:
        return self.value[1]

    @property
    def wire_byte(self) -> int:
        """High nibble: position code (0=U, 1=Z); low nibble: length code (0=V, 1=Z)."""
        return ((0 if self.pos_code == "U" else 1) << 4) | (0 if self.len_code == "V" else 1)

    @classmethod
    def from_wire(cls, byte: int) -> "Scheme":
        for scheme in cls:
            if scheme.wire_byte == byte:
                return scheme
        raise FormatError(f"unknown scheme byte {byte:#04x}")

    @classmethod
    def from_name(cls, name: str) -> "Scheme":
        try:
            return cls[name.upper()]
        except KeyError:
            raise InvalidParams(f"unknown scheme {name!r}; expected uv, uz, zv or zz") from None


@dataclass(frozen=True)
class EncodedDocument:
    """One document's serialized factor streams."""

    pos_stream: bytes
    len_stream: bytes
    factor_count: int
    original_len: int


def vbyte_encode(value: int) -> bytes:
    """Variable-byte code of an unsigned value up to 2**32 - 1."""
    if value < 0 or value > _U32_MAX:
        raise InvalidParams(f"vbyte value {value} outside [0, 2^32)")
    out = bytearray()
    while value >= 0x80:
        out.append(value & 0x7F)
        value >>= 7
    out.append(value | 0x80)
    return bytes(out)


def vbyte_decode(data: bytes, cursor: int = 0) -> tuple[int, int]:
    """Decode one vbyte value at `cursor`; returns (value, bytes consumed)."""
    value = 0
    shift = 0
    i = cursor
    while True:
        if i >= len(data):
            raise TruncatedCode("byte stream ended inside a vbyte code")
        b = data[i]
        i += 1
        if b & 0x80:
            value |= (b & 0x7F) << shift
            if value > _U32_MAX:
                raise CorruptStream(f"vbyte code decodes past 32 bits ({value})")
            return value, i - cursor
        value |= b << shift
        shift += 7
        if shift > 28:
            raise CorruptStream("vbyte code longer than 5 bytes")


def _pack_u32(values) -> bytes:
    return struct.pack(f"<{len(values)}I", *values)


def _unpack_u32(raw: bytes, count: int, what: str) -> tuple[int, ...]:
    if len(raw) != 4 * count:
        raise CorruptStream(
            f"{what} stream holds {len(raw)} bytes, expected {4 * count} for {count} factors"
        )
    return struct.unpack(f"<{count}I", raw)


def _inflate(stream: bytes, what: str) -> bytes:
    try:
        return zlib.decompress(stream)
    except zlib.error as exc:
        raise CorruptStream(f"{what} stream is not a valid zlib unit: {exc}") from exc


def encode_document(fdoc: FactorDocument, scheme: Scheme) -> EncodedDocument:
    """Serialize a factor parse under `scheme`."""
    k = len(fdoc.factors)
    if k == 0:
        return EncodedDocument(b"", b"", 0, fdoc.original_len)
    pos_raw = _pack_u32([f.position for f in fdoc.factors])
    pos_stream = zlib.compress(pos_raw, _ZLEVEL) if scheme.pos_code == "Z" else pos_raw
    lengths = [f.length for f in fdoc.factors]
    if scheme.len_code == "V":
        len_stream = b"".join(vbyte_encode(v) for v in lengths)
    else:
        len_stream = zlib.compress(_pack_u32(lengths), _ZLEVEL)
    return EncodedDocument(pos_stream, len_stream, k, fdoc.original_len)


def decode_document(enc: EncodedDocument, scheme: Scheme) -> FactorDocument:
    """Invert encode_document, validating counts and the total source length."""
    k = enc.factor_count
    if k == 0:
        if enc.pos_stream or enc.len_stream:
            raise CorruptStream("zero-factor document carries non-empty streams")
        if enc.original_len != 0:
            raise CorruptStream(
                f"zero factors cannot cover original length {enc.original_len}"
            )
        return FactorDocument([], 0)

    pos_raw = enc.pos_stream if scheme.pos_code == "U" else _inflate(enc.pos_stream, "position")
    positions = _unpack_u32(pos_raw, k, "position")

    if scheme.len_code == "V":
        lengths = []
        cursor = 0
        for _ in range(k):
            value, used = vbyte_decode(enc.len_stream, cursor)
            cursor += used
            lengths.append(value)
        if cursor != len(enc.len_stream):
            raise CorruptStream(
                f"length stream has {len(enc.len_stream) - cursor} trailing bytes"
            )
    else:
        lengths = _unpack_u32(_inflate(enc.len_stream, "length"), k, "length")

    covered = 0
    for pos, length in zip(positions, lengths):
        if length == 0 and pos > 255:
            raise CorruptStream(f"literal factor carries byte value {pos} > 255")
        covered += length if length else 1
    if covered != enc.original_len:
        raise CorruptStream(
            f"factors cover {covered} bytes, document header says {enc.original_len}"
        )
    return FactorDocument(
        [Factor(p, l) for p, l in zip(positions, lengths)], enc.original_len
    )
