import struct

import pytest

from rlz.archive import (
    ARCHIVE_MAGIC,
    ENTRY_SIZE,
    HEADER_SIZE,
    create_archive,
    open_archive,
)
from rlz.codec import Scheme, encode_document
from rlz.dictionary import extend_dictionary, sample_dictionary
from rlz.errors import DictMismatch, FormatError, OutOfRange, UseAfterFinalize
from rlz.factorize import factorize_document

from conftest import DICT_TEXT

DOCS = [b"bbaancabb", b"cabbaabba", b"aaaa"]


def _build(path, worked_dictionary, worked_index, scheme=Scheme.UV, docs=DOCS):
    w = create_archive(path, worked_dictionary, scheme)
    ids = [w.append(encode_document(factorize_document(worked_index, d), scheme)) for d in docs]
    w.finalize()
    return ids


def test_round_trip_all_schemes(tmp_path, worked_dictionary, worked_index):
    for scheme in Scheme:
        path = tmp_path / f"a_{scheme.name}.rlza"
        ids = _build(path, worked_dictionary, worked_index, scheme)
        assert ids == [0, 1, 2]
        with open_archive(path, worked_dictionary) as r:
            assert r.scheme is scheme
            assert r.doc_count == 3
            assert [r.get_document(i) for i in range(3)] == DOCS
            assert list(r.stream_all()) == DOCS


def test_header_layout(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    _build(path, worked_dictionary, worked_index)
    raw = path.read_bytes()
    magic, version, scheme_byte, reserved, checksum, doc_count, table_offset = struct.unpack(
        "<4sHBBQQQ", raw[:HEADER_SIZE]
    )
    assert magic == ARCHIVE_MAGIC
    assert (version, scheme_byte, reserved) == (1, 0x00, 0)
    assert checksum == worked_dictionary.checksum
    assert doc_count == 3
    assert table_offset + 3 * ENTRY_SIZE == len(raw)


def test_out_of_range(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    _build(path, worked_dictionary, worked_index)
    with open_archive(path, worked_dictionary) as r:
        with pytest.raises(OutOfRange):
            r.get_document(3)
        with pytest.raises(OutOfRange):
            r.get_document(-1)


def test_use_after_finalize(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    w = create_archive(path, worked_dictionary, Scheme.UV)
    w.append(encode_document(factorize_document(worked_index, b"aaaa"), Scheme.UV))
    w.finalize()
    with pytest.raises(UseAfterFinalize):
        w.append(encode_document(factorize_document(worked_index, b"aaaa"), Scheme.UV))
    with pytest.raises(UseAfterFinalize):
        w.finalize()


def test_writer_context_manager_finalizes(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    with create_archive(path, worked_dictionary, Scheme.ZZ) as w:
        w.append(encode_document(factorize_document(worked_index, b"aaaa"), Scheme.ZZ))
    with open_archive(path, worked_dictionary) as r:
        assert r.get_document(0) == b"aaaa"


def test_empty_archive(tmp_path, worked_dictionary):
    path = tmp_path / "a.rlza"
    create_archive(path, worked_dictionary, Scheme.UV).finalize()
    with open_archive(path, worked_dictionary) as r:
        assert r.doc_count == 0
        assert list(r.stream_all()) == []


def test_dict_mismatch(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    _build(path, worked_dictionary, worked_index)
    other = sample_dictionary(b"a completely different dictionary", 4096, 4)
    with pytest.raises(DictMismatch):
        open_archive(path, other)
    with pytest.raises(DictMismatch):
        open_archive(path, other, allow_extended=True)


def test_extended_dictionary_open(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    _build(path, worked_dictionary, worked_index)
    grown = extend_dictionary(worked_dictionary, [b"entirely new material next"], 8, 4)
    assert grown.checksum != worked_dictionary.checksum
    with pytest.raises(DictMismatch):
        open_archive(path, grown)
    with open_archive(path, grown, allow_extended=True) as r:
        assert [r.get_document(i) for i in range(3)] == DOCS


def test_read_log_traces_single_regions(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    _build(path, worked_dictionary, worked_index)
    with open_archive(path, worked_dictionary, trace_reads=True) as r:
        assert r.read_log == []
        r.get_document(1)
        e = r.entries[1]
        assert r.read_log == [(e.payload_offset, e.payload_size)]
        r.get_document(0)
        assert len(r.read_log) == 2


def test_stream_all_is_one_forward_pass(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    _build(path, worked_dictionary, worked_index)
    with open_archive(path, worked_dictionary, trace_reads=True) as r:
        assert list(r.stream_all()) == DOCS
        offsets = [off for off, _ in r.read_log]
        assert offsets == sorted(offsets)
        assert len(offsets) == len(DOCS)


def test_file_size_accounting(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    _build(path, worked_dictionary, worked_index)
    with open_archive(path, worked_dictionary) as r:
        payload = sum(e.payload_size for e in r.entries)
        assert r.file_size() == HEADER_SIZE + payload + ENTRY_SIZE * r.doc_count


def test_open_rejects_malformed_files(tmp_path, worked_dictionary, worked_index):
    path = tmp_path / "a.rlza"
    _build(path, worked_dictionary, worked_index)
    raw = path.read_bytes()
    bad = tmp_path / "bad"

    bad.write_bytes(b"NOPE" + raw[4:])
    with pytest.raises(FormatError):
        open_archive(bad, worked_dictionary)

    bad.write_bytes(raw[:4] + struct.pack("<H", 9) + raw[6:])
    with pytest.raises(FormatError):
        open_archive(bad, worked_dictionary)

    bad.write_bytes(raw[:20])
    with pytest.raises(FormatError):
        open_archive(bad, worked_dictionary)

    bad.write_bytes(raw + b"\x00")  # trailing junk breaks the size accounting
    with pytest.raises(FormatError):
        open_archive(bad, worked_dictionary)

    bad.write_bytes(raw[:-10])  # truncated document map
    with pytest.raises(FormatError):
        open_archive(bad, worked_dictionary)
