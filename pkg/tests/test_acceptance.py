"""Acceptance gate: ten numbered criteria, each printing one PASS/FAIL line.

Budgets are wall-clock seconds measured around the work the criterion
exercises; where a criterion builds on the shared synthetic-corpus pipeline,
that pipeline's one-time build cost is added to the criterion's own time
before comparing against the budget, so the bound holds however the suite is
sliced."""

from __future__ import annotations

import random
import struct
from contextlib import contextmanager
from time import perf_counter

import pytest

from rlz.archive import create_archive, open_archive
from rlz.baseline import compress_blocked, open_blocked, write_blocked
from rlz.bench import collect_blocked_stats, collect_stats
from rlz.codec import Scheme, decode_document, encode_document, vbyte_decode, vbyte_encode
from rlz.corpus import load_corpus, load_corpus_dir, write_corpus
from rlz.dictionary import fnv1a_64, sample_dictionary, write_dictionary
from rlz.factorize import DictionaryIndex, factorize_document, materialize
from rlz.suffix_index import build_suffix_array

from conftest import DICT_TEXT, DOC_TEXT, WORKED_FACTORS, build_pipeline

SCHEMES = [Scheme.UV, Scheme.UZ, Scheme.ZV, Scheme.ZZ]


@pytest.fixture()
def report(capfd):
    @contextmanager
    def _report(number: int, description: str):
        try:
            yield
        except BaseException:
            with capfd.disabled():
                print(f"\nCRITERION {number:2d}: FAIL  {description}")
            raise
        with capfd.disabled():
            print(f"\nCRITERION {number:2d}: PASS  {description}")

    return _report


def test_criterion_01_worked_example(report, worked_dictionary):
    with report(1, "worked example parses to [(2,4), lit 'n', (0,4)] in under 1 ms"):
        for _ in range(3):  # warm the numpy and bytecode paths before timing
            build_suffix_array(DICT_TEXT)
        t0 = perf_counter()
        sa = build_suffix_array(DICT_TEXT)
        index = DictionaryIndex(worked_dictionary, sa)
        fdoc = factorize_document(index, DOC_TEXT)
        back = materialize(worked_dictionary, fdoc)
        elapsed = perf_counter() - t0
        assert [(f.position, f.length) for f in fdoc.factors] == WORKED_FACTORS
        assert back == DOC_TEXT
        assert sa.entries == sorted(range(len(DICT_TEXT)), key=lambda i: DICT_TEXT[i:])
        assert elapsed < 0.001, f"worked example took {elapsed * 1000:.3f} ms"


def test_criterion_02_universal_round_trip(report, tmp_path):
    with report(2, "1008 randomized instances round-trip on all schemes and both corpus modes"):
        rng = random.Random(0xC2)
        t0 = perf_counter()
        instances = 1008
        for i in range(instances):
            scheme = SCHEMES[i % 4]
            use_dir = (i // 4) % 2 == 0
            alpha = bytes(rng.sample(range(256), rng.choice([2, 3, 8, 32, 256])))
            dict_text = bytes(rng.choices(alpha, k=rng.randint(1, 160)))
            sample = rng.randint(1, 8)
            budget = rng.randint(sample, max(sample, len(dict_text)))
            d = sample_dictionary(dict_text, budget, sample)
            docs = [
                bytes(rng.choices(alpha, k=rng.randint(0, 100)))
                for _ in range(rng.randint(1, 5))
            ]
            if rng.random() < 0.1:
                docs[rng.randrange(len(docs))] = d.data
            inst = tmp_path / f"i{i}"
            inst.mkdir()
            if use_dir:
                for j, doc in enumerate(docs):
                    (inst / f"{j:02d}.bin").write_bytes(doc)
                corpus = load_corpus_dir(inst)
            else:
                write_corpus(inst / "c.dat", inst / "c.len", docs)
                corpus = load_corpus(inst / "c.dat", inst / "c.len")
            assert list(corpus) == docs
            index = DictionaryIndex.build(d)
            arc = inst / "a.rlza"
            with create_archive(arc, d, scheme) as w:
                for doc in corpus:
                    w.append(encode_document(factorize_document(index, doc), scheme))
            with open_archive(arc, d) as r:
                assert [r.get_document(k) for k in range(len(docs))] == docs
                assert list(r.stream_all()) == docs
        elapsed = perf_counter() - t0
        assert elapsed < 60.0, f"round-trip sweep took {elapsed:.1f} s"


def _oracle_lcp(d: bytes, x: bytes, i: int) -> int:
    """Longest match at x[i:] over every dictionary position, by substring probe."""
    l = 0
    while i + l < len(x) and d.find(x[i : i + l + 1]) != -1:
        l += 1
    return l


def test_criterion_03_greedy_oracle(report):
    with report(3, "10000 small instances: copy lengths equal the brute-force LCP maximum"):
        rng = random.Random(0xC3)
        t0 = perf_counter()
        for trial in range(10000):
            asize = rng.randint(2, 8)
            alpha = bytes(rng.sample(range(256), asize))
            d = bytes(rng.choices(alpha, k=rng.randint(1, 64)))
            if rng.random() < 0.25:
                # partially disjoint document alphabet forces literals
                alpha = bytes(rng.sample(range(256), asize))
            x = bytes(rng.choices(alpha, k=rng.randint(0, 64)))
            index = DictionaryIndex.build(sample_dictionary(d, len(d), 1))
            i = 0
            for f in factorize_document(index, x).factors:
                best = _oracle_lcp(d, x, i)
                if f.length == 0:
                    assert best == 0, (d, x, i)
                    assert bytes((x[i],)) not in d
                    i += 1
                else:
                    assert f.length == best, (d, x, i, f)
                    assert d[f.position : f.position + f.length] == x[i : i + f.length]
                    i += f.length
            assert i == len(x)
        elapsed = perf_counter() - t0
        assert elapsed < 30.0, f"oracle sweep took {elapsed:.1f} s"


def test_criterion_04_compression_advantage(report, base_pipeline, tmp_path):
    with report(4, "synthetic global redundancy: rlz zz total ratio beats blocked bs=0"):
        bp = base_pipeline
        t0 = perf_counter()
        path = tmp_path / "b0.rlzb"
        write_blocked(path, compress_blocked(bp.docs, 0))
        with open_blocked(path) as r:
            blocked = collect_blocked_stats(r)
        own = perf_counter() - t0
        assert bp.stats.total_ratio < blocked.payload_ratio, (
            bp.stats.total_ratio,
            blocked.payload_ratio,
        )
        assert bp.duration + own < 10.0, f"took {bp.duration + own:.1f} s"


def test_criterion_05_random_access_isolation(report, base_pipeline, tmp_path):
    with report(5, "rlz get reads one payload region; blocked 1 MiB over-reads more than 10x"):
        bp = base_pipeline
        rng = random.Random(0xC5)
        ids = [rng.randrange(len(bp.docs)) for _ in range(300)]
        t0 = perf_counter()
        with open_archive(bp.archive_path, bp.dictionary, trace_reads=True) as r:
            for n, i in enumerate(ids, start=1):
                doc = r.get_document(i)
                assert doc == bp.docs[i]
                e = r.entries[i]
                assert len(r.read_log) == n
                assert r.read_log[-1] == (e.payload_offset, e.payload_size)
        path = tmp_path / "mb.rlzb"
        write_blocked(path, compress_blocked(bp.docs, 1 << 20))
        requested = 0
        with open_blocked(path) as br:
            for i in ids:
                assert br.get_document(i) == bp.docs[i]
                requested += len(bp.docs[i])
            over_read = br.decompressed_bytes / requested
        own = perf_counter() - t0
        assert over_read > 10.0, f"blocked over-read only {over_read:.1f}x"
        assert bp.duration + own < 10.0, f"took {bp.duration + own:.1f} s"


def test_criterion_06_dynamic_update_robustness(report, base_pipeline, tmp_path):
    with report(6, "dictionary from the first 10% of docs stays within 1.25x of the full ratio"):
        bp = base_pipeline
        t0 = perf_counter()
        prefix = bp.docs[: len(bp.docs) // 10]
        _, stats, _ = build_pipeline(
            bp.docs, prefix, bp.dict_size, 1024, Scheme.ZZ, tmp_path / "p.rlza"
        )
        own = perf_counter() - t0
        assert stats.total_ratio <= 1.25 * bp.stats.total_ratio, (
            stats.total_ratio,
            bp.stats.total_ratio,
        )
        assert bp.duration + own < 10.0, f"took {bp.duration + own:.1f} s"


def test_criterion_07_order_robustness(report, base_pipeline, tmp_path):
    with report(7, "document permutation moves the total ratio by less than 5% relative"):
        bp = base_pipeline
        t0 = perf_counter()
        permuted = list(bp.docs)
        random.Random(0xC7).shuffle(permuted)
        _, stats, _ = build_pipeline(
            permuted, permuted, bp.dict_size, 1024, Scheme.ZZ, tmp_path / "perm.rlza"
        )
        own = perf_counter() - t0
        relative = abs(stats.total_ratio - bp.stats.total_ratio) / bp.stats.total_ratio
        assert relative < 0.05, f"ratio moved {100 * relative:.2f}% relative"
        assert bp.duration + own < 15.0, f"took {bp.duration + own:.1f} s"


def test_criterion_08_stats_correctness(report, worked_dictionary, worked_index, tmp_path):
    with report(8, "stats report avg 4.0, unused 33.33%, histogram {0:1, [4,8):2}; lengths sum"):
        path = tmp_path / "w.rlza"
        with create_archive(path, worked_dictionary, Scheme.UV) as w:
            w.append(encode_document(factorize_document(worked_index, DOC_TEXT), Scheme.UV))
        with open_archive(path, worked_dictionary) as r:
            stats = collect_stats(r, worked_dictionary)
        assert stats.avg_factor_len == 4.0
        assert abs(stats.unused_pct - 33.33) <= 0.01
        assert stats.length_histogram == {0: 1, 4: 2}

        rng = random.Random(0xC8)
        for trial in range(400):
            alpha = bytes(rng.sample(range(256), rng.choice([2, 4, 16, 128])))
            d = sample_dictionary(bytes(rng.choices(alpha, k=rng.randint(1, 200))), 4096, 4)
            index = DictionaryIndex.build(d)
            doc = bytes(rng.choices(alpha, k=rng.randint(0, 150)))
            fdoc = factorize_document(index, doc)
            assert sum(max(f.length, 1) for f in fdoc.factors) == len(doc)


GOLDEN_CHECKSUM = 0xB8C3A149BAFD3CCE  # FNV-1a-64 of b"cabbaabba"
GOLDEN_DOCS = [b"bbaancabb", b"cabbaabba", b"aaaa"]


def _fnv_reference(data: bytes) -> int:
    """Independent FNV-1a-64, written from the published constants in decimal."""
    h = 14695981039346656037
    for byte in data:
        h = ((h ^ byte) * 1099511628211) % (1 << 64)
    return h


def _build_golden(dirpath):
    d = sample_dictionary(DICT_TEXT, len(DICT_TEXT), 4)
    write_dictionary(d, dirpath / "g.rlzd")
    index = DictionaryIndex.build(d)
    with create_archive(dirpath / "g.rlza", d, Scheme.UV) as w:
        for doc in GOLDEN_DOCS:
            w.append(encode_document(factorize_document(index, doc), Scheme.UV))
    return (dirpath / "g.rlzd").read_bytes(), (dirpath / "g.rlza").read_bytes()


def test_criterion_09_format_golden_files(report, tmp_path):
    with report(9, "dictionary and archive bytes match the hand-built golden images"):
        assert _fnv_reference(b"") == 0xCBF29CE484222325
        assert _fnv_reference(b"a") == 0xAF63DC4C8601EC8C
        assert _fnv_reference(b"foobar") == 0x85944171F73967E8
        assert _fnv_reference(DICT_TEXT) == GOLDEN_CHECKSUM == fnv1a_64(DICT_TEXT)

        for sub in ("run1", "run2"):
            (tmp_path / sub).mkdir()
        dict1, arc1 = _build_golden(tmp_path / "run1")
        dict2, arc2 = _build_golden(tmp_path / "run2")
        assert dict1 == dict2
        assert arc1 == arc2

        expected_dict = struct.pack("<4sHHQQQ", b"RLZD", 1, 0, 4, 9, GOLDEN_CHECKSUM) + DICT_TEXT
        assert dict1 == expected_dict

        expected_arc = b"".join(
            [
                struct.pack("<4sHBBQQQ", b"RLZA", 1, 0x00, 0, GOLDEN_CHECKSUM, 3, 62),
                struct.pack("<3I", 2, 110, 0), b"\x84\x80\x84",   # doc 0: (2,4) lit'n' (0,4)
                struct.pack("<I", 0), b"\x89",                    # doc 1: (0,9)
                struct.pack("<2I", 4, 4), b"\x82\x82",            # doc 2: (4,2) (4,2)
                struct.pack("<QIIIQ", 32, 12, 3, 3, 9),
                struct.pack("<QIIIQ", 47, 4, 1, 1, 9),
                struct.pack("<QIIIQ", 52, 8, 2, 2, 4),
            ]
        )
        assert arc1 == expected_arc


def test_criterion_10_codec_contract(report, worked_index):
    with report(10, "vbyte reference codes are bit-exact; U position streams are 4 bytes/factor"):
        for value, code in [(0, b"\x80"), (127, b"\xff"), (128, b"\x00\x81"), (300, b"\x2c\x82")]:
            assert vbyte_encode(value) == code
            assert vbyte_decode(code) == (value, len(code))

        rng = random.Random(0xCA)
        parses = [factorize_document(worked_index, DOC_TEXT)]
        for _ in range(20):
            doc = bytes(rng.choices(b"abcn", k=rng.randint(0, 120)))
            parses.append(factorize_document(worked_index, doc))
        for fdoc in parses:
            for scheme in (Scheme.UV, Scheme.UZ):
                enc = encode_document(fdoc, scheme)
                assert len(enc.pos_stream) == 4 * enc.factor_count
                assert decode_document(enc, scheme) == fdoc
