"""Shared fixtures: the hand-checked worked example and a synthetic
template-sharing corpus whose redundancy is global (cross-document), which is
the regime dictionary compression is built for."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import pytest

from rlz.archive import create_archive, open_archive
from rlz.bench import Stats, collect_stats
from rlz.codec import Scheme, encode_document
from rlz.dictionary import Dictionary, sample_dictionary
from rlz.factorize import DictionaryIndex, factorize_document

DICT_TEXT = b"cabbaabba"
DOC_TEXT = b"bbaancabb"
WORKED_FACTORS = [(2, 4), (110, 0), (0, 4)]
WORKED_SA = [8, 4, 5, 1, 7, 3, 6, 2, 0]


@pytest.fixture(scope="session")
def worked_dictionary() -> Dictionary:
    return sample_dictionary(DICT_TEXT, len(DICT_TEXT), 4)


@pytest.fixture(scope="session")
def worked_index(worked_dictionary) -> DictionaryIndex:
    return DictionaryIndex.build(worked_dictionary)


def make_template_corpus(
    doc_count: int = 1000,
    template_count: int = 50,
    template_len: int = 256,
    palette_size: int = 10,
    segments: int = 14,
    spacer_len: int = 28,
    seed: int = 20260823,
) -> list[bytes]:
    """Documents assembled from shared random templates plus random spacers.

    Defaults give ~4 KB documents: 14 segments of (256-byte template from a
    10-of-50 palette + 28 random bytes), so spacers are ~10% of every byte.
    """
    rng = random.Random(seed)
    templates = [rng.randbytes(template_len) for _ in range(template_count)]
    docs = []
    for _ in range(doc_count):
        palette = rng.sample(range(template_count), palette_size)
        picks = list(palette) + [rng.choice(palette) for _ in range(segments - palette_size)]
        rng.shuffle(picks)
        parts = []
        for t in picks:
            parts.append(templates[t])
            parts.append(rng.randbytes(spacer_len))
        docs.append(b"".join(parts))
    return docs


def build_pipeline(docs, dict_source, dict_size, sample_size, scheme, path):
    """Sample a dictionary from dict_source, encode docs into an archive at
    path, and return (dictionary, stats, wall seconds)."""
    t0 = time.perf_counter()
    d = sample_dictionary(dict_source, dict_size, sample_size)
    index = DictionaryIndex.build(d)
    with create_archive(path, d, scheme) as w:
        for doc in docs:
            w.append(encode_document(factorize_document(index, doc), scheme))
    with open_archive(path, d) as r:
        stats = collect_stats(r, d)
    return d, stats, time.perf_counter() - t0


@dataclass
class SynthBase:
    docs: list[bytes]
    corpus_size: int
    dict_size: int
    dictionary: Dictionary
    archive_path: str
    stats: Stats
    duration: float


@pytest.fixture(scope="session")
def synthetic_docs() -> list[bytes]:
    return make_template_corpus()


@pytest.fixture(scope="session")
def base_pipeline(synthetic_docs, tmp_path_factory) -> SynthBase:
    """Full-collection 5% dictionary, scheme zz; the reference configuration
    several acceptance criteria compare against."""
    docs = synthetic_docs
    corpus_size = sum(len(d) for d in docs)
    dict_size = corpus_size // 20
    path = str(tmp_path_factory.mktemp("synth") / "base.rlza")
    d, stats, duration = build_pipeline(docs, docs, dict_size, 1024, Scheme.ZZ, path)
    return SynthBase(docs, corpus_size, dict_size, d, path, stats, duration)
