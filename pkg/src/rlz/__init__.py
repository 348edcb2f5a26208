"""Relative Lempel-Ziv corpus compression with random-access retrieval.

Pipeline: sample a dictionary from the collection (dictionary), factorize
each document against it via a suffix array (suffix_index, factorize), encode
the factor streams (codec), store them in a random-access archive (archive),
and measure against a blocked zlib baseline (baseline, bench). RlzCompressor
wraps the in-memory pipeline in a fit/transform interface; the `rlz` console
script drives the on-disk one.
"""

from .archive import ArchiveReader, ArchiveWriter, create_archive, open_archive
from .baseline import BlockedArchive, BlockedReader, compress_blocked, open_blocked, write_blocked
from .bench import AccessPattern, Stats, TimingReport, collect_stats, run_access_pattern
from .codec import (
    EncodedDocument,
    Scheme,
    decode_document,
    encode_document,
    vbyte_decode,
    vbyte_encode,
)
from .compressor import RlzCompressor
from .corpus import Corpus, load_corpus, load_corpus_dir, write_corpus
from .dictionary import (
    DEFAULT_SAMPLE_SIZE,
    Dictionary,
    extend_dictionary,
    fnv1a_64,
    read_dictionary,
    sample_dictionary,
    write_dictionary,
)
from .errors import (
    ChecksumMismatch,
    CorruptFactor,
    CorruptStream,
    DictMismatch,
    EmptyCorpus,
    FormatError,
    InvalidParams,
    OutOfRange,
    RlzError,
    TruncatedCode,
    UseAfterFinalize,
)
from .factorize import (
    DictionaryIndex,
    Factor,
    FactorDocument,
    factorize_document,
    materialize,
)
from .suffix_index import SearchInterval, SuffixArray, build_suffix_array, longest_match, refine

__version__ = "1.0.0"

__all__ = [
    "ArchiveReader",
    "ArchiveWriter",
    "create_archive",
    "open_archive",
    "BlockedArchive",
    "BlockedReader",
    "compress_blocked",
    "open_blocked",
    "write_blocked",
    "AccessPattern",
    "Stats",
    "TimingReport",
    "collect_stats",
    "run_access_pattern",
    "EncodedDocument",
    "Scheme",
    "decode_document",
    "encode_document",
    "vbyte_decode",
    "vbyte_encode",
    "RlzCompressor",
    "Corpus",
    "load_corpus",
    "load_corpus_dir",
    "write_corpus",
    "DEFAULT_SAMPLE_SIZE",
    "Dictionary",
    "extend_dictionary",
    "fnv1a_64",
    "read_dictionary",
    "sample_dictionary",
    "write_dictionary",
    "ChecksumMismatch",
    "CorruptFactor",
    "CorruptStream",
    "DictMismatch",
    "EmptyCorpus",
    "FormatError",
    "InvalidParams",
    "OutOfRange",
    "RlzError",
    "TruncatedCode",
    "UseAfterFinalize",
    "DictionaryIndex",
    "Factor",
    "FactorDocument",
    "factorize_document",
    "materialize",
    "SearchInterval",
    "SuffixArray",
    "build_suffix_array",
    "longest_match",
    "refine",
    "__version__",
]
