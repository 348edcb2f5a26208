"""Measurement harness: archive statistics, access-pattern timing, CSV reports."""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .archive import ArchiveReader
from .baseline import BlockedReader
from .codec import decode_document
from .dictionary import Dictionary, dictionary_file_size
from .errors import InvalidParams, OutOfRange

__all__ = [
    "AccessPattern",
    "TimingReport",
    "Stats",
    "ReportRow",
    "collect_stats",
    "collect_blocked_stats",
    "run_access_pattern",
    "emit_report",
    "parse_report",
    "emit_histogram",
    "parse_histogram",
    "load_id_file",
]

REPORT_COLUMNS = [
    "system",
    "config",
    "payload_ratio",
    "total_ratio",
    "sequential_docs_per_sec",
    "random_docs_per_sec",
    "avg_factor_len",
    "unused_pct",
]


@dataclass(frozen=True)
class AccessPattern:
    """A stream of document requests: every doc once in order, uniform-random
    draws, or an explicit ID list from a file."""

    kind: str  # "sequential" | "random" | "file"
    count: int | None = None
    seed: int = 0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in ("sequential", "random", "file"):
            raise InvalidParams(f"unknown access pattern kind {self.kind!r}")
        if self.kind == "file" and self.path is None:
            raise InvalidParams("file pattern requires a path")

    @classmethod
    def parse(cls, text: str, count: int | None = None, seed: int = 0) -> "AccessPattern":
        if text.startswith("file:"):
            return cls("file", count=count, seed=seed, path=text[5:])
        return cls(text, count=count, seed=seed)

    def generate_ids(self, doc_count: int) -> list[int]:
        if self.kind == "sequential":
            return list(range(doc_count))
        if self.kind == "random":
            n = self.count if self.count is not None else doc_count
            rng = random.Random(self.seed)
            return [rng.randrange(doc_count) for _ in range(n)]
        ids = load_id_file(self.path)
        for i in ids:
            if not 0 <= i < doc_count:
                raise OutOfRange(f"{self.path}: document id {i} outside [0, {doc_count})")
        return ids


def load_id_file(path) -> list[int]:
    ids = []
    with open(path, "r", encoding="ascii") as f:
        for line in f:
            line = line.strip()
            if line:
                ids.append(int(line, 10))
    return ids


@dataclass(frozen=True)
class TimingReport:
    requests: int
    total_bytes: int
    wall_time: float

    @property
    def docs_per_second(self) -> float:
        return self.requests / self.wall_time if self.wall_time > 0 else float("inf")


@dataclass
class Stats:
    payload_ratio: float
    total_ratio: float
    avg_factor_len: float | None
    unused_pct: float | None
    length_histogram: dict[int, int]
    docs_per_second: dict[str, float] = field(default_factory=dict)


def _bucket_lo(length: int) -> int:
    """Histogram bucket key: 0 for literals, else the power of two at or below length."""
    return 0 if length == 0 else 1 << (length.bit_length() - 1)


def collect_stats(reader: ArchiveReader, dictionary: Dictionary) -> Stats:
    """One pass over every factor stream: ratios, mean copy length, dictionary
    coverage, and the factor-length histogram."""
    copy_len_sum = 0
    copy_count = 0
    histogram: dict[int, int] = {}
    covered = np.zeros(len(dictionary.data), dtype=bool)
    corpus_size = 0
    for doc_id in range(reader.doc_count):
        enc = reader.read_encoded(doc_id)
        corpus_size += enc.original_len
        for pos, length in decode_document(enc, reader.scheme).factors:
            histogram[_bucket_lo(length)] = histogram.get(_bucket_lo(length), 0) + 1
            if length > 0:
                copy_len_sum += length
                copy_count += 1
                covered[pos : pos + length] = True
    archive_size = reader.file_size()
    dict_size = dictionary_file_size(dictionary)
    payload_ratio = 100.0 * archive_size / corpus_size if corpus_size else 0.0
    total_ratio = 100.0 * (archive_size + dict_size) / corpus_size if corpus_size else 0.0
    unused_pct = 100.0 * (1.0 - covered.mean()) if len(covered) else None
    return Stats(
        payload_ratio=payload_ratio,
        total_ratio=total_ratio,
        avg_factor_len=copy_len_sum / copy_count if copy_count else None,
        unused_pct=unused_pct,
        length_histogram=histogram,
    )


def collect_blocked_stats(reader: BlockedReader) -> Stats:
    """Ratio-only stats for the blocked baseline (no factors, no dictionary)."""
    corpus_size = sum(doc_len for _, _, doc_len in reader.doc_entries)
    size = reader.file_size()
    ratio = 100.0 * size / corpus_size if corpus_size else 0.0
    return Stats(
        payload_ratio=ratio,
        total_ratio=ratio,
        avg_factor_len=None,
        unused_pct=None,
        length_histogram={},
    )


def run_access_pattern(reader, pattern: AccessPattern) -> TimingReport:
    """Issue the pattern's requests through the reader and time the whole run.

    Sequential goes through stream_all (the reader's forward fast path);
    everything else calls get_document per request, in pattern order.
    """
    if pattern.kind == "sequential":
        start = time.perf_counter()
        total = 0
        requests = 0
        for doc in reader.stream_all():
            total += len(doc)
            requests += 1
        return TimingReport(requests, total, time.perf_counter() - start)
    ids = pattern.generate_ids(reader.doc_count)
    start = time.perf_counter()
    total = 0
    for i in ids:
        total += len(reader.get_document(i))
    return TimingReport(len(ids), total, time.perf_counter() - start)


@dataclass(frozen=True)
class ReportRow:
    system: str
    config: str
    payload_ratio: float
    total_ratio: float
    sequential_docs_per_sec: float | None
    random_docs_per_sec: float | None
    avg_factor_len: float | None
    unused_pct: float | None


def _cell(value) -> str:
    return "" if value is None else repr(float(value))


def _parse_cell(text: str) -> float | None:
    return None if text == "" else float(text)


def emit_report(rows, path) -> None:
    """Write one CSV row per benchmarked configuration."""
    with open(path, "w", encoding="ascii", newline="") as f:
        w = csv.writer(f)
        w.writerow(REPORT_COLUMNS)
        for r in rows:
            w.writerow(
                [
                    r.system,
                    r.config,
                    _cell(r.payload_ratio),
                    _cell(r.total_ratio),
                    _cell(r.sequential_docs_per_sec),
                    _cell(r.random_docs_per_sec),
                    _cell(r.avg_factor_len),
                    _cell(r.unused_pct),
                ]
            )


def parse_report(path) -> list[ReportRow]:
    with open(path, "r", encoding="ascii", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != REPORT_COLUMNS:
            raise InvalidParams(f"{path}: unexpected report columns {header}")
        return [
            ReportRow(
                row[0],
                row[1],
                _parse_cell(row[2]),
                _parse_cell(row[3]),
                _parse_cell(row[4]),
                _parse_cell(row[5]),
                _parse_cell(row[6]),
                _parse_cell(row[7]),
            )
            for row in reader
        ]


def emit_histogram(histogram: dict[int, int], path) -> None:
    with open(path, "w", encoding="ascii", newline="") as f:
        w = csv.writer(f)
        w.writerow(["bucket_lo", "count"])
        for lo in sorted(histogram):
            w.writerow([lo, histogram[lo]])


def parse_histogram(path) -> dict[int, int]:
    with open(path, "r", encoding="ascii", newline="") as f:
        reader = csv.reader(f)
        next(reader)
        return {int(row[0]): int(row[1]) for row in reader}
