"""Suffix array over the dictionary and the interval search used for matching.

The dictionary is indexed once; factorization then finds, for every document
position, the longest dictionary substring matching there. Matching walks a
rank interval of the suffix array: ``refine`` narrows the interval by one
query byte using two binary searches, and ``longest_match`` drives the walk.
Once the interval is narrow, the walk switches to direct slice comparison
against the candidate suffixes, which gives the same answer much faster than
byte-at-a-time refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SearchInterval",
    "EMPTY",
    "SuffixArray",
    "ProbeCounter",
    "SearchCounters",
    "build_suffix_array",
    "refine",
    "longest_match",
]

# Interval width below which matching switches from refine() steps to
# bisection with direct slice comparisons.
_BISECT_WIDTH = 64


@dataclass(frozen=True)
class SearchInterval:
    """A rank interval [lb, rb] of suffixes sharing the same first `depth` bytes."""

    lb: int
    rb: int
    depth: int

    @property
    def is_empty(self) -> bool:
        return self.rb < self.lb

    @property
    def width(self) -> int:
        return self.rb - self.lb + 1


#: The distinguished empty interval returned when no suffix matches.
EMPTY = SearchInterval(0, -1, 0)


@dataclass
class ProbeCounter:
    """Counts suffix-byte probes made by refine(), for instrumentation."""

    count: int = 0


@dataclass
class SearchCounters:
    """Counts interval-refinement steps spent factorizing, for instrumentation."""

    refine_steps: int = 0


@dataclass
class SuffixArray:
    """Sorted start offsets of every suffix of the indexed text.

    `entries` is a permutation of range(text_len) such that the suffix starting
    at entries[i] is lexicographically smaller than the one at entries[i+1]
    (unsigned bytes, a proper prefix sorting first).
    """

    text_len: int
    entries: list[int]
    _byte_ranges: list[tuple[int, int] | None] | None = field(
        default=None, init=False, repr=False, compare=False
    )


def build_suffix_array(text: bytes) -> SuffixArray:
    """Build the suffix array of `text` by prefix doubling (O(n log n) rounds)."""
    n = len(text)
    if n == 0:
        sa = SuffixArray(0, [])
        sa._byte_ranges = [None] * 256
        return sa
    data = np.frombuffer(text, dtype=np.uint8)
    rank = data.astype(np.int64)
    order = np.arange(n)
    k = 1
    while True:
        # Sort by (rank[i], rank[i+k]), with -1 past the end so that a
        # shorter suffix sorts before any extension of it.
        nxt = np.full(n, -1, dtype=np.int64)
        if k < n:
            nxt[:-k] = rank[k:]
        order = np.lexsort((nxt, rank))
        r_o = rank[order]
        n_o = nxt[order]
        bumped = np.empty(n, dtype=np.int64)
        bumped[0] = 0
        bumped[1:] = (r_o[1:] != r_o[:-1]) | (n_o[1:] != n_o[:-1])
        ranks_sorted = np.cumsum(bumped)
        rank = np.empty(n, dtype=np.int64)
        rank[order] = ranks_sorted
        if ranks_sorted[-1] == n - 1:
            break
        k <<= 1
    sa = SuffixArray(n, order.tolist())
    # Precompute, per byte value, the rank interval of suffixes starting with
    # that byte. This is the depth-1 refinement of the whole-array interval.
    first = data[order]
    bounds = np.searchsorted(first, np.arange(257))
    ranges: list[tuple[int, int] | None] = [None] * 256
    for b in range(256):
        if bounds[b] < bounds[b + 1]:
            ranges[b] = (int(bounds[b]), int(bounds[b + 1]) - 1)
    sa._byte_ranges = ranges
    return sa


def _byte_ranges(sa: SuffixArray, text: bytes) -> list[tuple[int, int] | None]:
    ranges = sa._byte_ranges
    if ranges is None:
        ranges = [None] * 256
        entries = sa.entries
        i = 0
        while i < sa.text_len:
            b = text[entries[i]]
            j = i
            while j + 1 < sa.text_len and text[entries[j + 1]] == b:
                j += 1
            ranges[b] = (i, j)
            i = j + 1
        sa._byte_ranges = ranges
    return ranges


def refine(
    sa: SuffixArray,
    text: bytes,
    iv: SearchInterval,
    next_byte: int | bytes,
    probes: ProbeCounter | None = None,
) -> SearchInterval:
    """Narrow `iv` to the suffixes carrying `next_byte` at offset iv.depth.

    Two binary searches over the interval, at most 2*ceil(log2(width)) + 2
    suffix-byte probes. Returns EMPTY when no suffix in the interval has that
    byte; a suffix shorter than depth+1 bytes is treated as smaller than any
    byte value.
    """
    if isinstance(next_byte, (bytes, bytearray)):
        next_byte = next_byte[0]
    entries = sa.entries
    n = sa.text_len
    d = iv.depth
    nprobes = 0
    lo, hi = iv.lb, iv.rb + 1
    while lo < hi:
        mid = (lo + hi) // 2
        p = entries[mid] + d
        nprobes += 1
        if (text[p] if p < n else -1) < next_byte:
            lo = mid + 1
        else:
            hi = mid
    start = lo
    hi = iv.rb + 1
    while lo < hi:
        mid = (lo + hi) // 2
        p = entries[mid] + d
        nprobes += 1
        if (text[p] if p < n else -1) <= next_byte:
            lo = mid + 1
        else:
            hi = mid
    if probes is not None:
        probes.count += nprobes
    if start == lo:
        return EMPTY
    return SearchInterval(start, lo - 1, d + 1)


def _lcp(text: bytes, e: int, data, start: int, lo: int, cap: int) -> int:
    """Common-prefix length of text[e:] and data[start:start+cap], known >= lo.

    Compares geometrically growing slices (memcmp speed) and finishes the last
    window bytewise.
    """
    l = lo
    n = len(text)
    step = 32
    while l < cap:
        h = l + step
        if h > cap:
            h = cap
        if text[e + l : e + h] == data[start + l : start + h]:
            l = h
            step <<= 1
        else:
            while l < cap and e + l < n and text[e + l] == data[start + l]:
                l += 1
            break
    return l


def _match_range(
    sa: SuffixArray,
    text: bytes,
    data,
    start: int,
    end: int,
    counters: SearchCounters | None = None,
) -> tuple[int, int]:
    """Longest dictionary match for data[start:end].

    Returns (position, length) with position = the occurrence at the lb rank
    of the final interval, or (byte_value, 0) when data[start] does not occur
    in the dictionary at all.
    """
    first = data[start]
    rng = _byte_ranges(sa, text)[first]
    if counters is not None:
        counters.refine_steps += 1
    if rng is None:
        return first, 0
    lb, rb = rng
    depth = 1
    cap = end - start
    entries = sa.entries
    n = sa.text_len
    while rb - lb >= _BISECT_WIDTH and depth < cap:
        iv = refine(sa, text, SearchInterval(lb, rb, depth), data[start + depth])
        if counters is not None:
            counters.refine_steps += 1
        if iv.is_empty:
            return entries[lb], depth
        lb, rb, depth = iv.lb, iv.rb, iv.depth
    if depth >= cap:
        return entries[lb], depth

    # Narrow interval: all suffixes in [lb, rb] agree with the query on the
    # first `depth` bytes. The longest extension is achieved by a suffix
    # adjacent to the query's insertion rank, so bisect for that rank with
    # whole-slice comparisons instead of refining byte by byte.
    lo, hi = lb, rb + 1
    while lo < hi:
        mid = (lo + hi) // 2
        l = _lcp(text, entries[mid], data, start, depth, cap)
        if l == cap:
            hi = mid
        else:
            p = entries[mid] + l
            if p >= n or text[p] < data[start + l]:
                lo = mid + 1
            else:
                hi = mid
    length = depth
    if lo <= rb:
        l = _lcp(text, entries[lo], data, start, depth, cap)
        if l > length:
            length = l
    if lo - 1 >= lb:
        l = _lcp(text, entries[lo - 1], data, start, depth, cap)
        if l > length:
            length = l
    if length == depth:
        return entries[lb], depth
    # Deterministic tie-break: leftmost rank still matching the first
    # `length` bytes, i.e. the lb of the final interval.
    want = bytes(data[start + depth : start + length])
    lo2, hi2 = lb, rb + 1
    while lo2 < hi2:
        mid = (lo2 + hi2) // 2
        e = entries[mid]
        if text[e + depth : e + length] < want:
            lo2 = mid + 1
        else:
            hi2 = mid
    return entries[lo2], length


def longest_match(sa: SuffixArray, text: bytes, query) -> tuple[int, int]:
    """Longest prefix of `query` occurring anywhere in the indexed text.

    Returns (position, length); (0, 0) when the query is empty or its first
    byte is absent from the text.
    """
    if len(query) == 0:
        return 0, 0
    pos, length = _match_range(sa, text, query, 0, len(query))
    if length == 0:
        return 0, 0
    return pos, length
