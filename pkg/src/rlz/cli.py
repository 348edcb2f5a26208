"""Command-line surface.

Exit status contract: 0 success, 2 usage errors (argparse), 1 data or format
errors. Diagnostics go to stderr; document payload (get/cat) goes to stdout
or --out.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .archive import ARCHIVE_MAGIC, create_archive, open_archive
from .baseline import BASELINE_MAGIC, compress_blocked, open_blocked, write_blocked
from .bench import (
    AccessPattern,
    ReportRow,
    collect_blocked_stats,
    collect_stats,
    emit_histogram,
    emit_report,
    run_access_pattern,
)
from .codec import Scheme, encode_document
from .corpus import load_corpus, load_corpus_dir
from .dictionary import (
    DEFAULT_SAMPLE_SIZE,
    extend_dictionary,
    read_dictionary,
    sample_dictionary,
    write_dictionary,
)
from .errors import RlzError
from .factorize import DictionaryIndex, factorize_document

__all__ = ["main"]


def _add_corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", metavar="PATH", help="concatenated document data file")
    p.add_argument("--lengths", metavar="PATH", help="per-document byte counts, one per line")
    p.add_argument("--corpus-dir", metavar="PATH", help="directory of one file per document")


def _load_corpus_args(parser: argparse.ArgumentParser, args):
    file_mode = args.corpus is not None or args.lengths is not None
    if file_mode and args.corpus_dir is not None:
        parser.error("--corpus/--lengths and --corpus-dir are mutually exclusive")
    if args.corpus_dir is not None:
        return load_corpus_dir(args.corpus_dir)
    if args.corpus is None or args.lengths is None:
        parser.error("need either --corpus with --lengths, or --corpus-dir")
    return load_corpus(args.corpus, args.lengths)


def _write_payload(data: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(out, "wb") as f:
            f.write(data)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _cmd_build_dict(parser, args) -> int:
    corpus = _load_corpus_args(parser, args)
    d = sample_dictionary(corpus.data, args.dict_size, args.sample_size)
    write_dictionary(d, args.out)
    _info(f"dictionary: {len(d.data)} bytes, sample size {d.sample_size}, checksum {d.checksum:#018x}")
    return 0


def _cmd_extend_dict(parser, args) -> int:
    d = read_dictionary(args.dict)
    corpus = _load_corpus_args(parser, args)
    sample_size = d.sample_size if args.sample_size is None else args.sample_size
    extended = extend_dictionary(d, corpus.data, args.dict_size, sample_size)
    write_dictionary(extended, args.out)
    _info(f"dictionary: {len(d.data)} -> {len(extended.data)} bytes")
    return 0


def _cmd_compress(parser, args) -> int:
    corpus = _load_corpus_args(parser, args)
    d = read_dictionary(args.dict)
    scheme = Scheme.from_name(args.scheme)
    index = DictionaryIndex.build(d)

    def encode_one(doc: bytes):
        return encode_document(factorize_document(index, doc), scheme)

    writer = create_archive(args.out, d, scheme)
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            for enc in pool.map(encode_one, corpus):
                writer.append(enc)
    else:
        for doc in corpus:
            writer.append(encode_one(doc))
    writer.finalize()
    _info(f"archive: {len(corpus)} documents, scheme {scheme.name.lower()}")
    return 0


def _open_rlz(args):
    d = read_dictionary(args.dict)
    return open_archive(args.archive, d, allow_extended=args.allow_extended_dict), d


def _cmd_get(parser, args) -> int:
    reader, _ = _open_rlz(args)
    with reader:
        _write_payload(reader.get_document(args.doc_id), args.out)
    return 0


def _cmd_cat(parser, args) -> int:
    reader, _ = _open_rlz(args)
    with reader:
        if args.out is None:
            for doc in reader.stream_all():
                sys.stdout.buffer.write(doc)
            sys.stdout.buffer.flush()
        else:
            with open(args.out, "wb") as f:
                for doc in reader.stream_all():
                    f.write(doc)
    return 0


def _format_opt(value) -> str:
    return "absent" if value is None else f"{value:.4f}"


def _cmd_stats(parser, args) -> int:
    reader, d = _open_rlz(args)
    with reader:
        stats = collect_stats(reader, d)
        print(f"documents: {reader.doc_count}")
        print(f"payload_ratio: {stats.payload_ratio:.4f}")
        print(f"total_ratio: {stats.total_ratio:.4f}")
        print(f"avg_factor_len: {_format_opt(stats.avg_factor_len)}")
        print(f"unused_pct: {_format_opt(stats.unused_pct)}")
    if args.histogram is not None:
        emit_histogram(stats.length_histogram, args.histogram)
    return 0


def _cmd_bench(parser, args) -> int:
    with open(args.archive, "rb") as f:
        magic = f.read(4)
    pattern = AccessPattern.parse(args.pattern, count=args.count, seed=args.seed)
    if magic == ARCHIVE_MAGIC:
        if args.dict is None:
            parser.error("bench on an RLZ archive requires --dict")
        reader, d = _open_rlz(args)
        with reader:
            stats = collect_stats(reader, d)
            system = "rlz"
            config = f"{reader.scheme.name.lower()}/dict={len(d.data)}"
            seq = run_access_pattern(reader, AccessPattern("sequential"))
            rand = None if pattern.kind == "sequential" else run_access_pattern(reader, pattern)
    elif magic == BASELINE_MAGIC:
        reader = open_blocked(args.archive)
        with reader:
            stats = collect_blocked_stats(reader)
            system = "blocked"
            config = f"bs={reader.block_size}"
            seq = run_access_pattern(reader, AccessPattern("sequential"))
            rand = None if pattern.kind == "sequential" else run_access_pattern(reader, pattern)
    else:
        raise RlzError(f"{args.archive}: not an archive (magic {magic!r})")
    row = ReportRow(
        system=system,
        config=config,
        payload_ratio=stats.payload_ratio,
        total_ratio=stats.total_ratio,
        sequential_docs_per_sec=seq.docs_per_second,
        random_docs_per_sec=None if rand is None else rand.docs_per_second,
        avg_factor_len=stats.avg_factor_len,
        unused_pct=stats.unused_pct,
    )
    emit_report([row], args.out)
    if args.histogram is not None:
        emit_histogram(stats.length_histogram, args.histogram)
    _info(f"bench: {seq.requests} sequential docs at {seq.docs_per_second:.0f}/s")
    return 0


def _cmd_baseline_compress(parser, args) -> int:
    corpus = _load_corpus_args(parser, args)
    archive = compress_blocked(corpus, args.block_size)
    write_blocked(args.out, archive)
    _info(f"blocked: {archive.doc_count} documents in {len(archive.blocks)} blocks")
    return 0


def _cmd_baseline_get(parser, args) -> int:
    with open_blocked(args.archive) as reader:
        _write_payload(reader.get_document(args.doc_id), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rlz", description="RLZ corpus compression toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-dict", help="sample a dictionary from a corpus")
    _add_corpus_flags(p)
    p.add_argument("--dict-size", type=int, required=True, metavar="BYTES")
    p.add_argument("--sample-size", type=int, default=DEFAULT_SAMPLE_SIZE, metavar="BYTES")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_build_dict)

    p = sub.add_parser("extend-dict", help="append samples of new documents to a dictionary")
    _add_corpus_flags(p)
    p.add_argument("--dict", required=True, metavar="PATH")
    p.add_argument("--dict-size", type=int, required=True, metavar="BYTES", help="sample budget for the new documents")
    p.add_argument("--sample-size", type=int, metavar="BYTES", help="defaults to the dictionary's stored sample size")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_extend_dict)

    p = sub.add_parser("compress", help="factorize and encode a corpus into an archive")
    _add_corpus_flags(p)
    p.add_argument("--dict", required=True, metavar="PATH")
    p.add_argument("--scheme", choices=[s.name.lower() for s in Scheme], default="zz")
    p.add_argument("--threads", type=int, default=1, metavar="N")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("get", help="retrieve one document")
    p.add_argument("--archive", required=True, metavar="PATH")
    p.add_argument("--dict", required=True, metavar="PATH")
    p.add_argument("--doc-id", type=int, required=True, metavar="N")
    p.add_argument("--allow-extended-dict", action="store_true")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_get)

    p = sub.add_parser("cat", help="stream every document in order")
    p.add_argument("--archive", required=True, metavar="PATH")
    p.add_argument("--dict", required=True, metavar="PATH")
    p.add_argument("--allow-extended-dict", action="store_true")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_cat)

    p = sub.add_parser("stats", help="archive statistics")
    p.add_argument("--archive", required=True, metavar="PATH")
    p.add_argument("--dict", required=True, metavar="PATH")
    p.add_argument("--allow-extended-dict", action="store_true")
    p.add_argument("--histogram", metavar="PATH", help="write factor-length histogram CSV here")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("bench", help="time access patterns over an archive")
    p.add_argument("--archive", required=True, metavar="PATH")
    p.add_argument("--dict", metavar="PATH", help="required for RLZ archives")
    p.add_argument("--pattern", default="random", metavar="{sequential|random|file:PATH}")
    p.add_argument("--count", type=int, metavar="N", help="request count for the random pattern")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--allow-extended-dict", action="store_true")
    p.add_argument("--histogram", metavar="PATH")
    p.add_argument("--out", required=True, metavar="PATH", help="CSV report path")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("baseline-compress", help="blocked zlib baseline store")
    _add_corpus_flags(p)
    p.add_argument("--block-size", type=int, required=True, metavar="BYTES", help="0 = one document per block")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_baseline_compress)

    p = sub.add_parser("baseline-get", help="retrieve one document from a blocked store")
    p.add_argument("--archive", required=True, metavar="PATH")
    p.add_argument("--doc-id", type=int, required=True, metavar="N")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_baseline_get)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except BrokenPipeError:
        # Keep the interpreter's exit-time flush from raising again.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1
    except (RlzError, OSError) as exc:
        print(f"rlz: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
