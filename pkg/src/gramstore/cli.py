"""Command line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import bench
from .errors import CorpusFormatError, DegenerateCorpusError, RejectedInputError
from .evaluation import ALGORITHMS, run_crossval
from .ngrams import DEFAULT_N, build_ngram_graph, extract_ngrams
from .normalization import normalize_segments, normalize_strict
from .stores import (
    BACKENDS,
    HASH_LIST_CASES,
    MB,
    estimate_dimensional_map_bytes,
    estimate_hash_list_bytes,
    gram_space,
)

log = logging.getLogger("gramstore")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(choices):
    def parse(value: str) -> list[str]:
        items = [v.strip() for v in value.split(",") if v.strip()]
        bad = [v for v in items if v not in choices]
        if bad or not items:
            raise argparse.ArgumentTypeError(f"choose from {', '.join(choices)}; got {value!r}")
        return items
    return parse


def _add_global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # Registered on the top-level parser with real defaults and again on each
    # subcommand with SUPPRESS, so the flags work before or after the command.
    def d(value):
        return argparse.SUPPRESS if suppress else value

    g = parser.add_argument_group("global options")
    g.add_argument("--n", type=int, default=d(DEFAULT_N), help="gram length (default 5)")
    g.add_argument("--backend", choices=BACKENDS, default=d("dimensional"))
    g.add_argument("--buckets", type=int, default=d(None), help="bucket count (default 26**n)")
    g.add_argument("--folds", type=int, default=d(10))
    g.add_argument("--seed", type=int, default=d(42))
    g.add_argument("--threshold", type=float, default=d(0.0), help="threshold classifier cut-off")
    g.add_argument("--alpha", type=float, default=d(1.0), help="smoothing constant")
    g.add_argument("--format", choices=bench.CORPUS_FORMATS, default=d(None),
                   help="corpus file format (default: from extension)")
    g.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gramstore", description=__doc__.splitlines()[0])
    _add_global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name, help):
        p = sub.add_parser(name, help=help, description=help)
        _add_global_options(p, suppress=True)
        return p

    p = command("extract", "print the n-grams of a text, one per line")
    p.add_argument("text", nargs="?", help="text to split (default: stdin)")
    p.add_argument("--normalize", action="store_true", help="cleanse to a-z first")
    p.add_argument("--segmented", action="store_true", help="cleanse without joining across removed characters")
    p.add_argument("--graph", action="store_true", help="print n-gram graph edges instead")
    p.add_argument("--window", type=int, default=1, help="graph neighbour window")

    p = command("estimate-size", "estimate hash-list and dimensional-map memory")
    p.add_argument("--model", choices=("hash-list", "dimensional", "both"), default="both")
    p.add_argument("--unique", type=int, help="unique grams stored (default 26**n)")
    p.add_argument("--empty", type=int, default=0, help="empty buckets")
    p.add_argument("--case", choices=sorted(HASH_LIST_CASES), help="use a reference 5-gram parameter set")

    p = command("gen-corpus", "write a synthetic labeled corpus")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--separability", type=float, default=1.0)
    p.add_argument("--lexicon-size", type=int, default=70)
    p.add_argument("--output", "-o", required=True)

    p = command("crossval", "cross-validate one backend and algorithm")
    _corpus_source(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="threshold")
    p.add_argument("--output", "-o", help="report path (default: stdout)")

    p = command("bench", "cross-validate every backend x algorithm cell")
    _corpus_source(p)
    p.add_argument("--backends", type=_csv_list(BACKENDS), default=list(BACKENDS))
    p.add_argument("--algorithms", type=_csv_list(ALGORITHMS), default=list(ALGORITHMS))
    p.add_argument("--output", "-o", help="report path (default: stdout)")

    p = command("report", "pivot a benchmark report: algorithms x backends")
    p.add_argument("path")
    p.add_argument("--column", default="total_seconds",
                   choices=[c for c in bench.REPORT_COLUMNS if c not in ("backend", "algorithm")])
    return parser


def _corpus_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="corpus file (jsonl or csv)")
    src.add_argument("--generate", type=int, metavar="SIZE", help="use a synthetic corpus of SIZE documents")
    p.add_argument("--separability", type=float, default=1.0, help="for --generate")
    p.add_argument("--lexicon-size", type=int, default=70, help="for --generate")


def _load_corpus(args) -> list:
    if args.generate is not None:
        return bench.generate_synthetic_corpus(args.generate, args.separability, args.seed,
                                               lexicon_size=args.lexicon_size)
    docs, summary = bench.ingest_corpus(args.corpus, args.format)
    log.info("read %d documents (%d rejected) from %s", summary.accepted, summary.rejected, args.corpus)
    return docs


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_extract(args) -> int:
    text = args.text if args.text is not None else sys.stdin.read()
    if args.segmented:
        pieces = normalize_segments(text)
    elif args.normalize:
        pieces = [normalize_strict(text)]
    else:
        pieces = [text]
    if args.graph:
        for piece in pieces:
            graph = build_ngram_graph(piece, args.n, args.window)
            for (a, b), count in sorted(graph.edges.items()):
                print(f"{a!r}\t{b!r}\t{count}")
    else:
        for piece in pieces:
            for gram in extract_ngrams(piece, args.n):
                print(repr(gram) if not args.normalize and not args.segmented else gram)
    return EXIT_OK


def cmd_estimate_size(args) -> int:
    if args.case:
        params = dict(HASH_LIST_CASES[args.case])
        params.pop("reported_mb")
    else:
        params = dict(
            n=args.n,
            unique=gram_space(args.n) if args.unique is None else args.unique,
            buckets=gram_space(args.n) if args.buckets is None else args.buckets,
            empty=args.empty,
        )
    print("model,n,unique,buckets,empty,bytes,megabytes")
    if args.model in ("hash-list", "both"):
        est = estimate_hash_list_bytes(**params)
        print(f"hash_list,{params['n']},{params['unique']},{params['buckets']},{params['empty']},"
              f"{est.bytes},{est.bytes / MB:.1f}")
    if args.model in ("dimensional", "both"):
        est = estimate_dimensional_map_bytes(params["n"])
        print(f"dimensional_map,{params['n']},,,,{est.bytes},{est.bytes / MB:.1f}")
    return EXIT_OK


def cmd_gen_corpus(args) -> int:
    docs = bench.generate_synthetic_corpus(args.size, args.separability, args.seed,
                                           lexicon_size=args.lexicon_size)
    bench.write_corpus(docs, args.output, args.format)
    log.info("wrote %d documents to %s", len(docs), args.output)
    return EXIT_OK


def cmd_crossval(args) -> int:
    corpus = _load_corpus(args)
    res = run_crossval(corpus, args.folds, args.seed, args.backend, args.algorithm, n=args.n,
                       tau=args.threshold, alpha=args.alpha, buckets=args.buckets)
    report = bench.BenchmarkReport([bench.BenchmarkRow.from_result(res, len(corpus), args.seed)])
    _write(bench.format_report(report), args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    corpus = _load_corpus(args)
    report = bench.run_benchmark_grid(corpus, args.backends, args.algorithms, args.n, args.folds,
                                      args.seed, args.threshold, args.alpha, buckets=args.buckets)
    _write(bench.format_report(report), args.output)
    for algorithm, backend, message in report.errors:
        print(f"cell ({algorithm}, {backend}) failed: {message}", file=sys.stderr)
    return EXIT_DATA if report.errors else EXIT_OK


def cmd_report(args) -> int:
    report = bench.read_report(args.path)
    table = report.table(args.column)
    backends = list(dict.fromkeys(row.backend for row in report.rows))
    width = max([len(a) for a in table] + [len(args.column), 9])
    print(args.column.ljust(width) + "".join(b.rjust(14) for b in backends))
    for algorithm, cells in table.items():
        line = algorithm.ljust(width)
        for b in backends:
            value = cells.get(b)
            line += ("-" if value is None else f"{value:.6g}").rjust(14)
        print(line)
    return EXIT_OK


COMMANDS = {
    "extract": cmd_extract,
    "estimate-size": cmd_estimate_size,
    "gen-corpus": cmd_gen_corpus,
    "crossval": cmd_crossval,
    "bench": cmd_bench,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except RejectedInputError as exc:
        print(f"gramstore: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusFormatError, DegenerateCorpusError, OSError) as exc:
        print(f"gramstore: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"gramstore: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
