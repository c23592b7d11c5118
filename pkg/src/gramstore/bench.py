"""Corpus files, synthetic corpora, the backend x algorithm grid and its report."""

from __future__ import annotations

import csv
import io
import json
import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusFormatError, RejectedInputError
from .evaluation import ALGORITHMS, EvaluationResult, run_crossval
from .ngrams import DEFAULT_N
from .sentiment import NEGATIVE, POSITIVE, LabeledDocument
from .stores import BACKENDS

log = logging.getLogger(__name__)

CORPUS_FORMATS = ("jsonl", "csv")
REPORT_COLUMNS = (
    "backend", "algorithm", "n", "train_seconds", "eval_seconds", "total_seconds",
    "accuracy", "kappa", "corpus_size", "seed",
)
TIME_COLUMNS = ("train_seconds", "eval_seconds", "total_seconds")


# -- corpus files --------------------------------------------------------------


@dataclass
class ParseSummary:
    accepted: int = 0
    rejected: int = 0
    problems: list[str] = field(default_factory=list)


def guess_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".csv", ".tsv"):
        return "csv"
    return "jsonl"


def _record(text, label) -> LabeledDocument:
    if not isinstance(text, str):
        raise ValueError("missing or non-string text")
    return LabeledDocument(text, label)


def _jsonl_records(handle):
    for lineno, line in enumerate(handle, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            yield lineno, _record(obj.get("text"), obj.get("label"))
        except (ValueError, AttributeError) as exc:
            yield lineno, exc


def _csv_records(handle):
    reader = csv.reader(handle)
    header = next(reader, None)
    if header is None:
        return
    try:
        ti, li = header.index("text"), header.index("label")
    except ValueError:
        raise CorpusFormatError(f"csv header must name 'text' and 'label' columns, got {header}")
    for row in reader:
        lineno = reader.line_num
        if not row:
            continue
        try:
            yield lineno, _record(row[ti], row[li])
        except (IndexError, ValueError) as exc:
            yield lineno, exc


def ingest_corpus(path: str | Path, format: str | None = None) -> tuple[list[LabeledDocument], ParseSummary]:
    """Read labeled documents in file order.

    Malformed records are skipped, counted and logged.  When more than half
    of the records are malformed the whole file is rejected.
    """
    format = format or guess_format(path)
    if format not in CORPUS_FORMATS:
        raise RejectedInputError(f"unknown corpus format {format!r}")
    docs: list[LabeledDocument] = []
    summary = ParseSummary()
    with open(path, encoding="utf-8", newline="" if format == "csv" else None) as handle:
        records = _jsonl_records(handle) if format == "jsonl" else _csv_records(handle)
        for lineno, rec in records:
            if isinstance(rec, LabeledDocument):
                docs.append(rec)
                summary.accepted += 1
            else:
                summary.rejected += 1
                summary.problems.append(f"line {lineno}: {rec}")
    if summary.rejected:
        log.warning("%s: skipped %d malformed record(s) of %d", path, summary.rejected,
                    summary.accepted + summary.rejected)
        if summary.rejected * 2 > summary.accepted + summary.rejected:
            raise CorpusFormatError(
                f"{path}: {summary.rejected} of {summary.accepted + summary.rejected} records malformed; "
                f"first: {summary.problems[0]}"
            )
    return docs, summary


def write_corpus(docs: Sequence[LabeledDocument], path: str | Path, format: str | None = None) -> None:
    format = format or guess_format(path)
    if format not in CORPUS_FORMATS:
        raise RejectedInputError(f"unknown corpus format {format!r}")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        if format == "jsonl":
            for doc in docs:
                handle.write(json.dumps({"text": doc.text, "label": doc.label}) + "\n")
        else:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["text", "label"])
            writer.writerows((doc.text, doc.label) for doc in docs)


# -- synthetic corpora -------------------------------------------------------


def generate_synthetic_corpus(
    size: int,
    separability: float = 1.0,
    seed: int = 42,
    *,
    lexicon_size: int = 70,
    words_per_doc: tuple[int, int] = (2, 3),
    word_length: tuple[int, int] = (5, 8),
) -> list[LabeledDocument]:
    """Balanced two-class corpus whose class signal is tunable.

    Documents are space-separated words picked from one shared lexicon of
    letter *offsets* 0..12.  A positive document spells each offset with
    the letters a-m, a negative one with n-z.  Each letter is then swapped
    for its counterpart in the other half (a<->n, b<->o, ...) with
    probability ``(1 - separability) / 2``.  At separability 1 the classes
    share no letters; at 0 both classes have the same distribution.
    """
    if isinstance(size, bool) or not isinstance(size, int) or size < 2:
        raise RejectedInputError(f"corpus size must be an integer >= 2, got {size!r}")
    if not 0.0 <= separability <= 1.0:
        raise RejectedInputError(f"separability must lie in [0, 1], got {separability!r}")
    rng = random.Random(seed)
    lexicon = [
        [rng.randrange(13) for _ in range(rng.randint(*word_length))]
        for _ in range(lexicon_size)
    ]
    flip = (1.0 - separability) / 2.0
    labels = [POSITIVE] * (size - size // 2) + [NEGATIVE] * (size // 2)
    rng.shuffle(labels)

    docs = []
    for label in labels:
        base = 97 if label == POSITIVE else 110
        words = []
        for _ in range(rng.randint(*words_per_doc)):
            letters = []
            for offset in rng.choice(lexicon):
                c = base + offset
                if flip and rng.random() < flip:
                    c = 97 + (c - 97 + 13) % 26
                letters.append(chr(c))
            words.append("".join(letters))
        docs.append(LabeledDocument(" ".join(words), label))
    return docs


# -- benchmark grid ------------------------------------------------------------


@dataclass
class BenchmarkRow:
    backend: str
    algorithm: str
    n: int
    train_seconds: float
    eval_seconds: float
    total_seconds: float
    accuracy: float
    kappa: float
    corpus_size: int
    seed: int

    @classmethod
    def from_result(cls, res: EvaluationResult, corpus_size: int, seed: int) -> BenchmarkRow:
        return cls(res.backend, res.algorithm, res.n, res.train_seconds, res.eval_seconds,
                   res.total_seconds, res.accuracy, res.kappa, corpus_size, seed)


@dataclass
class BenchmarkReport:
    rows: list[BenchmarkRow] = field(default_factory=list)
    errors: list[tuple[str, str, str]] = field(default_factory=list)

    def cell(self, algorithm: str, backend: str) -> BenchmarkRow:
        for row in self.rows:
            if row.algorithm == algorithm and row.backend == backend:
                return row
        raise KeyError((algorithm, backend))

    def table(self, column: str = "total_seconds") -> dict[str, dict[str, float]]:
        """Pivot one column: algorithms as rows, backends as columns."""
        out: dict[str, dict[str, float]] = {}
        for row in self.rows:
            out.setdefault(row.algorithm, {})[row.backend] = getattr(row, column)
        return out


def run_benchmark_grid(
    corpus: Sequence[LabeledDocument],
    backends: Sequence[str] = BACKENDS,
    algorithms: Sequence[str] = ALGORITHMS,
    n: int = DEFAULT_N,
    k: int = 10,
    seed: int = 42,
    tau: float = 0.0,
    alpha: float = 1.0,
    *,
    buckets: int | None = None,
    segmented: bool = False,
) -> BenchmarkReport:
    """Cross-validate every (algorithm, backend) cell, one after another.

    A failing cell is recorded in ``report.errors`` and the rest still run.
    """
    if not backends or not algorithms:
        raise RejectedInputError("need at least one backend and one algorithm")
    for b in backends:
        if b not in BACKENDS:
            raise RejectedInputError(f"unknown backend {b!r}")
    for a in algorithms:
        if a not in ALGORITHMS:
            raise RejectedInputError(f"unknown algorithm {a!r}")
    report = BenchmarkReport()
    for algorithm in algorithms:
        for backend in backends:
            log.info("cross-validating %s on %s", algorithm, backend)
            try:
                res = run_crossval(corpus, k, seed, backend, algorithm, n=n, tau=tau, alpha=alpha,
                                   buckets=buckets, segmented=segmented)
            except Exception as exc:
                log.error("cell (%s, %s) failed: %s", algorithm, backend, exc)
                report.errors.append((algorithm, backend, f"{type(exc).__name__}: {exc}"))
                continue
            report.rows.append(BenchmarkRow.from_result(res, len(corpus), seed))
    return report


# -- report files --------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def format_report(report: BenchmarkReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in report.rows:
        writer.writerow([_fmt(getattr(row, col)) for col in REPORT_COLUMNS])
    return buf.getvalue()


def emit_report(report: BenchmarkReport, path: str | Path) -> None:
    """Write the report as CSV, floats with six decimals."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(format_report(report))


def read_report(path: str | Path) -> BenchmarkReport:
    report = BenchmarkReport()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or tuple(reader.fieldnames) != REPORT_COLUMNS:
            raise CorpusFormatError(f"{path}: not a benchmark report (header {reader.fieldnames})")
        for rec in reader:
            report.rows.append(BenchmarkRow(
                backend=rec["backend"], algorithm=rec["algorithm"], n=int(rec["n"]),
                train_seconds=float(rec["train_seconds"]), eval_seconds=float(rec["eval_seconds"]),
                total_seconds=float(rec["total_seconds"]), accuracy=float(rec["accuracy"]),
                kappa=float(rec["kappa"]), corpus_size=int(rec["corpus_size"]), seed=int(rec["seed"]),
            ))
    return report
