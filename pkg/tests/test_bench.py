import json
import logging

import pytest

from gramstore.bench import (
    REPORT_COLUMNS,
    BenchmarkReport,
    BenchmarkRow,
    emit_report,
    format_report,
    generate_synthetic_corpus,
    ingest_corpus,
    read_report,
    run_benchmark_grid,
    write_corpus,
)
from gramstore.errors import CorpusFormatError, RejectedInputError
from gramstore.evaluation import run_crossval
from gramstore.ngrams import extract_ngrams
from gramstore.normalization import normalize_strict
from gramstore.sentiment import NEGATIVE, POSITIVE, LabeledDocument

HEADER = ",".join(REPORT_COLUMNS)


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


# -- ingest ----------------------------------------------------------------------


def test_ingest_two_lines(tmp_path):
    p = tmp_path / "c.jsonl"
    write_lines(p, ['{"text":"good","label":"positive"}', '{"text":"bad","label":"negative"}'])
    docs, summary = ingest_corpus(p)
    assert docs == [LabeledDocument("good", POSITIVE), LabeledDocument("bad", NEGATIVE)]
    assert (summary.accepted, summary.rejected) == (2, 0)


def test_ingest_empty(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text("")
    docs, summary = ingest_corpus(p)
    assert docs == [] and (summary.accepted, summary.rejected) == (0, 0)


def test_ingest_one_malformed_of_ten(tmp_path, caplog):
    p = tmp_path / "c.jsonl"
    lines = [json.dumps({"text": f"t{i}", "label": POSITIVE}) for i in range(9)]
    lines.insert(4, '{"text": "oops", "label": "meh"}')
    write_lines(p, lines)
    with caplog.at_level(logging.WARNING):
        docs, summary = ingest_corpus(p)
    assert len(docs) == 9 and summary.rejected == 1
    assert "line 5" in summary.problems[0]
    assert any("malformed" in r.message for r in caplog.records)


def test_ingest_mostly_malformed(tmp_path):
    p = tmp_path / "c.jsonl"
    write_lines(p, ['{"text":"good","label":"positive"}', "not json", "{}", '{"text": 3, "label": "positive"}'])
    with pytest.raises(CorpusFormatError):
        ingest_corpus(p)


def test_ingest_csv(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text('text,label\n"so, good",positive\nbad,negative\nbroken\n', encoding="utf-8")
    docs, summary = ingest_corpus(p)
    assert docs[0] == LabeledDocument("so, good", POSITIVE)
    assert summary.accepted == 2 and summary.rejected == 1


def test_ingest_csv_bad_header(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("body,sentiment\nx,positive\n")
    with pytest.raises(CorpusFormatError):
        ingest_corpus(p)


def test_ingest_missing_file(tmp_path):
    with pytest.raises(OSError):
        ingest_corpus(tmp_path / "absent.jsonl")


@pytest.mark.parametrize("suffix", [".jsonl", ".csv"])
def test_corpus_round_trip(tmp_path, suffix):
    docs = generate_synthetic_corpus(20, 0.5, seed=1) + [LabeledDocument('odd "quoted", text\n', NEGATIVE)]
    p = tmp_path / f"c{suffix}"
    write_corpus(docs, p)
    assert ingest_corpus(p)[0] == docs


# -- synthetic corpora -------------------------------------------------------------


def test_separable_corpus_shares_no_grams():
    docs = generate_synthetic_corpus(400, 1.0, seed=2)
    grams = {POSITIVE: set(), NEGATIVE: set()}
    for d in docs:
        grams[d.label].update(extract_ngrams(normalize_strict(d.text), 5))
        letters = set(normalize_strict(d.text))
        assert letters <= set("abcdefghijklm" if d.label == POSITIVE else "nopqrstuvwxyz")
    assert grams[POSITIVE] and grams[NEGATIVE]
    assert not grams[POSITIVE] & grams[NEGATIVE]


@pytest.mark.parametrize("size", [2, 3, 101, 1000])
def test_balanced(size):
    docs = generate_synthetic_corpus(size, 0.3, seed=size)
    pos = sum(d.label == POSITIVE for d in docs)
    assert len(docs) == size and abs(pos - (size - pos)) <= 1


def test_same_seed_same_corpus():
    assert generate_synthetic_corpus(50, 0.5, 7) == generate_synthetic_corpus(50, 0.5, 7)
    assert generate_synthetic_corpus(50, 0.5, 7) != generate_synthetic_corpus(50, 0.5, 8)


def test_zero_separability_has_no_signal():
    docs = generate_synthetic_corpus(4000, 0.0, seed=4)
    res = run_crossval(docs, 10, 4, "dimensional", "naive_bayes")
    assert abs(res.accuracy - 0.5) < 0.05
    # half the letters of each class land in the other half-alphabet
    for label in (POSITIVE, NEGATIVE):
        text = "".join(normalize_strict(d.text) for d in docs if d.label == label)
        low = sum(c <= "m" for c in text) / len(text)
        assert abs(low - 0.5) < 0.02


def test_generator_rejects():
    with pytest.raises(RejectedInputError):
        generate_synthetic_corpus(1, 0.5)
    with pytest.raises(RejectedInputError):
        generate_synthetic_corpus(10, 1.5)


# -- grid and report -----------------------------------------------------------------


@pytest.fixture(scope="module")
def small_report():
    corpus = generate_synthetic_corpus(120, 0.7, seed=3)
    return run_benchmark_grid(corpus, k=4, seed=3, buckets=None)


def test_grid_arity_and_order(small_report):
    assert [(r.algorithm, r.backend) for r in small_report.rows] == [
        ("threshold", "linear"), ("threshold", "bucket"), ("threshold", "dimensional"),
        ("naive_bayes", "linear"), ("naive_bayes", "bucket"), ("naive_bayes", "dimensional"),
    ]
    assert not small_report.errors


def test_grid_backend_invariance(small_report):
    for algorithm in ("threshold", "naive_bayes"):
        cells = {(r.accuracy, r.kappa) for r in small_report.rows if r.algorithm == algorithm}
        assert len(cells) == 1


def test_grid_table_shape(small_report):
    table = small_report.table("accuracy")
    assert list(table) == ["threshold", "naive_bayes"]
    assert list(table["threshold"]) == ["linear", "bucket", "dimensional"]


def test_grid_cell_error_does_not_stop_others():
    corpus = [LabeledDocument("abc", POSITIVE)] + [LabeledDocument(f"x{i}", NEGATIVE) for i in range(5)]
    report = run_benchmark_grid(corpus, ["dimensional", "bucket"], ["threshold"], n=2, k=2, buckets=7)
    assert len(report.errors) == 2 and not report.rows
    assert report.errors[0][:2] == ("threshold", "dimensional")
    assert "fold" in report.errors[0][2]


def test_grid_rejects_empty_lists():
    with pytest.raises(RejectedInputError):
        run_benchmark_grid([], [], ["threshold"])
    with pytest.raises(RejectedInputError):
        run_benchmark_grid([], ["dimensional"], ["svm"])


def test_empty_report_is_header_only(tmp_path):
    p = tmp_path / "r.csv"
    emit_report(BenchmarkReport(), p)
    assert p.read_text() == HEADER + "\n"


def test_six_row_report(tmp_path, small_report):
    p = tmp_path / "r.csv"
    emit_report(small_report, p)
    lines = p.read_text().splitlines()
    assert len(lines) == 7 and lines[0] == HEADER
    first = lines[1].split(",")
    assert first[:3] == ["linear", "threshold", "5"]
    for value in first[3:8]:
        assert len(value.split(".")[1]) == 6
    assert first[8:] == ["120", "3"]


def test_report_bytes_deterministic(tmp_path, small_report):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_report(small_report, a)
    emit_report(small_report, b)
    assert a.read_bytes() == b.read_bytes()


def test_report_round_trip(tmp_path, small_report):
    p = tmp_path / "r.csv"
    emit_report(small_report, p)
    assert format_report(read_report(p)) == format_report(small_report)


def test_fixed_report_exact_bytes():
    row = BenchmarkRow("dimensional", "threshold", 5, 0.5, 0.25, 0.75, 1.0, 0.4, 10, 42)
    assert format_report(BenchmarkReport([row])) == (
        HEADER + "\n" + "dimensional,threshold,5,0.500000,0.250000,0.750000,1.000000,0.400000,10,42\n"
    )


def test_unwritable_report_path(tmp_path):
    with pytest.raises(OSError):
        emit_report(BenchmarkReport(), tmp_path / "missing" / "r.csv")
