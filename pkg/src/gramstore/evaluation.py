"""Stratified k-fold cross validation and its KPIs.

Held-out predictions from every fold are pooled into a single confusion
matrix; accuracy and Cohen's kappa come from that pooled matrix.  Training
and classification wall times are summed across folds separately.
"""

from __future__ import annotations

import gc
import random
import time
from collections.abc import Sequence
from contextlib import contextmanager
from dataclasses import dataclass, field

from .errors import DegenerateCorpusError, RejectedInputError
from .ngrams import DEFAULT_N
from .sentiment import LABELS, POSITIVE, LabeledDocument, SentimentModel, document_codes

ALGORITHMS = ("threshold", "naive_bayes")


@dataclass(frozen=True)
class FoldPlan:
    k: int
    seed: int
    assignment: tuple[int, ...]

    def test_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f == fold]

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for f in self.assignment:
            sizes[f] += 1
        return sizes


def make_folds(corpus: Sequence[LabeledDocument], k: int = 10, seed: int = 42) -> FoldPlan:
    """Shuffle each class with ``seed`` and deal documents to folds round-robin.

    The deal continues across classes, so fold sizes differ by at most one
    and so do per-class counts.
    """
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise RejectedInputError(f"fold count must be an integer >= 2, got {k!r}")
    if len(corpus) < k:
        raise RejectedInputError(f"cannot split {len(corpus)} documents into {k} folds")
    rng = random.Random(seed)
    assignment = [0] * len(corpus)
    turn = 0
    for label in LABELS:
        members = [i for i, doc in enumerate(corpus) if doc.label == label]
        rng.shuffle(members)
        for i in members:
            assignment[i] = turn % k
            turn += 1
    return FoldPlan(k, seed, tuple(assignment))


@dataclass
class ConfusionMatrix:
    """Counts with ``positive`` as the positive class."""

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def add(self, truth: str, predicted: str) -> None:
        if truth == POSITIVE:
            if predicted == POSITIVE:
                self.tp += 1
            else:
                self.fn += 1
        elif predicted == POSITIVE:
            self.fp += 1
        else:
            self.tn += 1

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def accuracy(self) -> float:
        if self.total == 0:
            raise RejectedInputError("accuracy of an empty confusion matrix")
        return (self.tp + self.tn) / self.total


def cohen_kappa(cm: ConfusionMatrix) -> float:
    """Chance-corrected agreement ``(p_o - p_e) / (1 - p_e)``.

    Evaluated as one ratio of integers so results like 0.4 come out exact.
    Returns 0 when chance agreement is already perfect (``p_e = 1``).
    """
    total = cm.total
    if total <= 0:
        raise RejectedInputError("kappa of an empty confusion matrix")
    chance = (cm.tp + cm.fn) * (cm.tp + cm.fp) + (cm.fp + cm.tn) * (cm.fn + cm.tn)
    denom = total * total - chance
    if denom == 0:
        return 0.0
    return (total * (cm.tp + cm.tn) - chance) / denom


@dataclass
class EvaluationResult:
    backend: str
    algorithm: str
    n: int
    accuracy: float
    kappa: float
    train_seconds: float
    eval_seconds: float
    confusion: ConfusionMatrix = field(repr=False)

    @property
    def total_seconds(self) -> float:
        return self.train_seconds + self.eval_seconds


@contextmanager
def _gc_paused():
    # Same policy as timeit: a cyclic collection landing inside a timed
    # region charges one backend for garbage left by another.
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def run_crossval(
    corpus: Sequence[LabeledDocument],
    k: int = 10,
    seed: int = 42,
    backend: str = "dimensional",
    algorithm: str = "threshold",
    *,
    n: int = DEFAULT_N,
    tau: float = 0.0,
    alpha: float = 1.0,
    buckets: int | None = None,
    segmented: bool = False,
) -> EvaluationResult:
    """Train on k-1 folds, classify the held-out fold, for every fold in turn.

    Folds run sequentially so the recorded wall times are uncontended.
    """
    if algorithm not in ALGORITHMS:
        raise RejectedInputError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    plan = make_folds(corpus, k, seed)
    # Grams are extracted once up front: the cost is the same for every
    # backend, so only counting and classification are timed.
    encoded = [document_codes(d.text, n, segmented) for d in corpus]
    cm = ConfusionMatrix()
    train_seconds = eval_seconds = 0.0
    for fold in range(k):
        gc.collect()
        train_idx = [i for i, f in enumerate(plan.assignment) if f != fold]
        test_idx = [i for i, f in enumerate(plan.assignment) if f == fold]

        with _gc_paused():
            start = time.perf_counter()
            model = SentimentModel(n, backend, alpha, buckets=buckets, segmented=segmented)
            for i in train_idx:
                model.add_codes(corpus[i].label, encoded[i])
            train_seconds += time.perf_counter() - start
        missing = [label for label in LABELS if model.doc_counts[label] == 0]
        if missing:
            raise DegenerateCorpusError(
                f"fold {fold}: training folds have no {' or '.join(missing)} documents", model)
        model.freeze()

        with _gc_paused():
            start = time.perf_counter()
            if algorithm == "threshold":
                predicted = [model.threshold_codes(encoded[i], tau) for i in test_idx]
            else:
                predicted = [model.naive_bayes_codes(encoded[i])[0] for i in test_idx]
            eval_seconds += time.perf_counter() - start

        for i, label in zip(test_idx, predicted):
            cm.add(corpus[i].label, label)
        del model

    return EvaluationResult(
        backend=backend,
        algorithm=algorithm,
        n=n,
        accuracy=cm.accuracy,
        kappa=cohen_kappa(cm),
        train_seconds=train_seconds,
        eval_seconds=eval_seconds,
        confusion=cm,
    )

