"""Per-gram sentiment weights learned from labeled text.

Training counts gram occurrences per class in two stores of the chosen
backend.  From those counts:

* a gram's weight is its Laplace-smoothed log-odds,
  ``log P(g | positive) - log P(g | negative)`` with ``P(g | c) =
  (count_c(g) + alpha) / (total_c + alpha * 26**n)``;
* a document's score is the mean weight of its grams (0 for none);
* the threshold classifier calls a document positive iff score > tau;
* the Naive Bayes classifier is multinomial over grams with the same
  smoothed likelihoods and document-frequency priors.

Ties go to ``negative`` everywhere.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import DegenerateCorpusError, RejectedInputError
from .ngrams import DEFAULT_N
from .normalization import normalize_segments, normalize_strict
from .stores import Gram, NGramStore, encode_text, make_store

POSITIVE = "positive"
NEGATIVE = "negative"
LABELS = (POSITIVE, NEGATIVE)


@dataclass(frozen=True)
class LabeledDocument:
    text: str
    label: str

    def __post_init__(self):
        if not isinstance(self.text, str):
            raise RejectedInputError(f"document text must be a string, got {type(self.text).__name__}")
        if self.label not in LABELS:
            raise RejectedInputError(f"label must be 'positive' or 'negative', got {self.label!r}")


def document_codes(text: str, n: int, segmented: bool = False) -> list[int]:
    """Normalize ``text`` and return the flat indices of its grams."""
    if segmented:
        codes = []
        for seg in normalize_segments(text):
            codes.extend(encode_text(seg, n))
        return codes
    return encode_text(normalize_strict(text), n)


class SentimentModel:
    """Per-class gram counts plus the statistics both classifiers need."""

    def __init__(self, n: int, backend: str, alpha: float = 1.0, *, buckets: int | None = None,
                 segmented: bool = False):
        if not alpha > 0:
            raise RejectedInputError(f"smoothing alpha must be positive, got {alpha!r}")
        self.n = n
        self.backend = backend
        self.alpha = float(alpha)
        self.segmented = segmented
        self.stores: dict[str, NGramStore] = {
            label: make_store(backend, n, buckets=buckets) for label in LABELS
        }
        self.gram_totals = dict.fromkeys(LABELS, 0)
        self.doc_counts = dict.fromkeys(LABELS, 0)
        self.vocabulary = self.stores[POSITIVE].space
        self._log_norm: dict[str, float] | None = None

    def add(self, doc: LabeledDocument) -> None:
        self.add_codes(doc.label, self.codes(doc.text))

    def add_codes(self, label: str, codes: Sequence[int]) -> None:
        """Count one document given as already-encoded grams."""
        increment = self.stores[label].increment_at
        for code in codes:
            increment(code)
        self.gram_totals[label] += len(codes)
        self.doc_counts[label] += 1
        self._log_norm = None

    def freeze(self) -> None:
        for store in self.stores.values():
            store.freeze()

    @property
    def log_norm(self) -> dict[str, float]:
        if self._log_norm is None:
            av = self.alpha * self.vocabulary
            self._log_norm = {c: math.log(self.gram_totals[c] + av) for c in LABELS}
        return self._log_norm

    def _log_likelihood(self, label: str, code: int) -> float:
        return math.log(self.stores[label].get_at(code) + self.alpha) - self.log_norm[label]

    def _weight_at(self, code: int) -> float:
        return self._log_likelihood(POSITIVE, code) - self._log_likelihood(NEGATIVE, code)

    def gram_weight(self, gram: Gram) -> float:
        """Smoothed log-odds of ``gram``; positive leans positive."""
        return self._weight_at(self.stores[POSITIVE]._code(gram))

    def codes(self, text: str) -> list[int]:
        return document_codes(text, self.n, self.segmented)

    def score_codes(self, codes: Sequence[int]) -> float:
        if not codes:
            return 0.0
        return sum(self._weight_at(c) for c in codes) / len(codes)

    def score_document(self, text: str) -> float:
        """Mean gram weight of ``text``; 0 when it has no grams."""
        return self.score_codes(self.codes(text))

    def classify_threshold(self, text: str, tau: float = 0.0) -> str:
        return self.threshold_codes(self.codes(text), tau)

    def threshold_codes(self, codes: Sequence[int], tau: float = 0.0) -> str:
        return POSITIVE if self.score_codes(codes) > tau else NEGATIVE

    def naive_bayes_log_joint(self, codes: Sequence[int]) -> dict[str, float]:
        """Unnormalized log posterior of each class for encoded grams."""
        total_docs = self.doc_counts[POSITIVE] + self.doc_counts[NEGATIVE]
        joint = {}
        for label in LABELS:
            lp = math.log(self.doc_counts[label] / total_docs)
            for code in codes:
                lp += self._log_likelihood(label, code)
            joint[label] = lp
        return joint

    def classify_naive_bayes(self, text: str) -> tuple[str, float]:
        """Return the more probable class and its posterior probability."""
        return self.naive_bayes_codes(self.codes(text))

    def naive_bayes_codes(self, codes: Sequence[int]) -> tuple[str, float]:
        joint = self.naive_bayes_log_joint(codes)
        diff = joint[POSITIVE] - joint[NEGATIVE]
        # posterior of the positive class, computed stably on either side
        if diff >= 0:
            p_pos = 1.0 / (1.0 + math.exp(-diff))
        else:
            e = math.exp(diff)
            p_pos = e / (1.0 + e)
        if diff > 0:
            return POSITIVE, p_pos
        return NEGATIVE, 1.0 - p_pos


def train(corpus: Iterable[LabeledDocument], n: int = DEFAULT_N, backend: str = "dimensional",
          alpha: float = 1.0, *, buckets: int | None = None, segmented: bool = False) -> SentimentModel:
    """Count the corpus into a fresh model and freeze it.

    Raises :class:`DegenerateCorpusError` when either class is missing; the
    counts are still fully built at that point.
    """
    model = SentimentModel(n, backend, alpha, buckets=buckets, segmented=segmented)
    for doc in corpus:
        model.add(doc)
    missing = [label for label in LABELS if model.doc_counts[label] == 0]
    if missing:
        raise DegenerateCorpusError(f"training corpus has no {' or '.join(missing)} documents", model)
    model.freeze()
    return model
