"""Text representations: sliding-window n-grams, bag of words, n-gram graphs.

These work on whatever characters they are given.  Normalization is the
caller's business; the stores need normalized input, but extraction itself
does not care about the alphabet.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import RejectedInputError

DEFAULT_N = 5


def _check_n(n: int, name: str = "n") -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise RejectedInputError(f"{name} must be a positive integer, got {n!r}")


def extract_ngrams(text: str, n: int = DEFAULT_N) -> list[str]:
    """Return every length-``n`` window of ``text`` in order, duplicates kept.

    >>> extract_ngrams("abcd", 3)
    ['abc', 'bcd']
    """
    _check_n(n)
    return [text[i : i + n] for i in range(len(text) - n + 1)]


def bag_of_words(text: str) -> Counter[str]:
    """Multiset of whitespace-delimited tokens."""
    return Counter(text.split())


def _edge_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass
class NGramGraph:
    """Undirected co-occurrence graph over the distinct grams of a text.

    Edge keys are ordered pairs ``(min, max)`` so ``(a, b)`` and ``(b, a)``
    address the same edge.  A gram repeated at neighbouring positions gives a
    self-edge.
    """

    nodes: set[str] = field(default_factory=set)
    edges: Counter[tuple[str, str]] = field(default_factory=Counter)

    def edge_count(self, a: str, b: str) -> int:
        return self.edges.get(_edge_key(a, b), 0)

    def __len__(self) -> int:
        return len(self.nodes)


def build_ngram_graph(text: str, n: int = DEFAULT_N, window: int = 1) -> NGramGraph:
    """Link each gram to the ``window`` grams that follow it in ``text``."""
    _check_n(window, "window")
    grams = extract_ngrams(text, n)
    graph = NGramGraph(nodes=set(grams))
    for i, g in enumerate(grams):
        for j in range(i + 1, min(i + window, len(grams) - 1) + 1):
            graph.edges[_edge_key(g, grams[j])] += 1
    return graph
