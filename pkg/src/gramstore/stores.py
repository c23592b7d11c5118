"""N-gram weight stores and their memory estimators.

Three interchangeable backends keep a 64-bit signed weight per n-gram:

``linear``
    one ordered list of (gram, weight) pairs, scanned on every access.
``bucket``
    a fixed array of buckets, each a collision list of (gram, weight) pairs;
    a gram lives in bucket ``flat_index(gram) % buckets``.
``dimensional``
    one flat array with a cell for every possible gram.  The gram's letters
    are the address, so access never depends on the stored data.

Grams are given either as a string of letters ``a``-``z`` or as a sequence
of alphabet indices.  Absent grams read as 0.  Every public method has an
``*_at`` twin taking the already-encoded flat index; the sentiment trainer
uses those to skip re-encoding on the hot path.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

from .errors import FrozenStoreError, RejectedInputError
from .normalization import ALPHABET, ALPHABET_SIZE

Gram = Union[str, Sequence[int]]

WEIGHT_MIN = -(2**63)
WEIGHT_MAX = 2**63 - 1
BYTE_COUNTER_MAX = 2**63 - 1
MB = 2**20

BACKENDS = ("linear", "bucket", "dimensional")

# Above this many cells a dense allocation needs ``allow_large=True``.
LARGE_ALLOCATION = ALPHABET_SIZE**6

_ORD_A = ord("a")


def gram_space(n: int) -> int:
    """Number of distinct grams of length ``n`` over the 26-letter alphabet."""
    _check_length(n)
    return ALPHABET_SIZE**n


def _check_length(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise RejectedInputError(f"gram length must be a positive integer, got {n!r}")


def flat_index(gram: Gram, n: int | None = None) -> int:
    """Base-26 offset of ``gram``, most significant letter first.

    >>> flat_index("aaaab")
    1
    >>> flat_index("zzzzz") == 26**5 - 1
    True
    """
    if n is not None and len(gram) != n:
        raise RejectedInputError(f"expected a gram of length {n}, got {len(gram)}: {gram!r}")
    if len(gram) == 0:
        raise RejectedInputError("empty gram")
    code = 0
    if isinstance(gram, str):
        for c in gram:
            i = ord(c) - _ORD_A
            if not 0 <= i < ALPHABET_SIZE:
                raise RejectedInputError(f"{c!r} in {gram!r} is not a lowercase letter a-z")
            code = code * ALPHABET_SIZE + i
    else:
        for i in gram:
            if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or not 0 <= i < ALPHABET_SIZE:
                raise RejectedInputError(f"alphabet index out of range in {gram!r}")
            code = code * ALPHABET_SIZE + int(i)
    return code


def gram_from_index(code: int, n: int) -> tuple[int, ...]:
    """Inverse of :func:`flat_index`, as a tuple of alphabet indices."""
    if not 0 <= code < gram_space(n):
        raise RejectedInputError(f"flat index {code} outside [0, 26**{n})")
    digits = [0] * n
    for pos in range(n - 1, -1, -1):
        code, digits[pos] = divmod(code, ALPHABET_SIZE)
    return tuple(digits)


def gram_to_str(gram: Sequence[int]) -> str:
    return "".join(ALPHABET[i] for i in gram)


def encode_text(clean: str, n: int) -> list[int]:
    """Flat indices of every length-``n`` window of normalized text.

    Equivalent to ``[flat_index(g) for g in extract_ngrams(clean, n)]`` but
    computed as a rolling base-26 number.
    """
    _check_length(n)
    if len(clean) < n:
        return []
    if not (clean.isascii() and clean.isalpha() and clean.islower()):
        raise RejectedInputError("text must contain only letters a-z; normalize it first")
    modulus = ALPHABET_SIZE ** (n - 1)
    digits = [b - _ORD_A for b in clean.encode("ascii")]
    code = 0
    for d in digits[: n - 1]:
        code = code * ALPHABET_SIZE + d
    codes = []
    for d in digits[n - 1 :]:
        code = code * ALPHABET_SIZE + d
        codes.append(code)
        code %= modulus
    return codes


def _checked(weight: int) -> int:
    if not WEIGHT_MIN <= weight <= WEIGHT_MAX:
        raise OverflowError(f"weight {weight} does not fit in a signed 64-bit integer")
    return weight


def _check_weight(weight) -> int:
    if isinstance(weight, bool) or not isinstance(weight, (int, np.integer)):
        raise RejectedInputError(f"weight must be an integer, got {weight!r}")
    return _checked(int(weight))


class NGramStore(ABC):
    """Mapping from grams of one fixed length to integer weights."""

    backend: ClassVar[str]

    def __init__(self, n: int):
        _check_length(n)
        self.n = n
        self.space = ALPHABET_SIZE**n
        self._frozen = False

    @classmethod
    def from_items(cls, n: int, items: Iterable[tuple[Gram, int]], **kwargs) -> NGramStore:
        store = cls(n, **kwargs)
        for gram, weight in items:
            store.set(gram, weight)
        return store

    def _code(self, gram: Gram) -> int:
        return flat_index(gram, self.n)

    def _mutating(self) -> None:
        if self._frozen:
            raise FrozenStoreError(f"{self.backend} store is frozen")

    def freeze(self) -> None:
        """Forbid further mutation; frozen stores are safe for concurrent readers."""
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    def get(self, gram: Gram) -> int:
        return self.get_at(self._code(gram))

    def set(self, gram: Gram, weight: int) -> None:
        self.set_at(self._code(gram), _check_weight(weight))

    def increment(self, gram: Gram, delta: int = 1) -> None:
        self.increment_at(self._code(gram), _check_weight(delta))

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Yield ``(gram, weight)`` for every nonzero weight, in backend order."""
        for code, weight in self.items_at():
            yield gram_from_index(code, self.n), weight

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], int]]:
        return self.items()

    def __len__(self) -> int:
        return sum(1 for _ in self.items_at())

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"

    @abstractmethod
    def get_at(self, code: int) -> int: ...

    @abstractmethod
    def set_at(self, code: int, weight: int) -> None: ...

    @abstractmethod
    def increment_at(self, code: int, delta: int = 1) -> None: ...

    @abstractmethod
    def items_at(self) -> Iterator[tuple[int, int]]:
        """Yield ``(flat_index, weight)`` for every nonzero weight."""


class LinearStore(NGramStore):
    """Unindexed list of ``[gram, weight]`` pairs, scanned from the front."""

    backend = "linear"

    def __init__(self, n: int):
        super().__init__(n)
        self._entries: list[list[int]] = []

    @classmethod
    def from_items(cls, n: int, items: Iterable[tuple[Gram, int]], **kwargs) -> LinearStore:
        """Bulk load distinct grams without the per-insert scan."""
        store = cls(n, **kwargs)
        store._entries = [[store._code(g), _check_weight(w)] for g, w in items]
        if len({e[0] for e in store._entries}) != len(store._entries):
            raise RejectedInputError("from_items needs distinct grams")
        return store

    def _find(self, code: int) -> list[int] | None:
        for entry in self._entries:
            if entry[0] == code:
                return entry
        return None

    def get_at(self, code: int) -> int:
        for entry in self._entries:
            if entry[0] == code:
                return entry[1]
        return 0

    def set_at(self, code: int, weight: int) -> None:
        self._mutating()
        entry = self._find(code)
        if entry is not None:
            entry[1] = weight
        elif weight:
            self._entries.append([code, weight])

    def increment_at(self, code: int, delta: int = 1) -> None:
        self._mutating()
        entry = self._find(code)
        if entry is not None:
            entry[1] = _checked(entry[1] + delta)
        else:
            self._entries.append([code, _checked(delta)])

    def items_at(self) -> Iterator[tuple[int, int]]:
        return ((g, w) for g, w in self._entries if w)

    @property
    def entry_count(self) -> int:
        return len(self._entries)


class BucketListStore(NGramStore):
    """Fixed bucket array with a collision list per bucket.

    Buckets are allocated lazily; an untouched bucket is ``None``.
    """

    backend = "bucket"

    def __init__(self, n: int, buckets: int | None = None, *, allow_large: bool = False):
        super().__init__(n)
        if buckets is None:
            buckets = self.space
        if isinstance(buckets, bool) or not isinstance(buckets, int) or buckets < 1:
            raise RejectedInputError(f"bucket count must be a positive integer, got {buckets!r}")
        if buckets > LARGE_ALLOCATION and not allow_large:
            raise RejectedInputError(
                f"{buckets} buckets needs allow_large=True (pass a smaller bucket count)"
            )
        self.bucket_count = buckets
        self._buckets: list[list[list[int]] | None] = [None] * buckets

    def get_at(self, code: int) -> int:
        bucket = self._buckets[code % self.bucket_count]
        if bucket is not None:
            for entry in bucket:
                if entry[0] == code:
                    return entry[1]
        return 0

    def _entry(self, code: int) -> tuple[list[list[int]], list[int] | None]:
        b = code % self.bucket_count
        bucket = self._buckets[b]
        if bucket is None:
            bucket = self._buckets[b] = []
        for entry in bucket:
            if entry[0] == code:
                return bucket, entry
        return bucket, None

    def set_at(self, code: int, weight: int) -> None:
        self._mutating()
        bucket, entry = self._entry(code)
        if entry is not None:
            entry[1] = weight
        elif weight:
            bucket.append([code, weight])

    def increment_at(self, code: int, delta: int = 1) -> None:
        self._mutating()
        bucket, entry = self._entry(code)
        if entry is not None:
            entry[1] = _checked(entry[1] + delta)
        else:
            bucket.append([code, _checked(delta)])

    def items_at(self) -> Iterator[tuple[int, int]]:
        for bucket in self._buckets:
            if bucket:
                for code, weight in bucket:
                    if weight:
                        yield code, weight

    @property
    def entry_count(self) -> int:
        return sum(len(b) for b in self._buckets if b)

    @property
    def empty_buckets(self) -> int:
        return sum(1 for b in self._buckets if not b)

    def estimate_bytes(self) -> SizeEstimate:
        """Hash-list size estimate for the current contents."""
        return estimate_hash_list_bytes(self.n, self.entry_count, self.bucket_count, self.empty_buckets)

    def __repr__(self) -> str:
        return f"BucketListStore(n={self.n}, buckets={self.bucket_count})"


class DimensionalMapStore(NGramStore):
    """Dense array with one int64 cell per possible gram.

    ``weights[flat_index(g)]`` is the flattened form of indexing a nested
    array by each letter of ``g`` in turn.  Size is ``26**n`` cells whatever
    is stored.  Single-cell access goes through a typed memoryview of the
    numpy buffer, which is cheaper per call than numpy scalar indexing.
    """

    backend = "dimensional"

    def __init__(self, n: int, *, allow_large: bool = False):
        super().__init__(n)
        if n >= 7 and not allow_large:
            raise RejectedInputError(
                f"a dimensional map for n={n} needs {self.space * 8} bytes; pass allow_large=True"
            )
        self.weights = np.zeros(self.space, dtype=np.int64)
        self._cells = memoryview(self.weights).cast("B").cast("q")

    def get_at(self, code: int) -> int:
        return self._cells[code]

    def set_at(self, code: int, weight: int) -> None:
        self._mutating()
        self._cells[code] = weight

    def increment_at(self, code: int, delta: int = 1) -> None:
        if self._frozen:
            self._mutating()
        try:
            self._cells[code] += delta
        except ValueError:
            _checked(self._cells[code] + delta)
            raise

    def items_at(self) -> Iterator[tuple[int, int]]:
        nz = np.flatnonzero(self.weights)
        return zip(nz.tolist(), self.weights[nz].tolist())

    def __len__(self) -> int:
        return int(np.count_nonzero(self.weights))

    def freeze(self) -> None:
        super().freeze()
        self._cells = self._cells.toreadonly()

    def estimate_bytes(self) -> SizeEstimate:
        return estimate_dimensional_map_bytes(self.n)


_BACKEND_TYPES: dict[str, type[NGramStore]] = {
    LinearStore.backend: LinearStore,
    BucketListStore.backend: BucketListStore,
    DimensionalMapStore.backend: DimensionalMapStore,
}


def make_store(backend: str, n: int, *, buckets: int | None = None, allow_large: bool = False) -> NGramStore:
    """Construct an empty store for ``backend`` (one of :data:`BACKENDS`)."""
    if backend == "linear":
        return LinearStore(n)
    if backend == "bucket":
        return BucketListStore(n, buckets, allow_large=allow_large)
    if backend == "dimensional":
        return DimensionalMapStore(n, allow_large=allow_large)
    raise RejectedInputError(f"unknown backend {backend!r}; choose from {', '.join(BACKENDS)}")


# -- size estimation ---------------------------------------------------------


@dataclass(frozen=True)
class SizeEstimate:
    bytes: int
    model: str

    @property
    def megabytes(self) -> float:
        return self.bytes / MB


def estimate_hash_list_bytes(n: int, unique: int, buckets: int, empty: int) -> SizeEstimate:
    """Estimated heap footprint of a hash list of n-grams.

    A 12 byte header, 12 bytes per occupied bucket, 4 per empty bucket and
    ``2n + 72`` per stored gram::

        12 + (buckets - empty) * 12 + empty * 4 + unique * (2n + 72)

    The per-object constants describe a managed runtime's layout and are
    taken as given.
    """
    _check_length(n)
    if buckets < 1:
        raise RejectedInputError(f"bucket count must be >= 1, got {buckets}")
    if not 0 <= empty <= buckets:
        raise RejectedInputError(f"empty buckets must lie in [0, {buckets}], got {empty}")
    if unique < 0:
        raise RejectedInputError(f"unique gram count must be >= 0, got {unique}")
    total = 12 + (buckets - empty) * 12 + empty * 4 + unique * (n * 2 + 72)
    return SizeEstimate(total, "hash_list")


def estimate_dimensional_map_bytes(n: int) -> SizeEstimate:
    """Estimated footprint of nested per-letter int arrays for length ``n``.

    4 bytes per leaf cell plus a 12 byte header for every array on every
    level above the leaves; independent of what is stored.
    """
    _check_length(n)
    total = ALPHABET_SIZE**n * 4 + sum(ALPHABET_SIZE ** (n - i) * 12 for i in range(1, n + 1))
    if total > BYTE_COUNTER_MAX:
        raise OverflowError(f"size estimate for n={n} overflows a 64-bit byte counter")
    return SizeEstimate(total, "dimensional_map")


# Reference parameter sets for the hash-list estimate over the full 5-gram
# space, with the sizes originally reported for them.  The formula reproduces
# the worst case; the best and average cases evaluate to ~66.5 MB and
# ~702.9 MB instead of the reported 23 MB and 682 MB.
HASH_LIST_CASES = {
    "worst": dict(n=5, unique=26**5, buckets=2 * 26**5, empty=11_914_220, reported_mb=1110),
    "best": dict(n=5, unique=1, buckets=26**5 // 2, empty=200_610, reported_mb=23),
    "average": dict(n=5, unique=7_510_766, buckets=26**5, empty=2_679_046, reported_mb=682),
}
