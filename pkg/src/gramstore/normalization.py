"""Strict cleansing to the 26-letter lowercase alphabet.

Only the basic Latin letters survive; everything else (spaces, digits,
punctuation, accented or non-Latin letters) is dropped.  Letters map to
indices 0..25 by their offset from ``'a'``.
"""

from __future__ import annotations

import re
import string

from .errors import RejectedInputError

ALPHABET = string.ascii_lowercase
ALPHABET_SIZE = len(ALPHABET)

_ORD_A = ord("a")
_KEEP = frozenset(ALPHABET)
_LOWER = str.maketrans(string.ascii_uppercase, ALPHABET)
_NON_ALPHA = re.compile(r"[^a-z]+")


def normalize_strict(text: str) -> str:
    """Lowercase A-Z and delete every other character, joining the survivors.

    >>> normalize_strict("AbC! d")
    'abcd'
    """
    lowered = text.translate(_LOWER)
    return _NON_ALPHA.sub("", lowered)


def normalize_segments(text: str) -> list[str]:
    """Like :func:`normalize_strict`, but split at every deletion point.

    Empty segments are dropped, so n-grams extracted per segment never span
    a removed character.
    """
    lowered = text.translate(_LOWER)
    return [seg for seg in _NON_ALPHA.split(lowered) if seg]


def char_to_index(c: str) -> int:
    if len(c) != 1 or c not in _KEEP:
        raise RejectedInputError(
            f"{c!r} is not a lowercase letter a-z; normalize the text first"
        )
    return ord(c) - _ORD_A


def index_to_char(i: int) -> str:
    if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < ALPHABET_SIZE:
        raise RejectedInputError(f"alphabet index must be an int in [0, 25], got {i!r}")
    return chr(_ORD_A + i)

