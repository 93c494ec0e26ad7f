"""Letters, words, Parikh vectors and cyclic relabelling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_ALPHABET_SIZE = 8


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    """The letters ``0 .. size-1``."""

    size: int = DEFAULT_ALPHABET_SIZE

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.size}")

    def __contains__(self, letter: int) -> bool:
        return 0 <= letter < self.size

    @property
    def letters(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class ParikhVector:
    counts: tuple[int, ...]

    def __add__(self, other: ParikhVector) -> ParikhVector:
        _same_dim(self, other)
        return ParikhVector(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __sub__(self, other: ParikhVector) -> ParikhVector:
        _same_dim(self, other)
        return ParikhVector(tuple(a - b for a, b in zip(self.counts, other.counts)))

    def __getitem__(self, letter: int) -> int:
        return self.counts[letter]

    def __len__(self) -> int:
        return len(self.counts)

    def total(self) -> int:
        return sum(self.counts)


def _same_dim(u: ParikhVector, v: ParikhVector) -> None:
    if len(u.counts) != len(v.counts):
        raise AlphabetMismatch(f"dimension {len(u.counts)} != {len(v.counts)}")


WordLike = Union["Word", str, Sequence[int], np.ndarray]


class Word:
    """Immutable finite word over ``Alphabet(n)``.

    Letters live in a read-only ``uint8``/``uint16`` numpy array, so slicing a
    large host word is cheap and never copies.
    """

    __slots__ = ("_letters", "alphabet")

    def __init__(self, letters: Iterable[int] | np.ndarray = (), n: int = DEFAULT_ALPHABET_SIZE,
                 *, _trusted: bool = False):
        self.alphabet = Alphabet(n)
        if _trusted:
            arr = letters
        else:
            dtype = np.uint8 if n <= 256 else np.uint16
            if isinstance(letters, str):
                letters = Word.parse(letters, n).letters
            arr = np.asarray(list(letters) if not isinstance(letters, np.ndarray) else letters)
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise ValueError(f"letter outside alphabet of size {n}")
            arr = arr.astype(dtype, copy=True)
            arr.setflags(write=False)
        self._letters = arr

    @classmethod
    def parse(cls, text: str, n: int = DEFAULT_ALPHABET_SIZE) -> Word:
        """Read the word file format: a digit string when ``n <= 10``,
        otherwise whitespace-separated integers."""
        text = text.strip()
        if not text:
            return cls((), n)
        if n <= 10 and not any(ch.isspace() for ch in text):
            if not text.isdigit():
                raise ValueError("word text must contain only decimal digits")
            return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"), n)
        return cls([int(tok) for tok in text.split()], n)

    @classmethod
    def coerce(cls, w: WordLike, n: int = DEFAULT_ALPHABET_SIZE) -> Word:
        if isinstance(w, Word):
            return w
        if isinstance(w, str):
            return cls.parse(w, n)
        return cls(w, n)

    @classmethod
    def _wrap(cls, arr: np.ndarray, n: int) -> Word:
        if arr.flags.writeable:
            arr.setflags(write=False)
        return cls(arr, n, _trusted=True)

    @property
    def n(self) -> int:
        return self.alphabet.size

    @property
    def letters(self) -> np.ndarray:
        return self._letters

    def __len__(self) -> int:
        return int(self._letters.shape[0])

    def __getitem__(self, key):
        if isinstance(key, slice):
            if key.step not in (None, 1):
                raise ValueError("only contiguous slices of a word are factors")
            return Word._wrap(self._letters[key], self.n)
        return int(self._letters[key])

    def __iter__(self):
        return iter(self._letters.tolist())

    def __add__(self, other: Word) -> Word:
        _check_alphabets(self, other)
        return Word._wrap(np.concatenate([self._letters, other._letters]), self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._letters, other._letters)

    def __hash__(self) -> int:
        return hash((self.n, self._letters.tobytes()))

    def __str__(self) -> str:
        if self.n <= 10:
            return (self._letters + ord("0")).astype(np.uint8).tobytes().decode("ascii")
        return " ".join(map(str, self._letters.tolist()))

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 40:
            s = s[:37] + "..."
        return f"Word({s!r}, n={self.n})"

    def to_text(self) -> str:
        return str(self) + "\n"

    def is_prefix_of(self, other: Word) -> bool:
        return len(self) <= len(other) and np.array_equal(self._letters, other._letters[: len(self)])


EMPTY = Word(())


def _check_alphabets(u: Word, v: Word) -> None:
    if u.n != v.n:
        raise AlphabetMismatch(f"alphabet sizes differ: {u.n} vs {v.n}")


def parikh(w: Word) -> ParikhVector:
    counts = np.bincount(w.letters, minlength=w.n)
    return ParikhVector(tuple(int(c) for c in counts))


def is_anagram(u: Word, v: Word) -> bool:
    _check_alphabets(u, v)
    return len(u) == len(v) and parikh(u) == parikh(v)


def shift(w: Word, i: int) -> Word:
    """Apply the cyclic relabelling ``a -> a + i (mod n)`` letterwise."""
    n = w.n
    i %= n
    if i == 0:
        return w
    arr = ((w.letters.astype(np.int64) + i) % n).astype(w.letters.dtype)
    return Word._wrap(arr, n)


def equivalent(u: Word, v: Word) -> bool:
    """True iff ``u == shift(v, i)`` for some ``i``."""
    _check_alphabets(u, v)
    if len(u) != len(v):
        return False
    if len(u) == 0:
        return True
    i = (u[0] - v[0]) % u.n
    return shift(v, i) == u


def prefix_parikh(w: Word) -> np.ndarray:
    """Row ``j`` holds the Parikh vector of ``w[:j]``; shape ``(len(w)+1, n)``."""
    table = np.zeros((len(w) + 1, w.n), dtype=np.int64)
    if len(w):
        np.add.at(table, (np.arange(1, len(w) + 1), w.letters.astype(np.int64)), 1)
        np.cumsum(table, axis=0, out=table)
    return table
