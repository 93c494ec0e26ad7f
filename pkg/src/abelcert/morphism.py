"""Uniform cyclic morphisms, fixed-point prefixes and block parsing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .words import Alphabet, Word, WordLike, shift

DEFAULT_IMAGE0 = "0740103050260"
WIDE_SEED = "07401030502"
DEFAULT_MEMORY_CAP = 1 << 30


class MorphismError(ValueError):
    pass


class ResourceLimitError(MemoryError):
    """Raised instead of producing a word longer than the configured cap."""


@dataclass(frozen=True)
class UniformCyclicMorphism:
    """``f(a) = shift(image0, a)``; uniform of length ``len(image0)``."""

    image0: Word
    memory_cap: int = DEFAULT_MEMORY_CAP

    @classmethod
    def from_image(cls, image0: WordLike, n: int = 8, memory_cap: int = DEFAULT_MEMORY_CAP):
        return cls(Word.coerce(image0, n), memory_cap)

    @classmethod
    def default(cls) -> UniformCyclicMorphism:
        return cls.from_image(DEFAULT_IMAGE0, 8)

    @property
    def alphabet(self) -> Alphabet:
        return self.image0.alphabet

    @property
    def n(self) -> int:
        return self.image0.n

    @property
    def length(self) -> int:
        return len(self.image0)

    @property
    def multiplicity(self) -> int:
        """Occurrences of 0 in ``f(0)``; each image holds its own letter this often."""
        return int(np.count_nonzero(self.image0.letters == 0))

    def image(self, letter: int) -> Word:
        return shift(self.image0, letter)

    def images(self) -> np.ndarray:
        """``(n, length)`` table whose row ``a`` is ``f(a)``."""
        img = self.image0.letters.astype(np.int64)
        rows = (img[None, :] + np.arange(self.n)[:, None]) % self.n
        return rows.astype(self.image0.letters.dtype)

    def __call__(self, w: Word) -> Word:
        return apply(self, w)


def validate(m: UniformCyclicMorphism) -> list[str]:
    """Return the violated invariants by name; an empty list means valid."""
    problems = []
    if m.length < 2:
        problems.append("image length >= 2 required")
    if m.length == 0 or m.image0[0] != 0:
        problems.append("not prolongable: image of 0 must start with 0")
    return problems


def _require_valid(m: UniformCyclicMorphism) -> None:
    problems = validate(m)
    if problems:
        raise MorphismError("; ".join(problems))


def apply(m: UniformCyclicMorphism, w: Word) -> Word:
    if w.n != m.n:
        raise MorphismError(f"word over {w.n} letters, morphism over {m.n}")
    out_len = len(w) * m.length
    if out_len > m.memory_cap:
        raise ResourceLimitError(f"image length {out_len} exceeds memory cap {m.memory_cap}")
    table = m.images()
    return Word._wrap(table[w.letters].reshape(-1), m.n)


def fixed_point_prefix_of_seed(m: UniformCyclicMorphism, seed: WordLike, t: int) -> Word:
    """``f^t(seed)``, length ``length**t * len(seed)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    seed = Word.coerce(seed, m.n)
    final = len(seed) * m.length ** t
    if final > m.memory_cap:
        raise ResourceLimitError(f"f^{t} of a length-{len(seed)} seed has {final} letters, "
                                 f"above the memory cap {m.memory_cap}")
    w = seed
    for _ in range(t):
        w = apply(m, w)
    return w


def fixed_point_prefix(m: UniformCyclicMorphism, t: int) -> Word:
    """``f^t(0)``, a prefix of the fixed point starting with 0."""
    _require_valid(m)
    return fixed_point_prefix_of_seed(m, Word([0], m.n), t)


@dataclass(frozen=True)
class ParsedFactor:
    """A factor ``X = s f(x) p`` of an aligned host word.

    ``b`` is the preimage letter of the block whose proper suffix is ``s`` and
    ``a`` the one whose proper prefix is ``p``; both are ``None`` when the
    corresponding piece is empty.
    """

    morphism: UniformCyclicMorphism
    index: int
    length: int
    b: Optional[int]
    s: Word
    x: Word
    a: Optional[int]
    p: Word

    @property
    def x_index(self) -> int:
        """Index of ``x`` in the preimage word."""
        return -(-self.index // self.morphism.length)

    @property
    def factor(self) -> Word:
        return self.s + apply(self.morphism, self.x) + self.p

    @property
    def q(self) -> Word:
        """Complement of ``p`` in ``f(a)``."""
        if self.a is None:
            return Word((), self.morphism.n)
        return self.morphism.image(self.a)[len(self.p):]

    @property
    def r(self) -> Word:
        """Complement of ``s`` in ``f(b)``."""
        if self.b is None:
            return Word((), self.morphism.n)
        return self.morphism.image(self.b)[: self.morphism.length - len(self.s)]


def preimage_letter(m: UniformCyclicMorphism, host: Word, block: int) -> int:
    # f(a) starts with a because image0 starts with 0
    return host[block * m.length]


def parse_factor(m: UniformCyclicMorphism, host: Word, index: int, length: int) -> ParsedFactor:
    """Split ``host[index:index+length]`` along the block grid of ``host``.

    ``host`` must be an image ``f(v)`` aligned at 0, e.g. ``f^t(0)`` with
    ``t >= 1``.
    """
    _require_valid(m)
    ell = m.length
    if index < 0 or length < 0 or index + length > len(host):
        raise IndexError(f"factor [{index}, {index + length}) outside host of length {len(host)}")
    end = index + length
    first_boundary = -(-index // ell) * ell
    if first_boundary > end:
        raise MorphismError("factor lies strictly inside one block and has no s.f(x).p parse")
    last_boundary = max(first_boundary, end // ell * ell)

    s = host[index:first_boundary]
    x_len = (last_boundary - first_boundary) // ell
    x_start = first_boundary // ell
    x = Word._wrap(host.letters[first_boundary:last_boundary:ell].copy(), m.n)
    p = host[last_boundary:end]
    b = preimage_letter(m, host, x_start - 1) if len(s) else None
    a = preimage_letter(m, host, x_start + x_len) if len(p) else None
    return ParsedFactor(m, index, length, b, s, x, a, p)


def two_factor_cover_length(m: UniformCyclicMorphism, t: int = 3) -> int:
    """Shortest prefix of ``f^t(0)`` containing, up to relabelling, every
    length-2 factor of ``f^t(0)``."""
    host = fixed_point_prefix(m, t).letters.astype(np.int64)
    n = m.n
    # normalise each pair (u, v) by relabelling u to 0
    codes = (host[1:] - host[:-1]) % n
    wanted = set(np.unique(codes).tolist())
    seen: set[int] = set()
    for j, c in enumerate(codes.tolist()):
        seen.add(c)
        if seen == wanted:
            return j + 2
    raise AssertionError("unreachable")
