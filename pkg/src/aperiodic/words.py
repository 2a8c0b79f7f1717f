"""Finite windows of bi-infinite words and their letter statistics."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .quadfield import QuadElem, floor_elem

__all__ = [
    "Alphabet",
    "WordWindow",
    "GeomRep",
    "parse_word",
    "format_word",
    "parikh",
    "parikh_prefix",
    "parikh_table",
    "balance_constant",
    "balance_constants",
    "letter_frequencies",
    "geometric_points",
    "mechanical_window",
]


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of single-character letters."""

    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError(f"duplicate letters in {self.letters}")
        for a in self.letters:
            if len(a) != 1 or a == "|":
                raise ValueError(f"letters must be single characters other than '|': {a!r}")

    @classmethod
    def of(cls, letters: Iterable[str]) -> "Alphabet":
        return cls(tuple(letters))

    @classmethod
    def from_word(cls, word: str) -> "Alphabet":
        return cls(tuple(sorted(set(word))))

    def index(self, letter: str) -> int:
        return self.letters.index(letter)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, letter: object) -> bool:
        return letter in self.letters


@dataclass(frozen=True)
class WordWindow:
    """A factor ``u[-origin, len-origin)`` of a bi-infinite word.

    ``letters[origin]`` is ``u_0``; everything before it sits left of the
    delimiter ``|``.
    """

    letters: str
    origin: int
    alphabet: Alphabet = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not 0 <= self.origin <= len(self.letters):
            raise ValueError(f"origin {self.origin} outside 0..{len(self.letters)}")
        if self.alphabet is None:
            letters = sorted(set(self.letters)) or ["A"]
            object.__setattr__(self, "alphabet", Alphabet(tuple(letters)))
        else:
            stray = set(self.letters) - set(self.alphabet.letters)
            if stray:
                raise ValueError(f"letters {sorted(stray)} not in alphabet")

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def left(self) -> str:
        return self.letters[: self.origin]

    @property
    def right(self) -> str:
        return self.letters[self.origin :]

    @property
    def index_range(self) -> range:
        """Addressable letter indices n (letter u_n)."""
        return range(-self.origin, len(self.letters) - self.origin)

    def __getitem__(self, n: int) -> str:
        if n not in self.index_range:
            raise IndexError(f"index {n} outside window {self.index_range}")
        return self.letters[self.origin + n]

    def factor(self, i: int, j: int) -> str:
        """``u_[i, j)`` in word coordinates."""
        lo, hi = -self.origin, len(self.letters) - self.origin
        if not lo <= i <= j <= hi:
            raise IndexError(f"factor [{i},{j}) outside [{lo},{hi})")
        return self.letters[self.origin + i : self.origin + j]

    def restrict(self, radius_left: int, radius_right: int | None = None) -> "WordWindow":
        if radius_right is None:
            radius_right = radius_left
        left = self.left[max(0, self.origin - radius_left) :]
        right = self.right[:radius_right]
        return WordWindow(left + right, len(left), self.alphabet)

    def __str__(self) -> str:
        return format_word(self)


def parse_word(text: str, alphabet: Alphabet | None = None) -> WordWindow:
    """Parse ``"AAB|ABA"``; without ``|`` the origin is the first letter."""
    text = "".join(text.split())
    if text.count("|") > 1:
        raise ValueError("at most one '|' origin marker allowed")
    if "|" in text:
        left, right = text.split("|")
    else:
        left, right = "", text
    return WordWindow(left + right, len(left), alphabet)


def format_word(w: WordWindow) -> str:
    return f"{w.left}|{w.right}"


def parikh(word: str, alphabet: Alphabet) -> np.ndarray:
    """Parikh vector of a finite word, ordered by ``alphabet``."""
    return np.array([word.count(a) for a in alphabet.letters], dtype=np.int64)


def _cumulative(w: WordWindow) -> np.ndarray:
    """Shape (len+1, k): counts of each letter in letters[:i]."""
    codes = np.frombuffer(w.letters.encode("utf-32-le"), dtype=np.uint32) if w.letters else np.zeros(0, np.uint32)
    out = np.zeros((len(w.letters) + 1, len(w.alphabet)), dtype=np.int64)
    for k, a in enumerate(w.alphabet.letters):
        np.cumsum(codes == ord(a), out=out[1:, k])
    return out


def parikh_table(w: WordWindow) -> tuple[np.ndarray, np.ndarray]:
    """Signed Parikh vectors for every n in ``[-origin, len-origin]``.

    Returns ``(ns, P)`` where ``P[i]`` is the Parikh vector at index ``ns[i]``.
    """
    cum = _cumulative(w)
    table = cum - cum[w.origin]
    ns = np.arange(-w.origin, len(w.letters) - w.origin + 1)
    return ns, table


def parikh_prefix(w: WordWindow, n: int) -> np.ndarray:
    """Parikh of ``u_[0,n)`` for n >= 0 and ``-Parikh(u_[n,0))`` otherwise."""
    if not -w.origin <= n <= len(w.letters) - w.origin:
        raise IndexError(f"prefix index {n} outside window")
    if n >= 0:
        return parikh(w.factor(0, n), w.alphabet)
    return -parikh(w.factor(n, 0), w.alphabet)


def balance_constants(w: WordWindow, max_len: int | None = None) -> dict[str, int]:
    """Per-letter balance: max over lengths L <= max_len of the spread of ``|v|_a``.

    Only factors of the window are seen, so these are lower bounds for the
    constants of the underlying infinite word.
    """
    n = len(w.letters)
    if max_len is None:
        max_len = min(n // 10, 1000)
    if max_len > n:
        raise ValueError(f"max_len {max_len} exceeds window length {n}")
    cum = _cumulative(w)
    result = {}
    for k, a in enumerate(w.alphabet.letters):
        col = cum[:, k]
        best = 0
        for length in range(1, max_len + 1):
            counts = col[length:] - col[:-length]
            spread = int(counts.max() - counts.min())
            if spread > best:
                best = spread
        result[a] = best
    return result


def balance_constant(w: WordWindow, max_len: int | None = None) -> int:
    """Least c such that all equal-length factor pairs (length <= max_len) are c-balanced."""
    if len(w.letters) == 0:
        return 0
    return max(balance_constants(w, max_len).values())


def letter_frequencies(w: WordWindow) -> tuple[Fraction, ...]:
    """Empirical ``|w|_a / |w|`` as exact rationals, ordered by the alphabet.

    For a c-balanced word each entry is within ``c / |w|`` of the true
    frequency.
    """
    n = len(w.letters)
    if n == 0:
        raise ValueError("frequencies of an empty window are undefined")
    return tuple(Fraction(w.letters.count(a), n) for a in w.alphabet.letters)


@dataclass(frozen=True)
class GeomRep:
    """Geometric representation: window plus one positive length per letter."""

    window: WordWindow
    lengths: tuple  # int, Fraction or QuadElem per letter

    def __post_init__(self) -> None:
        if len(self.lengths) != len(self.window.alphabet):
            raise ValueError("one length per letter required")
        for ell in self.lengths:
            if not ell > 0:
                raise ValueError(f"lengths must be positive, got {ell}")

    def length_of(self, letter: str) -> object:
        return self.lengths[self.window.alphabet.index(letter)]


def geometric_points(rep: GeomRep) -> list:
    """``x_n = (l_1..l_d) . Psi[n]`` for n in ``[-origin, len-origin]``, exactly.

    ``x_0 = 0``; consecutive gaps are the lengths of the letters between.
    """
    w = rep.window
    zero = rep.lengths[0] * 0
    gap = {a: rep.lengths[k] for k, a in enumerate(w.alphabet.letters)}
    right = [zero]
    acc = zero
    for ch in w.right:
        acc = acc + gap[ch]
        right.append(acc)
    left = []
    acc = zero
    for ch in reversed(w.left):
        acc = acc - gap[ch]
        left.append(acc)
    left.reverse()
    return left + right


def geometric_points_float(window: WordWindow, lengths: Sequence[float]) -> np.ndarray:
    """Float version of :func:`geometric_points` via the Parikh table."""
    _, table = parikh_table(window)
    return table @ np.asarray(lengths, dtype=float)


def mechanical_window(
    slope: QuadElem | Fraction,
    intercept: QuadElem | Fraction | int,
    n_left: int,
    n_right: int,
    letters: tuple[str, str] = ("A", "B"),
) -> WordWindow:
    """Lower mechanical word ``s_n = floor((n+1)s + r) - floor(n s + r)``.

    Letter ``letters[1]`` encodes 1.  For irrational slope in (0, 1) this is a
    Sturmian (1-balanced, aperiodic) window covering ``[-n_left, n_right)``.
    """
    floors = [floor_elem(n * slope + intercept) for n in range(-n_left, n_right + 1)]
    out = "".join(letters[floors[i + 1] - floors[i]] for i in range(len(floors) - 1))
    return WordWindow(out, n_left, Alphabet(letters))
