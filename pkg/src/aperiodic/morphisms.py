"""Morphisms on finite alphabets, incidence matrices and bi-infinite fixed points."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .words import Alphabet, WordWindow

__all__ = [
    "Morphism",
    "MorphismSyntaxError",
    "NotASubstitutionError",
    "parse_morphism",
    "format_morphism",
    "incidence_matrix",
    "apply",
    "FixedPointStream",
    "fixed_point_window",
    "find_admissible_power",
]


class MorphismSyntaxError(ValueError):
    pass


class NotASubstitutionError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    """Map letter -> finite word.

    ``target`` defaults to ``alphabet`` (an endomorphism).
    """

    alphabet: Alphabet
    images: tuple[str, ...]
    target: Alphabet | None = None

    def __post_init__(self) -> None:
        if len(self.images) != len(self.alphabet):
            raise ValueError("one image per letter required")
        if self.target is None:
            object.__setattr__(self, "target", self.alphabet)
        allowed = set(self.target.letters)
        for a, img in zip(self.alphabet.letters, self.images):
            stray = set(img) - allowed
            if stray:
                raise ValueError(f"image of {a!r} uses undeclared letters {sorted(stray)}")

    @classmethod
    def from_dict(cls, rules: Mapping[str, str], target: Alphabet | None = None) -> "Morphism":
        alphabet = Alphabet(tuple(rules))
        return cls(alphabet, tuple(rules[a] for a in alphabet.letters), target)

    def __getitem__(self, letter: str) -> str:
        return self.images[self.alphabet.index(letter)]

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.alphabet.letters, self.images))

    @property
    def is_endomorphism(self) -> bool:
        return self.target == self.alphabet

    def is_non_erasing(self) -> bool:
        return all(self.images)

    def right_extendable(self) -> list[str]:
        """Letters ``a`` with ``phi(a) = a w``, ``w`` non-empty."""
        return [a for a, img in zip(self.alphabet.letters, self.images) if len(img) > 1 and img[0] == a]

    def left_extendable(self) -> list[str]:
        """Letters ``b`` with ``phi(b) = v b``, ``v`` non-empty."""
        return [b for b, img in zip(self.alphabet.letters, self.images) if len(img) > 1 and img[-1] == b]

    def is_substitution(self) -> bool:
        return (
            self.is_endomorphism
            and self.is_non_erasing()
            and bool(self.right_extendable())
            and bool(self.left_extendable())
        )

    def image(self, word: str) -> str:
        table = {ord(a): img for a, img in zip(self.alphabet.letters, self.images)}
        return word.translate(table)

    def compose(self, other: "Morphism") -> "Morphism":
        """``self o other``: first apply ``other``, then ``self``."""
        if other.target != self.alphabet:
            raise ValueError("target of the inner morphism must be the outer alphabet")
        return Morphism(other.alphabet, tuple(self.image(img) for img in other.images), self.target)

    def power(self, k: int) -> "Morphism":
        if k < 1:
            raise ValueError("power must be >= 1")
        if not self.is_endomorphism:
            raise ValueError("only endomorphisms can be iterated")
        result = self
        for _ in range(k - 1):
            result = self.compose(result)
        return result

    def __str__(self) -> str:
        return format_morphism(self)


_RULE = re.compile(r"^\s*(\S)\s*->\s*(\S*)\s*$")


def parse_morphism(text: str, allow_erasing: bool = False) -> Morphism:
    """Parse the DSL ``"A->AAB;B->AB"``."""
    rules: dict[str, str] = {}
    parts = [p for p in text.split(";")]
    if parts and parts[-1].strip() == "":
        parts = parts[:-1]
    if not parts:
        raise MorphismSyntaxError("no rules")
    for part in parts:
        m = _RULE.match(part)
        if m is None:
            raise MorphismSyntaxError(f"bad rule {part!r}; expected e.g. 'A->AB'")
        head, img = m.group(1), m.group(2)
        if head in rules:
            raise MorphismSyntaxError(f"duplicate rule for {head!r}")
        if head == "|":
            raise MorphismSyntaxError("'|' is reserved for the origin marker")
        rules[head] = img
    for head, img in rules.items():
        unknown = set(img) - set(rules)
        if unknown:
            raise MorphismSyntaxError(f"image of {head!r} uses unknown letters {sorted(unknown)}")
        if not img and not allow_erasing:
            raise MorphismSyntaxError(f"erasing image for {head!r}")
    return Morphism.from_dict(rules)


def format_morphism(m: Morphism) -> str:
    return ";".join(f"{a}->{img}" for a, img in zip(m.alphabet.letters, m.images))


def incidence_matrix(m: Morphism) -> np.ndarray:
    """``M[b, a] = |phi(a)|_b``; rows by target letters, columns by source letters."""
    out = np.zeros((len(m.target), len(m.alphabet)), dtype=np.int64)
    for j, img in enumerate(m.images):
        for i, b in enumerate(m.target.letters):
            out[i, j] = img.count(b)
    return out


def apply(m: Morphism, w: WordWindow) -> WordWindow:
    """Image of a window; the origin lands between ``phi(u_-1)`` and ``phi(u_0)``."""
    left = m.image(w.left)
    right = m.image(w.right)
    return WordWindow(left + right, len(left), m.target)


def find_admissible_power(
    m: Morphism, seed: tuple[str | None, str], max_power: int = 3
) -> int:
    """Smallest k <= max_power with ``phi^k`` admissible for the seed ``(b, a)``.

    ``b`` may be None for a one-sided (right-infinite) fixed point.
    """
    b, a = seed
    for k in range(1, max_power + 1):
        mk = m.power(k)
        if _admissible(mk, b, a):
            return k
    raise NotASubstitutionError(
        f"no power phi^k, k <= {max_power}, admits seed {b or ''}|{a}"
    )


def _admissible(m: Morphism, b: str | None, a: str) -> bool:
    if not m.is_non_erasing() or not m.is_endomorphism:
        return False
    if a not in m.right_extendable():
        return False
    if b is not None and b not in m.left_extendable():
        return False
    return True


class FixedPointStream:
    """Lazily grown bi-infinite fixed point ``... phi(v) b | a phi(w) ...``.

    Buffers grow by applying the morphism to the whole buffer, which leaves
    already produced letters untouched.  Single consumer.
    """

    def __init__(
        self,
        m: Morphism,
        seed: tuple[str | None, str],
        auto_power: bool = False,
        max_power: int = 3,
    ) -> None:
        b, a = seed
        for letter in (b, a):
            if letter is not None and letter not in m.alphabet:
                raise ValueError(f"seed letter {letter!r} not in alphabet")
        if _admissible(m, b, a):
            power = 1
        elif auto_power:
            power = find_admissible_power(m, seed, max_power)
        else:
            if not m.is_non_erasing():
                raise NotASubstitutionError("morphism is erasing")
            raise NotASubstitutionError(
                f"seed {b or ''}|{a} is not admissible for {format_morphism(m)}"
            )
        self.base = m
        self.power = power
        self.morphism = m.power(power)
        self.seed = seed
        self._right = a
        self._left = b or ""

    @property
    def two_sided(self) -> bool:
        return self.seed[0] is not None

    def _grow_right(self, n: int) -> None:
        while len(self._right) < n:
            self._right = self.morphism.image(self._right)

    def _grow_left(self, n: int) -> None:
        if not self.two_sided:
            return
        while len(self._left) < n:
            self._left = self.morphism.image(self._left)

    def window(self, radius: int, radius_right: int | None = None) -> WordWindow:
        """Factor ``u_[-radius, radius_right)`` (two-sided) or ``u_[0, radius_right)``."""
        if radius_right is None:
            radius_right = radius
        self._grow_right(radius_right)
        left = ""
        if self.two_sided:
            self._grow_left(radius)
            left = self._left[len(self._left) - radius :] if radius else ""
        return WordWindow(left + self._right[:radius_right], len(left), self.base.alphabet)


def fixed_point_window(
    m: Morphism,
    seed: tuple[str | None, str],
    radius: int,
    auto_power: bool = False,
) -> WordWindow:
    """The factor ``u_[-radius, radius)`` of the fixed point seeded by ``b|a``."""
    return FixedPointStream(m, seed, auto_power=auto_power).window(radius)
