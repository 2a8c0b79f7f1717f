"""One-dimensional cut-and-project sets over a real quadratic field.

``Sigma_{eps,eta}([c, d)) = {a + b*eta : a, b in Z, c <= a + b*eps < d}``.

Point generation enumerates ``b`` over the exact integer interval forced
by window and range and, for each ``b``, the admissible ``a`` interval.
Bulk floors use float64 with an exact fallback whenever a value is within
``_TOL`` of an integer, so every decision is exact.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .quadfield import QuadElem, ceil_elem, floor_elem
from .words import Alphabet, WordWindow

__all__ = [
    "CapSpec",
    "CapPoint",
    "CapPoints",
    "GapCoding",
    "KestenVerdict",
    "BudgetExceededError",
    "generate",
    "kesten_decide",
    "unimodular_transform",
    "translate",
    "normalize",
    "gap_code",
    "point_budget",
]

_TOL = 1e-6
_FLOAT_SAFE = 1e9
DEFAULT_BUDGET = 20_000_000


class BudgetExceededError(RuntimeError):
    pass


def point_budget() -> int:
    """Maximum number of candidate points; ``APERIODIC_BUDGET`` overrides."""
    env = os.environ.get("APERIODIC_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _exact(x) -> QuadElem | Fraction:
    if isinstance(x, QuadElem):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not np.isfinite(x):
            raise ValueError("unbounded range")
        return Fraction(x)
    raise TypeError(f"unsupported scalar {type(x).__name__}")


@dataclass(frozen=True)
class CapSpec:
    """Parameters ``eps`` (star slope), ``eta`` (physical slope) and window ``[c, d)``."""

    epsilon: QuadElem
    eta: QuadElem
    c: QuadElem | Fraction
    d: QuadElem | Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.epsilon, QuadElem) or not isinstance(self.eta, QuadElem):
            raise TypeError("epsilon and eta must be QuadElem")
        if self.epsilon.field != self.eta.field:
            raise ValueError("epsilon and eta must live in the same field")
        if self.epsilon.is_rational() or self.eta.is_rational():
            raise ValueError("epsilon and eta must be irrational")
        if self.epsilon == self.eta:
            raise ValueError("epsilon must differ from eta")
        object.__setattr__(self, "c", self._lift(self.c))
        object.__setattr__(self, "d", self._lift(self.d))
        if not self.c < self.d:
            raise ValueError("window needs c < d")

    def _lift(self, x) -> QuadElem:
        x = _exact(x)
        if isinstance(x, QuadElem):
            if x.field != self.field:
                raise ValueError("window endpoint in another field")
            return x
        return QuadElem(x, 0, self.field)

    @property
    def field(self):
        return self.epsilon.field

    @property
    def length(self) -> QuadElem:
        return self.d - self.c

    @property
    def star_is_conjugation(self) -> bool:
        return self.epsilon == self.eta.conjugate()

    def point(self, a: int, b: int) -> QuadElem:
        return a + b * self.eta

    def star(self, a: int, b: int) -> QuadElem:
        return a + b * self.epsilon

    def contains(self, a: int, b: int) -> bool:
        s = self.star(a, b)
        return self.c <= s < self.d

    def density_step(self) -> QuadElem:
        """Mean spacing ``|eta - eps| / |Omega|``."""
        return abs(self.eta - self.epsilon) / self.length


@dataclass(frozen=True)
class CapPoint:
    a: int
    b: int
    value: QuadElem
    star: QuadElem


class CapPoints:
    """Sorted points ``a + b*eta`` of a cut-and-project set, stored as integer pairs."""

    def __init__(self, spec: CapSpec, a: np.ndarray, b: np.ndarray, values: np.ndarray) -> None:
        self.spec = spec
        self.a = a
        self.b = b
        self.values = values

    def __len__(self) -> int:
        return len(self.a)

    def exact(self, i: int) -> QuadElem:
        return self.spec.point(int(self.a[i]), int(self.b[i]))

    def __getitem__(self, i: int) -> CapPoint:
        a, b = int(self.a[i]), int(self.b[i])
        return CapPoint(a, b, self.spec.point(a, b), self.spec.star(a, b))

    def __iter__(self) -> Iterator[CapPoint]:
        for i in range(len(self)):
            yield self[i]

    def elements(self) -> list[QuadElem]:
        return [self.exact(i) for i in range(len(self))]

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.a.tolist(), self.b.tolist()))

    def floats(self) -> np.ndarray:
        return self.values

    def scaled(self, factor: QuadElem) -> list[QuadElem]:
        return [factor * x for x in self.elements()]


def _floor_affine(x0: QuadElem, step: QuadElem, bs: np.ndarray) -> np.ndarray:
    """Exact ``floor(x0 + b*step)`` for every integer ``b`` in ``bs``."""
    if bs.size == 0:
        return np.zeros(0, dtype=np.int64)
    f0 = float(x0)
    fs = float(step)
    bound = abs(f0) + abs(fs) * float(np.max(np.abs(bs)))
    if bound > _FLOAT_SAFE:
        return np.array([floor_elem(x0 + int(b) * step) for b in bs], dtype=np.int64)
    est = f0 + bs.astype(float) * fs
    out = np.floor(est).astype(np.int64)
    near = np.abs(est - np.rint(est)) < _TOL
    for i in np.flatnonzero(near):
        out[i] = floor_elem(x0 + int(bs[i]) * step)
    return out


def _bound_b(spec: CapSpec, lo, hi) -> tuple[int, int]:
    delta = spec.eta - spec.epsilon
    upper = (hi - spec.c) / delta
    lower = (lo - spec.d) / delta
    if delta > 0:
        return floor_elem(lower) + 1, floor_elem(upper)
    return ceil_elem(upper), ceil_elem(lower) - 1


def generate(spec: CapSpec, lo, hi) -> CapPoints:
    """All points with star in ``[c, d)`` and value in ``[lo, hi]``, sorted ascending."""
    lo = spec._lift(lo)
    hi = spec._lift(hi)
    empty = np.zeros(0, dtype=np.int64)
    if hi < lo:
        return CapPoints(spec, empty, empty, np.zeros(0))
    b_min, b_max = _bound_b(spec, lo, hi)
    n_b = b_max - b_min + 1
    if n_b <= 0:
        return CapPoints(spec, empty, empty, np.zeros(0))
    per_b = ceil_elem(spec.length) + 1
    if n_b * per_b > point_budget():
        raise BudgetExceededError(f"{n_b * per_b} candidate points exceed the budget {point_budget()}")
    bs = np.arange(b_min, b_max + 1, dtype=np.int64)
    # a in [ceil(c - b eps), ceil(d - b eps) - 1]  <=>  -floor(b eps - c) .. -floor(b eps - d) - 1
    a_lo = -_floor_affine(-spec.c, spec.epsilon, bs)
    a_hi = -_floor_affine(-spec.d, spec.epsilon, bs) - 1
    counts = np.maximum(a_hi - a_lo + 1, 0)
    b_all = np.repeat(bs, counts)
    offsets = np.arange(b_all.size) - np.repeat(np.cumsum(counts) - counts, counts)
    a_all = np.repeat(a_lo, counts) + offsets
    vals = a_all.astype(float) + b_all.astype(float) * float(spec.eta)
    flo, fhi = float(lo), float(hi)
    keep = (vals >= flo) & (vals <= fhi)
    edge = (np.abs(vals - flo) < _TOL * (1 + abs(flo))) | (np.abs(vals - fhi) < _TOL * (1 + abs(fhi)))
    for i in np.flatnonzero(edge):
        x = spec.point(int(a_all[i]), int(b_all[i]))
        keep[i] = lo <= x <= hi
    a_all, b_all, vals = a_all[keep], b_all[keep], vals[keep]
    order = np.argsort(vals, kind="stable")
    a_all, b_all, vals = a_all[order], b_all[order], vals[order]
    if vals.size > 1 and np.min(np.diff(vals)) < 1e-9 * (1 + np.max(np.abs(vals))):
        keyed = sorted(zip(a_all.tolist(), b_all.tolist()), key=lambda ab: _SortKey(spec.point(*ab)))
        a_all = np.array([k[0] for k in keyed], dtype=np.int64)
        b_all = np.array([k[1] for k in keyed], dtype=np.int64)
        vals = a_all.astype(float) + b_all.astype(float) * float(spec.eta)
    return CapPoints(spec, a_all, b_all, vals)


class _SortKey:
    __slots__ = ("x",)

    def __init__(self, x: QuadElem) -> None:
        self.x = x

    def __lt__(self, other: "_SortKey") -> bool:
        return self.x < other.x


@dataclass(frozen=True)
class KestenVerdict:
    """``|Omega| = p + q*eps``; BDL iff ``p`` and ``q`` are integers."""

    bdl: bool
    p: Fraction
    q: Fraction
    lattice_step: QuadElem | None
    length: QuadElem


def _coords_in(x: QuadElem, basis: QuadElem) -> tuple[Fraction, Fraction]:
    """``x = p + q*basis`` with rational p, q (``basis`` irrational)."""
    q = x.b / basis.b
    p = x.a - q * basis.a
    return p, q


def kesten_decide(spec: CapSpec) -> KestenVerdict:
    """Bounded distance to a lattice iff the window length lies in ``Z + Z*eps``."""
    length = spec.length
    p, q = _coords_in(length, spec.epsilon)
    bdl = p.denominator == 1 and q.denominator == 1
    step = abs(spec.eta - spec.epsilon) / length if bdl else None
    return KestenVerdict(bdl, p, q, step, length)


def unimodular_transform(spec: CapSpec, A: int, B: int, C: int, D: int) -> tuple[CapSpec, QuadElem]:
    """Return ``(spec', s)`` with ``Sigma(spec) = s * Sigma(spec')`` for ``[[A, B], [C, D]]``.

    Orientation-reversing windows (``A + C*eps < 0``) are rejected, since the
    image of ``[c, d)`` would be open on the left.
    """
    if abs(A * D - B * C) != 1:
        raise ValueError("matrix must be unimodular (|AD - BC| = 1)")
    eps, eta = spec.epsilon, spec.eta
    den_s = A + C * eps
    den_p = A + C * eta
    if den_s == 0 or den_p == 0:
        raise ValueError("degenerate denominator A + C*eps or A + C*eta")
    if den_s < 0:
        raise ValueError("A + C*eps < 0 would flip the half-open window")
    new = CapSpec((B + D * eps) / den_s, (B + D * eta) / den_p, spec.c / den_s, spec.d / den_s)
    return new, den_p


def translate(spec: CapSpec, a: int, b: int) -> CapSpec:
    """Window of ``Sigma(spec) + (a + b*eta)``: shift by ``(a + b*eta)* = a + b*eps``."""
    shift = spec.star(a, b)
    return CapSpec(spec.epsilon, spec.eta, spec.c + shift, spec.d + shift)


@dataclass(frozen=True)
class Normalized:
    spec: CapSpec
    eps_shift: int  # the unimodular step used eps -> eps - eps_shift
    translation: int  # Sigma(new) = Sigma(old after eps shift) + translation


def normalize(spec: CapSpec) -> Normalized:
    """Bring ``eps`` into (0, 1) and ``c`` into [0, 1); never applied implicitly.

    The eps shift is the unimodular matrix ``[[1, -k], [0, 1]]`` (scale 1, so
    the point set is unchanged); the window shift is a translation of the
    point set by an integer.
    """
    k = floor_elem(spec.epsilon)
    shifted, _ = unimodular_transform(spec, 1, -k, 0, 1)
    t = -floor_elem(shifted.c)
    return Normalized(translate(shifted, t, 0), k, t)


@dataclass(frozen=True)
class GapCoding:
    """Distinct gaps (descending, lettered A, B, C) and the coded window."""

    gaps: tuple
    window: WordWindow

    def letter_of(self, gap) -> str:
        return self.window.alphabet.letters[self.gaps.index(gap)]

    def decode(self, start) -> list:
        """Rebuild the points from ``start`` (the point left of the first letter)."""
        lengths = dict(zip(self.window.alphabet.letters, self.gaps))
        out = [start]
        for ch in self.window.letters:
            out.append(out[-1] + lengths[ch])
        return out


_LETTERS = "ABC"


def gap_code(points: CapPoints | Sequence) -> GapCoding:
    """Code consecutive distances by letters, largest gap = ``A``.

    The origin sits at the smallest non-negative point.
    """
    if isinstance(points, CapPoints):
        if len(points) < 2:
            raise ValueError("need at least two points")
        da = np.diff(points.a)
        db = np.diff(points.b)
        keys = list(zip(da.tolist(), db.tolist()))
        distinct = {k: points.spec.point(*k) for k in set(keys)}
        first_nonneg = int(np.searchsorted(points.values, -_TOL))
        while first_nonneg < len(points) and points.exact(first_nonneg) < 0:
            first_nonneg += 1
        while first_nonneg > 0 and points.exact(first_nonneg - 1) >= 0:
            first_nonneg -= 1
    else:
        pts = list(points)
        if len(pts) < 2:
            raise ValueError("need at least two points")
        keys = [pts[i + 1] - pts[i] for i in range(len(pts) - 1)]
        distinct = {k: k for k in set(keys)}
        first_nonneg = next((i for i, x in enumerate(pts) if x >= 0), len(pts))
    if len(distinct) > 3:
        raise AssertionError(f"{len(distinct)} distinct gaps; a cut-and-project set has at most 3")
    ordered = sorted(distinct, key=lambda k: _SortKey(distinct[k]), reverse=True)
    letter = {k: _LETTERS[i] for i, k in enumerate(ordered)}
    word = "".join(letter[k] for k in keys)
    alphabet = Alphabet(tuple(_LETTERS[: len(ordered)]))
    origin = min(first_nonneg, len(word))
    return GapCoding(tuple(distinct[k] for k in ordered), WordWindow(word, origin, alphabet))
