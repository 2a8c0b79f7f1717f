"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

Every scalar the rest of the package touches (points, window endpoints,
gap lengths, eigenvalues of 2x2 incidence matrices) is a :class:`QuadElem`,
i.e. ``a + b*sqrt(d)`` with ``a`` and ``b`` arbitrary-precision rationals.
Signs, comparisons and floors are decided with integer arithmetic only.
"""
from __future__ import annotations

import enum
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational
from typing import Union

__all__ = [
    "QuadField",
    "QuadElem",
    "FieldMismatchError",
    "Family",
    "PisotUnit",
    "Ordering",
    "compare",
    "floor_elem",
    "ceil_elem",
    "conjugate",
    "arith",
    "parse_elem",
    "to_decimal",
    "squarefree_decompose",
    "golden_field",
]

RationalLike = Union[int, Fraction]
Scalar = Union[int, Fraction, "QuadElem"]


class FieldMismatchError(ValueError):
    """Two elements from different quadratic fields were combined."""


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n == k*k*d`` and ``d`` square-free (n > 0)."""
    if n <= 0:
        raise ValueError("n must be positive")
    k = 1
    d = n
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            k *= f
        f += 1
    return k, d


def _is_squarefree(d: int) -> bool:
    return squarefree_decompose(d)[0] == 1


class QuadField:
    """The real field Q(sqrt(d)) together with a choice of real embedding.

    ``embedding=+1`` maps the formal symbol sqrt(d) to the positive real root,
    ``-1`` to the negative one.  Fields compare equal iff both ``d`` and the
    embedding agree.
    """

    __slots__ = ("d", "embedding")

    def __init__(self, d: int, embedding: int = 1) -> None:
        if d < 2 or not _is_squarefree(d):
            raise ValueError(f"d must be a square-free integer >= 2, got {d}")
        if embedding not in (1, -1):
            raise ValueError("embedding must be +1 or -1")
        self.d = d
        self.embedding = embedding

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadField):
            return NotImplemented
        return self.d == other.d and self.embedding == other.embedding

    def __hash__(self) -> int:
        return hash(("QuadField", self.d, self.embedding))

    def __repr__(self) -> str:
        sign = "" if self.embedding == 1 else ", embedding=-1"
        return f"QuadField({self.d}{sign})"

    def __call__(self, a: RationalLike = 0, b: RationalLike = 0) -> "QuadElem":
        return QuadElem(a, b, self)

    @property
    def sqrt(self) -> "QuadElem":
        return QuadElem(0, 1, self)

    def zero(self) -> "QuadElem":
        return QuadElem(0, 0, self)

    def one(self) -> "QuadElem":
        return QuadElem(1, 0, self)


def _frac(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QuadElem:
    """Immutable element ``a + b*sqrt(d)`` of a :class:`QuadField`."""

    __slots__ = ("a", "b", "field", "_hash")

    def __init__(self, a: RationalLike, b: RationalLike, field: QuadField) -> None:
        self.a = _frac(a)
        self.b = _frac(b)
        self.field = field
        self._hash = None

    # -- coercion -----------------------------------------------------
    def _coerce(self, other: object) -> "QuadElem | None":
        if isinstance(other, QuadElem):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadElem(other, 0, self.field)
        return None

    # -- ring operations ---------------------------------------------
    def __add__(self, other: object) -> "QuadElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other: object) -> "QuadElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other: object) -> "QuadElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "QuadElem":
        return QuadElem(-self.a, -self.b, self.field)

    def __pos__(self) -> "QuadElem":
        return self

    def __mul__(self, other: object) -> "QuadElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.field.d
        return QuadElem(
            self.a * o.a + d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.field,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d b^2`` (product with the conjugate)."""
        return self.a * self.a - self.field.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadElem(self.a / n, -self.b / n, self.field)

    def __truediv__(self, other: object) -> "QuadElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "QuadElem":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "QuadElem":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadElem(1, 0, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- predicates ---------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def is_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1

    def sign(self) -> int:
        """Exact sign of the real value under the field's embedding."""
        a = self.a
        b = self.b * self.field.embedding
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger of a^2 and b^2 d wins
        lhs = a * a
        rhs = b * b * self.field.d
        if lhs > rhs:
            return sa
        return sb  # lhs == rhs impossible since d is not a square

    # -- ordering -----------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadElem):
            return self.field == other.field and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.b == 0:
                self._hash = hash(self.a)
            else:
                self._hash = hash((self.a, self.b, self.field.d, self.field.embedding))
        return self._hash

    def _cmp(self, other: object) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadElem with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other: object) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: object) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: object) -> bool:
        return self._cmp(other) >= 0

    def __abs__(self) -> "QuadElem":
        return -self if self.sign() < 0 else self

    # -- conversion ---------------------------------------------------
    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.field)

    def __floor__(self) -> int:
        return floor_elem(self)

    def __ceil__(self) -> int:
        return ceil_elem(self)

    def __float__(self) -> float:
        # via an exact scaled floor, so huge numerators do not overflow early
        if self.b == 0:
            return float(self.a)
        scale = 1 << 60
        return floor_elem(self * scale) / scale

    def value(self, digits: int = 50) -> Decimal:
        """Decimal approximation correct to ``digits`` places after the point."""
        return to_decimal(self, digits)

    def __repr__(self) -> str:
        return f"QuadElem({self.a}, {self.b}, d={self.field.d})"

    def __str__(self) -> str:
        return format_elem(self)


def _scaled_floor(p: int, q: int, r: int, d: int, emb: int) -> int:
    """floor((p + q*emb*sqrt(d)) / r) for integers, r > 0, d not a square."""
    q *= emb
    if q == 0:
        return p // r
    s = isqrt(q * q * d)
    t = s if q > 0 else -s - 1  # floor(q sqrt d); q sqrt d is irrational
    return (p + t) // r


def floor_elem(x: QuadElem | RationalLike) -> int:
    """The unique integer ``n`` with ``n <= x < n + 1``."""
    if not isinstance(x, QuadElem):
        f = _frac(x)
        return f.numerator // f.denominator
    a, b = x.a, x.b
    r = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    p = a.numerator * (r // a.denominator)
    q = b.numerator * (r // b.denominator)
    return _scaled_floor(p, q, r, x.field.d, x.field.embedding)


def ceil_elem(x: QuadElem | RationalLike) -> int:
    return -floor_elem(-x)


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def compare(x: Scalar, y: Scalar) -> Ordering:
    """Exact three-way comparison."""
    if isinstance(x, QuadElem):
        s = x._cmp(y)
    elif isinstance(y, QuadElem):
        s = -y._cmp(x)
    else:
        dx = _frac(x) - _frac(y)
        s = (dx > 0) - (dx < 0)
    return Ordering(s)


def conjugate(x: Scalar) -> Scalar:
    """Galois conjugation ``a + b sqrt(d) -> a - b sqrt(d)``; fixes rationals."""
    if isinstance(x, QuadElem):
        return x.conjugate()
    return x


_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def arith(x: QuadElem, y: QuadElem, op: str) -> QuadElem:
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    return _OPS[op](x, y)


def to_decimal(x: Scalar, digits: int = 30) -> Decimal:
    """Round ``x`` to ``digits`` decimal places (half up), exactly."""
    scale = 10**digits
    n = floor_elem(x * scale + Fraction(1, 2))
    with localcontext() as ctx:
        ctx.prec = max(len(str(abs(n))) + 5, 28)
        return Decimal(n).scaleb(-digits)


def format_decimal(x: Scalar, digits: int = 30) -> str:
    return f"{to_decimal(x, digits):.{digits}f}"


def _fmt_rat(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_elem(x: Scalar) -> str:
    """Render as ``a/b + c/d*sqrt(D)`` (the package's textual element format)."""
    if not isinstance(x, QuadElem):
        return _fmt_rat(_frac(x))
    d = x.field.d
    if x.b == 0:
        return _fmt_rat(x.a)
    coef = x.b
    sq = f"sqrt({d})"
    if x.a == 0:
        head = ""
        sep = "-" if coef < 0 else ""
    else:
        head = _fmt_rat(x.a)
        sep = " - " if coef < 0 else " + "
    mag = abs(coef)
    body = sq if mag == 1 else f"{_fmt_rat(mag)}*{sq}"
    return f"{head}{sep}{body}"


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<num>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
        (?P<sqrt>sqrt\(\s*(?P<rad>\d+)\s*\))?\s*""",
    re.VERBOSE,
)


def parse_elem(text: str, field: QuadField | None = None) -> QuadElem | Fraction:
    """Parse ``"a/b + c/d*sqrt(D)"`` style text.

    Returns a :class:`Fraction` when no ``sqrt`` term appears and no field is
    given.  Any radicand must match ``field.d`` when a field is supplied.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty element")
    pos = 0
    rat = Fraction(0)
    irr = Fraction(0)
    rad: int | None = None
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse element {text!r} at position {pos}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator in {text!r}")
        if m.group("num") is None and m.group("sqrt") is None:
            raise ValueError(f"cannot parse element {text!r}")
        if m.group("star") and not m.group("sqrt"):
            raise ValueError(f"dangling '*' in {text!r}")
        sgn = -1 if m.group("sign") == "-" else 1
        coef = Fraction(m.group("num")) if m.group("num") else Fraction(1)
        if m.group("sqrt"):
            if m.group("num") and not m.group("star"):
                raise ValueError(f"expected '*' before sqrt in {text!r}")
            r = int(m.group("rad"))
            k, sf = squarefree_decompose(r)
            if sf == 1:
                rat += sgn * coef * k
            else:
                if rad is not None and rad != sf:
                    raise ValueError(f"mixed radicands in {text!r}")
                rad = sf
                irr += sgn * coef * k
        else:
            rat += sgn * coef
        pos = m.end()
        first = False
    if rad is None:
        return QuadElem(rat, 0, field) if field is not None else rat
    if field is None:
        field = QuadField(rad)
    elif field.d != rad:
        raise FieldMismatchError(f"radicand {rad} does not match {field!r}")
    return QuadElem(rat, irr, field)


def golden_field() -> QuadField:
    return QuadField(5)


class Family(enum.Enum):
    """Minimal polynomial shape of a quadratic Pisot unit."""

    MINUS_ONE = "minus"  # x^2 - p x - 1, p >= 1
    PLUS_ONE = "plus"  # x^2 - p x + 1, p >= 3


class PisotUnit:
    """A quadratic Pisot unit ``beta > 1`` with conjugate ``beta'``, ``|beta'| < 1``."""

    __slots__ = ("family", "p", "field", "beta", "beta_conj")

    def __init__(self, family: Family | str, p: int) -> None:
        family = Family(family)
        if family is Family.MINUS_ONE and p < 1:
            raise ValueError("x^2 - p x - 1 needs p >= 1")
        if family is Family.PLUS_ONE and p < 3:
            raise ValueError("x^2 - p x + 1 needs p >= 3")
        disc = p * p + 4 if family is Family.MINUS_ONE else p * p - 4
        k, d = squarefree_decompose(disc)
        self.family = family
        self.p = p
        self.field = QuadField(d)
        self.beta = QuadElem(Fraction(p, 2), Fraction(k, 2), self.field)
        self.beta_conj = self.beta.conjugate()

    @property
    def norm(self) -> int:
        return -1 if self.family is Family.MINUS_ONE else 1

    def floor(self) -> int:
        return floor_elem(self.beta)

    def coords(self, x: QuadElem) -> tuple[Fraction, Fraction]:
        """Coordinates ``(u, v)`` of ``x = u + v*beta``."""
        v = x.b / self.beta.b
        u = x.a - v * self.beta.a
        return u, v

    def from_coords(self, u: RationalLike, v: RationalLike) -> QuadElem:
        return u + v * self.beta

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PisotUnit):
            return NotImplemented
        return self.family is other.family and self.p == other.p

    def __hash__(self) -> int:
        return hash((self.family, self.p))

    def __repr__(self) -> str:
        return f"PisotUnit({self.family.value!r}, p={self.p})"
