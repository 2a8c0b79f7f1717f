"""Eigenstructure of incidence matrices.

Characteristic polynomials are computed over the integers; the number of
roots inside, on and outside the unit circle is decided exactly (integer
factorisation, reciprocal-polynomial reduction with Sturm counting, and a
Schur-Cohn recursion over the rationals).  Eigenvectors are exact for 2x2
matrices and numerical, with residual checks, otherwise.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np
import scipy.linalg
import sympy

from .quadfield import QuadElem, QuadField, squarefree_decompose

__all__ = [
    "CharPoly",
    "ModulusClassification",
    "Verdict",
    "BdlConstruction",
    "NotPrimitiveError",
    "NoStableEigenvalueError",
    "char_poly",
    "classify_moduli",
    "classify_matrix",
    "is_primitive",
    "adamczewski_verdict",
    "perron_data",
    "construct_bdl_lengths",
    "annihilator_growth",
    "eigen2_exact",
]


class NotPrimitiveError(ValueError):
    pass


class NoStableEigenvalueError(ValueError):
    pass


def _int_matrix(M) -> list[list[int]]:
    rows = [[int(x) for x in row] for row in np.asarray(M, dtype=object)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    return rows


def _matmul(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


@dataclass(frozen=True)
class CharPoly:
    """Monic integer polynomial, coefficients from the leading term down."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("characteristic polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = x * 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def at_matrix(self, M) -> list[list[int]]:
        """Exact Horner evaluation at an integer matrix."""
        A = _int_matrix(M)
        n = len(A)
        acc = [[0] * n for _ in range(n)]
        for c in self.coeffs:
            acc = _matmul(acc, A)
            for i in range(n):
                acc[i][i] += c
        return acc

    def to_sympy(self, x: sympy.Symbol | None = None) -> sympy.Poly:
        x = x if x is not None else sympy.Symbol("x")
        return sympy.Poly(list(self.coeffs), x, domain="ZZ")

    def __str__(self) -> str:
        return str(self.to_sympy().as_expr())


def char_poly(M) -> CharPoly:
    """``det(xI - M)`` by Faddeev-LeVerrier over the integers (divisions are exact)."""
    A = _int_matrix(M)
    n = len(A)
    coeffs = [1]
    Mk = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        Mk = _matmul(A, Mk)
        for i in range(n):
            Mk[i][i] += c
        AM = _matmul(A, Mk)
        tr = sum(AM[i][i] for i in range(n))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")  # cannot happen
        c = -tr // k
        coeffs.append(c)
    return CharPoly(tuple(coeffs))


# ---------------------------------------------------------------------------
# root counting relative to the unit circle


def _reverse(c: list) -> list:
    return c[::-1]


def _schur_cohn_inside(asc: list[Fraction]) -> int | None:
    """Zeros strictly inside |z| < 1, or None when the recursion is singular.

    ``asc`` holds coefficients in ascending order with formal degree len-1.
    Uses the Schur transform ``Tp = a_0 p - a_n p*`` and counts negative
    partial products of ``delta_k = T^k p(0)``.
    """
    p = list(asc)
    n = len(p) - 1
    prod = Fraction(1)
    negatives = 0
    for _ in range(n):
        a0, an = p[0], p[-1]
        rev = _reverse(p)
        t = [a0 * x - an * y for x, y in zip(p, rev)]
        t = t[:-1]  # the leading coefficient cancels
        delta = t[0]
        if delta == 0:
            return None
        prod *= delta
        if prod < 0:
            negatives += 1
        p = t
    return negatives


def _count_inside_nonreciprocal(desc: list[int]) -> int:
    """Roots of an integer polynomial with none on the unit circle, inside it."""
    asc = [Fraction(c) for c in reversed(desc)]
    k = _schur_cohn_inside(asc)
    if k is not None:
        return k
    # singular recursion: sandwich between circles of radius 1 -/+ h
    for j in range(4, 200):
        h = Fraction(1, 2**j)
        counts = []
        for rho in (1 - h, 1 + h):
            scaled = [c * rho**i for i, c in enumerate(asc)]
            counts.append(_schur_cohn_inside(scaled))
        if None not in counts and counts[0] == counts[1]:
            return counts[0]
    raise ArithmeticError("Schur-Cohn sandwich did not stabilise")


def _dickson_reduce(desc: list[int]) -> sympy.Poly:
    """For self-reciprocal f of degree 2k return h with f(x) = x^k h(x + 1/x)."""
    t = sympy.Symbol("t")
    deg = len(desc) - 1
    k = deg // 2
    asc = list(reversed(desc))
    dick = [sympy.Integer(2), t]
    for _ in range(2, k + 1):
        dick.append(sympy.expand(t * dick[-1] - dick[-2]))
    h = sympy.Integer(asc[k])
    for j in range(1, k + 1):
        h += asc[k + j] * dick[j]
    return sympy.Poly(sympy.expand(h), t, domain="ZZ")


def _classify_irreducible(desc: list[int]) -> tuple[int, int, int]:
    """(inside, on, outside) for an irreducible integer polynomial."""
    deg = len(desc) - 1
    if deg == 1:
        a, b = desc  # a x + b
        r = Fraction(-b, a)
        m = abs(r)
        return (int(m < 1), int(m == 1), int(m > 1))
    if desc == _reverse(desc):
        h = _dickson_reduce(desc)
        on_pairs = h.count_roots(-2, 2) - int(h.eval(2) == 0) - int(h.eval(-2) == 0)
        on = 2 * on_pairs
        off = deg - on
        return (off // 2, on, off // 2)
    if desc == [-c for c in _reverse(desc)]:
        # anti-reciprocal irreducible polynomials are +-(x - 1) only
        raise ArithmeticError("unexpected anti-reciprocal irreducible factor")
    # an irreducible, non-reciprocal polynomial has no roots on |z| = 1
    inside = _count_inside_nonreciprocal(desc)
    return (inside, 0, deg - inside)


@dataclass(frozen=True)
class ModulusClassification:
    """Root counts (with multiplicity) relative to the unit circle."""

    n_lt: int
    n_eq: int
    n_gt: int
    dominant: object = None  # QuadElem / Fraction when exact, float otherwise
    dominant_exact: bool = False
    primitive: bool | None = None
    factors: tuple = field(default=(), compare=False)

    @property
    def degree(self) -> int:
        return self.n_lt + self.n_eq + self.n_gt


def _quadratic_roots(p: CharPoly) -> tuple[object, object]:
    """Exact roots (larger first) of a monic quadratic with real roots."""
    _, b, c = p.coeffs
    disc = b * b - 4 * c
    if disc < 0:
        raise ValueError("complex roots")
    s = isqrt(disc)
    if s * s == disc:
        return Fraction(-b + s, 2), Fraction(-b - s, 2)
    k, d = squarefree_decompose(disc)
    F = QuadField(d)
    return QuadElem(Fraction(-b, 2), Fraction(k, 2), F), QuadElem(Fraction(-b, 2), Fraction(-k, 2), F)


def _numeric_roots(p: CharPoly) -> np.ndarray:
    return np.roots(np.array(p.coeffs, dtype=float))


def _dominant_numeric(p: CharPoly) -> float:
    roots = _numeric_roots(p)
    real = roots[np.abs(roots.imag) <= 1e-9 * max(1.0, np.abs(roots).max())].real
    r = float(real.max()) if real.size else float(np.abs(roots).max())
    # Newton polish in float
    dp = np.polyder(np.array(p.coeffs, dtype=float))
    for _ in range(5):
        fx = np.polyval(np.array(p.coeffs, dtype=float), r)
        d = np.polyval(dp, r)
        if d == 0:
            break
        r -= fx / d
    return r


def classify_moduli(p: CharPoly) -> ModulusClassification:
    """Exact counts of roots with |z| < 1, = 1, > 1."""
    x = sympy.Symbol("x")
    poly = p.to_sympy(x)
    _, factors = sympy.factor_list(poly.as_expr(), x)
    lt = eq = gt = 0
    parts = []
    for fac, mult in factors:
        desc = [int(c) for c in sympy.Poly(fac, x).all_coeffs()]
        if desc[0] < 0:
            desc = [-c for c in desc]
        i, o, g = (int(x) for x in _classify_irreducible(desc))
        mult = int(mult)
        lt += i * mult
        eq += o * mult
        gt += g * mult
        parts.append((tuple(desc), mult))
    if lt + eq + gt != p.degree:
        raise ArithmeticError("root counts do not add up to the degree")
    if p.degree == 2 and p.coeffs[1] ** 2 - 4 * p.coeffs[2] >= 0:
        dominant, exact = _quadratic_roots(p)[0], True
    elif p.degree == 1:
        dominant, exact = Fraction(-p.coeffs[1]), True
    else:
        dominant, exact = _dominant_numeric(p), False
    return ModulusClassification(lt, eq, gt, dominant, exact, None, tuple(parts))


def is_primitive(M) -> bool:
    """Some power ``M^k``, ``k <= (d-1)^2 + 1``, is strictly positive."""
    A = np.asarray(M) > 0
    d = A.shape[0]
    if d == 0:
        return False
    P = A.copy()
    for _ in range((d - 1) ** 2 + 1):
        if P.all():
            return True
        P = (P.astype(np.int64) @ A.astype(np.int64)) > 0
    return bool(P.all())


def classify_matrix(M) -> ModulusClassification:
    c = classify_moduli(char_poly(M))
    return ModulusClassification(
        c.n_lt, c.n_eq, c.n_gt, c.dominant, c.dominant_exact, is_primitive(M), c.factors
    )


class Verdict(enum.Enum):
    BALANCED = "Balanced"
    NOT_BALANCED = "NotBalanced"
    INDETERMINATE = "Indeterminate"


def adamczewski_verdict(c: ModulusClassification) -> Verdict:
    """Balance of a primitive fixed point from the non-dominant spectrum.

    A non-dominant eigenvalue on the unit circle gives ``INDETERMINATE``;
    the finer analysis for that case is not attempted.
    """
    if c.primitive is not True:
        raise NotPrimitiveError(
            "balance verdict needs a primitive incidence matrix (use classify_matrix)"
        )
    if c.n_gt >= 1:
        gt, eq = c.n_gt - 1, c.n_eq
    else:
        gt, eq = 0, c.n_eq - 1
    if gt > 0:
        return Verdict.NOT_BALANCED
    if eq > 0:
        return Verdict.INDETERMINATE
    return Verdict.BALANCED


# ---------------------------------------------------------------------------
# eigenvectors


def _normalize_first(v: list) -> list:
    for x in v:
        if x != 0:
            return [y / x for y in v]
    raise ValueError("zero vector")


def eigen2_exact(M, which: str = "dominant") -> tuple[object, list, list]:
    """Exact eigenvalue with right and left eigenvectors of a 2x2 integer matrix.

    ``which`` is ``"dominant"`` (larger root) or ``"other"``.  Eigenvectors
    are normalised to first non-zero entry 1.
    """
    A = _int_matrix(M)
    if len(A) != 2:
        raise ValueError("2x2 matrix required")
    p = char_poly(A)
    big, small = _quadratic_roots(p)
    lam = big if which == "dominant" else small

    def right(B):
        (a, b), (c, d) = B
        if b != 0:
            v = [b + 0 * lam, lam - a]
        elif c != 0:
            v = [lam - d, c + 0 * lam]
        elif lam == a:
            v = [1 + 0 * lam, 0 * lam]
        else:
            v = [0 * lam, 1 + 0 * lam]
        return _normalize_first(v)

    At = [[A[0][0], A[1][0]], [A[0][1], A[1][1]]]
    return lam, right(A), right(At)


@dataclass(frozen=True)
class PerronData:
    value: object
    right: tuple  # normalised to sum 1 (letter frequencies)
    left: tuple  # normalised to first entry 1 (self-similar lengths)
    exact: bool
    residual: float


def perron_data(M) -> PerronData:
    """Perron root, frequency vector (sum 1) and positive left eigenvector."""
    if not is_primitive(M):
        raise NotPrimitiveError("Perron data requested for a non-primitive matrix")
    A = np.asarray(M, dtype=np.int64)
    if A.shape == (2, 2):
        lam, r, l = eigen2_exact(A, "dominant")
        s = r[0] + r[1]
        rho = tuple(x / s for x in r)
        res = [sum(int(A[i, j]) * rho[j] for j in range(2)) - lam * rho[i] for i in range(2)]
        if any(x != 0 for x in res):
            raise ArithmeticError("exact Perron residual is not zero")
        return PerronData(lam, rho, tuple(l), True, 0.0)
    Af = A.astype(float)
    vals, vecs = np.linalg.eig(Af)
    k = int(np.argmax(vals.real))
    lam = float(vals[k].real)
    v = np.abs(vecs[:, k].real)
    # power-iteration polish
    for _ in range(50):
        w = Af @ v
        w /= w.sum()
        if np.max(np.abs(w - v)) < 1e-16:
            v = w
            break
        v = w
    v /= v.sum()
    lam = float((Af @ v).sum())
    vals_t, vecs_t = np.linalg.eig(Af.T)
    kt = int(np.argmax(vals_t.real))
    u = np.abs(vecs_t[:, kt].real)
    u /= u[0]
    residual = float(np.max(np.abs(Af @ v - lam * v)))
    if residual > 1e-12 * max(1.0, lam):
        raise ArithmeticError(f"Perron residual {residual:.3e} above tolerance")
    return PerronData(lam, tuple(v), tuple(u), False, residual)


# ---------------------------------------------------------------------------
# bounded-distance lengths


@dataclass(frozen=True)
class BdlConstruction:
    """Lengths ``l_i = f_i + eta`` whose geometric representation is BDL to ``eta Z``."""

    f: tuple
    eta: object
    lengths: tuple
    stable_dim: int
    exact: bool
    residual: float = 0.0

    @property
    def lattice_step(self):
        return self.eta


def _stable_left_basis(A: np.ndarray, expected: int) -> np.ndarray:
    sort = lambda re, im: (re * re + im * im) < 1 - 1e-9  # noqa: E731
    T, Z, sdim = scipy.linalg.schur(A.T.astype(float), output="real", sort=sort)
    if sdim != expected:
        raise ArithmeticError(f"numerical stable dimension {sdim} != exact count {expected}")
    return Z[:, :sdim]


def _unstable_right_basis(A: np.ndarray) -> np.ndarray:
    sort = lambda re, im: (re * re + im * im) >= 1 - 1e-9  # noqa: E731
    T, Z, sdim = scipy.linalg.schur(A.astype(float), output="real", sort=sort)
    return Z[:, :sdim]


def _smallest_support(basis: np.ndarray) -> np.ndarray:
    d, k = basis.shape
    if k == 1:
        return basis[:, 0]
    best = None
    for zeros in itertools.combinations(range(d), k - 1):
        sub = basis[list(zeros), :]
        _, _, vt = np.linalg.svd(sub)
        c = vt[-1]
        f = basis @ c
        scale = np.max(np.abs(f))
        if scale < 1e-12:
            continue
        f = f / scale
        f[np.abs(f) < 1e-13] = 0.0
        if np.ptp(f) < 1e-9:
            continue
        support = int(np.count_nonzero(f))
        if best is None or support < best[0]:
            best = (support, f)
    if best is None:
        raise ArithmeticError("no annihilating vector with two distinct components")
    return best[1]


def construct_bdl_lengths(M, margin=None) -> BdlConstruction:
    """Vector ``f`` annihilating the unstable subspace, shift ``eta`` and lengths.

    ``margin`` defaults to 1/16 of the spread of ``f``; ``eta = max(0, -min f) + margin``.
    Raises :class:`NoStableEigenvalueError` if no eigenvalue has modulus < 1.
    """
    A = np.asarray(M, dtype=np.int64)
    cls = classify_moduli(char_poly(A))
    if cls.n_lt == 0:
        raise NoStableEigenvalueError(
            "no eigenvalue of modulus < 1; the fixed point admits no such construction"
        )
    d = A.shape[0]
    exact = False
    residual = 0.0
    if d == 2 and cls.n_lt == 1:
        _, _, left = eigen2_exact(A, "other")
        f = left
        exact = True
        # check f^T M = lam f^T exactly
        lam = eigen2_exact(A, "other")[0]
        for j in range(2):
            if sum(f[i] * int(A[i, j]) for i in range(2)) != lam * f[j]:
                raise ArithmeticError("exact left eigenvector check failed")
    else:
        basis = _stable_left_basis(A, cls.n_lt)
        fv = _smallest_support(basis)
        if cls.n_lt == 1:
            # inverse-iteration polish of the left eigenvector
            lam = float(fv @ A.astype(float) @ fv / (fv @ fv))
            B = A.T.astype(float) - lam * np.eye(d)
            for _ in range(3):
                try:
                    fv = np.linalg.solve(B + 1e-14 * np.eye(d), fv)
                except np.linalg.LinAlgError:
                    break
                fv /= np.max(np.abs(fv))
        nz = np.flatnonzero(np.abs(fv) > 1e-13 * np.max(np.abs(fv)))
        fv = fv / fv[nz[0]]
        Y = _unstable_right_basis(A)
        residual = float(np.max(np.abs(fv @ Y))) if Y.size else 0.0
        tol = 1e-12 * max(1.0, float(np.abs(A).sum()))
        if residual > tol * max(1.0, float(np.max(np.abs(fv)))):
            raise ArithmeticError(f"annihilator residual {residual:.3e} above tolerance")
        f = [float(x) for x in fv]
    fmax = max(f)
    fmin = min(f)
    if not fmax > fmin:
        raise ArithmeticError("f has all components equal")
    if margin is None:
        margin = (fmax - fmin) / 16
    elif not margin > 0:
        raise ValueError("margin must be positive")
    eta = (-fmin if fmin < 0 else fmin * 0) + margin
    lengths = tuple(x + eta for x in f)
    return BdlConstruction(tuple(f), eta, lengths, cls.n_lt, exact, residual)


def annihilator_growth(M, letter: int, ns: Sequence[int]) -> list[float]:
    """``|f^T M^n e_letter|`` for the left eigenvector of the smallest-modulus eigenvalue.

    That ``f`` kills the fastest-growing components; if even it grows, no
    annihilating vector stays bounded along ``phi^n(letter)``.
    """
    A = _int_matrix(M)
    d = len(A)
    if d == 2:
        _, _, f = eigen2_exact(A, "other")
    else:
        vals, vecs = np.linalg.eig(np.asarray(A, dtype=float).T)
        k = int(np.argmin(np.abs(vals)))
        f = list(vecs[:, k].real / vecs[:, k].real[np.flatnonzero(vecs[:, k].real)[0]])
    out = []
    for n in ns:
        P = [[int(i == j) for j in range(d)] for i in range(d)]
        for _ in range(n):
            P = _matmul(A, P)
        col = [P[i][letter] for i in range(d)]
        val = sum(f[i] * col[i] for i in range(d))
        out.append(abs(float(val)))
    return out
