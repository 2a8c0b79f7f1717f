"""Spectra ``X^D(alpha) = {sum a_i alpha^i : a_i in D}`` of quadratic Pisot units.

A spectrum with ``alpha = -beta`` (or ``alpha = beta`` and ``{-1,0,1}`` in the
digits) equals the cut-and-project set with ``eps = beta'``, ``eta = beta``
and window the representation interval of ``1/alpha'``.  Both generation
routes return :class:`~aperiodic.cutproject.CapPoints`, whose integer pairs
are coordinates in the basis ``(1, beta)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cutproject import BudgetExceededError, CapPoints, CapSpec, generate, kesten_decide, point_budget
from .quadfield import Family, PisotUnit, QuadElem

__all__ = [
    "Sign",
    "SpectrumSpec",
    "RepInterval",
    "SpectrumVerdict",
    "InvalidSpectrumError",
    "validate",
    "rep_interval",
    "cap_spec",
    "generate_direct",
    "generate_cap",
    "boundary_points",
    "bdl_decide",
    "average_lattice_xi",
    "MAX_DEGREE",
]

MAX_DEGREE = 12


class InvalidSpectrumError(ValueError):
    pass


class Sign(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class SpectrumSpec:
    """Base ``alpha = +/- beta`` and consecutive digits ``m..M``."""

    unit: PisotUnit
    sign: Sign
    m: int
    M: int

    @classmethod
    def make(cls, family: Family | str, p: int, sign: Sign | str, m: int, M: int) -> "SpectrumSpec":
        return cls(PisotUnit(family, p), Sign(sign), m, M)

    @property
    def n_digits(self) -> int:
        return self.M - self.m + 1

    @property
    def digits(self) -> range:
        return range(self.m, self.M + 1)

    @property
    def alpha(self) -> QuadElem:
        return self.unit.beta if self.sign is Sign.PLUS else -self.unit.beta

    @property
    def alpha_conj(self) -> QuadElem:
        return self.alpha.conjugate()

    def __str__(self) -> str:
        s = "+" if self.sign is Sign.PLUS else "-"
        return f"X^{{{self.m}..{self.M}}}({s}beta), beta^2 = {self.unit.p} beta {'+' if self.unit.norm < 0 else '-'} 1"


def validate(spec: SpectrumSpec) -> SpectrumSpec:
    """Check the hypotheses under which the spectrum is a cut-and-project set."""
    if spec.m > spec.M:
        raise InvalidSpectrumError("empty digit range")
    if not spec.m <= 0 <= spec.M:
        raise InvalidSpectrumError("0 must be a digit")
    if not spec.n_digits > spec.unit.beta:
        raise InvalidSpectrumError(f"#D = {spec.n_digits} must exceed beta = {float(spec.unit.beta):.6f}")
    if spec.sign is Sign.PLUS and not (spec.m <= -1 and spec.M >= 1):
        raise InvalidSpectrumError("alpha = +beta needs {-1, 0, 1} among the digits")
    return spec


@dataclass(frozen=True)
class RepInterval:
    """Closed interval of numbers representable in base ``1/alpha'`` with the digits."""

    lo: QuadElem
    hi: QuadElem

    @property
    def length(self) -> QuadElem:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


def rep_interval(spec: SpectrumSpec) -> RepInterval:
    ac = spec.alpha_conj
    gamma = 1 / ac
    m, M = spec.m, spec.M
    if not M - m > abs(gamma) - 1:
        raise InvalidSpectrumError("digit range too small for the closed-form interval")
    if gamma > 1:
        return RepInterval(m / (1 - ac), M / (1 - ac))
    # gamma < -1: extreme values alternate between m and M
    k = ac / (1 - ac * ac)
    return RepInterval((M + m * gamma) * k, (M * gamma + m) * k)


def cap_spec(spec: SpectrumSpec) -> CapSpec:
    """Identified cut-and-project parameters, window ``[inf I, sup I)``."""
    validate(spec)
    interval = rep_interval(spec)
    return CapSpec(spec.unit.beta_conj, spec.unit.beta, interval.lo, interval.hi)


def _times_beta(u: np.ndarray, v: np.ndarray, unit: PisotUnit) -> tuple[np.ndarray, np.ndarray]:
    # beta^2 = p beta - norm  =>  beta (u + v beta) = -norm v + (u + p v) beta
    return -unit.norm * v, u + unit.p * v


def generate_direct(
    spec: SpectrumSpec,
    max_degree: int,
    lo=None,
    hi=None,
    unsafe: bool = False,
) -> CapPoints:
    """All digit polynomials of degree ``<= max_degree``, deduplicated and sorted.

    With a range ``[lo, hi]`` the intermediate Horner values are pruned to
    ``|y| <= max(R, max|d| / (beta - 1))``, a bound every partial sum of a
    value in the range satisfies, so no in-range value is lost.
    """
    validate(spec)
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    if max_degree > MAX_DEGREE and not unsafe:
        raise BudgetExceededError(f"max_degree {max_degree} > {MAX_DEGREE}; pass unsafe=True to force")
    target = cap_spec(spec)
    unit = spec.unit
    beta_f = float(unit.beta)
    digits = np.arange(spec.m, spec.M + 1, dtype=np.int64)
    bound = None
    if lo is not None or hi is not None:
        if lo is None or hi is None:
            raise ValueError("give both ends of the range")
        R = max(abs(float(lo)), abs(float(hi)))
        dmax = max(abs(spec.m), abs(spec.M))
        bound = max(R, dmax / (beta_f - 1)) * (1 + 1e-9) + 1e-9
    budget = point_budget()
    u, v = digits.copy(), np.zeros_like(digits)
    neg = spec.sign is Sign.MINUS
    for _ in range(max_degree):
        u, v = _times_beta(u, v, unit)
        if neg:
            u, v = -u, -v
        if u.size * digits.size > budget:
            raise BudgetExceededError(f"{u.size * digits.size} digit strings exceed the budget {budget}")
        u = (u[None, :] + digits[:, None]).ravel()
        v = np.broadcast_to(v, (digits.size, v.size)).ravel()
        pairs = np.unique(np.stack([u, v], axis=1), axis=0)
        u, v = pairs[:, 0].copy(), pairs[:, 1].copy()
        if bound is not None:
            keep = np.abs(u + v * beta_f) <= bound
            u, v = u[keep], v[keep]
        if np.abs(u).max(initial=0) > 2**52 or np.abs(v).max(initial=0) > 2**52:
            raise OverflowError("coordinates too large for exact int64 arithmetic")
    vals = u.astype(float) + v.astype(float) * beta_f
    pts = CapPoints(target, u, v, vals)
    if bound is not None:
        pts = _clip(pts, lo, hi)
    return _sorted(pts)


def _clip(pts: CapPoints, lo, hi) -> CapPoints:
    spec = pts.spec
    lo_e, hi_e = spec._lift(lo), spec._lift(hi)
    flo, fhi = float(lo_e), float(hi_e)
    keep = (pts.values >= flo - 1e-6) & (pts.values <= fhi + 1e-6)
    idx = np.flatnonzero(keep)
    sure = (pts.values[idx] > flo + 1e-6) & (pts.values[idx] < fhi - 1e-6)
    final = []
    for i, ok in zip(idx, sure):
        if ok or lo_e <= spec.point(int(pts.a[i]), int(pts.b[i])) <= hi_e:
            final.append(i)
    final = np.array(final, dtype=np.int64)
    return CapPoints(spec, pts.a[final], pts.b[final], pts.values[final])


def _sorted(pts: CapPoints) -> CapPoints:
    order = np.argsort(pts.values, kind="stable")
    out = CapPoints(pts.spec, pts.a[order], pts.b[order], pts.values[order])
    if len(out) > 1 and np.min(np.diff(out.values)) < 1e-9 * (1 + np.abs(out.values).max()):
        elems = sorted(range(len(out)), key=lambda i: _Key(out.exact(i)))
        idx = np.array(elems, dtype=np.int64)
        out = CapPoints(pts.spec, out.a[idx], out.b[idx], out.values[idx])
    return out


class _Key:
    __slots__ = ("x",)

    def __init__(self, x) -> None:
        self.x = x

    def __lt__(self, other: "_Key") -> bool:
        return self.x < other.x


def generate_cap(spec: SpectrumSpec, lo, hi, exact_boundary: bool = False) -> CapPoints:
    """The spectrum restricted to ``[lo, hi]`` via its cut-and-project description.

    The window is ``[inf I, sup I)``.  With ``exact_boundary`` the point whose
    star is ``inf I`` is dropped when ``inf I != 0``, which turns the window
    into ``int(I) | {0}``.
    """
    cs = cap_spec(spec)
    pts = generate(cs, lo, hi)
    if exact_boundary and cs.c != 0:
        keep = np.array([cs.star(int(a), int(b)) != cs.c for a, b in zip(pts.a, pts.b)], dtype=bool)
        pts = CapPoints(cs, pts.a[keep], pts.b[keep], pts.values[keep])
    return pts


def boundary_points(spec: SpectrumSpec, pts: CapPoints) -> list[tuple[int, int]]:
    """Pairs of ``pts`` whose star lies on an endpoint of the representation interval."""
    interval = rep_interval(spec)
    out = []
    for a, b in pts.pairs():
        s = pts.spec.star(a, b)
        if s == interval.lo or s == interval.hi:
            out.append((a, b))
    return out


@dataclass(frozen=True)
class SpectrumVerdict:
    bdl: bool
    reason: str
    divisor: int
    n_minus_1: int


def bdl_decide(spec: SpectrumSpec) -> SpectrumVerdict:
    """Divisibility test: ``floor(beta) | #D-1`` if ``beta' < 0``, else ``floor(beta)-1 | #D-1``."""
    validate(spec)
    fl = spec.unit.floor()
    negative_conj = spec.unit.beta_conj < 0
    divisor = fl if negative_conj else fl - 1
    n1 = spec.n_digits - 1
    ok = n1 % divisor == 0
    side = "beta' < 0" if negative_conj else "beta' > 0"
    reason = f"{divisor} {'|' if ok else '∤'} {n1} ({side})"
    return SpectrumVerdict(ok, reason, divisor, n1)


def average_lattice_xi(spec: SpectrumSpec) -> QuadElem:
    """``xi = (beta - beta') (1 - |beta'|) / (#D - 1)``, checked against the Kesten step."""
    verdict = bdl_decide(spec)
    if not verdict.bdl:
        raise InvalidSpectrumError(f"spectrum is not BDL: {verdict.reason}")
    b, bc = spec.unit.beta, spec.unit.beta_conj
    xi = (b - bc) * (1 - abs(bc)) / Fraction(spec.n_digits - 1)
    step = kesten_decide(cap_spec(spec)).lattice_step
    if step != xi:
        raise RuntimeError(f"average lattice {xi} disagrees with the cut-and-project step {step}")
    return xi
