"""Empirical bounded-distance checks against a lattice ``xi * Z``.

A Delone set ``L`` in the line is bounded distance equivalent to ``xi * Z``
iff ``#(L & [0, N)) - N / xi`` stays bounded (and likewise on the left).
Everything here measures that quantity on finite samples.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .cutproject import CapPoints
from .quadfield import QuadElem, format_decimal

__all__ = [
    "DiscrepancyProfile",
    "BijectionWitness",
    "Boundedness",
    "Classification",
    "CoverageError",
    "discrepancy_profile",
    "doubling_horizons",
    "classify_boundedness",
    "bijection_witness",
    "grid_points",
    "write_profile_csv",
    "write_witness_csv",
    "write_grid_csv",
]

_TOL = 1e-9


class CoverageError(ValueError):
    pass


def _as_points(points) -> tuple[np.ndarray, list | None]:
    """Float array plus (when available) exact elements for tie-breaking."""
    if isinstance(points, CapPoints):
        return points.values, None if len(points) == 0 else points
    if isinstance(points, np.ndarray):
        return points.astype(float), None
    pts = list(points)
    if pts and isinstance(pts[0], QuadElem):
        return np.array([float(x) for x in pts]), pts
    return np.asarray(pts, dtype=float), None


def _exact_at(exact, i: int):
    if isinstance(exact, CapPoints):
        return exact.exact(i)
    return exact[i]


def _count_below(vals: np.ndarray, exact, t) -> int:
    """``#{x < t}`` with exact resolution of near ties."""
    ft = float(t)
    if isinstance(t, float) and exact is not None:
        t = Fraction(t)  # exact value of the float, comparable with field elements
    k = int(np.searchsorted(vals, ft - _TOL * (1 + abs(ft)), side="left"))
    while k < len(vals) and vals[k] < ft + _TOL * (1 + abs(ft)):
        x = _exact_at(exact, k) if exact is not None else vals[k]
        if not x < t:
            break
        k += 1
    return k


@dataclass(frozen=True)
class DiscrepancyProfile:
    """Running maxima of ``|#(L & [0, N')) - N'/xi|`` (right) and ``[-N', 0)`` (left)."""

    xi: float
    horizons: tuple
    right_dev: np.ndarray
    left_dev: np.ndarray | None

    @property
    def one_sided(self) -> bool:
        return self.left_dev is None

    @property
    def deviation(self) -> np.ndarray:
        if self.left_dev is None:
            return self.right_dev
        return np.maximum(self.right_dev, self.left_dev)

    @property
    def max_deviation(self) -> float:
        return float(self.deviation[-1]) if len(self.horizons) else 0.0


def doubling_horizons(top: float, count: int) -> list[float]:
    """``top / 2^(count-1), ..., top / 2, top``."""
    return [top / 2 ** (count - 1 - i) for i in range(count)]


def _side(vals: np.ndarray, xi: float, horizons: Sequence, counts_at: list[int]) -> np.ndarray:
    """Deviation sup over ``N' <= N`` for sorted distances from the origin.

    Passing ``vals[k]`` moves the count from ``k`` to ``k + 1``; ``counts_at``
    gives the exact count at each horizon.
    """
    k = np.arange(len(vals), dtype=float)
    scaled = vals / xi
    per_point = np.maximum(np.abs(k - scaled), np.abs(k + 1 - scaled))
    running = np.maximum.accumulate(per_point) if len(per_point) else per_point
    out = np.empty(len(horizons))
    for i, (n, c) in enumerate(zip(horizons, counts_at)):
        best = abs(c - float(n) / xi)
        if c > 0:
            best = max(best, float(running[c - 1]))
        out[i] = best
    return out


def discrepancy_profile(points, xi, horizons: Sequence, one_sided: bool = False, coverage=None) -> DiscrepancyProfile:
    """Deviations of ``points`` from ``xi * Z`` for each horizon ``N``.

    ``coverage = (lo, hi)`` states the range the sample is complete on; by
    default it is ``[min, max]`` of the points.  Each horizon must fit.
    """
    xi_f = float(xi)
    if not xi_f > 0:
        raise ValueError("xi must be positive")
    horizons = tuple(horizons)
    if any(float(h) <= 0 for h in horizons) or any(float(b) <= float(a) for a, b in zip(horizons, horizons[1:])):
        raise ValueError("horizons must be positive and increasing")
    vals, exact = _as_points(points)
    if len(vals) and np.any(np.diff(vals) < -_TOL):
        raise ValueError("points must be sorted")
    lo, hi = coverage if coverage is not None else ((vals[0], vals[-1]) if len(vals) else (0.0, 0.0))
    top = float(horizons[-1]) if horizons else 0.0
    if top > float(hi) + _TOL or (not one_sided and -top < float(lo) - _TOL):
        raise CoverageError(f"horizon {top} exceeds the sampled range [{float(lo)}, {float(hi)}]")
    zero = _count_below(vals, exact, 0)
    right = vals[zero:]
    counts_r = [_count_below(vals, exact, h) - zero for h in horizons]
    right_dev = _side(right, xi_f, horizons, counts_r)
    left_dev = None
    if not one_sided:
        # points in [-N', 0): mirror to positive distances, nearest first
        left = -vals[:zero][::-1]
        counts_l = [zero - _count_below(vals, exact, -h) for h in horizons]
        left_dev = _side(left, xi_f, horizons, counts_l)
    return DiscrepancyProfile(xi_f, horizons, right_dev, left_dev)


class Boundedness(enum.Enum):
    LOOKS_BOUNDED = "LooksBounded"
    LOOKS_UNBOUNDED = "LooksUnbounded"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Classification:
    verdict: Boundedness
    profile: DiscrepancyProfile | None
    deviations: tuple


GROWTH = 1.5
BOUND_FACTOR = 3.0
RISE_UNBOUNDED = 0.4  # count units gained over the last two thirds
RISE_BOUNDED = 0.2
_JUMP = 0.05


def classify_boundedness(profile: DiscrepancyProfile | Sequence[float]) -> Classification:
    """Advisory reading of a doubling-horizon profile.

    LooksUnbounded when either
      * each of the last three doublings multiplies the deviation by >= 1.5, or
      * over the last two thirds of the horizons the deviation gains >= 0.4 and
        rises in at least two separate doublings (the slow, logarithmic
        growth typical of non-BDL cut-and-project sets).
    LooksBounded when the final deviation is at most three times the median
    of the early half (floored at 1), the last two thirds gain <= 0.2 and the
    last doubling shows no 1.5x jump.  Otherwise, or with fewer than four
    horizons, Inconclusive.  Never a substitute for a symbolic verdict.
    """
    prof = profile if isinstance(profile, DiscrepancyProfile) else None
    devs = tuple(float(x) for x in (prof.deviation if prof is not None else profile))
    if len(devs) < 4:
        return Classification(Boundedness.INCONCLUSIVE, prof, devs)
    tail = devs[-4:]
    steps = [b >= GROWTH * a and b > 0 for a, b in zip(tail, tail[1:])]
    late = devs[len(devs) // 3 :]
    rise = late[-1] - late[0]
    jumps = sum(1 for a, b in zip(late, late[1:]) if b - a > _JUMP)
    if all(steps) or (rise >= RISE_UNBOUNDED and jumps >= 2):
        return Classification(Boundedness.LOOKS_UNBOUNDED, prof, devs)
    early = devs[: max(2, len(devs) // 2)]
    floor = max(float(np.median(early)), 1.0)
    if devs[-1] <= BOUND_FACTOR * floor and rise <= RISE_BOUNDED and not steps[-1]:
        return Classification(Boundedness.LOOKS_BOUNDED, prof, devs)
    return Classification(Boundedness.INCONCLUSIVE, prof, devs)


@dataclass(frozen=True)
class BijectionWitness:
    """Pairs ``(n, x_n, xi * n)`` with ``x_{-1} < 0 <= x_0``."""

    indices: np.ndarray
    points: np.ndarray
    targets: np.ndarray
    max_displacement: float

    @property
    def displacements(self) -> np.ndarray:
        return self.points - self.targets


def bijection_witness(points, xi, count: int | None = None) -> BijectionWitness:
    """The map ``x_n -> xi * n`` around the origin, ``count`` points per side."""
    vals, exact = _as_points(points)
    zero = _count_below(vals, exact, 0)
    if zero == 0 or zero == len(vals):
        raise ValueError("no pair of points straddles 0; indexing is ambiguous")
    lo, hi = 0, len(vals)
    if count is not None:
        lo, hi = max(0, zero - count), min(len(vals), zero + count)
    idx = np.arange(lo, hi) - zero
    pts = vals[lo:hi]
    targets = float(xi) * idx
    disp = float(np.max(np.abs(pts - targets))) if len(pts) else 0.0
    return BijectionWitness(idx, pts, targets, disp)


def grid_points(lambda1, lambda2, u, v, bound: float) -> np.ndarray:
    """``{x u + y v}`` for ``x`` in ``lambda1``, ``y`` in ``lambda2``, inside ``[-bound, bound]^2``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if abs(u[0] * v[1] - u[1] * v[0]) < 1e-12:
        raise ValueError("u and v are linearly dependent")
    l1 = np.asarray(_as_points(lambda1)[0], dtype=float)
    l2 = np.asarray(_as_points(lambda2)[0], dtype=float)
    if l1.size == 0 or l2.size == 0:
        return np.zeros((0, 2))
    pts = l1[:, None, None] * u + l2[None, :, None] * v
    pts = pts.reshape(-1, 2)
    keep = np.all(np.abs(pts) <= bound, axis=1)
    return pts[keep]


def fibonacci_grid_vectors() -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors at angle ``2 pi / 5``."""
    ang = 2 * math.pi / 5
    return np.array([1.0, 0.0]), np.array([math.cos(ang), math.sin(ang)])


def _fmt(x, digits: int) -> str:
    if isinstance(x, QuadElem):
        return format_decimal(x, digits)
    return f"{float(x):.{digits}f}" if digits <= 17 else repr(float(x))


def write_profile_csv(profile: DiscrepancyProfile, path: str | Path, digits: int = 12) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["N", "right_dev", "left_dev"])
        for i, n in enumerate(profile.horizons):
            left = "" if profile.left_dev is None else f"{profile.left_dev[i]:.{digits}f}"
            w.writerow([_fmt(n, digits), f"{profile.right_dev[i]:.{digits}f}", left])


def write_witness_csv(witness: BijectionWitness, path: str | Path, digits: int = 12) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "x_n", "xi*n", "displacement"])
        for n, x, t in zip(witness.indices, witness.points, witness.targets):
            w.writerow([int(n), f"{x:.{digits}f}", f"{t:.{digits}f}", f"{x - t:.{digits}f}"])


def write_grid_csv(pts: np.ndarray, path: str | Path, digits: int = 12) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y"])
        for x, y in pts:
            w.writerow([f"{x:.{digits}f}", f"{y:.{digits}f}"])
