"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 symbolic verdict and empirical check disagree.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import bdl, cutproject, morphisms, spectra, spectral, words
from .quadfield import QuadElem, format_decimal, format_elem, parse_elem

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DISAGREE = 2
DEFAULT_HORIZONS = 14


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    precision: int
    budget: int

    def __post_init__(self) -> None:
        if self.precision < 10:
            raise InputError("precision must be >= 10")
        if self.budget <= 0:
            raise InputError("budgets must be positive")


# -- rendering -------------------------------------------------------------


def num(x, digits: int) -> dict:
    """Exact rendering and a fixed-precision decimal side by side."""
    if isinstance(x, (QuadElem, Fraction, int)) and not isinstance(x, bool):
        return {"exact": format_elem(x), "decimal": format_decimal(x, digits)}
    x = float(x)
    return {"float": repr(x)}


def _dump(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def write_points_csv(pts: cutproject.CapPoints, path: str, digits: int) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["a", "b", "value_decimal", "star_decimal"])
        for a, b in pts.pairs():
            spec = pts.spec
            w.writerow([a, b, format_decimal(spec.point(a, b), digits), format_decimal(spec.star(a, b), digits)])


def read_points(path: str) -> np.ndarray:
    """Sorted floats from a CSV with a ``value_decimal``/``x_n`` column, or one number per line."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        return np.zeros(0)
    header = rows[0]
    col = 0
    body = rows
    try:
        float(header[0])
    except ValueError:
        body = rows[1:]
        for name in ("value_decimal", "x_n", "value", "x"):
            if name in header:
                col = header.index(name)
                break
    vals = np.array([float(r[col]) for r in body], dtype=float)
    return np.sort(vals)


# -- parsing helpers -------------------------------------------------------


def _elem(text: str, field=None):
    try:
        return parse_elem(text, field)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _pair(text: str, field=None):
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"expected 'lo,hi', got {text!r}")
    return _elem(parts[0], field), _elem(parts[1], field)


def _digits(text: str) -> tuple[int, int]:
    if ".." not in text:
        raise InputError(f"digits must look like 'm..M', got {text!r}")
    m, M = text.split("..")
    return int(m), int(M)


def _seed(text: str | None) -> tuple[str | None, str] | None:
    if text is None:
        return None
    if "|" not in text:
        if len(text) != 1:
            raise InputError("seed must be 'b|a', '|a' or a single letter")
        return (None, text)
    b, a = text.split("|")
    if len(a) != 1 or len(b) > 1:
        raise InputError("seed must be 'b|a' with single letters")
    return (b or None, a)


def _cap_spec(args) -> cutproject.CapSpec:
    eps = _elem(args.eps)
    if not isinstance(eps, QuadElem):
        raise InputError("eps must be irrational")
    eta = _elem(args.eta, eps.field)
    c, d = _pair(args.window, eps.field)
    return cutproject.CapSpec(eps, eta, c, d)


def _spectrum_spec(args) -> spectra.SpectrumSpec:
    m, M = _digits(args.digits)
    spec = spectra.SpectrumSpec.make(args.family, args.p, args.sign, m, M)
    return spectra.validate(spec)


def _profile_json(profile: bdl.DiscrepancyProfile, cls: bdl.Classification) -> dict:
    return {
        "xi": repr(profile.xi),
        "horizons": [repr(float(h)) for h in profile.horizons],
        "right_dev": [repr(float(x)) for x in profile.right_dev],
        "left_dev": None if profile.left_dev is None else [repr(float(x)) for x in profile.left_dev],
        "one_sided": profile.one_sided,
        "classification": cls.verdict.value,
    }


def _disagrees(bdl_symbolic: bool, cls: bdl.Classification) -> bool:
    if cls.verdict is bdl.Boundedness.INCONCLUSIVE:
        return False
    return bdl_symbolic != (cls.verdict is bdl.Boundedness.LOOKS_BOUNDED)


def _empirical(points, step: float, n_horizons: int = DEFAULT_HORIZONS, one_sided: bool = False, coverage=None):
    vals = points.values if isinstance(points, cutproject.CapPoints) else np.asarray(points)
    if coverage is None:
        top = min(abs(vals[0]), abs(vals[-1])) if not one_sided else vals[-1]
    else:
        top = min(abs(float(coverage[0])), abs(float(coverage[1]))) if not one_sided else float(coverage[1])
    hs = bdl.doubling_horizons(float(top) * 0.999, n_horizons)
    prof = bdl.discrepancy_profile(points, step, hs, one_sided=one_sided, coverage=coverage)
    return prof, bdl.classify_boundedness(prof)


# -- commands --------------------------------------------------------------


def _default_seed(m: morphisms.Morphism, auto_power: bool) -> tuple[str | None, str]:
    powers = range(1, 4) if auto_power else range(1, 2)
    for k in powers:
        mk = m.power(k)
        for a in mk.right_extendable():
            for b in mk.left_extendable():
                return (b, a)
    for k in powers:
        mk = m.power(k)
        for a in mk.right_extendable():
            return (None, a)
    raise morphisms.NotASubstitutionError("no letter admits a fixed point")


def cmd_analyze_morphism(args, cfg: RunConfig) -> int:
    digits = cfg.precision
    m = morphisms.parse_morphism(args.rules)
    seed = _seed(args.seed) or _default_seed(m, args.auto_power)
    stream = morphisms.FixedPointStream(m, seed, auto_power=args.auto_power)
    M = morphisms.incidence_matrix(m)
    Mk = morphisms.incidence_matrix(stream.morphism)
    poly = spectral.char_poly(Mk)
    cls = spectral.classify_matrix(Mk)
    report: dict = {
        "morphism": morphisms.format_morphism(m),
        "seed": f"{seed[0] or ''}|{seed[1]}",
        "power": stream.power,
        "incidence_matrix": M.tolist(),
        "incidence_matrix_power": Mk.tolist(),
        "char_poly": {"coeffs": [int(c) for c in poly.coeffs], "text": str(poly)},
        "moduli": {"lt": cls.n_lt, "eq": cls.n_eq, "gt": cls.n_gt},
        "primitive": cls.primitive,
    }
    code = EXIT_OK
    if cls.primitive:
        verdict = spectral.adamczewski_verdict(cls)
        report["verdict"] = verdict.value
        perron = spectral.perron_data(Mk)
        report["perron"] = {
            "value": num(perron.value, digits),
            "frequencies": [num(x, digits) for x in perron.right],
            "self_similar_lengths": [num(x, digits) for x in perron.left],
        }
    else:
        report["verdict"] = None
        report["verdict_note"] = "not primitive; balance criterion not applicable"
    try:
        con = spectral.construct_bdl_lengths(Mk)
    except spectral.NoStableEigenvalueError as exc:
        report["bdl_lengths"] = None
        report["bdl_refused"] = str(exc)
        return _finish(report, args.out, code)
    report["bdl_lengths"] = {
        "f": [num(x, digits) for x in con.f],
        "eta": num(con.eta, digits),
        "lengths": [num(x, digits) for x in con.lengths],
        "exact": con.exact,
        "residual": repr(con.residual),
    }
    radius = args.radius
    window = stream.window(radius if stream.two_sided else 0, radius)
    pts = words.geometric_points_float(window, [float(x) for x in con.lengths])
    prof, c = _empirical(pts, float(con.eta), n_horizons=min(12, max(4, int(math.log2(max(radius, 16))) - 2)),
                         one_sided=not stream.two_sided)
    report["discrepancy"] = _profile_json(prof, c)
    if c.verdict is bdl.Boundedness.LOOKS_UNBOUNDED:
        code = EXIT_DISAGREE
    return _finish(report, args.out, code)


def _finish(report: dict, out: str | None, code: int) -> int:
    _dump(report, out)
    return code


def _spectrum_verdict_json(spec: spectra.SpectrumSpec, digits: int) -> dict:
    v = spectra.bdl_decide(spec)
    cs = spectra.cap_spec(spec)
    out = {
        "spectrum": str(spec),
        "bdl": v.bdl,
        "reason": v.reason,
        "xi": num(spectra.average_lattice_xi(spec), digits) if v.bdl else None,
        "window": [num(cs.c, digits), num(cs.d, digits)],
        "eps": num(cs.epsilon, digits),
        "eta": num(cs.eta, digits),
    }
    return out


def cmd_spectrum(args, cfg: RunConfig) -> int:
    digits = cfg.precision
    spec = _spectrum_spec(args)
    if args.action == "decide":
        out = _spectrum_verdict_json(spec, digits)
        code = EXIT_OK
        if args.empirical:
            cs = spectra.cap_spec(spec)
            step = cs.density_step()
            R = args.empirical * float(step) / 2
            pts = spectra.generate_cap(spec, -R, R)
            prof, c = _empirical(pts, float(step), n_horizons=args.horizons, coverage=(-R, R))
            out["discrepancy"] = _profile_json(prof, c)
            if _disagrees(out["bdl"], c):
                code = EXIT_DISAGREE
        _dump(out, args.json_out)
        return code
    lo, hi = _pair(args.range)
    pts = spectra.generate_cap(spec, lo, hi, exact_boundary=args.exact_boundary)
    report = _spectrum_verdict_json(spec, digits)
    report["count"] = len(pts)
    code = EXIT_OK
    if args.out:
        write_points_csv(pts, args.out, digits)
    if args.oracle:
        direct = spectra.generate_direct(spec, args.max_degree, lo, hi, unsafe=args.unsafe)
        sym = set(direct.pairs()) ^ set(pts.pairs())
        slack = set(spectra.boundary_points(spec, pts)) | set(spectra.boundary_points(spec, direct))
        beyond = sorted(sym - slack)
        report["oracle"] = {
            "max_degree": args.max_degree,
            "direct_count": len(direct),
            "boundary_differences": sorted(map(list, sym & slack)),
            "other_differences": [list(p) for p in beyond],
        }
        if args.out:
            direct_path = str(Path(args.out).with_suffix("")) + ".direct.csv"
            write_points_csv(direct, direct_path, digits)
            report["oracle"]["direct_file"] = direct_path
        if beyond or len(sym) > 2:
            code = EXIT_DISAGREE
    if args.word_out and len(pts) >= 2:
        g = cutproject.gap_code(pts)
        Path(args.word_out).write_text(words.format_word(g.window) + "\n")
        report["gaps"] = [num(x, digits) for x in g.gaps]
    if args.profile_out and len(pts) >= 2:
        step = spectra.cap_spec(spec).density_step()
        prof, c = _empirical(pts, float(step), n_horizons=args.horizons, coverage=(lo, hi))
        bdl.write_profile_csv(prof, args.profile_out)
        report["discrepancy"] = _profile_json(prof, c)
        if _disagrees(report["bdl"], c):
            code = EXIT_DISAGREE
    _dump(report, args.json_out)
    return code


def cmd_cap(args, cfg: RunConfig) -> int:
    digits = cfg.precision
    spec = _cap_spec(args)
    if args.action == "gen":
        lo, hi = _pair(args.range, spec.field)
        pts = cutproject.generate(spec, lo, hi)
        if args.out:
            write_points_csv(pts, args.out, digits)
        report = {"count": len(pts)}
        if len(pts) >= 2:
            g = cutproject.gap_code(pts)
            report["gaps"] = [num(x, digits) for x in g.gaps]
            if args.word_out:
                Path(args.word_out).write_text(words.format_word(g.window) + "\n")
        _dump(report, args.json_out)
        return EXIT_OK
    if args.action == "decide":
        v = cutproject.kesten_decide(spec)
        out = {
            "bdl": v.bdl,
            "length": num(v.length, digits),
            "p": format_elem(v.p),
            "q": format_elem(v.q),
            "lattice_step": num(v.lattice_step, digits) if v.bdl else None,
        }
        code = EXIT_OK
        if args.empirical:
            step = spec.density_step()
            R = args.empirical * float(step) / 2
            pts = cutproject.generate(spec, -R, R)
            prof, c = _empirical(pts, float(step), n_horizons=args.horizons, coverage=(-R, R))
            out["discrepancy"] = _profile_json(prof, c)
            if _disagrees(v.bdl, c):
                code = EXIT_DISAGREE
        _dump(out, args.json_out)
        return code
    # transform
    try:
        A, B, C, D = (int(x) for x in args.matrix.split(","))
    except ValueError as exc:
        raise InputError("matrix must be 'A,B,C,D' integers") from exc
    new, scale = cutproject.unimodular_transform(spec, A, B, C, D)
    _dump(
        {
            "eps": num(new.epsilon, digits),
            "eta": num(new.eta, digits),
            "window": [num(new.c, digits), num(new.d, digits)],
            "scale": num(scale, digits),
        },
        args.json_out,
    )
    return EXIT_OK


def cmd_discrepancy(args, cfg: RunConfig) -> int:
    pts = read_points(args.points)
    if len(pts) < 2:
        raise InputError("need at least two points")
    xi = float(_elem(args.xi))
    prof, c = _empirical(pts, xi, n_horizons=args.horizons, one_sided=args.one_sided)
    if args.out:
        bdl.write_profile_csv(prof, args.out)
    _dump(_profile_json(prof, c), args.json_out)
    return EXIT_OK


def cmd_witness(args, cfg: RunConfig) -> int:
    pts = read_points(args.points)
    xi = float(_elem(args.xi))
    w = bdl.bijection_witness(pts, xi, args.count)
    if args.out:
        bdl.write_witness_csv(w, args.out)
    _dump({"pairs": len(w.indices), "max_displacement": repr(w.max_displacement)}, args.json_out)
    return EXIT_OK


def _fibonacci_chain(bound: float) -> np.ndarray:
    """Cut-and-project Fibonacci chain with gaps tau and 1 on ``[-bound, bound]``."""
    from .quadfield import golden_field

    K = golden_field()
    tau = K(Fraction(1, 2), Fraction(1, 2))
    spec = cutproject.CapSpec(tau.conjugate(), tau, -1, tau - 1)
    return cutproject.generate(spec, -bound, bound).values


def cmd_grid(args, cfg: RunConfig) -> int:
    bound = float(args.bound)
    l1 = read_points(args.points1) if args.points1 else _fibonacci_chain(bound * 4)
    l2 = read_points(args.points2) if args.points2 else _fibonacci_chain(bound * 4)
    ang = math.radians(args.angle)
    u = np.array([1.0, 0.0])
    v = np.array([math.cos(ang), math.sin(ang)])
    pts = bdl.grid_points(l1, l2, u, v, bound)
    order = np.lexsort((pts[:, 0], pts[:, 1])) if len(pts) else np.zeros(0, dtype=int)
    pts = pts[order]
    if args.out:
        bdl.write_grid_csv(pts, args.out)
    _dump({"count": int(len(pts)), "angle_degrees": args.angle}, args.json_out)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; exit status 2 is reserved for disagreements
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aperiodic", description="Bounded distance equivalence of 1D aperiodic sets.")
    p.add_argument("--precision", type=int, default=30, help="decimal digits in reports (>= 10)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze-morphism", help="incidence matrix, balance verdict, BDL lengths")
    a.add_argument("rules", help="e.g. 'A->AAB;B->AB'")
    a.add_argument("--seed", help="fixed point seed 'b|a' (default: first admissible)")
    a.add_argument("--auto-power", action="store_true", help="use phi^k, k <= 3, if phi is not admissible")
    a.add_argument("--radius", type=int, default=10_000)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze_morphism)

    s = sub.add_parser("spectrum", help="spectra of quadratic Pisot units")
    s.add_argument("action", choices=["gen", "decide"])
    s.add_argument("--family", choices=["minus", "plus"], required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--sign", choices=["minus", "plus"], required=True)
    s.add_argument("--digits", required=True, help="m..M")
    s.add_argument("--range", default="-10,10")
    s.add_argument("--oracle", action="store_true", help="compare with direct digit-string generation")
    s.add_argument("--max-degree", type=int, default=spectra.MAX_DEGREE)
    s.add_argument("--unsafe", action="store_true", help="allow max-degree above the guard")
    s.add_argument("--exact-boundary", action="store_true", help="drop the point whose star is inf I")
    s.add_argument("--empirical", type=int, default=0, help="decide: check against N sampled points")
    s.add_argument("--horizons", type=int, default=DEFAULT_HORIZONS, help="number of doubling horizons")
    s.add_argument("--out", help="points CSV")
    s.add_argument("--word-out", help="gap-coding word file")
    s.add_argument("--profile-out", help="discrepancy CSV")
    s.add_argument("--json-out")
    s.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("cap", help="cut-and-project sets")
    c.add_argument("action", choices=["gen", "decide", "transform"])
    c.add_argument("--eps", required=True)
    c.add_argument("--eta", required=True)
    c.add_argument("--window", required=True, help="c,d")
    c.add_argument("--range", default="-10,10")
    c.add_argument("--matrix", help="A,B,C,D for transform")
    c.add_argument("--empirical", type=int, default=0)
    c.add_argument("--horizons", type=int, default=DEFAULT_HORIZONS, help="number of doubling horizons")
    c.add_argument("--out")
    c.add_argument("--word-out")
    c.add_argument("--json-out")
    c.set_defaults(func=cmd_cap)

    d = sub.add_parser("discrepancy", help="deviation profile of a point file against xi Z")
    d.add_argument("--points", required=True)
    d.add_argument("--xi", required=True)
    d.add_argument("--horizons", type=int, default=DEFAULT_HORIZONS)
    d.add_argument("--one-sided", action="store_true")
    d.add_argument("--out")
    d.add_argument("--json-out")
    d.set_defaults(func=cmd_discrepancy)

    w = sub.add_parser("witness", help="bijection x_n -> xi n")
    w.add_argument("--points", required=True)
    w.add_argument("--xi", required=True)
    w.add_argument("--count", type=int, default=None)
    w.add_argument("--out")
    w.add_argument("--json-out")
    w.set_defaults(func=cmd_witness)

    g = sub.add_parser("grid", help="2D product of two 1D sets")
    g.add_argument("--points1")
    g.add_argument("--points2")
    g.add_argument("--angle", type=float, default=72.0, help="degrees between u and v")
    g.add_argument("--bound", type=float, default=10.0)
    g.add_argument("--out")
    g.add_argument("--json-out")
    g.set_defaults(func=cmd_grid)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.precision, cutproject.point_budget())
        return args.func(args, cfg)
    except (ValueError, TypeError, cutproject.BudgetExceededError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
