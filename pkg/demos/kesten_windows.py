"""
Which windows give sets close to a lattice?
===========================================

For the golden cut-and-project scheme (star slope tau'^2, physical slope
tau^2) the set is bounded distance to a lattice exactly when the window
length lies in Z + Z tau'^2.  Here we compare that exact test with the
counting discrepancy measured over about a million points.
"""
from __future__ import annotations

from fractions import Fraction

from aperiodic import CapSpec, classify_boundedness, discrepancy_profile, generate, kesten_decide
from aperiodic.quadfield import golden_field

K = golden_field()
tau = K(Fraction(1, 2), Fraction(1, 2))
eps, eta = tau.conjugate() ** 2, tau**2

windows = {
    "1": K(1),
    "1/2": K(Fraction(1, 2)),
    "tau'^2 + 1": eps + 1,
    "9/10": K(Fraction(9, 10)),
    "tau": tau,
}

print(f"{'window':>12} {'exact':>6} {'p':>6} {'q':>6}   deviations at 2^k steps, k = 8, 12, 16, 20")
for name, length in windows.items():
    spec = CapSpec(eps, eta, 0, length)
    v = kesten_decide(spec)
    step = float(spec.density_step())
    top = 2**20 * step
    pts = generate(spec, -top, top)
    prof = discrepancy_profile(pts, step, [2**k * step for k in range(4, 21)], coverage=(-top, top))
    dev = prof.deviation
    picks = [dev[k - 4] for k in (8, 12, 16, 20)]
    verdict = classify_boundedness(prof).verdict.value
    print(
        f"{name:>12} {str(v.bdl):>6} {str(v.p):>6} {str(v.q):>6}   "
        + "  ".join(f"{x:6.3f}" for x in picks)
        + f"   {verdict}"
    )

# The deviation of a non-BDL window grows only logarithmically: half a
# point every few doublings.  That is why the empirical reading needs many
# doubling horizons before it can tell the two cases apart.
