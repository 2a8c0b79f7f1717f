"""
The spectrum of -tau with digits {0, 1}
=======================================

Sums a_0 + a_1 (-tau) + a_2 (-tau)^2 + ... with a_i in {0, 1} form a
discrete set of reals.  This walk-through builds it twice (from digit
strings, and as a cut-and-project set), reads off its two gap lengths,
and measures how far it is from the lattice xi Z.
"""
from __future__ import annotations

from aperiodic import (
    SpectrumSpec,
    average_lattice_xi,
    bdl_decide,
    discrepancy_profile,
    doubling_horizons,
    gap_code,
    generate_cap,
    generate_direct,
)
from aperiodic.quadfield import format_decimal
from aperiodic.spectra import cap_spec

spec = SpectrumSpec.make("minus", 1, "minus", 0, 1)
print("spectrum:", spec)

# Digit strings of length <= 13; the range pruning only drops partial sums
# that can never come back to [-20, 20].
direct = generate_direct(spec, 12, -20, 20)
print(f"direct generation: {len(direct)} points in [-20, 20]")

# The same set as {a + b tau : a + b tau' in [0, tau^2)}
cs = cap_spec(spec)
print("cut-and-project window:", cs.c, "..", cs.d)
cap = generate_cap(spec, -20, 20)
print("identical sets:", cap.elements() == direct.elements())

for x in cap.elements()[20:28]:
    print(f"  {format_decimal(x, 12):>16}   {x}")

# consecutive distances take two values
g = gap_code(generate_cap(spec, -60, 60))
print("gaps:", ", ".join(str(x) for x in g.gaps))
print("coding word:", g.window.letters[:60], "...")

verdict = bdl_decide(spec)
xi = average_lattice_xi(spec)
print(f"bounded distance to a lattice: {verdict.bdl} ({verdict.reason})")
print(f"lattice step xi = {xi} = {format_decimal(xi, 15)}")

# count points in [0, N) against N / xi for N up to a few hundred thousand
R = 2 * 10**5 * float(xi)
pts = generate_cap(spec, -R, R)
prof = discrepancy_profile(pts, xi, doubling_horizons(R, 10), coverage=(-R, R))
print(f"{len(pts)} points, deviation at each doubling horizon:")
for N, r, l in zip(prof.horizons, prof.right_dev, prof.left_dev):
    print(f"  N = {N:12.1f}   right {r:.4f}   left {l:.4f}")
