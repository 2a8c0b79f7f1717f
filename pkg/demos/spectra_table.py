"""
A table of spectra of quadratic Pisot units
===========================================

For beta with beta^2 = p beta +- 1 and n consecutive digits (starting at
0 for alpha = -beta, centred for alpha = +beta), the spectrum is bounded distance to
a lattice iff a divisibility condition on n - 1 holds.  We print that
condition, the equivalent window test, and the lattice step when it exists.
"""
from __future__ import annotations

from aperiodic import SpectrumSpec, average_lattice_xi, bdl_decide, kesten_decide
from aperiodic.spectra import InvalidSpectrumError, cap_spec, validate

rows = []
for family, p in [("minus", 1), ("minus", 2), ("minus", 3), ("plus", 3), ("plus", 4)]:
    for sign in ("minus", "plus"):
        for n in range(2, 8):
            m = 0 if sign == "minus" else -((n - 1) // 2)
            spec = SpectrumSpec.make(family, p, sign, m, m + n - 1)
            try:
                validate(spec)
            except InvalidSpectrumError:
                continue
            v = bdl_decide(spec)
            window = kesten_decide(cap_spec(spec)).bdl
            xi = f"{float(average_lattice_xi(spec)):.6f}" if v.bdl else "-"
            rows.append((f"{family} p={p}", sign, f"{spec.m}..{spec.M}", v.reason, window, xi))

print(f"{'unit':<11} {'alpha':<6} {'digits':<7} {'condition':<20} {'window':<7} xi")
for unit, sign, digits, reason, window, xi in rows:
    print(f"{unit:<11} {'-' if sign == 'minus' else '+'}beta  {digits:<7} {reason:<20} {str(window):<7} {xi}")
