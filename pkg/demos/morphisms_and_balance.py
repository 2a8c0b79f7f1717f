"""
Substitutions, balance and bounded-distance lengths
===================================================

A fixed point of a primitive substitution is balanced exactly when the
incidence matrix has no second eigenvalue of modulus > 1 (modulus 1 is
left undecided).  Even for unbalanced fixed points one can often choose
tile lengths so that the resulting point set stays close to a lattice.
"""
from __future__ import annotations

import numpy as np

from aperiodic import (
    FixedPointStream,
    adamczewski_verdict,
    classify_boundedness,
    classify_matrix,
    construct_bdl_lengths,
    discrepancy_profile,
    doubling_horizons,
    incidence_matrix,
    parse_morphism,
)
from aperiodic.spectral import NoStableEigenvalueError, annihilator_growth
from aperiodic.words import balance_constant, geometric_points_float

cases = [
    ("A->AAB;B->AB", ("B", "A")),
    ("A->ABBA;B->AA", ("A", "A")),
    ("A->C;B->ACCCC;C->CB", ("B", "C")),
]

for rules, seed in cases:
    m = parse_morphism(rules)
    stream = FixedPointStream(m, seed, auto_power=True)
    M = incidence_matrix(stream.morphism)
    cls = classify_matrix(M)
    print(f"\n{rules}   (power {stream.power}, seed {seed[0]}|{seed[1]})")
    print("  incidence matrix:", M.tolist())
    print(f"  roots inside / on / outside the unit circle: {cls.n_lt} / {cls.n_eq} / {cls.n_gt}")
    print("  balance verdict:", adamczewski_verdict(cls).value)

    w = stream.window(20_000)
    print("  measured balance constant (factors up to 500):", balance_constant(w, 500))

    try:
        con = construct_bdl_lengths(M)
    except NoStableEigenvalueError as exc:
        print("  no bounded-distance lengths:", exc)
        g = annihilator_growth(M, 0, [4, 8, 12, 16])
        print("  best annihilator along phi^n(A):", ", ".join(f"{x:.1f}" for x in g))
        continue
    lengths = [float(x) for x in con.lengths]
    print("  lengths:", np.round(lengths, 6).tolist(), " lattice step:", round(float(con.eta), 6))
    pts = geometric_points_float(w, lengths)
    top = min(-pts[0], pts[-1]) * 0.999
    prof = discrepancy_profile(pts, float(con.eta), doubling_horizons(top, 10))
    print(f"  deviation from the lattice: max {prof.max_deviation:.4f}, {classify_boundedness(prof).verdict.value}")
