from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from aperiodic.cutproject import (
    BudgetExceededError,
    CapSpec,
    gap_code,
    generate,
    kesten_decide,
    normalize,
    translate,
    unimodular_transform,
)
from aperiodic.quadfield import QuadElem, QuadField, golden_field

from oracles import brute_cap, mp

K = golden_field()
TAU = K(1, 1) / 2
TAUC = TAU.conjugate()
FIB = CapSpec(TAUC, TAU, 0, 1)


def brute_box(spec: CapSpec, lo, hi) -> int:
    """A box in (a, b) that contains every point of the CAP in [lo, hi]."""
    e, h = float(mp(spec.epsilon)), float(mp(spec.eta))
    c, d = float(mp(spec.c)), float(mp(spec.d))
    bmax = (max(abs(hi - c), abs(lo - d), abs(hi - d), abs(lo - c))) / abs(h - e) + 1
    amax = max(abs(lo), abs(hi)) + bmax * abs(h) + 1
    return int(math.ceil(max(bmax, amax)))


def test_fibonacci_points_match_brute_force():
    pts = generate(FIB, -20, 20)
    assert pts.pairs() == brute_cap(TAUC, TAU, 0, 1, -20, 20, 40)
    assert all(FIB.contains(a, b) for a, b in pts.pairs())


def test_empty_and_reversed_ranges():
    assert len(generate(FIB, 5, 4)) == 0
    assert len(generate(FIB, Fraction(1, 10), Fraction(1, 5))) == 0


def test_range_endpoints_are_closed():
    pts = generate(FIB, 0, TAU**2)
    assert pts.exact(0) == 0 and pts.exact(len(pts) - 1) == TAU**2


def test_spec_validation():
    with pytest.raises(ValueError):
        CapSpec(TAU, TAU, 0, 1)
    with pytest.raises(ValueError):
        CapSpec(TAUC, TAU, 1, 1)
    with pytest.raises(ValueError):
        CapSpec(K(1, 0), TAU, 0, 1)
    with pytest.raises(ValueError):
        CapSpec(QuadField(2)(0, 1), TAU, 0, 1)


def test_budget(monkeypatch):
    monkeypatch.setenv("APERIODIC_BUDGET", "100")
    with pytest.raises(BudgetExceededError):
        generate(FIB, -1000, 1000)
    assert len(generate(FIB, -5, 5)) > 0


fields = st.sampled_from([2, 3, 5, 7])
small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
nonzero = small.filter(lambda q: q != 0)


@st.composite
def cap_specs(draw):
    F = QuadField(draw(fields))
    eps = QuadElem(draw(small), draw(nonzero), F)
    eta = QuadElem(draw(small), draw(nonzero), F)
    assume(eps != eta and abs(float(eta) - float(eps)) > 0.3)
    c = draw(small)
    length = draw(st.fractions(min_value=Fraction(1, 8), max_value=3, max_denominator=8))
    return CapSpec(eps, eta, c, c + length)


@settings(max_examples=60, deadline=None)
@given(cap_specs(), st.integers(-8, 4), st.integers(1, 10))
def test_generation_matches_brute_force(spec, lo, width):
    hi = lo + width
    box = brute_box(spec, lo, hi)
    assume(box <= 80)
    pts = generate(spec, lo, hi)
    assert pts.pairs() == brute_cap(spec.epsilon, spec.eta, spec.c, spec.d, lo, hi, box)


@pytest.mark.parametrize(
    "c,d,bdl,p,q",
    [
        (0, 1, True, 1, 0),
        (0, Fraction(1, 2), False, Fraction(1, 2), 0),
        (0, TAU, True, 1, -1),
        (0, K(0, 1), True, 1, -2),
        (TAUC, 1, True, 1, -1),
        (0, Fraction(9, 10), False, Fraction(9, 10), 0),
    ],
)
def test_kesten_examples(c, d, bdl, p, q):
    v = kesten_decide(CapSpec(TAUC, TAU, c, d))
    assert (v.bdl, v.p, v.q) == (bdl, p, q)
    if bdl:
        assert v.lattice_step == abs(TAU - TAUC) / (K(0) + d - c)
    else:
        assert v.lattice_step is None


def test_density_step_is_mean_spacing():
    pts = generate(FIB, 0, 2000)
    step = float(FIB.density_step())
    # the count is within a few points of 2000 / step
    assert abs(len(pts) - 2000 / step) < 5


def test_unimodular_example():
    spec = CapSpec(TAUC**2, TAU**2, 0, 1)
    new, scale = unimodular_transform(spec, 0, -1, 1, 2)
    assert new.epsilon == TAUC and new.eta == TAU
    assert new.c == 0 and new.d == TAU**2
    assert scale == TAU**2


def test_unimodular_rejections():
    with pytest.raises(ValueError):
        unimodular_transform(FIB, 2, 0, 0, 1)
    with pytest.raises(ValueError):
        unimodular_transform(FIB, -1, 0, 0, -1)  # flips the window


@st.composite
def unimodular(draw):
    gens = [(1, 1, 0, 1), (1, -1, 0, 1), (1, 0, 1, 1), (1, 0, -1, 1), (0, 1, 1, 0)]
    A, B, C, D = 1, 0, 0, 1
    for _ in range(draw(st.integers(0, 4))):
        a, b, c, d = draw(st.sampled_from(gens))
        A, B, C, D = A * a + B * c, A * b + B * d, C * a + D * c, C * b + D * d
    return A, B, C, D


def _scaled_set(spec, lo, hi, s):
    if s > 0:
        sub = generate(spec, lo / s, hi / s)
    else:
        sub = generate(spec, hi / s, lo / s)
    return sorted(s * x for x in sub.elements())


@settings(max_examples=50, deadline=None)
@given(unimodular(), st.integers(-6, 0), st.integers(1, 8))
def test_unimodular_preserves_point_set(M, lo, width):
    A, B, C, D = M
    spec = CapSpec(TAUC, TAU, Fraction(-1, 3), Fraction(2, 3))
    den_s = A + C * spec.epsilon
    assume(den_s != 0 and den_s > 0 and A + C * spec.eta != 0)
    new, s = unimodular_transform(spec, A, B, C, D)
    hi = lo + width
    assume(abs(float(s)) < 50 and abs(float(s)) > 0.02)
    assert generate(spec, lo, hi).elements() == _scaled_set(new, spec._lift(lo), spec._lift(hi), s)


@settings(max_examples=40, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-10, 0))
def test_translate(a, b, lo):
    t = FIB.point(a, b)
    moved = translate(FIB, a, b)
    hi = lo + 10
    expected = [x + t for x in generate(FIB, lo, hi).elements()]
    assert generate(moved, t + lo, t + hi).elements() == expected


def test_normalize():
    spec = CapSpec(TAUC - 3, TAU, K(5, 1), K(6, 1))
    n = normalize(spec)
    assert 0 < n.spec.epsilon < 1 and 0 <= n.spec.c < 1
    assert n.eps_shift == -4
    old = generate(spec, -20, 20).elements()
    new = generate(n.spec, -20 + n.translation, 20 + n.translation).elements()
    assert new == [x + n.translation for x in old]


def test_gap_coding_two_and_three_gaps():
    g = gap_code(generate(FIB, -20, 20))
    assert g.gaps == (TAU**2, TAU)
    assert set(g.window.letters) == {"A", "B"}
    g3 = gap_code(generate(CapSpec(TAUC, TAU, 0, Fraction(9, 10)), -20, 20))
    assert len(g3.gaps) == 3
    assert g3.gaps[0] == g3.gaps[1] + g3.gaps[2]


def test_gap_decoding_roundtrip():
    pts = generate(FIB, -15, 15)
    g = gap_code(pts)
    assert g.decode(pts.exact(0)) == pts.elements()
    assert pts.exact(g.window.origin) >= 0 > pts.exact(g.window.origin - 1)


def test_gap_coding_edge_cases():
    g = gap_code([K(0), TAU])
    assert g.gaps == (TAU,) and g.window.letters == "A"
    with pytest.raises(AssertionError):
        gap_code([Fraction(x) for x in (0, 1, 3, 6, 10)])
    with pytest.raises(ValueError):
        gap_code([K(0)])
