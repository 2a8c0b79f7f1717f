from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aperiodic.morphisms import fixed_point_window, parse_morphism
from aperiodic.quadfield import golden_field
from aperiodic.words import (
    Alphabet,
    GeomRep,
    WordWindow,
    balance_constant,
    balance_constants,
    geometric_points,
    geometric_points_float,
    letter_frequencies,
    mechanical_window,
    parikh,
    parikh_prefix,
    parikh_table,
    parse_word,
)

K = golden_field()
TAU = K(Fraction(1, 2), Fraction(1, 2))
AB = Alphabet(("A", "B"))


def fib_fixed_point(radius: int) -> WordWindow:
    return fixed_point_window(parse_morphism("A->AAB;B->AB"), ("B", "A"), radius)


def test_parse_word():
    w = parse_word("AAB|ABA")
    assert w.origin == 3 and w[0] == "A" and w[-1] == "B"
    assert str(w) == "AAB|ABA"
    assert parse_word("AB").origin == 0
    with pytest.raises(ValueError):
        parse_word("A|B|A")


def test_parikh_prefix_on_fixed_point():
    w = fib_fixed_point(20)
    assert w.right.startswith("AABAABAB")
    assert w.left.endswith("AABAB")
    assert parikh_prefix(w, 3).tolist() == [2, 1]
    assert parikh_prefix(w, 0).tolist() == [0, 0]
    assert parikh_prefix(w, -2).tolist() == [-1, -1]
    with pytest.raises(IndexError):
        parikh_prefix(w, 21)


def test_parikh_table_matches_prefix():
    w = fib_fixed_point(50)
    ns, table = parikh_table(w)
    for n, row in zip(ns, table):
        assert row.tolist() == parikh_prefix(w, int(n)).tolist()
        assert row.sum() == n


def test_balance_examples():
    assert balance_constant(parse_word("AABB", AB), 2) == 2
    assert balance_constant(WordWindow("AB" * 200, 0, AB)) == 1
    fib = fib_fixed_point(5000)
    assert balance_constant(fib, 500) == 1


def test_balance_rejects_long_factor_length():
    with pytest.raises(ValueError):
        balance_constant(parse_word("AB"), 5)


def test_frequencies():
    w = fib_fixed_point(50_000)
    rho = letter_frequencies(w)
    assert abs(float(rho[0]) - float(1 / TAU)) < 1e-3
    assert abs(float(rho[1]) - float(TAU**-2)) < 1e-3
    assert letter_frequencies(WordWindow("A", 0, AB)) == (1, 0)
    assert letter_frequencies(WordWindow("AB" * 10, 0, AB)) == (Fraction(1, 2), Fraction(1, 2))


def test_geometric_points_examples():
    rep = GeomRep(parse_word("A|AB", AB), (K(1), 1 / TAU))
    pts = geometric_points(rep)
    assert pts == [-1, 0, 1, 1 + 1 / TAU]
    lattice = geometric_points(GeomRep(parse_word("AB|BA", AB), (1, 1)))
    assert lattice == [-2, -1, 0, 1, 2]
    with pytest.raises(ValueError):
        GeomRep(parse_word("A|B", AB), (1, 0))


def test_geometric_points_float_matches_exact():
    w = fib_fixed_point(200)
    lengths = (TAU, K(1))
    exact = geometric_points(GeomRep(w, lengths))
    approx = geometric_points_float(w, [float(x) for x in lengths])
    assert np.allclose(approx, [float(x) for x in exact], atol=1e-9)


def test_mechanical_window_is_sturmian():
    slope = 1 / TAU**2
    w = mechanical_window(slope, 0, 1000, 1000)
    assert balance_constant(w, 200) == 1
    f = letter_frequencies(w)
    assert abs(float(f[1]) - float(slope)) < 2 / len(w)


# -- properties -----------------------------------------------------------

words = st.text(alphabet="ABC", min_size=0, max_size=60)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_parikh_additive(u, v):
    A = Alphabet(("A", "B", "C"))
    assert (parikh(u + v, A) == parikh(u, A) + parikh(v, A)).all()


@settings(max_examples=100, deadline=None)
@given(words.filter(lambda s: len(s) >= 2), st.data())
def test_parikh_prefix_additivity(s, data):
    w = WordWindow(s, data.draw(st.integers(0, len(s))), Alphabet(("A", "B", "C")))
    lo, hi = -w.origin, len(s) - w.origin
    n = data.draw(st.integers(lo, hi))
    m = data.draw(st.integers(n, hi))
    inner = parikh(w.factor(n, m), w.alphabet)
    assert (parikh_prefix(w, m) == parikh_prefix(w, n) + inner).all()
    assert parikh_prefix(w, n).sum() == n


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet="AB", min_size=4, max_size=80))
def test_balance_monotone(s):
    w = WordWindow(s, 0, AB)
    consts = [balance_constant(w, L) for L in range(1, len(s) + 1)]
    assert consts == sorted(consts)
    longer = WordWindow(s + s[:3], 0, AB)
    assert balance_constant(longer, len(s)) >= consts[-1]


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet="AB", min_size=2, max_size=30))
def test_balance_matches_brute_force(s):
    w = WordWindow(s, 0, AB)
    best = 0
    for L in range(1, len(s) + 1):
        counts = [s[i : i + L].count("A") for i in range(len(s) - L + 1)]
        best = max(best, max(counts) - min(counts))
    assert balance_constants(w, len(s))["A"] == best
