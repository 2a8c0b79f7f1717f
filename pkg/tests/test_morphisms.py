from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aperiodic.morphisms import (
    FixedPointStream,
    Morphism,
    MorphismSyntaxError,
    NotASubstitutionError,
    apply,
    find_admissible_power,
    fixed_point_window,
    format_morphism,
    incidence_matrix,
    parse_morphism,
)
from aperiodic.quadfield import QuadElem, QuadField, ceil_elem, floor_elem
from aperiodic.words import Alphabet, balance_constants, mechanical_window, parikh, parse_word

AB = Alphabet(("A", "B"))

FIB = "A->AAB;B->AB"
THREE = "A->C;B->ACCCC;C->CB"


def test_parse_and_format():
    m = parse_morphism(FIB)
    assert m["A"] == "AAB" and m["B"] == "AB"
    assert format_morphism(m) == FIB
    assert parse_morphism("A->AB; B->A;").images == ("AB", "A")


@pytest.mark.parametrize(
    "text",
    ["", "A->B;A->A", "A->AX", "A=>B", "|->A", "A->;B->A"],
)
def test_parse_errors(text):
    with pytest.raises(MorphismSyntaxError):
        parse_morphism(text)


def test_erasing_allowed_on_request():
    m = parse_morphism("A->AB;B->", allow_erasing=True)
    assert not m.is_non_erasing()
    with pytest.raises(NotASubstitutionError):
        FixedPointStream(m, ("B", "A"))


def test_incidence_matrices():
    assert incidence_matrix(parse_morphism(FIB)).tolist() == [[2, 1], [1, 1]]
    assert incidence_matrix(parse_morphism("A->ABBA;B->AA")).tolist() == [[2, 2], [2, 0]]
    assert incidence_matrix(parse_morphism(THREE)).tolist() == [[0, 1, 0], [0, 0, 1], [1, 4, 1]]


def test_incidence_of_composition_is_product():
    m = parse_morphism(THREE)
    M = incidence_matrix(m)
    assert (incidence_matrix(m.power(2)) == M @ M).all()
    assert (incidence_matrix(m.power(3)) == M @ M @ M).all()


def test_image_of_window_keeps_origin():
    m = parse_morphism(FIB)
    w = apply(m, parse_word("B|A"))
    assert str(w) == "AB|AAB"


def test_fixed_point_window_fib():
    w = fixed_point_window(parse_morphism(FIB), ("B", "A"), 8)
    assert w.right == "AABAABAB"
    # left side is the tail of phi^3(B) = AABAABABAABAB
    assert w.left == "BABAABAB"


def test_auto_power_for_three_letter_example():
    m = parse_morphism(THREE)
    assert not m.is_substitution()
    with pytest.raises(NotASubstitutionError):
        FixedPointStream(m, ("B", "C"))
    assert find_admissible_power(m, ("B", "C")) == 2
    s = FixedPointStream(m, ("B", "C"), auto_power=True)
    assert s.power == 2
    w = s.window(30)
    assert w[0] == "C" and w[-1] == "B"


def test_one_sided_stream():
    s = FixedPointStream(parse_morphism(FIB), (None, "A"))
    w = s.window(0, 10)
    assert w.origin == 0 and w.right == "AABAABABAA"[:10]


def test_bad_seed_letter():
    with pytest.raises(ValueError):
        FixedPointStream(parse_morphism(FIB), ("Z", "A"))


def test_compose_needs_matching_alphabets():
    m = parse_morphism(FIB)
    other = Morphism(Alphabet(("X",)), ("ab",), Alphabet(("a", "b")))
    with pytest.raises(ValueError):
        m.compose(other)


@pytest.mark.parametrize(
    "rules,seed,power",
    [(FIB, ("B", "A"), 1), ("A->ABBA;B->AA", ("A", "A"), 1), (THREE, ("B", "C"), 2)],
)
def test_fixed_point_equation_at_radius_1e4(rules, seed, power):
    m = parse_morphism(rules)
    s = FixedPointStream(m, seed, auto_power=True)
    assert s.power == power
    R = 10_000
    w = s.window(R)
    img = apply(s.morphism, w)
    # phi(u) = u letter by letter on the common range
    assert img.restrict(R, R).letters == w.letters


# -- properties -----------------------------------------------------------


@st.composite
def substitutions(draw):
    """Random binary substitutions of the shape A -> A..., B -> ...B."""
    a_tail = draw(st.text(alphabet="AB", min_size=1, max_size=4))
    b_head = draw(st.text(alphabet="AB", min_size=1, max_size=4))
    return Morphism(Alphabet(("A", "B")), ("A" + a_tail, b_head + "B"))


@settings(max_examples=60, deadline=None)
@given(substitutions(), st.text(alphabet="AB", max_size=30))
def test_parikh_of_image_is_matrix_product(m, word):
    A = m.alphabet
    assert (parikh(m.image(word), A) == incidence_matrix(m) @ parikh(word, A)).all()


@settings(max_examples=40, deadline=None)
@given(substitutions())
def test_random_fixed_points_are_fixed(m):
    s = FixedPointStream(m, ("B", "A"))
    w = s.window(300)
    assert apply(m, w).restrict(300, 300).letters == w.letters


@st.composite
def sturmian_and_morphism(draw):
    d = draw(st.sampled_from([2, 3, 5, 7]))
    F = QuadField(d)
    # slope a + b sqrt(d) in (0, 1), irrational
    b = draw(st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2), max_denominator=7).filter(lambda q: q != 0))
    slope = QuadElem(0, b, F)
    slope = slope - floor_elem(slope)
    intercept = draw(st.fractions(min_value=0, max_value=1, max_denominator=10))
    target = Alphabet(("X", "Y", "Z"))
    imgs = tuple(draw(st.text(alphabet="XYZ", min_size=1, max_size=4)) for _ in range(2))
    return slope, intercept, Morphism(AB, imgs, target)


@settings(max_examples=100, deadline=None)
@given(sturmian_and_morphism())
def test_morphic_image_balance_bound(case):
    slope, intercept, m = case
    w = mechanical_window(slope, intercept, 0, 400)
    img = apply(m, w)
    M = incidence_matrix(m).tolist()
    rho = (1 - slope, slope)  # exact letter frequencies of the sturmian word
    c = 1
    mu = max(len(x) for x in m.images)
    lam = sum(M[i][j] * rho[j] for i in range(len(M)) for j in range(2))
    kappa = 2 * mu + c * sum(sum(row) for row in M)
    measured = balance_constants(img, min(200, len(img.letters)))
    for i, letter in enumerate(m.target.letters):
        lam_b = sum(M[i][j] * rho[j] for j in range(2))
        kappa_b = 2 * mu + c * sum(M[i])
        bound = ceil_elem(lam_b / lam * 2 * kappa + 2 * kappa_b)
        assert measured[letter] <= bound
