from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgl.degrees import (
    Degree,
    DegreeError,
    complement,
    degree_from_json,
    degree_to_json,
    format_degree,
    goedel_implies,
    parse_rational,
    reciprocal_implies,
)

degrees = st.fractions(min_value=0, max_value=1, max_denominator=24).map(Degree)
GRID = [Degree(k, 8) for k in range(9)]


@pytest.mark.parametrize(
    "x, y, expected",
    [("0.3", "0.7", 1), ("0.7", "0.3", "0.3"), (1, 0, 0)],
)
def test_goedel_implies(x, y, expected):
    assert goedel_implies(Degree(x), Degree(y)) == Degree(expected)


@pytest.mark.parametrize(
    "x, y, expected",
    [("0.3", "0.7", 1), ("0.7", "0.3", "0.3"), (1, 0, 0)],
)
def test_reciprocal_implies(x, y, expected):
    assert reciprocal_implies(Degree(x), Degree(y)) == Degree(expected)


def test_decimal_literals_are_exact():
    assert Degree("0.6") == Fraction(3, 5)
    assert Degree(0.1) == Fraction(1, 10)
    assert Degree("1/3") == Fraction(1, 3)


@pytest.mark.parametrize("bad", ["1.5", "-0.1", 2, "abc", "1/0"])
def test_out_of_range_rejected(bad):
    with pytest.raises(DegreeError):
        Degree(bad)


def test_arithmetic_results_are_revalidated():
    d = Degree("0.25")
    assert complement(d) == Degree("0.75")
    assert isinstance(complement(d), Degree)
    with pytest.raises(DegreeError):
        Degree(d + 1)


@pytest.mark.parametrize(
    "q, text",
    [(Fraction(3, 5), "0.6"), (Fraction(1, 3), "1/3"), (Fraction(0), "0"), (Fraction(1), "1"),
     (Fraction(1, 8), "0.125"), (Fraction(-1, 2), "-0.5"), (Fraction(120), "120"), (Fraction(2, 7), "2/7")],
)
def test_format_degree(q, text):
    assert format_degree(q) == text
    assert parse_rational(text) == q


def test_json_form():
    assert degree_to_json(Degree("0.6")) == {"num": 3, "den": 5}
    assert degree_from_json({"num": 3, "den": 5}) == Degree("0.6")


@given(degrees)
def test_format_round_trip(d):
    assert Degree(parse_rational(format_degree(d))) == d


def test_threshold_equivalence_on_grid():
    for x in GRID:
        for y in GRID:
            for alpha in GRID:
                lhs = reciprocal_implies(x, y) >= alpha
                rhs = x <= max(1 - alpha, y)
                assert lhs == rhs, (x, y, alpha)


@given(degrees, degrees, degrees)
def test_implications_are_antitone_then_monotone(x1, x2, y):
    lo, hi = sorted([x1, x2])
    for imp in (goedel_implies, reciprocal_implies):
        assert imp(lo, y) >= imp(hi, y)
        assert imp(y, lo) <= imp(y, hi)


@given(degrees, degrees, degrees)
def test_min_is_a_semilattice(a, b, c):
    assert min(a, min(b, c)) == min(min(a, b), c)
    assert min(a, b) == min(b, a)
    assert min(a, a) == a
