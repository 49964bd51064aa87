from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmech import linalg
from gmech.errors import MalformedInputError
from gmech.polynomials import Polynomial, spread
from gmech.rational import (
    format_entries,
    format_rational,
    parse_edge_key,
    parse_entries,
    parse_rational,
)

fractions = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


# rationals -------------------------------------------------------------------


def test_parse_rational_forms():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert parse_rational(7) == 7
    for bad in ("1.5", "1e3", "x", "1/0", 0.5, None, True):
        with pytest.raises(MalformedInputError):
            parse_rational(bad)


def test_format_rational_lowest_terms():
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-3, 9)) == "-1/3"


@given(fractions)
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_entries_round_trip():
    obj = {"entries": {"1-2": "3/2", "2-1": "6"}}
    parsed = parse_entries(obj)
    assert parsed == {(1, 2): Fraction(3, 2), (2, 1): Fraction(6)}
    assert format_entries(parsed) == obj


def test_entries_errors():
    with pytest.raises(MalformedInputError):
        parse_entries({"1-2": "1"})
    with pytest.raises(MalformedInputError):
        parse_entries({"entries": {"12": "1"}})
    with pytest.raises(MalformedInputError):
        parse_edge_key("a-b")


# linear algebra --------------------------------------------------------------


def test_solve_and_rank():
    rows = [[2, 1], [1, 3]]
    assert linalg.solve(rows, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    with pytest.raises(ValueError):
        linalg.solve([[1, 2], [2, 4]], [1, 3])
    with pytest.raises(ValueError):
        linalg.solve([[1, 2], [2, 4]], [1, 2])


def test_nullspace_example():
    basis = linalg.nullspace([[1, -1, 0], [0, 1, -1]])
    assert basis == [[1, 1, 1]]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(fractions, min_size=n + 1, max_size=n + 1), min_size=n, max_size=n)))
def test_nullspace_vectors_are_annihilated(rows):
    for v in linalg.nullspace(rows):
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in rows)
    assert linalg.rank(rows) + len(linalg.nullspace(rows)) == len(rows[0])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(fractions, min_size=n, max_size=n),
)))
def test_solve_reproduces_rhs(system):
    rows, x = system
    rhs = [sum(a * b for a, b in zip(row, x)) for row in rows]
    if linalg.rank(rows) < len(rows):
        return
    assert linalg.solve(rows, rhs) == x


# polynomials -----------------------------------------------------------------


def test_polynomial_arithmetic():
    x, y = Polynomial.variable(0), Polynomial.variable(1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.derivative(0) == Polynomial.constant(2) * x
    assert p.variables() == {0, 1}
    assert p.evaluate({0: Fraction(3), 1: Fraction(1, 2)}) == Fraction(35, 4)
    assert not (x - x)


def test_split_and_multilinearity():
    p = Polynomial.from_edge_sets([0b011, 0b110, 0b100])
    assert p.is_multilinear()
    a, b = p.split(1)
    z1 = Polynomial.variable(1)
    assert a + z1 * b == p
    with pytest.raises(ValueError):
        (z1 * z1).split(1)


def test_exponent_overflow_rejected():
    x = Polynomial.variable(0)
    p = x
    for _ in range(14):
        p = p * x
    assert p.max_exponent() == 15
    with pytest.raises(OverflowError):
        p * x


def test_spread_packs_each_edge_into_its_field():
    assert spread(0b101) == (1 << 0) | (1 << 8)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(0, 63), min_size=1, max_size=6),
    st.lists(st.integers(0, 63), min_size=1, max_size=6),
    st.lists(fractions.filter(lambda v: v != 0), min_size=6, max_size=6),
)
def test_product_evaluates_to_product_of_values(m1, m2, vals):
    p, q = Polynomial.from_edge_sets(m1), Polynomial.from_edge_sets(m2)
    point = dict(enumerate(vals))
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
    assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)
