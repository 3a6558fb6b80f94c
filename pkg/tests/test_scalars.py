from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nordentwin.errors import SpecParseError, StructuralError
from nordentwin.scalars import (Polynomial, as_rational, parse_polynomial, scalar_arith,
                                scalar_is_zero, scalar_substitute)

V = ("a", "b", "c")


def P(text):
    return parse_polynomial(text, V)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monomials = st.tuples(*(st.integers(0, 2) for _ in V))
polys = st.dictionaries(monomials, rationals, max_size=4).map(lambda d: Polynomial(V, d))
points = st.fixed_dictionaries({v: rationals for v in V})


def test_as_rational_accepts_exact_values_only():
    assert as_rational(3) == 3
    assert as_rational("-2/6") == Fraction(-1, 3)
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)


def test_parse_and_print():
    p = P("(a + b)^2 - 2*a*b")
    assert p == P("a^2 + b^2")
    assert str(P("16*a^2 - 16*c^2")) == "16*a^2 + -16*c^2"
    assert str(P("-a + 1/2")) == "-a + 1/2"
    assert str(P("0")) == "0"
    assert P("a/2") == P("1/2*a")


def test_parse_errors_carry_a_column():
    with pytest.raises(SpecParseError) as err:
        P("a + * b")
    assert err.value.column == 5
    with pytest.raises(SpecParseError):
        P("x + 1")          # unknown variable
    with pytest.raises(SpecParseError):
        P("a^b")


def test_division_only_by_rationals():
    assert P("2*a") / 2 == P("a")
    with pytest.raises((StructuralError, TypeError)):
        P("a") / P("b")
    with pytest.raises(ZeroDivisionError):
        P("a") / 0


def test_constants_mix_with_any_variable_list():
    k = Polynomial.constant(3)
    x = Polynomial.variable("x", ("x",))
    assert (k * x + 1) == parse_polynomial("3*x + 1", ("x",))
    assert Polynomial.zero(("x",)) == Polynomial.zero()


def test_mismatched_variable_lists_are_rejected():
    x = Polynomial.variable("x", ("x",))
    y = Polynomial.variable("y", ("y",))
    with pytest.raises(StructuralError):
        x + y


def test_equality_and_hash_ignore_declared_but_unused_variables():
    p = Polynomial.variable("a", ("a",))
    q = P("a")
    assert p == q and hash(p) == hash(q)


def test_helpers():
    a, b = P("a"), P("b")
    assert scalar_arith(a, b, "mul") == P("a*b")
    assert scalar_arith(a, None, "neg") == -a
    assert scalar_substitute(P("a*b + c"), {"a": 2, "b": 3, "c": -1}) == 5
    assert scalar_is_zero(P("a - a"))
    assert P("a^2*b + c").degree() == 3
    assert P("6*a + 4").content() == 2
    assert P("a + b").partial_substitute({"a": 1}) == P("b + 1")


def test_substitute_requires_every_used_variable():
    with pytest.raises((StructuralError, KeyError, ValueError)):
        P("a + b").substitute({"a": 1})


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Polynomial.zero(V)
    assert p * 1 == p


@settings(max_examples=60, deadline=None)
@given(polys, polys, points)
def test_substitution_is_a_ring_homomorphism(p, q, x):
    assert (p + q).substitute(x) == p.substitute(x) + q.substitute(x)
    assert (p * q).substitute(x) == p.substitute(x) * q.substitute(x)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_print_parse_round_trip(p):
    assert P(str(p)) == p
