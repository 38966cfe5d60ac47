import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import nonneg_rationals, nonzero_rationals, rationals
from wassmodel import Polynomial, QuadraticNumber, poly_eval, quad_compare, rat_normalize
from wassmodel.exact import exact_from_json, exact_to_json, rat_str, to_rational

Q = QuadraticNumber


@pytest.mark.parametrize("p,q,want", [(2, 4, Fraction(1, 2)), (5, 14, Fraction(5, 14)), (-3, -6, Fraction(1, 2))])
def test_rat_normalize(p, q, want):
    r = rat_normalize(p, q)
    assert r == want
    assert r.denominator > 0
    assert math.gcd(r.numerator, r.denominator) == 1


def test_rat_normalize_zero_denominator():
    with pytest.raises(ZeroDivisionError, match="division by zero"):
        rat_normalize(1, 0)


def test_to_rational_parses_strings_and_floats():
    assert to_rational("5/14") == Fraction(5, 14)
    assert to_rational("0.1") == Fraction(1, 10)
    assert to_rational(0.1) == Fraction(1, 10)
    assert rat_str(Fraction(3)) == "3"
    with pytest.raises(TypeError):
        to_rational(True)


def test_quad_compare_examples():
    assert quad_compare(Q(Fraction(-8, 7), 1, 2), Q(Fraction(-6, 7), 2, Fraction(5, 14))) == -1
    assert quad_compare(Q(1), Q(1, 0, 0)) == 0
    assert quad_compare(Q(Fraction(1, 14), Fraction(1, 2), Fraction(5, 7)),
                        Q(Fraction(-1, 14), Fraction(1, 2), Fraction(5, 7))) == 1


def test_canonical_form():
    assert Q(3, 0, 5) == Q(3)
    assert (Q(3, 0, 5).b, Q(3, 0, 5).c) == (0, 0)
    assert (Q(1, 1, 0).b, Q(1, 1, 0).c) == (0, 0)
    # sqrt(1/2) = (1/2) sqrt(2); sqrt(8) = 2 sqrt(2); sqrt(9) = 3
    assert (Q.sqrt(Fraction(1, 2)).b, Q.sqrt(Fraction(1, 2)).c) == (Fraction(1, 2), 2)
    assert Q.sqrt(8) == Q(0, 2, 2)
    assert Q.sqrt(9).is_rational and Q.sqrt(9) == 3
    with pytest.raises(ValueError):
        Q(0, 1, -2)


def test_mixed_radicand_arithmetic_is_refused():
    with pytest.raises(ValueError, match="mixed radicands"):
        Q.sqrt(2) + Q.sqrt(3)


def test_str_and_json():
    v = Q(Fraction(-8, 7), 1, 2)
    assert str(v) == "-8/7 + 1·√2"
    doc = v.to_json()
    assert doc["a"] == "-8/7" and doc["b"] == "1" and doc["c"] == "2"
    assert abs(doc["float"] - 0.2713564195) < 1e-10
    assert Q.from_json(doc) == v
    assert exact_from_json(exact_to_json(Fraction(5, 14))) == Fraction(5, 14)
    assert exact_from_json(exact_to_json(v)) == v


@pytest.mark.parametrize("f,point,want", [
    ("p**2", (Fraction(1, 2),), Fraction(1, 4)),
    ("2*p*(1-p)", (Fraction(1, 2),), Fraction(1, 2)),
    ("x1**3 + x2**3 + x3**3 - 4*x1*x2*x3", (Fraction(1, 3),) * 3, Fraction(-1, 27)),
])
def test_poly_eval_examples(f, point, want):
    names = ("p",) if len(point) == 1 else ("x1", "x2", "x3")
    gens = dict(zip(names, Polynomial.gens(names)))
    poly = eval(f, {}, gens)
    assert poly_eval(poly, point) == want


def test_poly_eval_dimension_mismatch():
    (p,) = Polynomial.gens(("p",))
    with pytest.raises(ValueError):
        poly_eval(p * p, (Fraction(1), Fraction(2)))


# -- field axioms on rationals (Fraction backs Rational) and on Q(sqrt c) -------

@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a:
        assert a * (1 / a) == 1


radicands = st.integers(2, 50)


@st.composite
def same_field(draw, count=3):
    c = draw(radicands)
    return [Q(draw(rationals), draw(rationals), c) for _ in range(count)]


@given(same_field())
def test_quadratic_field_axioms(xs):
    x, y, z = xs
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if x:
        assert x * (1 / x) == 1


@given(rationals, rationals, nonneg_rationals)
def test_float_agreement(a, b, c):
    v = float(Q(a, b, c))
    ref = float(a) + float(b) * math.sqrt(float(c))
    assert abs(v - ref) <= 1e-12 * max(1.0, abs(ref), abs(float(a)), abs(float(b) * math.sqrt(float(c))))


@st.composite
def quadratics(draw):
    return Q(draw(rationals), draw(rationals), draw(st.integers(0, 30)))


def _sym(x: Q):
    r = lambda f: sympy.Rational(f.numerator, f.denominator)  # noqa: E731
    return r(x.a) + r(x.b) * sympy.sqrt(r(x.c))


@given(quadratics(), quadratics())
def test_compare_matches_symbolic_oracle(x, y):
    assert quad_compare(x, y) == int(sympy.sign(_sym(x) - _sym(y)))


@given(quadratics(), quadratics(), quadratics())
def test_compare_is_a_total_order(x, y, z):
    assert quad_compare(x, y) == -quad_compare(y, x)
    assert quad_compare(x, x) == 0
    if quad_compare(x, y) <= 0 and quad_compare(y, z) <= 0:
        assert quad_compare(x, z) <= 0


def test_compare_near_ties():
    # sqrt(3) - 8/25 and sqrt(2) differ by about 5e-5
    assert Q(Fraction(-8, 25), 1, 3).compare(Q.sqrt(2)) < 0
    assert Q.sqrt(2).compare(Fraction(14142135623731, 10 ** 13)) < 0
    assert Q.sqrt(2).compare(Fraction(14142135623730, 10 ** 13)) > 0
    assert Q(0, 10 ** 12, 2).compare(Q(0, 10 ** 12 + 1, 2)) < 0
    # 1 + sqrt(8) equals 1 + 2 sqrt(2) after canonicalization
    assert Q(1, 1, 8).compare(Q(1, 2, 2)) == 0
    assert Q(1, 1, 2) ** 2 == Q(3, 2, 2)


@given(nonzero_rationals)
def test_division_by_rational(r):
    x = Q(1, 2, 3)
    assert (x / r) * r == x
    assume(x.norm() != 0)
    assert (1 / x) * x == 1
