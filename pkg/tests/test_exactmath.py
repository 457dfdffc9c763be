from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from toriczeta.exactmath import (
    BiSeries,
    SeriesError,
    ber_hat,
    bernoulli_number,
    bernoulli_poly_at,
    bernoulli_poly_coeffs,
    exp_linear_form,
    format_rat,
    frac_bracket,
    frac_part,
    lambda_coeff,
    parse_rat,
    todd_kernel,
    univariate_inverse,
)


def test_bernoulli_examples():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == F(-1, 2)
    assert bernoulli_number(4) == F(-1, 30)
    assert all(bernoulli_number(2 * k + 1) == 0 for k in range(1, 15))


def test_bernoulli_matches_sympy():
    # sympy uses B_1 = +1/2; every other index agrees
    for m in range(31):
        if m != 1:
            assert bernoulli_number(m) == F(str(sympy.bernoulli(m)))


def test_bernoulli_negative_index():
    with pytest.raises(ValueError):
        bernoulli_number(-1)


def test_lambda_examples():
    assert lambda_coeff(1) == F(1, 2)
    assert lambda_coeff(2) == F(1, 12)
    assert lambda_coeff(3) == 0


def test_lambda_is_taylor_series_of_todd_kernel():
    h = sympy.symbols("h")
    ser = sympy.series(h / (1 - sympy.exp(-h)), h, 0, 13).removeO()
    for m in range(13):
        assert lambda_coeff(m) == F(str(ser.coeff(h, m)))


def test_lambda_bernoulli_relation():
    from math import factorial

    for m in range(31):
        assert lambda_coeff(m) == (-1) ** m * bernoulli_number(m) / factorial(m)


def test_kernel_times_denominator_is_z():
    from math import factorial

    deg = 20
    g = todd_kernel(deg)
    one_minus_exp = [F(0)] + [F((-1) ** (m + 1), factorial(m)) for m in range(1, deg + 2)]
    prod = [sum(g[k] * one_minus_exp[n - k] for k in range(n + 1)) for n in range(deg + 1)]
    assert prod == [0, 1] + [0] * (deg - 1)


def test_bernoulli_poly_examples():
    assert bernoulli_poly_at(2, F(1, 2)) == F(-1, 12)
    assert bernoulli_poly_at(1, 0) == F(-1, 2)
    assert bernoulli_poly_at(0, F(7, 3)) == 1


def test_bernoulli_poly_identities():
    x = sympy.symbols("x")
    for m in range(1, 21):
        c = bernoulli_poly_coeffs(m)
        poly = sum(sympy.Rational(v.numerator, v.denominator) * x**k for k, v in enumerate(c))
        assert sympy.expand(poly.subs(x, x + 1) - poly - m * x ** (m - 1)) == 0
        assert sympy.expand(poly.subs(x, 1 - x) - (-1) ** m * poly) == 0
        dpoly = sum(sympy.Rational(v.numerator, v.denominator) * x**k for k, v in enumerate(bernoulli_poly_coeffs(m - 1)))
        assert sympy.expand(sympy.diff(poly, x) - m * dpoly) == 0
        assert c[0] == bernoulli_number(m)


def test_ber_hat_examples():
    assert ber_hat(1, 1) == 0
    assert ber_hat(2, 1) == F(1, 6)
    assert ber_hat(1, F(1, 3)) == F(-1, 6)


@pytest.mark.parametrize("x", [0, F(-1, 2), F(3, 2)])
def test_ber_hat_domain(x):
    with pytest.raises(ValueError):
        ber_hat(2, x)


def test_brackets():
    assert frac_part(F(7, 3)) == F(1, 3)
    assert frac_part(-F(1, 3)) == F(2, 3)
    assert frac_part(2) == 0
    assert frac_bracket(2) == 1
    assert frac_bracket(F(-1, 3)) == F(2, 3)


def test_rational_text_format():
    assert format_rat(F(3, 1)) == "3"
    assert format_rat(F(-5, 12)) == "-5/12"
    assert parse_rat("-5/12") == F(-5, 12)
    assert parse_rat(" 7 ") == 7


def test_series_examples():
    assert str(exp_linear_form(0, 0, 5)) == "1"
    one_x = BiSeries({(0, 0): 1, (1, 0): 1}, 2)
    one_y = BiSeries({(0, 0): 1, (0, 1): 1}, 2)
    assert str(one_x * one_y) == "1 + x + y + x*y"
    xy = BiSeries.monomial(1, 1, 4)
    assert xy.substitute_linear([[0, 1], [1, 0]]) == xy


def test_series_display_order():
    s = BiSeries({(0, 0): 1, (1, 0): F(1, 2), (0, 1): F(1, 2), (1, 1): F(1, 4)}, 2)
    assert str(s) == "1 + 1/2*x + 1/2*y + 1/4*x*y"
    assert str(BiSeries({(2, 1): F(-1, 6), (0, 0): 1}, 3)) == "1 - 1/6*x^2*y"


def test_truncation_never_reads_beyond_degree():
    a = BiSeries({(2, 0): 1}, 3)
    b = BiSeries({(0, 2): 1}, 3)
    assert (a * b).is_zero()
    with pytest.raises(SeriesError):
        a.coeff(4, 0)


def test_exp_product_rule():
    a = exp_linear_form(F(1, 2), -3, 8)
    b = exp_linear_form(2, F(5, 7), 8)
    assert a * b == exp_linear_form(F(5, 2), F(-16, 7), 8)


def test_exp_substitution():
    s = exp_linear_form(1, 0, 6)  # e^x
    assert s.substitute_linear([[2, 3], [1, 1]]) == exp_linear_form(2, 3, 6)


def test_valuation_limits():
    with pytest.raises(SeriesError):
        BiSeries.one(3).shift(-2, 0)
    s = BiSeries.one(3).shift(-1, -1)
    assert s.valuation == (-1, -1)
    assert s.coeff(-1, -1) == 1
    with pytest.raises(SeriesError):
        s.substitute_linear([[1, 0], [0, 1]])


def test_aligned_equality():
    a = BiSeries({(1, 1): 1}, 4)
    assert a.shift(-1, -1) == BiSeries.one(2)


def test_univariate_inverse():
    inv = univariate_inverse([1, -1], 6)  # 1/(1 - z)
    assert inv == [1] * 7
    with pytest.raises(SeriesError):
        univariate_inverse([0, 1], 3)


small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), small, max_size=8),
       st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), small, max_size=8))
def test_series_ring_axioms(ca, cb):
    a, b = BiSeries(ca, 6), BiSeries(cb, 6)
    assert a * b == b * a
    assert a + b - b == a
    assert (a + b) * b == a * b + b * b


@given(small, small, small, small)
def test_substitution_is_a_ring_map(p, q, r, s):
    m = [[p, q], [r, s]]
    a = exp_linear_form(1, 2, 5) + BiSeries.monomial(1, 2, 5, 3)
    b = exp_linear_form(-1, F(1, 2), 5)
    assert (a * b).substitute_linear(m) == a.substitute_linear(m) * b.substitute_linear(m)
