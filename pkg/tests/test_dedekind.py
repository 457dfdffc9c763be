from fractions import Fraction as F
from math import factorial, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toriczeta.dedekind import (
    DedekindError,
    classical_dedekind,
    classical_reciprocity_rhs,
    correction_term,
    dedekind_direct,
    dedekind_direct_fast,
    dedekind_direct_table,
    dedekind_via_todd,
    f_coeff,
    s_from_f,
)
from toriczeta.exactmath import bernoulli_number
from toriczeta.toddseries import odd_part


def _textbook_dedekind(h, k):
    """s(h, k) = sum_{a=1}^{k-1} ((a/k)) ((h a/k)) with the sawtooth ((x))."""
    def saw(x):
        x = F(x)
        if x.denominator == 1:
            return F(0)
        return x - (x.numerator // x.denominator) - F(1, 2)

    return sum((saw(F(a, k)) * saw(F(h * a, k)) for a in range(1, k)), F(0))


def test_direct_examples():
    assert dedekind_direct(1, 1, -1, 3) == F(1, 18)
    assert dedekind_direct(1, 1, 5, 1) == 0
    assert dedekind_direct(2, 2, 1, 2) == F(5, 576)


def test_f_coeff_examples():
    assert f_coeff(1, 1, 0, 1) == F(1, 4)
    assert f_coeff(1, 1, 1, 2) == F(1, 2)
    assert f_coeff(2, 0, 0, 1) == F(1, 12)
    assert f_coeff(2, 2, 3, 7, via="ppd") == f_coeff(2, 2, 3, 7, via="cf")
    with pytest.raises(DedekindError):
        f_coeff(3, 3, 1, 2, degree=4)


def test_via_todd_examples():
    assert dedekind_via_todd(1, 1, 1, 2) == 0 == dedekind_direct(1, 1, 1, 2)
    assert dedekind_via_todd(2, 2, 3, 7) == dedekind_direct(2, 2, 3, 7)
    assert dedekind_via_todd(1, 1, 4, 1) == 0


def test_via_todd_rejects_zero_index():
    with pytest.raises(DedekindError):
        dedekind_via_todd(0, 2, 1, 3)


def test_domain_errors():
    with pytest.raises(DedekindError):
        dedekind_direct(1, 1, 2, 4)
    with pytest.raises(DedekindError):
        dedekind_direct(1, 1, 1, 0)
    with pytest.raises(DedekindError):
        dedekind_direct(1, 1, 1, -3)
    with pytest.raises(DedekindError):
        dedekind_direct(-1, 1, 1, 3)


def test_classical_examples():
    assert classical_dedekind(1, 3) == F(1, 18)
    assert classical_dedekind(1, 2) == 0
    assert classical_dedekind(5, 7) + classical_dedekind(7, 5) == F(-1, 4) + F(25 + 49 + 1, 12 * 35)


def test_classical_matches_textbook_sawtooth():
    for k in range(1, 60):
        for h in range(-k, 2 * k):
            if gcd(h, k) == 1:
                assert classical_dedekind(h, k) == _textbook_dedekind(h, k)


def test_classical_reciprocity():
    for q in range(2, 41):
        for p in range(1, q):
            if gcd(p, q) == 1:
                assert classical_dedekind(p, q) + classical_dedekind(q, p) == classical_reciprocity_rhs(p, q)


def test_table_matches_literal_sum():
    for q in range(1, 20):
        for p in range(-q, q + 1):
            if gcd(p, q) == 1:
                table = dedekind_direct_table(p, q, 5)
                for (i, j), v in table.items():
                    assert v == dedekind_direct(i, j, p, q)
    assert dedekind_direct_fast(3, 2, 5, 17) == dedekind_direct(3, 2, 5, 17)


def test_bridge_small_grid():
    for q in range(1, 60):
        for p in range(q):
            if gcd(p, q) != 1:
                continue
            table = dedekind_direct_table(p, q, 8)
            for i in range(1, 8):
                for j in range(1, 9 - i):
                    assert dedekind_via_todd(i, j, p, q) == table[(i, j)], (i, j, p, q)


def test_bridge_both_todd_routes():
    for q in (7, 11, 12):
        for p in range(1, q):
            if gcd(p, q) == 1:
                for i, j in [(1, 1), (1, 2), (2, 3), (3, 3)]:
                    assert dedekind_via_todd(i, j, p, q, via="ppd") == dedekind_via_todd(i, j, p, q)


def test_correction_term():
    assert correction_term(2, 2, 5) == 0
    assert correction_term(1, 1, 2) == F(1, 2)
    f = F(7, 3)
    assert s_from_f(2, 3, 5, f) == f / 5**4


def test_periodicity():
    for q in range(2, 25):
        for p in range(q):
            if gcd(p, q) == 1:
                assert dedekind_direct_table(p + q, q, 4) == dedekind_direct_table(p, q, 4)


def test_q_equal_one():
    for i in range(6):
        for j in range(6):
            exp = (bernoulli_number(i) + (F(1, 2) if i == 1 else 0)) * (bernoulli_number(j) + (F(1, 2) if j == 1 else 0))
            assert dedekind_direct(i, j, 3, 1) == exp / (factorial(i) * factorial(j))


def test_parity_odd_part_consistency():
    # for i + j odd with i, j > 1 the Todd coefficient comes from the closed odd-part formula
    for q in range(2, 40):
        for p in range(1, q):
            if gcd(p, q) != 1:
                continue
            for i, j in [(2, 3), (3, 2), (2, 5), (4, 3)]:
                d = i + j
                f = odd_part(p, q, d)[i]
                assert s_from_f(i, j, q, f) == dedekind_direct_table(p, q, d, [(i, j)])[(i, j)]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3000), st.integers(1, 3000), st.integers(1, 4), st.integers(1, 4))
def test_bridge_random(q, p, i, j):
    if gcd(p, q) != 1:
        return
    assert dedekind_via_todd(i, j, p, q) == dedekind_direct_fast(i, j, p, q)
