"""Generalized Dedekind sums s_{i,j}(p, q).

    s_{i,j}(p, q) = 1/(i! j!) sum_{a=1}^{q} Ber^_i(<a/q>) Ber^_j(<-a p/q>)

``dedekind_direct`` evaluates the sum (O(q)); ``dedekind_via_todd`` reads
the coefficient f_{i,j} of x^i y^j in the Todd series of <(1,0), (p,q)>,
which the continued-fraction formula produces in time linear in the
expansion length, and converts with

    f_{i,j} = (-1)^i q^(i+j-1) s_{i,j} + [i == 1 or j == 1] (-1)^(i+j) q^(i+j-1) B_i B_j / (i! j!).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Iterable

from .exactmath import ber_hat, bernoulli_number, bernoulli_poly_coeffs
from .toddseries import todd_series


class DedekindError(ValueError):
    pass


def _validate(i: int, j: int, p: int, q: int) -> None:
    if i < 0 or j < 0:
        raise DedekindError(f"indices must be nonnegative, got ({i}, {j})")
    if q == 0:
        raise DedekindError("q must be nonzero")
    if q < 0:
        # The defining sum runs over a = 1..q; no convention is fixed for q < 0.
        raise DedekindError(f"q must be positive, got {q}")
    if gcd(p, q) != 1:
        raise DedekindError(f"gcd({p}, {q}) != 1")


def dedekind_direct(i: int, j: int, p: int, q: int) -> Fraction:
    """Evaluate the defining sum exactly."""
    _validate(i, j, p, q)
    total = Fraction(0)
    for a in range(1, q + 1):
        b = (-a * p) % q or q
        total += ber_hat(i, Fraction(a, q)) * ber_hat(j, Fraction(b, q))
    return total / (factorial(i) * factorial(j))


@lru_cache(maxsize=16)
def _scaled_ber_hat_table(q: int, m: int) -> tuple[int, tuple[int, ...]]:
    """(den, values) with values[a-1] = den * q^m * Ber^_m(a/q), a = 1..q, all integers."""
    coeffs = bernoulli_poly_coeffs(m)
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    den *= 2  # the averaged endpoint value carries a 1/2 at m = 1
    ints = [int(c * den) for c in coeffs]
    vals = []
    for a in range(1, q):
        acc = 0
        for k in range(m, -1, -1):
            acc = acc * a + ints[k] * q ** (m - k)
        vals.append(acc)
    top = bernoulli_number(m) + (Fraction(1, 2) if m == 1 else 0)
    vals.append(int(top * den) * q**m)
    return den, tuple(vals)


def dedekind_direct_table(
    p: int, q: int, max_degree: int, pairs: Iterable[tuple[int, int]] | None = None
) -> dict[tuple[int, int], Fraction]:
    """s_{i,j}(p, q) for all i + j <= max_degree (or just ``pairs``) from one pass over a = 1..q.

    Uses exact integer arithmetic: a -> <-a p/q> permutes 1..q, so one table
    of scaled Bernoulli values per index serves both factors.
    """
    _validate(0, 0, p, q)
    if pairs is None:
        pairs = [(i, j) for i in range(max_degree + 1) for j in range(max_degree + 1 - i)]
    pairs = list(pairs)
    for i, j in pairs:
        _validate(i, j, p, q)
    perm = [((-a * p) % q or q) - 1 for a in range(1, q + 1)]
    out = {}
    for i, j in pairs:
        di, vi = _scaled_ber_hat_table(q, i)
        dj, vj = _scaled_ber_hat_table(q, j)
        acc = sum(u * vj[perm[a]] for a, u in enumerate(vi))
        out[(i, j)] = Fraction(acc, di * dj * q ** (i + j) * factorial(i) * factorial(j))
    return out


def dedekind_direct_fast(i: int, j: int, p: int, q: int) -> Fraction:
    """Same value as ``dedekind_direct``, summed over integers instead of fractions."""
    return dedekind_direct_table(p, q, i + j, [(i, j)])[(i, j)]


def correction_term(i: int, j: int, q: int) -> Fraction:
    """Boundary correction added to the right-hand side when i == 1 or j == 1."""
    if i != 1 and j != 1:
        return Fraction(0)
    return (
        Fraction(q) ** (i + j - 1)
        * (-1) ** (i + j)
        * bernoulli_number(i)
        * bernoulli_number(j)
        / (factorial(i) * factorial(j))
    )


def f_coeff(i: int, j: int, p: int, q: int, via: str = "cf", degree: int | None = None) -> Fraction:
    """Coefficient of x^i y^j in t_(p,q); p is reduced mod q first."""
    if degree is None:
        degree = i + j
    if i + j > degree:
        raise DedekindError(f"x^{i} y^{j} exceeds configured degree {degree}")
    _validate(i, j, p, q)
    return todd_series(p % q, q, degree, via).coeff(i, j)


def s_from_f(i: int, j: int, q: int, f: Fraction) -> Fraction:
    return (-1) ** i * (f - correction_term(i, j, q)) / Fraction(q) ** (i + j - 1)


def dedekind_via_todd(i: int, j: int, p: int, q: int, via: str = "cf") -> Fraction:
    if i < 1 or j < 1:
        raise DedekindError("the Todd bridge covers i, j >= 1 only; use dedekind_direct")
    return s_from_f(i, j, q, f_coeff(i, j, p, q, via))


def classical_dedekind(p: int, q: int) -> Fraction:
    """s(p, q) = sum_{a mod q} ((a/q)) ((a p/q)) = s_{1,1}(-p, q)."""
    return dedekind_direct(1, 1, -p, q)


def classical_reciprocity_rhs(p: int, q: int) -> Fraction:
    return Fraction(-1, 4) + Fraction(p * p + q * q + 1, 12 * p * q)
