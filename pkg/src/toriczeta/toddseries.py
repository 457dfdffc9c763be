"""Todd power series of two-dimensional cones.

For the cone of type (p, q), i.e. <(1,0), (p,q)> in Z^2, the Todd series
t_(p,q)(x, y) is computed three ways:

* ``todd_ppd``: summing over the q lattice points of the half-open
  fundamental parallelepiped of the dual cone (exact; the reference oracle);
* ``todd_cf``: closed forms in the convergents of a negative-regular
  continued fraction, cost linear in the expansion length;
* ``todd_cyclotomic``: a sum over q-th roots of unity in multiprecision
  complex floating point (numerical check only).

Variable x belongs to the ray (1,0), y to the ray (p,q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

import mpmath

from .contfrac import convergents, ncf_expand
from .exactmath import BiSeries, lambda_coeff, power_sums, todd_kernel

__all__ = [
    "ToddSeries",
    "ApproxToddSeries",
    "ReciprocityReport",
    "make_P",
    "make_R",
    "todd_nonsingular",
    "todd_ppd",
    "todd_cf",
    "todd_cyclotomic",
    "todd_series",
    "s_series",
    "check_reciprocity",
    "check_even_odd_identity",
    "odd_part",
]


class ToddError(ValueError):
    pass


def _check_type(p: int, q: int) -> None:
    if q < 1 or not 0 <= p < q or gcd(p, q) != 1:
        raise ToddError(f"need coprime 0 <= p < q, got (p, q) = ({p}, {q})")


@dataclass(frozen=True)
class ToddSeries:
    p: int
    q: int
    degree: int
    series: BiSeries
    method: str = ""

    def coeff(self, i: int, j: int) -> Fraction:
        return self.series.coeff(i, j)

    def part(self, d: int) -> BiSeries:
        return self.series.homogeneous_part(d)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "degree": self.degree,
            "coefficients": self.series.to_records(),
        }

    def __str__(self) -> str:
        return str(self.series)


# --- P_d and R_d ------------------------------------------------------------
# Homogeneous polynomials are coefficient lists indexed by the x-exponent:
# [c_0, ..., c_n] stands for sum c_k x^k y^(n-k).


def make_P(d: int) -> list[Fraction]:
    """P_d(X, Y) = eps_d sum_{i+j=d, i,j>0} lambda_i lambda_j X^(i-1) Y^(j-1); eps_2 = -1."""
    if d < 2 or d % 2:
        raise ToddError(f"P_d needs an even d >= 2, got {d}")
    eps = -1 if d == 2 else 1
    return [eps * lambda_coeff(k + 1) * lambda_coeff(d - 1 - k) for k in range(d - 1)]


def make_R(d: int) -> list[int]:
    """R_d(X, Y) = (X^(d-1) + Y^(d-1)) / (X + Y) = X^(d-2) - X^(d-3) Y + ... + Y^(d-2)."""
    if d < 2 or d % 2:
        raise ToddError(f"R_d needs an even d >= 2, got {d}")
    return [(-1) ** (d - 2 - k) for k in range(d - 1)]


def _hmul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return out


def _hadd(acc: list, b: list, scale=1) -> None:
    for k, v in enumerate(b):
        acc[k] += scale * v


def _powers(form: tuple[int, int], n: int) -> list[list[int]]:
    base = [form[1], form[0]]
    out = [[1]]
    for _ in range(n):
        out.append(_hmul(out[-1], base))
    return out


def _to_series(poly: list, degree: int) -> BiSeries:
    n = len(poly) - 1
    return BiSeries({(k, n - k): c for k, c in enumerate(poly) if c}, degree)


def odd_part(p: int, q: int, d: int) -> list[Fraction]:
    """Degree-d part of t_(p,q) for odd d: (1/2) lambda_{d-1} q^(d-1) x y (x^(d-2) + y^(d-2))."""
    if d % 2 == 0:
        raise ToddError("odd_part needs odd d")
    if d == 1:
        return [Fraction(1, 2), Fraction(1, 2)]
    c = lambda_coeff(d - 1) * q ** (d - 1) / 2
    poly = [Fraction(0)] * (d + 1)
    poly[d - 1] += c  # x^(d-1) y
    poly[1] += c  # x y^(d-1)
    return poly


def _cf_even_part(entries, forms, q: int, d: int, sign: int, boundary: tuple[int, int], half: bool):
    """Shared assembly of the even continued-fraction formulas.

    Returns  sign * q x y [ sum_i P_d(F_{i-1}, F_i) + lambda_d sum_i e_i R_d(F_{i-1}, F_{i+1}) ]
             + lambda_d (boundary[0] x F_1^(d-1) + boundary[1] y F_{s-1}^(d-1))
             + [half] (1/2) q x y   (only at d = 2)
    """
    s = len(forms) - 1
    lam_d = lambda_coeff(d)
    pw = [_powers(f, d - 1) for f in forms]
    P = make_P(d)
    R = make_R(d)
    # Integer sums first, rational weights last.
    by_split = [[0] * (d - 1) for _ in range(d - 1)]
    for k, weight in enumerate(P):
        if not weight:
            continue
        acc = by_split[k]
        for i in range(1, s + 1):
            _hadd(acc, _hmul(pw[i - 1][k], pw[i][d - 2 - k]))
    inner = [Fraction(0)] * (d - 1)
    for k, weight in enumerate(P):
        if weight:
            _hadd(inner, by_split[k], weight)
    rsum = [0] * (d - 1)
    for i in range(1, s):
        term = [0] * (d - 1)
        for k, rc in enumerate(R):
            _hadd(term, _hmul(pw[i - 1][k], pw[i + 1][d - 2 - k]), rc)
        _hadd(rsum, term, entries[i - 1])
    _hadd(inner, rsum, lam_d)
    out = [Fraction(0)] * (d + 1)
    for k, c in enumerate(inner):
        out[k + 1] += sign * q * c
    for k, c in enumerate(pw[1][d - 1]):
        out[k + 1] += boundary[0] * lam_d * c
    for k, c in enumerate(pw[s - 1][d - 1]):
        out[k] += boundary[1] * lam_d * c
    if half and d == 2:
        out[1] += Fraction(q, 2)
    return out


def _even_part_dual(p: int, q: int, d: int) -> list[Fraction]:
    # expansion of q/p; X_i = -h_i x + (q k_i - p h_i) y
    entries = ncf_expand(q, p)
    tab = convergents(entries, q, p)
    forms = [(-h, q * k - p * h) for h, k in zip(tab.h, tab.k)]
    return _cf_even_part(entries, forms, q, d, +1, (-1, -1), True)


def _even_part_direct(p: int, q: int, d: int) -> list[Fraction]:
    # expansion of q/(q-p); L_i = g_i x + (q d_i + (p - q) g_i) y
    entries = ncf_expand(q, q - p)
    tab = convergents(entries, q, q - p)
    forms = [(g, q * dl + (p - q) * g) for g, dl in zip(tab.h, tab.k)]
    return _cf_even_part(entries, forms, q, d, -1, (1, -1), False)


def _assemble(parts: dict[int, list], degree: int) -> BiSeries:
    coeffs = {}
    for d, poly in parts.items():
        for k, c in enumerate(poly):
            if c:
                coeffs[(k, d - k)] = c
    return BiSeries(coeffs, degree)


@lru_cache(maxsize=256)
def todd_nonsingular(degree: int) -> ToddSeries:
    """g(x) g(y) with g(z) = z / (1 - e^{-z})."""
    g = todd_kernel(degree)
    coeffs = {(i, j): g[i] * g[j] for i in range(degree + 1) for j in range(degree + 1 - i)}
    return ToddSeries(0, 1, degree, BiSeries(coeffs, degree), "nonsingular")


@lru_cache(maxsize=1024)
def todd_ppd(p: int, q: int, degree: int) -> ToddSeries:
    """Parallelepiped expansion

        t = (1/q) g(q x) g(q y) sum_{k=0}^{q-1} exp(-k x - (k p mod q) y).
    """
    _check_type(p, q)
    sums = power_sums(((k, (k * p) % q) for k in range(q)), degree)
    expsum = {
        (i, j): Fraction((-1) ** (i + j) * s, factorial(i) * factorial(j)) for (i, j), s in sums.items()
    }
    g = todd_kernel(degree)
    gq = [c * q**m for m, c in enumerate(g)]
    kernel = BiSeries(
        {(i, j): gq[i] * gq[j] / q for i in range(degree + 1) for j in range(degree + 1 - i)}, degree
    )
    return ToddSeries(p, q, degree, kernel * BiSeries(expsum, degree), "ppd")


def cf_length(p: int, q: int, convention: str) -> int:
    if convention == "dual":
        return len(ncf_expand(q, p))
    return len(ncf_expand(q, q - p))


@lru_cache(maxsize=1024)
def todd_cf(p: int, q: int, degree: int, convention: str = "auto") -> ToddSeries:
    """Continued-fraction closed form for t_(p,q), degree by degree.

    ``convention`` picks the expansion: ``"dual"`` uses q/p (the
    desingularization of the dual cone), ``"direct"`` uses q/(q-p) (the
    desingularization of the cone itself), ``"auto"`` the shorter one.
    Odd degrees use the closed odd-part formula.
    """
    _check_type(p, q)
    if convention not in ("auto", "dual", "direct"):
        raise ToddError(f"unknown convention {convention!r}")
    if p == 0:
        return ToddSeries(0, 1, degree, todd_nonsingular(degree).series, "cf")
    if convention == "auto":
        convention = "dual" if cf_length(p, q, "dual") <= cf_length(p, q, "direct") else "direct"
    even = _even_part_dual if convention == "dual" else _even_part_direct
    parts: dict[int, list] = {0: [Fraction(1)]}
    for d in range(1, degree + 1):
        parts[d] = odd_part(p, q, d) if d % 2 else even(p, q, d)
    return ToddSeries(p, q, degree, _assemble(parts, degree), "cf")


def todd_series(p: int, q: int, degree: int, method: str = "cf") -> ToddSeries:
    if method == "cf":
        return todd_cf(p, q, degree)
    if method == "ppd":
        return todd_ppd(p, q, degree)
    if method == "nonsingular":
        if (p, q) != (0, 1):
            raise ToddError("the nonsingular closed form only covers type (0, 1)")
        return todd_nonsingular(degree)
    raise ToddError(f"unknown exact method {method!r}")


# --- cyclotomic ---------------------------------------------------------------


@dataclass(frozen=True)
class ApproxToddSeries:
    p: int
    q: int
    degree: int
    coeffs: dict  # (i, j) -> mpmath.mpc
    dps: int

    def coeff(self, i: int, j: int):
        return self.coeffs.get((i, j), mpmath.mpc(0))

    @property
    def max_imag(self) -> float:
        return max((float(abs(c.imag)) for c in self.coeffs.values()), default=0.0)

    def max_deviation(self, exact: ToddSeries) -> float:
        worst = 0.0
        for i in range(self.degree + 1):
            for j in range(self.degree + 1 - i):
                ex = exact.coeff(i, j)
                diff = self.coeff(i, j) - mpmath.mpf(ex.numerator) / ex.denominator
                worst = max(worst, float(abs(diff)))
        return worst


def _inverse_one_minus_c_exp(c, n: int) -> list:
    """Taylor coefficients of 1 / (1 - c e^{-z}) up to z^n, c != 1."""
    f = [1 - c] + [-c * (-1) ** m / mpmath.factorial(m) for m in range(1, n + 1)]
    inv = [1 / f[0]]
    for m in range(1, n + 1):
        inv.append(-mpmath.fsum(f[k] * inv[m - k] for k in range(1, m + 1)) / f[0])
    return inv


def todd_cyclotomic(p: int, q: int, degree: int, dps: int = 40) -> ApproxToddSeries:
    """sum over omega^q = 1 of x y / ((1 - omega^{-p} e^{-x}) (1 - omega e^{-y}))."""
    _check_type(p, q)
    with mpmath.workdps(dps):
        g = [mpmath.mpf(c.numerator) / c.denominator for c in todd_kernel(degree)]
        acc = {(i, j): mpmath.mpc(g[i] * g[j]) for i in range(degree + 1) for j in range(degree + 1 - i)}
        for k in range(1, q):
            w = mpmath.expjpi(mpmath.mpf(2 * k) / q)
            fx = _inverse_one_minus_c_exp(mpmath.expjpi(mpmath.mpf(-2 * k * p) / q), degree)
            fy = _inverse_one_minus_c_exp(w, degree)
            for i in range(1, degree + 1):
                for j in range(1, degree + 1 - i):
                    acc[(i, j)] += fx[i - 1] * fy[j - 1]
        coeffs = {m: +v for m, v in acc.items()}
    return ApproxToddSeries(p, q, degree, coeffs, dps)


# --- Laurent companion, reciprocity, parity ----------------------------------


def s_series(t: ToddSeries) -> BiSeries:
    """s = t / (q x y) as a Laurent series with valuation (-1, -1)."""
    return t.series.scale(Fraction(1, t.q)).shift(-1, -1)


@dataclass(frozen=True)
class ReciprocityReport:
    p: int
    q: int
    degree: int
    residual: BiSeries

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    def __bool__(self) -> bool:
        return self.ok


def check_reciprocity(p: int, q: int, degree: int, method: str = "ppd") -> ReciprocityReport:
    """Subdivide the quadrant at (p, q) and compare Laurent companions.

    The identity s_(p,q)(x - p y/q, y/q) + s_(q,p)(y - q x/p, x/p) = s_(0,1)(x, y)
    is checked after clearing the non-monomial denominators, i.e.

        q x t_(p,q)(x - p y/q, y/q) - p y t_(q,p)(y - q x/p, x/p) - (q x - p y) t_(0,1)(x, y) = 0

    through total degree ``degree + 1``.  The type (q, p) is reduced to
    (q mod p, p) by periodicity.
    """
    if not 0 < p < q or gcd(p, q) != 1:
        raise ToddError(f"reciprocity needs coprime 0 < p < q, got ({p}, {q})")
    first = todd_series(p, q, degree, method).series.substitute_linear(
        [[1, Fraction(-p, q)], [0, Fraction(1, q)]]
    )
    second = todd_series(q % p, p, degree, method).series.substitute_linear(
        [[Fraction(-q, p), 1], [Fraction(1, p), 0]]
    )
    base = todd_nonsingular(degree).series
    lhs = first.shift(1, 0).scale(q) - second.shift(0, 1).scale(p)
    rhs = base.shift(1, 0).scale(q) - base.shift(0, 1).scale(p)
    return ReciprocityReport(p, q, degree, lhs - rhs)


def check_even_odd_identity(p: int, q: int, degree: int, method: str = "cf") -> bool:
    """t(h1,h2) - g(q h1) h2 / 2 - g(q h2) h1 / 2 == t_even(h1,h2) - q h1 h2 / 2 through ``degree``."""
    t = todd_series(p, q, degree, method).series
    g = [c * q**m for m, c in enumerate(todd_kernel(degree))]
    one_dim = BiSeries({(m, 1): g[m] for m in range(degree)}, degree) + BiSeries(
        {(1, m): g[m] for m in range(degree)}, degree
    )
    lhs = t - one_dim.scale(Fraction(1, 2))
    rhs = t.parity_part(0) - BiSeries({(1, 1): Fraction(q, 2)}, degree)
    return lhs == rhs
