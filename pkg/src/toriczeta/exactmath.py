"""Exact scalar and truncated bivariate series arithmetic.

Scalars are :class:`fractions.Fraction` throughout (exported here as ``Rat``).
Bernoulli numbers follow the number-theory convention ``B_1 = -1/2`` so that
the Todd kernel ``z / (1 - e^{-z}) = sum lambda_m z^m`` has ``lambda_1 = 1/2``.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, Sequence

Rat = Fraction
Monomial = tuple[int, int]

__all__ = [
    "Rat",
    "BiSeries",
    "SeriesError",
    "bernoulli_number",
    "bernoulli_poly_coeffs",
    "bernoulli_poly_at",
    "ber_hat",
    "lambda_coeff",
    "todd_kernel",
    "frac_part",
    "frac_bracket",
    "format_rat",
    "parse_rat",
    "exp_linear_form",
    "univariate_inverse",
]


class SeriesError(ArithmeticError):
    """Raised when a series operation would leave the representable range."""


class _BernoulliTable:
    # Shared cache; writers hold the lock, readers see either the old or the
    # extended list (list replacement is atomic).
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._numbers: list[Fraction] = [Fraction(1)]

    def number(self, m: int) -> Fraction:
        numbers = self._numbers
        if m < len(numbers):
            return numbers[m]
        with self._lock:
            numbers = list(self._numbers)
            # sum_{k<n} C(n+1, k) B_k + (n+1) B_n = 0
            for n in range(len(numbers), m + 1):
                acc = sum(comb(n + 1, k) * numbers[k] for k in range(n))
                numbers.append(-acc / (n + 1))
            self._numbers = numbers
        return numbers[m]


_TABLE = _BernoulliTable()


def bernoulli_number(m: int) -> Fraction:
    """Return B_m with B_1 = -1/2."""
    if m < 0:
        raise ValueError(f"Bernoulli index must be nonnegative, got {m}")
    return _TABLE.number(m)


def lambda_coeff(m: int) -> Fraction:
    """Coefficient of h^m in h / (1 - e^{-h}), i.e. (-1)^m B_m / m!."""
    return (-1) ** m * bernoulli_number(m) / factorial(m)


def todd_kernel(degree: int) -> list[Fraction]:
    """Coefficients lambda_0 .. lambda_degree of g(z) = z / (1 - e^{-z})."""
    return [lambda_coeff(m) for m in range(degree + 1)]


def bernoulli_poly_coeffs(m: int) -> list[Fraction]:
    """Coefficients of Ber_m in increasing powers of x."""
    return [comb(m, k) * bernoulli_number(m - k) for k in range(m + 1)]


def bernoulli_poly_at(m: int, x: Fraction | int) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(bernoulli_poly_coeffs(m)):
        acc = acc * x + c
    return acc


def ber_hat(m: int, x: Fraction | int) -> Fraction:
    """Bernoulli polynomial restricted to (0, 1], averaged at the endpoint.

    ``ber_hat(m, 1) = (Ber_m(1) + Ber_m(0)) / 2 = B_m + [m == 1] / 2``.
    """
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError(f"ber_hat is defined on (0, 1], got {x}")
    if x == 1:
        return bernoulli_number(m) + (Fraction(1, 2) if m == 1 else 0)
    return bernoulli_poly_at(m, x)


def frac_part(x: Fraction | int) -> Fraction:
    """{x} in [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def frac_bracket(x: Fraction | int) -> Fraction:
    """<x> in (0, 1]; differs from frac_part only at integers, where it is 1."""
    f = frac_part(x)
    return f if f else Fraction(1)


def format_rat(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    return Fraction(text.strip())


def _monomial_str(i: int, j: int) -> str:
    parts = []
    for var, e in (("x", i), ("y", j)):
        if e == 1:
            parts.append(var)
        elif e != 0:
            parts.append(f"{var}^{e}")
    return "*".join(parts)


class BiSeries:
    """Bivariate power series in (x, y) truncated at total degree ``degree``.

    The represented series is ``x^vx * y^vy * sum c[i, j] x^i y^j`` with
    ``0 <= i + j <= degree``.  Only ``(vx, vy) >= (-1, -1)`` is allowed, which
    covers the division by ``mult * x * y`` that turns a Todd series into its
    Laurent companion.  Zero coefficients are not stored.
    """

    __slots__ = ("degree", "valuation", "_c")

    def __init__(
        self,
        coeffs: Mapping[Monomial, Fraction | int] | None = None,
        degree: int = 0,
        valuation: Monomial = (0, 0),
    ) -> None:
        if degree < 0:
            raise SeriesError(f"negative truncation degree {degree}")
        if valuation[0] < -1 or valuation[1] < -1:
            raise SeriesError(f"valuation {valuation} below (-1, -1)")
        self.degree = degree
        self.valuation = (int(valuation[0]), int(valuation[1]))
        c: dict[Monomial, Fraction] = {}
        for (i, j), v in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise SeriesError(f"negative relative exponent {(i, j)}")
            if i + j <= degree and v:
                c[(i, j)] = Fraction(v)
        self._c = c

    # construction helpers -------------------------------------------------
    @classmethod
    def one(cls, degree: int) -> BiSeries:
        return cls({(0, 0): 1}, degree)

    @classmethod
    def monomial(cls, i: int, j: int, degree: int, coeff: Fraction | int = 1) -> BiSeries:
        return cls({(i, j): coeff}, degree)

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Fraction | int], var: str, degree: int) -> BiSeries:
        if var == "x":
            return cls({(k, 0): c for k, c in enumerate(coeffs)}, degree)
        if var == "y":
            return cls({(0, k): c for k, c in enumerate(coeffs)}, degree)
        raise ValueError(f"unknown variable {var!r}")

    # access ---------------------------------------------------------------
    def coeff(self, i: int, j: int) -> Fraction:
        """Coefficient of x^i y^j (absolute exponents)."""
        rel = (i - self.valuation[0], j - self.valuation[1])
        if rel[0] < 0 or rel[1] < 0:
            return Fraction(0)
        if rel[0] + rel[1] > self.degree:
            raise SeriesError(f"x^{i} y^{j} lies beyond truncation degree")
        return self._c.get(rel, Fraction(0))

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        """(absolute exponent, coefficient) pairs in display order."""
        vx, vy = self.valuation
        for (i, j) in sorted(self._c, key=lambda m: (m[0] + m[1], -m[0])):
            yield (i + vx, j + vy), self._c[(i, j)]

    @property
    def max_abs_degree(self) -> int:
        return self.degree + self.valuation[0] + self.valuation[1]

    def homogeneous_part(self, d: int) -> BiSeries:
        """Terms of absolute total degree d."""
        rel = d - self.valuation[0] - self.valuation[1]
        if rel > self.degree:
            raise SeriesError(f"degree {d} lies beyond truncation")
        return BiSeries(
            {m: v for m, v in self._c.items() if m[0] + m[1] == rel}, self.degree, self.valuation
        )

    def parity_part(self, parity: int) -> BiSeries:
        """Terms whose absolute total degree has the given parity (0 even, 1 odd)."""
        shift = self.valuation[0] + self.valuation[1]
        return BiSeries(
            {m: v for m, v in self._c.items() if (m[0] + m[1] + shift) % 2 == parity},
            self.degree,
            self.valuation,
        )

    def truncate(self, degree: int) -> BiSeries:
        if degree > self.degree:
            raise SeriesError("cannot extend truncation degree")
        return BiSeries(self._c, degree, self.valuation)

    # arithmetic -----------------------------------------------------------
    def _aligned(self, other: BiSeries) -> tuple[Monomial, int, dict, dict]:
        v = (min(self.valuation[0], other.valuation[0]), min(self.valuation[1], other.valuation[1]))
        out = []
        degs = []
        for s in (self, other):
            sx, sy = s.valuation[0] - v[0], s.valuation[1] - v[1]
            out.append({(i + sx, j + sy): c for (i, j), c in s._c.items()})
            degs.append(s.degree + sx + sy)
        return v, min(degs), out[0], out[1]

    def __add__(self, other: BiSeries) -> BiSeries:
        if not isinstance(other, BiSeries):
            return NotImplemented
        v, deg, a, b = self._aligned(other)
        for m, c in b.items():
            a[m] = a.get(m, 0) + c
        return BiSeries(a, deg, v)

    def __neg__(self) -> BiSeries:
        return BiSeries({m: -c for m, c in self._c.items()}, self.degree, self.valuation)

    def __sub__(self, other: BiSeries) -> BiSeries:
        return self + (-other)

    def scale(self, k: Fraction | int) -> BiSeries:
        return BiSeries({m: k * c for m, c in self._c.items()}, self.degree, self.valuation)

    def __mul__(self, other: BiSeries | Fraction | int) -> BiSeries:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, BiSeries):
            return NotImplemented
        deg = min(self.degree, other.degree)
        v = (self.valuation[0] + other.valuation[0], self.valuation[1] + other.valuation[1])
        out: dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._c.items():
            room = deg - i1 - j1
            if room < 0:
                continue
            for (i2, j2), c2 in other._c.items():
                if i2 + j2 <= room:
                    m = (i1 + i2, j1 + j2)
                    out[m] = out.get(m, 0) + c1 * c2
        return BiSeries(out, deg, v)

    __rmul__ = __mul__

    def shift(self, a: int, b: int) -> BiSeries:
        """Multiply by x^a y^b (a, b may be negative down to the valuation floor)."""
        return BiSeries(self._c, self.degree, (self.valuation[0] + a, self.valuation[1] + b))

    def substitute_linear(self, matrix: Sequence[Sequence[Fraction | int]]) -> BiSeries:
        """(x, y) <- (a x + b y, c x + d y) for matrix [[a, b], [c, d]]."""
        if self.valuation != (0, 0):
            raise SeriesError("linear substitution needs a power series (valuation (0, 0))")
        (a, b), (c, d) = matrix
        deg = self.degree
        first = _linear_powers(Fraction(a), Fraction(b), deg)
        second = _linear_powers(Fraction(c), Fraction(d), deg)
        out: dict[Monomial, Fraction] = {}
        for (i, j), coef in self._c.items():
            prod = _hmul(first[i], second[j])
            n = i + j
            for k, v in enumerate(prod):
                if v:
                    m = (k, n - k)
                    out[m] = out.get(m, 0) + coef * v
        return BiSeries(out, deg)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        v, deg, a, b = self._aligned(other)
        keys = set(a) | set(b)
        return all(a.get(m, 0) == b.get(m, 0) for m in keys if m[0] + m[1] <= deg)

    def __hash__(self) -> int:  # pragma: no cover - series are compared, not hashed
        raise TypeError("BiSeries is unhashable")

    def is_zero(self) -> bool:
        return not self._c

    def __repr__(self) -> str:
        return f"BiSeries({self}, degree={self.degree}, valuation={self.valuation})"

    def __str__(self) -> str:
        terms = []
        for (i, j), c in self.items():
            mono = _monomial_str(i, j)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{format_rat(mag)}*{mono}"
            else:
                body = format_rat(mag)
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_records(self) -> list[dict]:
        return [{"i": i, "j": j, "value": format_rat(c)} for (i, j), c in self.items()]


# homogeneous polynomial helpers: index k holds the coefficient of x^k y^(n-k)
def _hmul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return out


def _linear_powers(a, b, n: int) -> list[list]:
    """Powers 0..n of the linear form a x + b y as homogeneous coefficient lists."""
    base = [b, a]
    out = [[1]]
    for _ in range(n):
        out.append(_hmul(out[-1], base))
    return out


def exp_linear_form(alpha: Fraction | int, beta: Fraction | int, degree: int) -> BiSeries:
    """Truncated expansion of e^{alpha x + beta y}."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    out = {}
    for i in range(degree + 1):
        ai = alpha**i / factorial(i)
        for j in range(degree - i + 1):
            out[(i, j)] = ai * beta**j / factorial(j)
    return BiSeries(out, degree)


def univariate_inverse(coeffs: Sequence[Fraction | int], degree: int) -> list[Fraction]:
    """Coefficients of 1/f for a power series f with nonzero constant term."""
    c0 = Fraction(coeffs[0])
    if c0 == 0:
        raise SeriesError("series with zero constant term has no power-series inverse")
    coeffs = [Fraction(c) for c in coeffs] + [Fraction(0)] * max(0, degree + 1 - len(coeffs))
    inv = [1 / c0]
    for n in range(1, degree + 1):
        inv.append(-sum(coeffs[k] * inv[n - k] for k in range(1, n + 1)) / c0)
    return inv


def power_sums(values: Iterable[tuple[int, int]], degree: int) -> dict[Monomial, int]:
    """sum_k a_k^i b_k^j over pairs (a_k, b_k), for all i + j <= degree (integers)."""
    out = {(i, j): 0 for i in range(degree + 1) for j in range(degree + 1 - i)}
    for a, b in values:
        apow = 1
        for i in range(degree + 1):
            term = apow
            for j in range(degree + 1 - i):
                out[(i, j)] += term
                term *= b
            apow *= a
    return out
