"""Values zeta_{Q,tau}(-n) of cone zeta functions attached to binary quadratic forms.

For a cone tau and a form Q positive on tau minus the origin,

    zeta_{Q,tau}(s) = sum_{a in tau cap M} wt(tau, a) Q(a)^(-s)

with weight 1 inside, 1/2 on the boundary rays and 0 at the origin.  Two
exact routes are provided:

* ``zeta_field`` evaluates the closed formula for the triple (M_b, Q_b, tau_b)
  as a sum of Gaussian derivatives over consecutive pairs of A-vectors;
* ``zeta_general`` works for any (tau, Q) by applying the degree 2n+2 Todd
  operator of the dual cone to the Gaussian integral over the shifted cone.

The diamond operation P(d/dx, d/dy) <> f means: apply the differential
operator and evaluate at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .cone2d import Cone2D, classify
from .exactmath import format_rat, lambda_coeff
from .quadfield import BSeq, QuadFieldData, QuadForm, a_vector, build, q_form_pair, tau_cone
from .toddseries import make_P as _P_coeffs
from .toddseries import make_R as _R_coeffs
from .toddseries import todd_series


class ZetaError(ValueError):
    pass


FormLike = QuadForm | Sequence


def _abc(Q: FormLike) -> tuple[Fraction, Fraction, Fraction]:
    if isinstance(Q, QuadForm):
        return Q.as_tuple()
    a, b, c = Q
    return Fraction(a), Fraction(b), Fraction(c)


@dataclass(frozen=True)
class DiffPoly:
    """Homogeneous polynomial sum_k coeffs[k] X^k Y^(deg-k) in the symbols X = d/dx, Y = d/dy."""

    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def terms(self):
        deg = self.degree
        for k, c in enumerate(self.coeffs):
            if c:
                yield k, deg - k, c

    def diamond(self, Q: FormLike) -> Fraction:
        """self(d/dx, d/dy) <> e^{-Q}."""
        return sum((c * gaussian_partial(i, j, Q) for i, j, c in self.terms()), Fraction(0))

    def __str__(self) -> str:
        out = ""
        for i, j, c in sorted(self.terms(), key=lambda t: -t[0]):
            mono = "*".join(s for s in (_pw("X", i), _pw("Y", j)) if s)
            mag = abs(c)
            body = mono if mono and mag == 1 else f"{format_rat(mag)}*{mono}" if mono else format_rat(mag)
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out or "0"


def _pw(s: str, e: int) -> str:
    return "" if e == 0 else s if e == 1 else f"{s}^{e}"


def make_P(d: int) -> DiffPoly:
    return DiffPoly(tuple(Fraction(c) for c in _P_coeffs(d)))


def make_R(d: int) -> DiffPoly:
    return DiffPoly(tuple(Fraction(c) for c in _R_coeffs(d)))


# --- Gaussian derivatives ---------------------------------------------------


def gaussian_partial(i: int, j: int, Q: FormLike) -> Fraction:
    """(d/dx)^i (d/dy)^j <> e^{-(a x^2 + b x y + c y^2)}, read off as i! j! [x^i y^j] e^{-Q}.

    Odd i + j gives 0.
    """
    if i < 0 or j < 0:
        raise ZetaError("derivative orders must be nonnegative")
    if (i + j) % 2:
        return Fraction(0)
    a, b, c = _abc(Q)
    k = (i + j) // 2
    # (-Q)^k / k! as a homogeneous coefficient list in x-exponent
    base = [-c, -b, -a]
    poly = [Fraction(1)]
    for _ in range(k):
        nxt = [Fraction(0)] * (len(poly) + 2)
        for s, u in enumerate(poly):
            if u:
                for t, v in enumerate(base):
                    nxt[s + t] += u * v
        poly = nxt
    return factorial(i) * factorial(j) * poly[i] / factorial(k)


def gaussian_partial_closed(i: int, j: int, Q: FormLike) -> Fraction:
    """Closed form i! j! (-1)^k sum_t a^((i-t)/2) b^t c^((j-t)/2) / (((i-t)/2)! t! ((j-t)/2)!)."""
    if (i + j) % 2:
        return Fraction(0)
    a, b, c = _abc(Q)
    total = Fraction(0)
    for t in range(i % 2, min(i, j) + 1, 2):
        al, ga = (i - t) // 2, (j - t) // 2
        total += a**al * b**t * c**ga / (factorial(al) * factorial(t) * factorial(ga))
    return factorial(i) * factorial(j) * (-1) ** ((i + j) // 2) * total


def gaussian_halfline(n: int, Q: FormLike) -> Fraction:
    """int_0^oo (d/dx)^(2n-1) <> e^{-(a x^2 + b x y + c y^2)} dy, for n >= 1 and c > 0."""
    if n < 1:
        raise ZetaError(f"gaussian_halfline needs n >= 1, got {n}")
    a, b, c = _abc(Q)
    if c <= 0:
        raise ZetaError(f"gaussian_halfline diverges for c = {c} <= 0")
    s = sum(
        (
            (-1) ** r * Fraction(factorial(n - 1 - r), factorial(r) * factorial(2 * n - 1 - 2 * r))
            * a**r * b ** (2 * n - 1 - 2 * r) * c**r
            for r in range(n)
        ),
        Fraction(0),
    )
    return -Fraction(factorial(2 * n - 1)) / (2 * c**n) * s


def gaussian_halfline_moment(n: int, Q: FormLike) -> Fraction:
    """Same integral via the moments int_0^oo y^m e^{-c y^2} dy = ((m-1)/2)! / (2 c^((m+1)/2)), m odd."""
    if n < 1:
        raise ZetaError(f"gaussian_halfline needs n >= 1, got {n}")
    a, b, c = _abc(Q)
    if c <= 0:
        raise ZetaError(f"gaussian_halfline diverges for c = {c} <= 0")
    m = 2 * n - 1
    total = Fraction(0)
    for beta in range(1, m + 1, 2):
        alpha = (m - beta) // 2
        coeff = Fraction((-a) ** alpha * (-b) ** beta) / (factorial(alpha) * factorial(beta))
        total += coeff * factorial((beta - 1) // 2) / (2 * c ** ((beta + 1) // 2))
    return factorial(m) * total


# --- field route --------------------------------------------------------------


def _as_data(b: BSeq | QuadFieldData | Sequence[int]) -> QuadFieldData:
    if isinstance(b, QuadFieldData):
        return b
    return build(b)


def zeta_field(b: BSeq | QuadFieldData | Sequence[int], n: int) -> Fraction:
    """zeta_{Q_b, tau_b}(-n) from the periodic closed formula."""
    if n < 0:
        raise ZetaError(f"n must be nonnegative, got {n}")
    data = _as_data(b)
    d = 2 * n + 2
    P, R = make_P(d), make_R(d)
    lam = lambda_coeff(d)
    total = Fraction(0)
    for i in range(1, data.r + 1):
        total += P.diamond(q_form_pair(data, i - 1, i))
        total += lam * data.b[i] * R.diamond(q_form_pair(data, i - 1, i + 1))
    return (-1) ** n * factorial(n) * total


def zeta_zero(b: BSeq | Sequence[int]) -> Fraction:
    seq = b if isinstance(b, BSeq) else BSeq(tuple(b))
    return Fraction(sum(v - 3 for v in seq.entries), 12)


def error_term(b: BSeq | QuadFieldData | Sequence[int], n: int) -> Fraction:
    """E_{2n+2}(b): the wrap-around R-term against the boundary integrals; vanishes identically."""
    data = _as_data(b)
    q, p, pp, b0, th = data.q, data.p, data.p_prime, data.b[0], data.theta
    d = 2 * n + 2
    L = q * pp * b0 + 1 - p * pp
    M = q * b0 * th + 2 * (p * pp - 1)
    N = q * p * b0 + 1 - p * pp
    r_term = -b0 * make_R(d).diamond((Fraction(L, q), Fraction(M, q), Fraction(N, q)))
    q_theta = (1, th, 1)
    m = 2 * n + 1

    def boundary(slope: int) -> Fraction:
        # int_0^oo (dx + slope dy)^m |_{x=0} e^{-Q_Theta} dy, expanded binomially
        s = gaussian_halfline(n + 1, q_theta)
        for k in range(1, m + 1):
            s -= comb(m, k) * slope**k * gaussian_partial(m - k, k - 1, q_theta)
        return s

    integral = boundary(p) + boundary(pp)
    return lambda_coeff(d) * (r_term - integral / Fraction(q) ** (n + 1))


# --- general route ---------------------------------------------------------


def is_positive_on_cone(tau: Cone2D, Q: FormLike) -> bool:
    """Exact test that Q > 0 on tau minus the origin, via the quadratic Q(r1 + s (r2 - r1)), s in [0, 1]."""
    a, b, c = _abc(Q)
    form = QuadForm(a, b, c)
    r1, r2 = tau.ray1, tau.ray2
    d = (r2[0] - r1[0], r2[1] - r1[1])
    f0 = form(*r1)
    f1 = form(*r2)
    if f0 <= 0 or f1 <= 0:
        return False
    alpha = form(*d)
    beta = 2 * a * r1[0] * d[0] + b * (r1[0] * d[1] + r1[1] * d[0]) + 2 * c * r1[1] * d[1]
    if alpha <= 0:
        return True  # concave on [0, 1], so the endpoints bound it below
    vertex = -beta / (2 * alpha)
    if 0 < vertex < 1:
        return f0 - beta * beta / (4 * alpha) > 0
    return True


def zeta_general(tau: Cone2D, Q: FormLike, n: int) -> Fraction:
    """zeta_{Q,tau}(-n) for Q given in the lattice coordinates of tau's ambient lattice."""
    if n < 0:
        raise ZetaError(f"n must be nonnegative, got {n}")
    a, b, c = _abc(Q)
    if not is_positive_on_cone(tau, (a, b, c)):
        raise ZetaError(f"form {(a, b, c)} is not positive on {tau}")
    dual = tau.dual()
    rho1, rho2 = dual.ray1, dual.ray2
    ctype = classify(dual)
    p, q = ctype.p, ctype.q
    det = rho1[0] * rho2[1] - rho1[1] * rho2[0]
    if abs(det) != q:
        raise ZetaError("dual cone multiplicity mismatch")  # internal consistency
    # lattice point u = R^{-1} s, R with rows rho1, rho2; s = (<rho1,u>, <rho2,u>)
    e1 = (Fraction(rho2[1], det), Fraction(-rho2[0], det))
    e2 = (Fraction(-rho1[1], det), Fraction(rho1[0], det))
    qt = QuadForm(a, b, c).pull_back(e1, e2)
    qt_swapped = qt.swapped()
    d = 2 * n + 2
    todd = todd_series(p, q, d).part(d)

    def term(i: int, j: int) -> Fraction:
        if i >= 1 and j >= 1:
            return gaussian_partial(i - 1, j - 1, qt) / q
        if j == 0:
            return -gaussian_halfline(i // 2, qt) / q
        return -gaussian_halfline(j // 2, qt_swapped) / q

    total = sum((coef * term(i, j) for (i, j), coef in todd.items()), Fraction(0))
    if n == 0:
        total -= Fraction(q, 2) * term(1, 1)
    return (-1) ** n * factorial(n) * total


def zeta_general_field(b: BSeq | QuadFieldData | Sequence[int], n: int) -> Fraction:
    """zeta_general on (tau_b, Q_b)."""
    data = _as_data(b)
    return zeta_general(tau_cone(data), data.form, n)


def subdivided_zeta(b: BSeq | QuadFieldData | Sequence[int], k: int, n: int) -> tuple[Fraction, Fraction]:
    """zeta_general on <A_0, A_k> and <A_k, A_r>, 0 < k < r."""
    data = _as_data(b)
    if not 0 < k < data.r:
        raise ZetaError(f"subdivision index must satisfy 0 < k < r = {data.r}")
    a0, ak, ar = (a_vector(data, t).coords for t in (0, k, data.r))
    return zeta_general(Cone2D(a0, ak), data.form, n), zeta_general(Cone2D(ak, ar), data.form, n)
