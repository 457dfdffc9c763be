"""The lattice, quadratic form and cone attached to a periodic sequence b.

A sequence b = (b_0, ..., b_{r-1}) of integers >= 2, not all 2, gives the
purely periodic continued fraction w_0 = [[b_0, ..., b_{r-1}]], the lattice
M_b = Z w_0 + Z, the vectors A_k (A_0 = 1, A_{k-1} = A_k w_k, so that
A_{k-1} + A_{k+1} = b_k A_k), the cone tau_b = <A_0, A_r> and the form
Q_b(x w_0 + y) = C x^2 - B x y + A y^2 (A, B, C the fixed-point quadratic).

All coordinates are taken in the basis {A_{-1}, A_0} = {w_0, 1}; in that
basis A_k = (-p_k, q_k) with q_k / p_k = [b_0, ..., b_{k-1}].
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cone2d import Cone2D, ConeType, classify
from .contfrac import convergents, numerator

Vec = tuple[int, int]


class QuadFieldError(ValueError):
    pass


@dataclass(frozen=True)
class BSeq:
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        e = tuple(int(v) for v in self.entries)
        if not e:
            raise QuadFieldError("empty sequence")
        if any(v < 2 for v in e):
            raise QuadFieldError(f"entries must be >= 2, got {e}")
        if all(v == 2 for v in e):
            raise QuadFieldError("entries must not all equal 2")
        object.__setattr__(self, "entries", e)

    @classmethod
    def parse(cls, text: str) -> BSeq:
        try:
            return cls(tuple(int(t) for t in text.split(",") if t.strip()))
        except ValueError as exc:
            raise QuadFieldError(f"cannot parse b-sequence {text!r}: {exc}") from None

    @property
    def r(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int) -> int:
        return self.entries[k % len(self.entries)]

    def rotate(self, k: int = 1) -> BSeq:
        k %= self.r
        return BSeq(self.entries[k:] + self.entries[:k])

    def __str__(self) -> str:
        return ",".join(map(str, self.entries))


@dataclass(frozen=True)
class QuadForm:
    """a x^2 + b x y + c y^2."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def pull_back(self, u: Sequence, v: Sequence) -> QuadForm:
        """Coefficients of Q(x u + y v)."""
        a = self(u[0], u[1])
        c = self(v[0], v[1])
        b = 2 * self.a * u[0] * v[0] + self.b * (u[0] * v[1] + u[1] * v[0]) + 2 * self.c * u[1] * v[1]
        return QuadForm(a, b, c)

    def swapped(self) -> QuadForm:
        return QuadForm(self.c, self.b, self.a)

    def scale(self, k) -> QuadForm:
        return QuadForm(k * self.a, k * self.b, k * self.c)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in (self.a, self.b, self.c))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c


@dataclass(frozen=True)
class AVector:
    index: int
    coords: Vec


@dataclass(frozen=True)
class QuadFieldData:
    b: BSeq
    q: int
    p: int
    p_prime: int
    quad: tuple[int, int, int, int]  # (A_b, B_b, C_b, D_b)
    theta: int
    epsilon_matrix: tuple[tuple[int, int], tuple[int, int]]

    @property
    def r(self) -> int:
        return self.b.r

    @property
    def form(self) -> QuadForm:
        """Q_b in the basis {A_{-1}, A_0}."""
        A, B, C, _ = self.quad
        return QuadForm(C, -B, A)

    def to_json(self) -> dict:
        return {
            "b": list(self.b.entries),
            "q": self.q,
            "p": self.p,
            "p_prime": self.p_prime,
            "quad": list(self.quad),
            "theta": self.theta,
            "epsilon_matrix": [list(row) for row in self.epsilon_matrix],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _period_matrix(b: BSeq) -> tuple[tuple[int, int], tuple[int, int]]:
    m11, m12, m21, m22 = 1, 0, 0, 1
    for bi in b.entries:
        m11, m12, m21, m22 = m11 * bi + m12, -m11, m21 * bi + m22, -m21
    return ((m11, m12), (m21, m22))


def build(b: BSeq | Sequence[int]) -> QuadFieldData:
    if not isinstance(b, BSeq):
        b = BSeq(tuple(b))
    r = b.r
    tail = b.entries[1:]
    if r == 1:
        q, p, pp = 1, 0, 0
    else:
        tab = convergents(tail)
        q, p = tab.h[-1], tab.k[-1]
        pp = 1 if r == 2 else numerator(b.entries[1:-1])
    b0 = b.entries[0]
    rest = Fraction(1 - p * pp, q)
    if rest.denominator != 1:
        raise QuadFieldError(f"p p' != 1 mod q for b = {b}")  # cannot happen for valid b
    A, B, C = q, -b0 * q + p - pp, b0 * pp + int(rest)
    eps = _period_matrix(b)
    if (eps[1][0], eps[1][1] - eps[0][0], -eps[0][1]) != (A, B, C):
        raise QuadFieldError(f"closed-form quadratic disagrees with period matrix for b = {b}")
    return QuadFieldData(b, q, p, pp, (A, B, C, B * B - 4 * A * C), b0 * q - p - pp, eps)


def a_vector(data: QuadFieldData, k: int) -> AVector:
    """Coordinates of A_k in {A_{-1}, A_0}, by running A_{k-1} + A_{k+1} = b_k A_k."""
    b = data.b
    prev, cur = (1, 0), (0, 1)  # A_{-1}, A_0
    if k >= 0:
        for i in range(k):
            prev, cur = cur, (b[i] * cur[0] - prev[0], b[i] * cur[1] - prev[1])
        return AVector(k, cur)
    nxt, cur = cur, prev  # A_0, A_{-1}
    for i in range(-1, k, -1):
        nxt, cur = cur, (b[i] * cur[0] - nxt[0], b[i] * cur[1] - nxt[1])
    return AVector(k, cur)


def epsilon_action(data: QuadFieldData, coords: Sequence[int]) -> Vec:
    """Multiplication by the unit epsilon: row-vector coords times the period matrix."""
    (m11, m12), (m21, m22) = data.epsilon_matrix
    return (coords[0] * m11 + coords[1] * m21, coords[0] * m12 + coords[1] * m22)


def q_form_pair(data: QuadFieldData, l: int, m: int) -> QuadForm:
    """Q_b(x A_l + y A_m) by direct substitution; integral by construction."""
    if l == m:
        raise QuadFieldError("q_form_pair needs l != m")
    return data.form.pull_back(a_vector(data, l).coords, a_vector(data, m).coords)


def _hk(data: QuadFieldData, i: int) -> tuple[int, int]:
    """(h_i, k_i) from h_i / k_i = [b_1, ..., b_{i-1}], extended periodically."""
    b = data.b
    h = [0, 1]
    k = [-1, 0]
    if i >= 0:
        for t in range(1, i):
            h.append(b[t] * h[-1] - h[-2])
            k.append(b[t] * k[-1] - k[-2])
        return h[i], k[i]
    hn, kn, hc, kc = 1, 0, 0, -1  # indices 1 and 0
    for t in range(0, i, -1):
        hn, kn, hc, kc = hc, kc, b[t] * hc - hn, b[t] * kc - kn
    return hc, kc


def x_form(data: QuadFieldData, i: int) -> tuple[int, int]:
    """X_i = -h_i x + (q k_i - p h_i) y as (H_i, K_i)."""
    h, k = _hk(data, i)
    return -h, data.q * k - data.p * h


def q_form_pair_theta(data: QuadFieldData, l: int, m: int) -> QuadForm:
    """Q_b(x A_l + y A_m) = (1/q) Q_Theta(H_l x + H_m y, K_l x + K_m y)."""
    if l == m:
        raise QuadFieldError("q_form_pair needs l != m")
    qt = QuadForm(1, data.theta, 1)
    (hl, kl), (hm, km) = x_form(data, l), x_form(data, m)
    out = qt.pull_back((hl, kl), (hm, km)).scale(Fraction(1, data.q))
    if not out.is_integral():
        raise QuadFieldError(f"non-integral form {out} for b = {data.b}, (l, m) = ({l}, {m})")
    return out


def tau_cone(data: QuadFieldData) -> Cone2D:
    return Cone2D(a_vector(data, 0).coords, a_vector(data, data.r).coords)


def cone_type_of_tau(data: QuadFieldData) -> ConeType:
    """Type of tau_b = <A_0, A_r>; it is (-p mod q, q) and the dual sigma_b has type (p, q)."""
    return classify(tau_cone(data))


def root_bounds_ok(data: QuadFieldData) -> bool:
    """w_0 > 1 > w_0' for w_0, w_0' = (-B +- sqrt(D)) / (2A), decided with integers only."""
    A, B, _, D = data.quad
    # w_0 > 1  <=>  sqrt(D) > 2A + B
    s = 2 * A + B
    upper = s < 0 or D > s * s
    # w_0' < 1 <=> -sqrt(D) < 2A + B
    lower = s > 0 or D > s * s
    return D > 0 and upper and lower
