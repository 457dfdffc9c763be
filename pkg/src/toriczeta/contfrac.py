"""Negative-regular (Hirzebruch-Jung) continued fractions.

``[b_1, ..., b_k]`` denotes ``b_1 - 1/(b_2 - 1/(... - 1/b_k))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence


class ContinuedFractionError(ValueError):
    pass


def ncf_expand(q: int, p: int) -> list[int]:
    """Expand q/p, 0 < p <= q coprime, by the ceiling algorithm."""
    if not 0 < p <= q:
        raise ContinuedFractionError(f"need 0 < p <= q, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise ContinuedFractionError(f"gcd({p}, {q}) != 1")
    out = []
    while p:
        b = -(-q // p)
        out.append(b)
        q, p = p, b * p - q
    return out


def ncf_eval(entries: Sequence[int]) -> Fraction:
    if not entries:
        raise ContinuedFractionError("empty continued fraction")
    t = Fraction(entries[-1])
    for b in reversed(entries[:-1]):
        if t == 0:
            raise ContinuedFractionError(f"division by zero while folding {list(entries)}")
        t = b - 1 / t
    return t


def numerator(entries: Sequence[int]) -> int:
    """Numerator of [entries] from the convergent recursion (1 for the empty list)."""
    h_prev, h = 0, 1
    for b in entries:
        h_prev, h = h, b * h - h_prev
    return h


@dataclass(frozen=True)
class ConvergentTable:
    """Pairs (h_i, k_i), i = 0..r, with h_i / k_i = [b_1, ..., b_{i-1}].

    Starts from (h_0, k_0) = (0, -1) and (h_1, k_1) = (1, 0) and follows
    h_{i+1} = b_i h_i - h_{i-1}; the last pair is (q, p).
    """

    entries: tuple[int, ...]
    h: tuple[int, ...]
    k: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.h)

    def pair(self, i: int) -> tuple[int, int]:
        return self.h[i], self.k[i]

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.h, self.k))


def convergents(entries: Sequence[int], q: int | None = None, p: int | None = None) -> ConvergentTable:
    h = [0, 1]
    k = [-1, 0]
    for b in entries:
        h.append(b * h[-1] - h[-2])
        k.append(b * k[-1] - k[-2])
    if q is not None and (h[-1], k[-1]) != (q, p):
        raise ContinuedFractionError(f"{list(entries)} does not expand {q}/{p}")
    return ConvergentTable(tuple(entries), tuple(h), tuple(k))


def periodic_fixed_point(b: Sequence[int]) -> tuple[int, int, int, int]:
    """Integer quadratic A w^2 + B w + C = 0 solved by the purely periodic [[b_0, ..., b_{r-1}]].

    Returns (A, B, C, D) with D = B^2 - 4AC.  The Moebius map of one period is
    the product of [[b_i, -1], [1, 0]]; its fixed point equation gives
    A = q, B = -b_0 q + p - p', C = b_0 p' + (1 - p p') / q.
    """
    from .quadfield import BSeq  # validation lives with the sequence type

    seq = BSeq(tuple(b))
    a11, a12, a21, a22 = 1, 0, 0, 1
    for bi in seq.entries:
        a11, a12, a21, a22 = a11 * bi + a12, -a11, a21 * bi + a22, -a21
    # w = (a11 w + a12) / (a21 w + a22)
    A, B, C = a21, a22 - a11, -a12
    return A, B, C, B * B - 4 * A * C
