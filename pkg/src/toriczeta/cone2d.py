"""Two-dimensional rational cones up to lattice equivalence."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .contfrac import convergents, ncf_expand

Vec = tuple[int, int]
Mat = tuple[tuple[int, int], tuple[int, int]]


class ConeError(ValueError):
    pass


def _primitive(v: Vec) -> Vec:
    g = gcd(v[0], v[1])
    if g == 0:
        raise ConeError("zero vector is not a ray")
    return (v[0] // g, v[1] // g)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s a + t b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        k = a // b
        a, b = b, a - k * b
        s0, s1 = s1, s0 - k * s1
        t0, t1 = t1, t0 - k * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def det2(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def apply(m: Mat, v: Vec) -> Vec:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def matmul(a: Mat, b: Mat) -> Mat:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


@dataclass(frozen=True)
class Cone2D:
    """Cone spanned by two ordered rays; rays are stored primitive."""

    ray1: Vec
    ray2: Vec

    def __post_init__(self) -> None:
        r1, r2 = _primitive(tuple(self.ray1)), _primitive(tuple(self.ray2))
        if det2(r1, r2) == 0:
            raise ConeError(f"rays {r1} and {r2} are parallel")
        object.__setattr__(self, "ray1", r1)
        object.__setattr__(self, "ray2", r2)

    def dual(self) -> Cone2D:
        """Dual cone with ray order (normal to ray2, normal to ray1).

        The first dual ray pairs positively with ray1 and vanishes on ray2, so
        the i-th dual ray is the inward normal of the facet opposite ray i.
        """
        n1 = (self.ray2[1], -self.ray2[0])
        if n1[0] * self.ray1[0] + n1[1] * self.ray1[1] < 0:
            n1 = (-n1[0], -n1[1])
        n2 = (self.ray1[1], -self.ray1[0])
        if n2[0] * self.ray2[0] + n2[1] * self.ray2[1] < 0:
            n2 = (-n2[0], -n2[1])
        return Cone2D(n1, n2)

    def contains(self, v: Vec) -> bool:
        d = self.dual()
        return all(r[0] * v[0] + r[1] * v[1] >= 0 for r in (d.ray1, d.ray2))


@dataclass(frozen=True)
class ConeType:
    """Normal form <(1,0), (p,q)> with 0 <= p < q; ``transform`` maps the source rays onto it."""

    p: int
    q: int
    transform: Mat = ((1, 0), (0, 1))

    def __post_init__(self) -> None:
        if self.q < 1 or not 0 <= self.p < self.q or gcd(self.p, self.q) != 1:
            raise ConeError(f"invalid cone type (p, q) = ({self.p}, {self.q})")

    @property
    def pq(self) -> tuple[int, int]:
        return self.p, self.q


def classify(c: Cone2D) -> ConeType:
    """Lattice normal form of an ordered cone, with a unimodular witness."""
    a, b = c.ray1
    g, s, t = _xgcd(a, b)
    u: Mat = ((s, t), (-b, a))  # u . ray1 = (1, 0)
    x, y = apply(u, c.ray2)
    if y < 0:
        u = matmul(((1, 0), (0, -1)), u)
        y = -y
    k = x // y
    u = matmul(((1, -k), (0, 1)), u)
    x -= k * y
    return ConeType(x, y, u)


def multiplicity(c: Cone2D) -> int:
    return abs(det2(c.ray1, c.ray2))


def canonical_type(p: int, q: int) -> ConeType:
    """Type of <(1,0), (p,q)> for any coprime p and nonzero q."""
    return classify(Cone2D((1, 0), (p, q)))


def dual_type(t: ConeType) -> ConeType:
    """Type (-p mod q, q) of the dual cone."""
    return ConeType((-t.p) % t.q, t.q)


def desingularize(t: ConeType) -> list[Vec]:
    """Rays of the canonical nonsingular subdivision of <(0,-1), (q,p)>.

    These are the convergent pairs (h_i, k_i) of q/p; for the nonsingular
    type (0, 1) the cone is already <(0,-1), (1,0)>.
    """
    if t.p == 0:
        return [(0, -1), (1, 0)]
    return convergents(ncf_expand(t.q, t.p), t.q, t.p).pairs()
