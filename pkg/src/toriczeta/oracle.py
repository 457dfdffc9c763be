"""Floating-point oracles used only to cross-check exact results.

* ``z_of_t`` / ``cone_z_of_t``: the theta-like sum Z(t) = sum wt(tau, a) e^{-t Q(a)}
  over lattice points of a cone.
* ``fit_zeta``: least-squares fit of the small-t expansion
  Z(t) ~ sum_{m >= -1} c_m t^m, whose coefficients give zeta(-n) = (-1)^n n! c_n.
* ``brute_cone_exp_sum``: the lattice-point exponential sum of a dual cone,
  compared against its closed rational form.

Nothing here feeds back into the exact modules.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .cone2d import Cone2D, det2
from .quadfield import BSeq, QuadFieldData, QuadForm, build, tau_cone

DEFAULT_SCHEDULE = (0.5, 0.7, 8)
# exp(-TAIL_EXPONENT) bounds the relative size of the first omitted term
TAIL_EXPONENT = 45.0


class OracleError(ValueError):
    pass


class OracleWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ZResult:
    t: float
    value: float
    radius: int
    tail_ok: bool


def _coerce_data(b) -> QuadFieldData:
    if isinstance(b, QuadFieldData):
        return b
    return build(b if isinstance(b, BSeq) else BSeq(tuple(b)))


def _parallelepiped_reps(v1, v2) -> list[tuple[int, int, int, int]]:
    """Lattice points alpha v1 + beta v2 with alpha, beta in [0, 1), with scaled (alpha, beta)."""
    det = det2(v1, v2)
    mult = abs(det)
    xs = (0, v1[0], v2[0], v1[0] + v2[0])
    ys = (0, v1[1], v2[1], v1[1] + v2[1])
    reps = []
    for X in range(min(xs), max(xs) + 1):
        for Y in range(min(ys), max(ys) + 1):
            al = X * v2[1] - Y * v2[0]
            be = v1[0] * Y - v1[1] * X
            if det < 0:
                al, be = -al, -be
            if 0 <= al < mult and 0 <= be < mult:
                reps.append((X, Y, al, be))
    return reps


def _min_on_cone(A: float, B: float, C: float) -> float:
    """Lower bound kappa with A m^2 + B m n + C n^2 >= kappa (m^2 + n^2) for m, n >= 0."""
    if B >= 0:
        return min(A, C)
    return (A + C - math.hypot(A - C, B)) / 2


def cone_z_of_t(tau: Cone2D, Q: QuadForm | Sequence, t: float, radius: int | None = None) -> ZResult:
    """Z(t) for the cone tau and the form Q in ambient lattice coordinates."""
    if t <= 0:
        raise OracleError(f"t must be positive, got {t}")
    a, b, c = (float(v) for v in (Q.as_tuple() if isinstance(Q, QuadForm) else Q))
    v1, v2 = tau.ray1, tau.ray2

    def qv(X, Y):
        return a * X * X + b * X * Y + c * Y * Y

    A, C = qv(*v1), qv(*v2)
    B = qv(v1[0] + v2[0], v1[1] + v2[1]) - A - C
    kappa = _min_on_cone(A, B, C)
    if kappa <= 0:
        raise OracleError("form is not positive definite on the cone generators")
    needed = int(math.sqrt(TAIL_EXPONENT / (t * kappa))) + 3
    K = needed if radius is None else int(radius)
    tail_ok = K >= needed
    if not tail_ok:
        warnings.warn(f"radius {K} below {needed} needed at t={t}", OracleWarning, stacklevel=2)
    m = np.arange(K + 1, dtype=np.float64)[:, None]
    n = np.arange(K + 1, dtype=np.float64)[None, :]
    total = 0.0
    for X, Y, al, be in _parallelepiped_reps(v1, v2):
        xs = X + m * v1[0] + n * v2[0]
        ys = Y + m * v1[1] + n * v2[1]
        vals = np.exp(-t * (a * xs * xs + b * xs * ys + c * ys * ys))
        if al == 0:
            vals[0, :] *= 0.5  # on the ray through v2
        if be == 0:
            vals[:, 0] *= 0.5  # on the ray through v1
        if al == 0 and be == 0:
            vals[0, 0] = 0.0
        total += float(vals.sum())
    return ZResult(t, total, K, tail_ok)


def z_of_t(b, t: float, radius: int | None = None) -> ZResult:
    """Z(t) for (M_b, Q_b, tau_b)."""
    data = _coerce_data(b)
    return cone_z_of_t(tau_cone(data), data.form, t, radius)


def default_schedule(t0: float = 0.5, rho: float = 0.7, length: int = 8) -> list[float]:
    return [t0 * rho**k for k in range(length)]


@dataclass
class AsymptoticFit:
    b: list[int]
    ts: list[float]
    zs: list[float]
    powers: list[int]
    coeffs: list[float]
    stderr: list[float]
    zeta_hat: list[float]
    condition: float
    ill_conditioned: bool
    scale: float
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


MAX_CONDITION = 1e12


def fit_cone_zeta(
    tau: Cone2D,
    Q: QuadForm | Sequence,
    n_max: int = 1,
    t_schedule: Sequence[float] | None = None,
    extra: int = 3,
    scale: float = 1.0,
    label: list[int] | None = None,
) -> AsymptoticFit:
    """Fit c_{-1}, ..., c_{n_max + extra} to Z(t) and report zeta(-n) ~ (-1)^n n! c_n for n <= n_max.

    Schedule values are multiplied by ``scale`` before sampling.  The
    ``extra`` higher coefficients absorb the truncation of the expansion.
    """
    ts_in = list(default_schedule(*DEFAULT_SCHEDULE) if t_schedule is None else t_schedule)
    if any(u <= v for u, v in zip(ts_in, ts_in[1:])) or ts_in[-1] <= 0:
        raise OracleError("t schedule must be positive and strictly decreasing")
    ts = [t * scale for t in ts_in]
    powers = list(range(-1, n_max + extra + 1))
    if len(ts) < len(powers):
        raise OracleError(f"schedule of length {len(ts)} cannot fit {len(powers)} coefficients")
    zs = [cone_z_of_t(tau, Q, t).value for t in ts]
    V = np.array([[t**k for k in powers] for t in ts])
    norms = np.linalg.norm(V, axis=0)
    Vs = V / norms
    sol, _, _, sv = np.linalg.lstsq(Vs, np.array(zs), rcond=None)
    coeffs = sol / norms
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    dof = len(ts) - len(powers)
    notes = []
    if dof > 0:
        resid = np.array(zs) - V @ coeffs
        sigma2 = float(resid @ resid) / dof
        cov = np.linalg.pinv(Vs.T @ Vs) * sigma2
        stderr = list(np.sqrt(np.maximum(np.diag(cov), 0.0)) / norms)
    else:
        stderr = [math.nan] * len(powers)
        notes.append("exact interpolation: no residual estimate")
    ill = cond > MAX_CONDITION
    if ill:
        notes.append(f"condition number {cond:.3g} exceeds {MAX_CONDITION:.0e}")
    zeta_hat = [(-1) ** n * math.factorial(n) * float(coeffs[n + 1]) for n in range(n_max + 1)]
    return AsymptoticFit(
        b=list(label or []),
        ts=ts,
        zs=zs,
        powers=powers,
        coeffs=[float(c) for c in coeffs],
        stderr=[float(s) for s in stderr],
        zeta_hat=zeta_hat,
        condition=cond,
        ill_conditioned=ill,
        scale=scale,
        notes=notes,
    )


def fit_zeta(
    b,
    n_max: int = 1,
    t_schedule: Sequence[float] | None = None,
    extra: int = 3,
    scale_by_disc: bool = True,
) -> AsymptoticFit:
    """Asymptotic fit for (M_b, Q_b, tau_b).

    With ``scale_by_disc`` the schedule is divided by sqrt(D_b), the natural
    size of Q_b on a fundamental domain, so one schedule serves every b.
    """
    data = _coerce_data(b)
    scale = 1.0 / math.sqrt(data.quad[3]) if scale_by_disc else 1.0
    return fit_cone_zeta(tau_cone(data), data.form, n_max, t_schedule, extra, scale, list(data.b.entries))


def samples_csv(b, ts: Sequence[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "Z"])
    for t in ts:
        w.writerow([repr(float(t)), repr(z_of_t(b, t).value)])
    return buf.getvalue()


# --- dual-cone exponential sums ----------------------------------------------


@dataclass(frozen=True)
class BruteSum:
    value: float
    tail: float
    bound: int


def _tail_bound(bound: int, x0: float, y0: float) -> float:
    gx, gy = 1.0 / -math.expm1(-x0), 1.0 / -math.expm1(-y0)
    return math.exp(-(bound + 1) * x0) * gx * gy + math.exp(-(bound + 1) * y0) * gx * gy


def brute_cone_exp_sum(p: int, q: int, bound: int | None, x0: float, y0: float) -> BruteSum:
    """sum over m in the dual of <(1,0), (p,q)> of e^{-<m,(1,0)> x0 - <m,(p,q)> y0}.

    Pairings (s1, s2) = (<m, rho_1>, <m, rho_2>) run over s1, s2 >= 0 with
    s2 = p s1 (mod q); both are cut off at ``bound``.
    """
    if x0 <= 0 or y0 <= 0:
        raise OracleError("evaluation point needs positive coordinates")
    if q < 1 or math.gcd(p, q) != 1:
        raise OracleError(f"invalid cone type ({p}, {q})")
    if bound is None:
        bound = int(40.0 / min(x0, y0)) + 1
    s1 = np.arange(bound + 1)
    ex = np.exp(-s1 * x0)
    ey = np.exp(-s1 * y0)
    pinv = pow(p, -1, q) if q > 1 else 0
    total = 0.0
    for r in range(q):
        rows = ex[s1 % q == (r * pinv) % q]
        cols = ey[s1 % q == r]
        total += float(rows.sum()) * float(cols.sum())
    return BruteSum(total, _tail_bound(bound, x0, y0), bound)


def s_closed_form(p: int, q: int, x0: float, y0: float) -> float:
    """sum_{k<q} e^{-k x0 - (k p mod q) y0} / ((1 - e^{-q x0})(1 - e^{-q y0}))."""
    num = math.fsum(math.exp(-k * x0 - ((k * p) % q) * y0) for k in range(q))
    return num / (-math.expm1(-q * x0) * -math.expm1(-q * y0))


def swapped_type(p: int, q: int) -> int:
    """p' with <(p,q), (1,0)> of type (p', q): the inverse of p mod q."""
    return pow(p, -1, q) if q > 1 else 0
