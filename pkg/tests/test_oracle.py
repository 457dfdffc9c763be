from __future__ import annotations

import csv
import io
import json
import math

import pytest

from toriczeta.oracle import (
    OracleError,
    OracleWarning,
    brute_cone_exp_sum,
    cone_z_of_t,
    default_schedule,
    fit_zeta,
    s_closed_form,
    samples_csv,
    swapped_type,
    z_of_t,
)
from toriczeta.cone2d import Cone2D


def test_z_vanishes_for_large_t():
    assert z_of_t((3,), 50.0).value < 1e-15


def test_z_stable_under_larger_radius():
    base = z_of_t((3,), 0.1)
    wider = z_of_t((3,), 0.1, radius=2 * base.radius)
    assert base.tail_ok
    assert abs(base.value - wider.value) < 1e-12


def test_z_decreasing_in_t():
    vals = [z_of_t((2, 3), t).value for t in (0.05, 0.1, 0.2, 0.4)]
    assert all(u > v for u, v in zip(vals, vals[1:]))


def test_weights_on_quadrant():
    # x^2 + y^2 on the quadrant: the full lattice sum equals 4 Z + 1 by symmetry
    t = 0.3
    z = cone_z_of_t(Cone2D((1, 0), (0, 1)), (1, 0, 1), t).value
    theta = sum(math.exp(-t * k * k) for k in range(-60, 61))
    assert abs((4 * z + 1) - theta**2) < 1e-12


def test_small_radius_warns():
    with pytest.warns(OracleWarning):
        res = z_of_t((3,), 0.01, radius=3)
    assert not res.tail_ok


def test_bad_inputs():
    with pytest.raises(OracleError):
        z_of_t((3,), 0.0)
    with pytest.raises(OracleError):
        cone_z_of_t(Cone2D((1, 0), (0, 1)), (1, -3, 1), 0.1)
    with pytest.raises(OracleError):
        fit_zeta((3,), t_schedule=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    with pytest.raises(OracleError):
        fit_zeta((3,), t_schedule=[0.5, 0.4])


@pytest.mark.parametrize("b,z0,zm1", [((3,), 0.0, 1 / 30), ((2, 3), -1 / 12, 1 / 12)])
def test_fit_examples(b, z0, zm1):
    fit = fit_zeta(b)
    assert not fit.ill_conditioned
    assert abs(fit.zeta_hat[0] - z0) < 1e-3
    assert abs(fit.zeta_hat[1] - zm1) < 1e-2 * abs(zm1)


def test_fit_json_roundtrip():
    fit = fit_zeta((3,))
    obj = json.loads(fit.dumps())
    assert obj["b"] == [3]
    assert obj["powers"][0] == -1
    assert len(obj["ts"]) == len(default_schedule())


def test_samples_csv():
    text = samples_csv((2, 3), [0.2, 0.1])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["t", "Z"]
    assert float(rows[2][0]) == 0.1
    assert float(rows[2][1]) == z_of_t((2, 3), 0.1).value


def test_brute_smooth_cone():
    res = brute_cone_exp_sum(0, 1, None, 1.0, 1.0)
    assert abs(res.value - 1 / (1 - math.exp(-1)) ** 2) < 1e-12


@pytest.mark.parametrize("p,q,x0,y0", [(1, 2, 0.7, 1.3), (2, 5, 0.4, 0.9), (5, 7, 1.1, 0.3)])
def test_brute_matches_closed_form(p, q, x0, y0):
    res = brute_cone_exp_sum(p, q, None, x0, y0)
    assert res.tail < 1e-12
    assert abs(res.value - s_closed_form(p, q, x0, y0)) < 1e-10 * res.value


@pytest.mark.parametrize("p,q", [(2, 5), (3, 7), (4, 9)])
def test_brute_swap_symmetry(p, q):
    a = brute_cone_exp_sum(p, q, None, 0.6, 0.8).value
    b = brute_cone_exp_sum(swapped_type(p, q), q, None, 0.8, 0.6).value
    assert abs(a - b) < 1e-10 * a


def test_brute_tail_shrinks():
    exact = s_closed_form(2, 5, 0.5, 0.5)
    errs = [abs(brute_cone_exp_sum(2, 5, k, 0.5, 0.5).value - exact) for k in (10, 20, 40)]
    assert errs[0] > errs[1] > errs[2]
    res = brute_cone_exp_sum(2, 5, 20, 0.5, 0.5)
    assert abs(res.value - exact) <= res.tail


def test_brute_doubling_within_tail():
    for bound in (15, 30):
        a = brute_cone_exp_sum(3, 7, bound, 0.6, 0.9)
        b = brute_cone_exp_sum(3, 7, 2 * bound, 0.6, 0.9)
        assert abs(a.value - b.value) <= a.tail


@pytest.mark.slow
def test_fit_zero_on_grid():
    import itertools

    from toriczeta.zetavalues import zeta_zero

    for r in range(1, 5):
        for b in itertools.product(range(2, 7), repeat=r):
            if set(b) == {2}:
                continue
            assert abs(fit_zeta(b, n_max=0).zeta_hat[0] - float(zeta_zero(b))) < 1e-3, b


def test_brute_rejects():
    with pytest.raises(OracleError):
        brute_cone_exp_sum(2, 4, 10, 1.0, 1.0)
    with pytest.raises(OracleError):
        brute_cone_exp_sum(1, 2, 10, -1.0, 1.0)
