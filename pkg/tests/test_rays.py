import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp

from bellray import rays
from bellray.rays import GridSpec

E = math.e


def test_closed_form_at_origin():
    r = rays.rays_closed_form(0.0, 3.0)
    assert (r.u, r.v, r.p, r.q) == (3.0, 0.0, 0.0, math.log(3.0))
    assert r.psi == 0.0 and r.amp == 1.0


def test_closed_form_t1_s2():
    r = rays.rays_closed_form(1.0, 2.0)
    assert r.u == pytest.approx(2 / E, rel=1e-15)
    assert r.v == 2.0
    assert r.p == pytest.approx(E - 1, rel=1e-15)
    assert r.q == pytest.approx(math.log(2), rel=1e-15)
    assert r.psi == pytest.approx(-2 / E + 2 * math.log(2), rel=1e-14)


@given(st.floats(0.0, 5.0), st.floats(0.01, 50.0))
def test_closed_form_invariants(t, s):
    r = rays.rays_closed_form(t, s)
    assert r.u > 0 and r.p + 1 > 0
    assert r.q == math.log(s)
    # the ray stays on the eikonal surface e^q = u (p + 1)
    assert math.exp(r.q) == pytest.approx(r.u * (r.p + 1), rel=1e-13)


def test_closed_form_rejects_bad_label():
    with pytest.raises(ValueError):
        rays.rays_closed_form(1.0, 0.0)


@given(st.floats(0.05, 5.0), st.floats(0.05, 20.0))
def test_inverse_map_round_trip(t, s):
    r = rays.rays_closed_form(t, s)
    t2, s2 = rays.ray_coordinates(r.u, r.v)
    assert t2 == pytest.approx(t, rel=1e-12)
    assert s2 == pytest.approx(s, rel=1e-12)


# -- phase and amplitude ------------------------------------------------------------------

@pytest.mark.parametrize("u", [0.3, 1.0, 2.5])
def test_phase_on_t_equal_one(u):
    v = E * u
    assert rays.psi_uv(u, v) == pytest.approx(v * math.log(v) - u, rel=1e-13, abs=1e-14)
    assert rays.amp_uv(u, v) == pytest.approx(1 / math.sqrt(2), rel=1e-15)


@given(st.floats(0.05, 5.0), st.floats(0.05, 20.0))
def test_phase_matches_ray_parametrisation(t, s):
    r = rays.rays_closed_form(t, s)
    assert rays.psi_uv(r.u, r.v) == pytest.approx(r.psi, rel=1e-10, abs=1e-11)
    assert rays.amp_uv(r.u, r.v) == pytest.approx(r.amp, rel=1e-12)


def test_initial_data_limit():
    for u in (0.5, 1.0, 2.0):
        errs = [abs(rays.psi_uv(u, 10.0**-j)) + abs(rays.amp_uv(u, 10.0**-j) - 1) for j in range(3, 7)]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 1e-5


def test_eikonal_identity_with_mpmath_derivatives():
    # independent oracle: exact derivatives of the closed form at 30 digits
    with mpmath.workdps(30):
        def psi(u, v):
            w = mpmath.lambertw(v / u).real
            return v / w + v * mpmath.log(v / w) - (u + v)

        for u, v in ((1, mpmath.e), (0.7, 1.9), (2, 0.6)):
            u, v = mpmath.mpf(u), mpmath.mpf(v)
            p = mpmath.diff(lambda a: psi(a, v), u)
            q = mpmath.diff(lambda b: psi(u, b), v)
            assert abs(mpmath.exp(q) - u * (p + 1)) < mpmath.mpf(10) ** -25


# -- characteristics -----------------------------------------------------------------------

def test_rk_example_s1():
    end = rays.integrate_characteristics(1.0, 2.0, 1e-3)[-1]
    assert end.t == 2.0
    for got, want in zip((end.u, end.v, end.p, end.q), (math.exp(-2), 2.0, math.exp(2) - 1, 0.0)):
        assert abs(got - want) <= 1e-8


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("t_end", [1.0, 2.0])
def test_rk_matches_closed_form(s, t_end):
    end = rays.integrate_characteristics(s, t_end, 1e-3)[-1]
    ref = rays.rays_closed_form(t_end, s)
    for f in ("u", "v", "p", "q", "psi", "amp"):
        assert abs(getattr(end, f) - getattr(ref, f)) <= 1e-8


def test_rk_matches_independent_integrator():
    s = 2.0

    def f(t, y):
        u, v, p, q, psi, k = y
        return [-u, math.exp(q), p + 1, 0.0, -p * u + q * math.exp(q), -k / (2 * (t + 1))]

    sol = solve_ivp(f, (0, 1.5), [s, 0, 0, math.log(s), 0, 1], rtol=1e-12, atol=1e-13, method="DOP853")
    end = rays.integrate_characteristics(s, 1.5, 1e-3)[-1]
    got = [end.u, end.v, end.p, end.q, end.psi, end.amp]
    assert np.allclose(got, sol.y[:, -1], rtol=0, atol=1e-9)


def test_q_conserved():
    traj = rays.integrate_characteristics(2.0, 2.0, 1e-3)
    assert max(abs(r.q - math.log(2.0)) for r in traj) <= 1e-12


def test_psi_accumulation():
    end = rays.integrate_characteristics(2.0, 1.0, 1e-3)[-1]
    assert abs(end.psi - rays.rays_closed_form(1.0, 2.0).psi) <= 1e-7


def test_rk_fourth_order():
    ref = rays.rays_closed_form(2.0, 3.0)
    e1 = abs(rays.integrate_characteristics(3.0, 2.0, 0.1)[-1].v - ref.v) + \
        abs(rays.integrate_characteristics(3.0, 2.0, 0.1)[-1].p - ref.p)
    e2 = abs(rays.integrate_characteristics(3.0, 2.0, 0.05)[-1].v - ref.v) + \
        abs(rays.integrate_characteristics(3.0, 2.0, 0.05)[-1].p - ref.p)
    assert 3.7 <= math.log2(e1 / e2) <= 4.3


def test_rk_step_limits():
    with pytest.raises(ValueError):
        rays.integrate_characteristics(1.0, 1.0, 0.2)
    with pytest.raises(ValueError):
        rays.integrate_characteristics(-1.0, 1.0, 0.01)
    traj = rays.integrate_characteristics(1.0, 1.0, 0.1)
    assert len(traj) == 11 and traj[-1].t == 1.0


# -- residuals ----------------------------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(u_min=0.0)
    with pytest.raises(ValueError):
        GridSpec(h=0.0)
    with pytest.raises(ValueError):
        GridSpec(nu=0)
    assert len(list(GridSpec(nu=3, nv=4).points())) == 12


def test_eikonal_point():
    g = GridSpec(1.0, 1.0, E, E, 1, 1, 1e-4)
    assert rays.eikonal_residual(g) <= 1e-6


def test_eikonal_grid():
    assert rays.eikonal_residual(GridSpec()) < 1e-6


def test_eikonal_order():
    assert 1.8 <= rays.observed_order(rays.eikonal_residual, GridSpec()) <= 2.2


def test_alternative_eikonal_form_fails():
    # the alternative e^q + p - 2u does not vanish on the phase
    u, v, h = 1.0, E, 1e-4
    p, q = rays._psi_grad(u, v, h)
    assert abs(math.exp(q) + p - 2 * u) > 1.0


def test_transport_grid():
    assert rays.transport_residual(GridSpec()) < 1e-5


def test_transport_order():
    # at h = 1e-4 the second difference is rounding-limited
    assert 1.8 <= rays.observed_order(rays.transport_residual, GridSpec(), 1e-2) <= 2.2


def test_psi_vv_spot():
    s = E
    assert abs(rays.psi_vv_fd(1.0, s) - 1 / (2 * s)) <= 1e-6


def test_jacobian_ds_dv():
    h = 1e-5
    for u, v in ((1.0, E), (0.5, 1.5), (2.0, 0.7)):
        t, _ = rays.ray_coordinates(u, v)
        ds_dv = (rays.ray_coordinates(u, v + h)[1] - rays.ray_coordinates(u, v - h)[1]) / (2 * h)
        assert abs(ds_dv - 1 / (t + 1)) <= 1e-6
