import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lorentz_imcf import (DomainError, FlowConfig, GraphState, ValidationError, build_envelope,
                          inverse_time_map, radius_interval, theta, time_map)
from lorentz_imcf.geometry import curve_length
from lorentz_imcf.theory import log_theta, resolve_c_ref, theta_pow_alpha, theta_ratio

alphas = st.floats(min_value=-3.0, max_value=0.0)
times = st.floats(min_value=0.0, max_value=10.0)
consts = st.floats(min_value=-2.0, max_value=2.0)


def test_theta_reference_value():
    assert theta(0.25, math.log(2.0), -1.0) == pytest.approx(4.0 / 3.0, rel=1e-15)
    assert theta(1.0, 0.0, -2.0) == pytest.approx(3.0 ** -0.5, rel=1e-15)
    assert theta(2.0, 1.0, 0.0) == pytest.approx(math.exp(-1.0), rel=1e-15)


@given(consts, alphas)
def test_theta_initial_value(c, alpha):
    assert theta(0.0, c, alpha) == pytest.approx(math.exp(c), rel=1e-13)


@given(st.floats(min_value=1e-3, max_value=10.0), consts, st.floats(min_value=-3.0, max_value=-1e-3))
def test_theta_solves_radial_ode(t, c, alpha):
    # d/dt ln Theta = -Theta^(-alpha)
    h = 1e-5
    slope = (log_theta(t + h, c, alpha) - log_theta(t - h, c, alpha)) / (2 * h)
    assert -slope == pytest.approx(theta(t, c, alpha) ** (-alpha), rel=1e-4)


@given(times, consts, consts, alphas)
def test_ratio_and_power(t, a, c, alpha):
    assert theta_ratio(t, a, c, alpha) == pytest.approx(theta(t, a, alpha) / theta(t, c, alpha),
                                                        rel=1e-10)
    assert theta_pow_alpha(t, c, alpha) == pytest.approx(theta(t, c, alpha) ** alpha, rel=1e-10)


@given(times, consts, alphas)
def test_time_map_round_trip(t, c, alpha):
    s = time_map(t, c, alpha)
    assert s >= 0.0
    assert inverse_time_map(s, c, alpha) == pytest.approx(t, rel=1e-9, abs=1e-12)


def test_time_map_derivative():
    # dt/ds = Theta^alpha
    c, alpha, s, h = 0.3, -1.5, 2.0, 1e-6
    dt_ds = (inverse_time_map(s + h, c, alpha) - inverse_time_map(s - h, c, alpha)) / (2 * h)
    t = inverse_time_map(s, c, alpha)
    assert dt_ds == pytest.approx(theta(t, c, alpha) ** alpha, rel=1e-8)


def test_alpha_zero_limit():
    t, c = 3.0, -0.4
    assert theta(t, c, -1e-9) == pytest.approx(math.exp(c - t), rel=1e-7)
    assert inverse_time_map(1.5, c, 0.0) == 1.5


@pytest.mark.parametrize("call", [
    lambda: theta(1.0, 0.0, 0.5),
    lambda: theta(-1.0, 0.0, -1.0),
    lambda: inverse_time_map(-0.1, 0.0, -1.0),
    lambda: theta_ratio(0.0, 0.0, 0.0, 1.0),
])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()
    with pytest.raises(ValueError):
        call()


def cosine(n=128, r=2.0, A=0.05):
    return GraphState.from_function(lambda x: r * (1 + A * np.cos(np.pi * x)), 0.0, 1.0, n)


def test_envelope_on_radial_data_collapses():
    env = build_envelope(GraphState.constant(2.0, 0.0, 1.0, 64), FlowConfig(alpha=-1.0))
    assert env.phi1 == env.phi2 == env.c_ref == math.log(2.0)
    assert env.grad0 == 0.0
    assert env.phidot_lo == pytest.approx(-1.0, abs=1e-15)
    assert env.phidot_hi == pytest.approx(-1.0, abs=1e-15)
    assert env.k_theta_lo == pytest.approx(1.0, rel=1e-14)
    assert env.k_theta_hi == pytest.approx(1.0, rel=1e-14)
    assert env.r_lo == pytest.approx(1.0, rel=1e-14) and env.r_hi == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("alpha", [-2.0, -1.0, -0.5, 0.0])
def test_envelope_is_ordered(alpha):
    u0 = cosine()
    env = build_envelope(u0, FlowConfig(alpha=alpha, n=128))
    assert env.phi1 < env.c_ref < env.phi2
    assert env.phidot_lo <= -1.0 <= env.phidot_hi < 0.0
    assert 0.0 < env.k_theta_lo <= env.k_theta_hi
    assert env.r_lo < 1.0 < env.r_hi
    lo, hi = env.c0_bounds(0.0)
    assert lo == pytest.approx(u0.u.min()) and hi == pytest.approx(u0.u.max())
    l_lo, l_hi = env.rescaled_length_bounds()
    assert l_lo <= env.length0 * math.exp(-env.c_ref) <= l_hi


def test_radius_interval_formula():
    u0 = cosine(256)
    r_lo, r_hi = radius_interval(u0)
    L0 = curve_length(u0)
    assert r_lo == pytest.approx(L0 / u0.u.max()) and r_hi == pytest.approx(L0 / u0.u.min())


def test_c_ref_resolution():
    u0 = cosine()
    phi = np.log(u0.u)
    assert resolve_c_ref(u0) == pytest.approx(0.5 * (phi.min() + phi.max()))
    assert resolve_c_ref(u0, float(phi.max())) == float(phi.max())
    with pytest.raises(ValidationError):
        resolve_c_ref(u0, 10.0)
