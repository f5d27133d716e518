import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentz_imcf import (FlowConfig, GraphState, NotSpacelike, ValidationError,
                          diffusion_coefficient, geometry_fields, rhs_physical, rhs_rescaled,
                          spatial_derivatives)


def cosine(n, r=2.0, A=0.05, m=1):
    return GraphState.from_function(lambda x: r * (1 + A * np.cos(m * np.pi * x)), 0.0, 1.0, n)


@pytest.mark.parametrize("kw, key", [
    (dict(alpha=0.5), "alpha"),
    (dict(alpha=float("nan")), "alpha"),
    (dict(alpha=-1, n=4), "grid_n"),
    (dict(alpha=-1, n=16.0), "grid_n"),
    (dict(alpha=-1, c=1.0, d=0.0), "domain"),
    (dict(alpha=-1, mode="implicit"), "mode"),
    (dict(alpha=-1, sigma_cfl=1.0), "sigma_cfl"),
    (dict(alpha=-1, dt_max=0.0), "dt_max"),
    (dict(alpha=-1, t_end=-1.0), "t_end"),
    (dict(alpha=-1, snapshot_stride=0), "snapshot_stride"),
    (dict(alpha=-1, convergence_tol=0.0), "convergence_tol"),
])
def test_config_validation_names_key(kw, key):
    with pytest.raises(ValidationError) as info:
        FlowConfig(**kw)
    assert info.value.key == key


def test_config_defaults():
    cfg = FlowConfig(alpha=-1.0)
    assert (cfg.n, cfg.mode, cfg.sigma_cfl, cfg.convergence_tol) == (64, "physical", 0.4, 1e-8)
    assert cfg.h == 1 / 64 and not cfg.rescaled
    assert cfg.replace(mode="rescaled").rescaled


def test_derivatives_second_order():
    errs = []
    for n in (32, 64, 128):
        state = cosine(n, r=1.0, A=0.3)
        ux, uxx = spatial_derivatives(state)
        x = state.xi
        errs.append(max(np.max(np.abs(ux + 0.3 * np.pi * np.sin(np.pi * x))),
                        np.max(np.abs(uxx + 0.3 * np.pi ** 2 * np.cos(np.pi * x)))))
        assert ux[0] == 0.0 and ux[-1] == 0.0
    assert 3.5 < errs[0] / errs[1] < 4.5 and 3.5 < errs[1] / errs[2] < 4.5


@given(st.lists(st.floats(min_value=0.5, max_value=2.0), min_size=5, max_size=40))
@settings(max_examples=50)
def test_mirror_symmetry_is_bitwise(half):
    u = np.array(half + half[-2::-1])
    state = GraphState(0.0, 1.0, u)
    if state.n < 8:
        return
    ux, uxx = spatial_derivatives(state)
    np.testing.assert_array_equal(uxx, uxx[::-1])
    np.testing.assert_array_equal(ux, -ux[::-1])


@given(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=-3.0, max_value=0.0))
def test_rhs_on_radial_data(r, alpha):
    cfg = FlowConfig(alpha=alpha)
    q = rhs_physical(GraphState.constant(r, 0.0, 1.0, 64), cfg)
    np.testing.assert_allclose(q, -r ** (-alpha), rtol=1e-14)


@pytest.mark.parametrize("alpha", [-2.0, -1.0, -0.5, 0.0, -1.7])
def test_rhs_matches_geometric_speed(alpha):
    # phi_t = -v / (u^(1 + alpha) k), built from the closed-form curvature
    state = cosine(128)
    f = geometry_fields(state, alpha)
    expected = -f.v / (state.u ** (1 + alpha) * f.k)
    np.testing.assert_allclose(rhs_physical(state, FlowConfig(alpha=alpha, n=128)), expected,
                               rtol=1e-12)


def test_rescaled_rhs_adds_one():
    state = cosine(64)
    cfg = FlowConfig(alpha=-1.0)
    np.testing.assert_array_equal(rhs_rescaled(state, cfg), rhs_physical(state, cfg) + 1.0)


def test_diffusion_coefficient_matches_derivative_of_q():
    # independent check: differentiate Q(p, q) = -e^{-alpha phi} v^4/(v^2 + q) in q numerically
    alpha = -0.5
    state = cosine(64, A=0.05)
    ux, uxx = spatial_derivatives(state)
    u = state.u
    p = ux / u
    q = uxx / u - p * p

    def Q(qq):
        v2 = 1 - p * p
        return -u ** (-alpha) * v2 * v2 / (v2 + qq)

    eps = 1e-6
    dq = (Q(q + eps) - Q(q - eps)) / (2 * eps)
    assert diffusion_coefficient(state, FlowConfig(alpha=alpha)) == pytest.approx(dq.max(), rel=1e-8)


def test_diffusion_radial():
    assert diffusion_coefficient(GraphState.constant(3.0, 0, 1, 16), FlowConfig(alpha=-1.0)) == \
        pytest.approx(3.0, rel=1e-14)


def test_guards_and_grid():
    steep = GraphState.from_function(lambda x: np.exp(2.0 * x), 0.0, 1.0, 32)
    with pytest.raises(NotSpacelike):
        rhs_physical(steep, FlowConfig(alpha=-1.0, n=32))
    with pytest.raises(ValueError):
        rhs_physical(GraphState.constant(1.0, 0.0, 1.0, 4), FlowConfig(alpha=-1.0))
