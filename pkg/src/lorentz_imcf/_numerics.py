"""Compiled inner loops: ghost-reflected stencils, flow RHS and RK4 stages.

Everything here works on plain float64 arrays and reports failures through
integer status codes; the public wrappers translate those into exceptions.
Loops run in a fixed order so results are bit-reproducible.
"""

import numpy as np
from numba import njit

OK = 0
NOT_SPACELIKE = 1
DEGENERATE = 2
UNDERFLOW = 3

DT_FLOOR = 1e-14
SLIVER = 1e-6

_jit = njit(cache=True, error_model="numpy")


@_jit
def derivatives(u, h, ux, uxx):
    """Central differences with ghost reflection u[-1] = u[1], u[n+1] = u[n-1]."""
    n = u.shape[0] - 1
    inv2h = 0.5 / h
    invh2 = 1.0 / (h * h)
    ux[0] = 0.0
    uxx[0] = ((u[1] + u[1]) - 2.0 * u[0]) * invh2
    for i in range(1, n):
        # (a + b) is commutative in IEEE arithmetic, which keeps mirrored data
        # bit-symmetric under the stencil
        ux[i] = (u[i + 1] - u[i - 1]) * inv2h
        uxx[i] = ((u[i - 1] + u[i + 1]) - 2.0 * u[i]) * invh2
    ux[n] = 0.0
    uxx[n] = ((u[n - 1] + u[n - 1]) - 2.0 * u[n]) * invh2


@_jit
def _anisotropy(phi_i, u_i, alpha):
    # e^{-alpha phi}; the two common exponents avoid a second exp
    if alpha == 0.0:
        return 1.0
    if alpha == -1.0:
        return u_i
    return np.exp(-alpha * phi_i)


@_jit
def stage(phi, h, alpha, shift, eps_space, eps_conv, out, u, ux, uxx):
    """out = -e^{-alpha phi} v^4 / (v^2 + phi_xixi) + shift; also the max diffusivity.

    phi_xi and phi_xixi come from the chain rule applied to the u-stencils.
    ``u``, ``ux``, ``uxx`` are scratch buffers. Returns (status, node, dmax).
    """
    m = phi.shape[0]
    for i in range(m):
        u[i] = np.exp(phi[i])
    return _stage_u(phi, h, alpha, shift, eps_space, eps_conv, out, u, ux, uxx)


@_jit
def _stage_u(phi, h, alpha, shift, eps_space, eps_conv, out, u, ux, uxx):
    # u = e^phi already filled in
    m = phi.shape[0]
    derivatives(u, h, ux, uxx)
    dmax = 0.0
    for i in range(m):
        if abs(ux[i]) >= (1.0 - eps_space) * u[i]:
            return NOT_SPACELIKE, i, 0.0
        p = ux[i] / u[i]
        q = uxx[i] / u[i] - p * p
        v2 = 1.0 - p * p
        den = v2 + q
        if den <= eps_conv:
            return DEGENERATE, i, 0.0
        a = _anisotropy(phi[i], u[i], alpha) * (v2 * v2) / den
        out[i] = -a + shift
        d = a / den
        if d > dmax:
            dmax = d
    return OK, -1, dmax


@_jit
def flow_rhs(u, h, alpha, shift, eps_space, eps_conv, out):
    """RHS evaluated on nodal values u directly. Returns (status, node).

    Stencils act on ``u`` itself rather than on exp(ln u), so the result is
    consistent with geometry computed from the same samples.
    """
    m = u.shape[0]
    st, node, _ = _stage_u(np.log(u), h, alpha, shift, eps_space, eps_conv, out,
                           u.copy(), np.empty(m), np.empty(m))
    return st, node


@_jit
def max_diffusivity(u, h, alpha, eps_space, eps_conv):
    """Largest dQ/dphi_xixi = e^{-alpha phi} v^4 / (v^2 + phi_xixi)^2. Returns (status, node, value)."""
    m = u.shape[0]
    return _stage_u(np.log(u), h, alpha, 0.0, eps_space, eps_conv, np.empty(m),
                    u.copy(), np.empty(m), np.empty(m))


@_jit
def _rk4_tail(phi, k1, dt, h, alpha, shift, eps_space, eps_conv, out, u, ux, uxx):
    m = phi.shape[0]
    k2 = np.empty(m)
    k3 = np.empty(m)
    k4 = np.empty(m)
    y = np.empty(m)
    half = 0.5 * dt
    for i in range(m):
        y[i] = phi[i] + half * k1[i]
    st, node, _ = stage(y, h, alpha, shift, eps_space, eps_conv, k2, u, ux, uxx)
    if st != OK:
        return st, 2, node
    for i in range(m):
        y[i] = phi[i] + half * k2[i]
    st, node, _ = stage(y, h, alpha, shift, eps_space, eps_conv, k3, u, ux, uxx)
    if st != OK:
        return st, 3, node
    for i in range(m):
        y[i] = phi[i] + dt * k3[i]
    st, node, _ = stage(y, h, alpha, shift, eps_space, eps_conv, k4, u, ux, uxx)
    if st != OK:
        return st, 4, node
    sixth = dt / 6.0
    for i in range(m):
        out[i] = phi[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return OK, 0, -1


@_jit
def rk4(phi, dt, h, alpha, shift, eps_space, eps_conv, out):
    """Classical four-stage step; returns (status, stage, node), stage in 1..4."""
    m = phi.shape[0]
    k1 = np.empty(m)
    u = np.empty(m)
    ux = np.empty(m)
    uxx = np.empty(m)
    st, node, _ = stage(phi, h, alpha, shift, eps_space, eps_conv, k1, u, ux, uxx)
    if st != OK:
        return st, 1, node
    return _rk4_tail(phi, k1, dt, h, alpha, shift, eps_space, eps_conv, out, u, ux, uxx)


@_jit
def advance(phi, clock, clock_end, h, alpha, shift, sigma, dt_max, eps_space,
            eps_conv, out):
    """One adaptive step: CFL-limited dt, clipped so the clock lands on clock_end.

    The first RK stage doubles as the diffusivity evaluation for the step size.
    Returns (status, stage, node, dt, new_clock); on failure ``out`` is untouched.
    """
    m = phi.shape[0]
    k1 = np.empty(m)
    u = np.empty(m)
    ux = np.empty(m)
    uxx = np.empty(m)
    st, node, dmax = stage(phi, h, alpha, shift, eps_space, eps_conv, k1, u, ux, uxx)
    if st != OK:
        return st, 1, node, 0.0, clock
    dt = sigma * h * h / dmax
    if dt > dt_max:
        dt = dt_max
    if dt < DT_FLOOR:
        return UNDERFLOW, 0, -1, dt, clock
    remaining = clock_end - clock
    last = False
    # a step that would leave a sliver of the horizon absorbs it instead
    if dt >= remaining or remaining - dt <= SLIVER * dt:
        dt = remaining
        last = True
    st, stg, node = _rk4_tail(phi, k1, dt, h, alpha, shift, eps_space, eps_conv,
                              out, u, ux, uxx)
    if st != OK:
        return st, stg, node, dt, clock
    if last:
        return OK, 0, -1, dt, clock_end
    return OK, 0, -1, dt, clock + dt
