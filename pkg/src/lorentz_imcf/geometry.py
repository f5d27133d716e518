"""Geometry of spacelike radial graphs over an arc of the unit hyperbola.

A radial graph is the curve X(xi) = u(xi) * (sinh xi, cosh xi), xi in [c, d],
in the Lorentz-Minkowski plane with <a, b> = a1 b1 - a2 b2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _numerics
from .errors import DegenerateConvexity, NotSpacelike

EPS_SPACE = 1e-6
EPS_CONV = 1e-10


class Point2L(NamedTuple):
    x1: float
    x2: float


@dataclass(frozen=True, eq=False)
class GraphState:
    """Nodal samples of u on the uniform grid xi_i = c + i h, plus both clocks.

    ``u`` has n + 1 positive entries. ``t`` is physical time, ``s`` the
    rescaled time; the run mode decides which one advances.
    """

    c: float
    d: float
    u: np.ndarray
    t: float = 0.0
    s: float = 0.0
    n: int = field(init=False)

    def __post_init__(self):
        u = np.array(self.u, dtype=np.float64)
        if u.ndim != 1 or u.size < 2:
            raise ValueError("u must be a 1-D array with at least two nodes")
        if not self.d > self.c:
            raise ValueError(f"need d > c, got c={self.c}, d={self.d}")
        if not np.all(np.isfinite(u)) or np.any(u <= 0.0):
            raise ValueError("u must be finite and strictly positive")
        if self.t < 0.0 or self.s < 0.0:
            raise ValueError("clocks must be non-negative")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "n", u.size - 1)

    @classmethod
    def from_function(cls, func, c, d, n, t=0.0, s=0.0):
        xi = c + (d - c) / n * np.arange(n + 1)
        return cls(c, d, np.asarray(func(xi), dtype=np.float64), t=t, s=s)

    @classmethod
    def constant(cls, r, c, d, n):
        return cls(c, d, np.full(n + 1, float(r)))

    @property
    def h(self):
        return (self.d - self.c) / self.n

    @property
    def xi(self):
        return self.c + self.h * np.arange(self.n + 1)

    @property
    def phi(self):
        return np.log(self.u)

    def with_values(self, u, t=None, s=None):
        return GraphState(self.c, self.d, u,
                          self.t if t is None else t,
                          self.s if s is None else s)

    def __eq__(self, other):
        if not isinstance(other, GraphState):
            return NotImplemented
        return (self.c == other.c and self.d == other.d and self.t == other.t
                and self.s == other.s and np.array_equal(self.u, other.u))


@dataclass(frozen=True)
class GeometryFields:
    u_xi: np.ndarray
    u_xixi: np.ndarray
    phi: np.ndarray
    v: np.ndarray
    g_metric: np.ndarray
    k: np.ndarray
    w_support: np.ndarray
    speed: np.ndarray


def minkowski_inner(a, b):
    """<a, b>_L = a1 b1 - a2 b2; broadcasts over a trailing axis of length 2."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1]
    return float(out) if out.ndim == 0 else out


def hyperbola_point(xi):
    return Point2L(float(np.sinh(xi)), float(np.cosh(xi)))


def embed_graph(state):
    """Node coordinates u_i (sinh xi_i, cosh xi_i) as an (n + 1, 2) array."""
    xi = state.xi
    return np.column_stack((state.u * np.sinh(xi), state.u * np.cosh(xi)))


def _u_derivatives(state):
    ux = np.empty(state.n + 1)
    uxx = np.empty(state.n + 1)
    _numerics.derivatives(state.u, state.h, ux, uxx)
    return ux, uxx


def _check_spacelike(u, ux, eps_space):
    bad = np.flatnonzero(np.abs(ux) >= (1.0 - eps_space) * u)
    if bad.size:
        i = int(bad[0])
        raise NotSpacelike(
            f"|u_xi| = {abs(ux[i]):.6g} reaches u = {u[i]:.6g} at node {i}",
            node=i)


def curvature_closed_form(u, u_xi, u_xixi):
    """k = (u u_xixi + u^2 - 2 u_xi^2) / (u^3 v^3), v = sqrt(1 - u_xi^2 / u^2); no guards."""
    u = np.asarray(u, dtype=np.float64)
    v = np.sqrt(1.0 - (u_xi / u) ** 2)
    return (u * u_xixi + u * u - 2.0 * u_xi * u_xi) / (u ** 3 * v ** 3)


def geometry_fields(state, alpha, eps_space=EPS_SPACE, eps_conv=EPS_CONV):
    """Derived per-node geometry from the closed-form curvature formula.

    k = (u u_xixi + u^2 - 2 u_xi^2) / (u^3 v^3) with v = sqrt(1 - u_xi^2 / u^2);
    the anisotropic speed uses |X| = u, so speed = u^(-alpha) / k.
    """
    u = state.u
    ux, uxx = _u_derivatives(state)
    _check_spacelike(u, ux, eps_space)
    numer = u * uxx + u * u - 2.0 * ux * ux
    bad = np.flatnonzero(numer <= eps_conv * u * u)
    if bad.size:
        i = int(bad[0])
        raise DegenerateConvexity(
            f"convexity numerator {numer[i]:.6g} <= 0 at node {i}", node=i)
    g = u * u - ux * ux
    v = np.sqrt(1.0 - (ux / u) ** 2)
    k = curvature_closed_form(u, ux, uxx)
    return GeometryFields(
        u_xi=ux,
        u_xixi=uxx,
        phi=np.log(u),
        v=v,
        g_metric=g,
        k=k,
        w_support=u / v,
        speed=u ** (-alpha) / k,
    )


def curvature_frenet_oracle(state, eps_space=EPS_SPACE):
    """Curvature at interior nodes 1..n-1 from the embedded polyline alone.

    Unit tangents are taken on the edges (chord / Minkowski chord length),
    differentiated across each node and divided by the node's arc-length
    speed; k = sqrt(|<T_s, T_s>_L|). Second order on smooth data. Does not
    use the closed curvature formula or the u-stencils.
    """
    if state.n < 32:
        raise ValueError("the Frenet oracle needs n >= 32")
    X = embed_graph(state)
    h = state.h
    chord = np.diff(X, axis=0)
    chord_sq = minkowski_inner(chord, chord)
    if np.any(chord_sq <= 0.0):
        i = int(np.flatnonzero(chord_sq <= 0.0)[0])
        raise NotSpacelike(f"edge {i} of the polyline is not spacelike", node=i)
    T = chord / np.sqrt(chord_sq)[:, None]
    dX = (X[2:] - X[:-2]) / (2.0 * h)
    speed_sq = minkowski_inner(dX, dX)
    u_int = state.u[1:-1]
    # same relative margin as the closed-form guard: |X_xi|^2 = u^2 - u_xi^2
    if np.any(speed_sq <= (1.0 - (1.0 - eps_space) ** 2) * u_int ** 2):
        i = 1 + int(np.argmin(speed_sq / u_int ** 2))
        raise NotSpacelike(f"tangent at node {i} is not spacelike", node=i)
    Ts = (T[1:] - T[:-1]) / h / np.sqrt(speed_sq)[:, None]
    return np.sqrt(np.abs(minkowski_inner(Ts, Ts)))


def curve_length(state, eps_space=EPS_SPACE):
    """Composite-trapezoid value of the Lorentzian length int sqrt(u^2 - u_xi^2)."""
    u = state.u
    ux, _ = _u_derivatives(state)
    _check_spacelike(u, ux, eps_space)
    return _trapezoid(np.sqrt(u * u - ux * ux), state.h)


def _trapezoid(f, h):
    return float(h * (0.5 * f[0] + f[1:-1].sum() + 0.5 * f[-1]))
