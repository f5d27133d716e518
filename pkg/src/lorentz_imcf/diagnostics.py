"""Per-step verification of the a priori bounds against a computed state."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .geometry import _trapezoid, curve_length, geometry_fields
from .kernel import rhs_physical, rhs_rescaled, spatial_derivatives
from .theory import inverse_time_map, theta, theta_pow_alpha, time_map


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One row of the run's time series.

    In rescaled mode u_min/u_max/length refer to the rescaled curve and the
    envelope violation is measured on u~ against Theta(t, phi_i)/Theta(t, c_ref).
    ``length_ode_residual`` is NaN where it is not defined (first and last
    records, rescaled runs).
    """

    step: int
    t: float
    s: float
    u_min: float
    u_max: float
    grad_phi_max: float
    k_min: float
    k_max: float
    k_theta_min: float
    k_theta_max: float
    length: float
    length_ode_residual: float
    osc_rescaled: float
    env_violation: float
    phidot_violation: float
    psi_identity_gap: float
    all_ok: bool

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def as_tuple(self):
        return astuple(self)


class LengthSample(NamedTuple):
    t: float
    length: float


def _verdict(env_violation, phidot_violation, grad, k_theta_min, k_theta_max, env, cfg):
    return bool(
        env_violation <= cfg.tol_env
        and phidot_violation <= cfg.tol_env
        and grad <= env.grad0 + cfg.tol_grad
        and k_theta_min >= env.k_theta_lo - cfg.tol_env
        and k_theta_max <= env.k_theta_hi + cfg.tol_env
    )


def evaluate_invariants(state, env, cfg, step=0, length_ode_residual=math.nan):
    """Measure every monitored bound on ``state``; never raises on a violation."""
    alpha = env.alpha
    c_ref = env.c_ref
    u = state.u
    geo = geometry_fields(state, alpha, cfg.eps_space, cfg.eps_conv)
    phidot = rhs_physical(state, cfg)

    if cfg.rescaled:
        s = state.s
        t = inverse_time_map(s, c_ref, alpha)
        lo, hi = env.rescaled_c0_bounds(t)
        m = phidot
        k_theta = geo.k
        u_tilde = u
    else:
        t = state.t
        s = time_map(t, c_ref, alpha)
        lo, hi = env.c0_bounds(t)
        m = phidot * theta_pow_alpha(t, c_ref, alpha)
        big_theta = theta(t, c_ref, alpha)
        k_theta = geo.k * big_theta
        u_tilde = u / big_theta

    env_violation = max(float(np.max(lo - u)), float(np.max(u - hi)), 0.0)
    phidot_violation = max(float(np.max(env.phidot_lo - m)),
                           float(np.max(m - env.phidot_hi)), 0.0)
    grad = float(np.max(np.abs(geo.u_xi / u)))
    psi = geo.speed / geo.w_support
    k_theta_min, k_theta_max = float(k_theta.min()), float(k_theta.max())

    return DiagnosticsRecord(
        step=int(step),
        t=float(t),
        s=float(s),
        u_min=float(u.min()),
        u_max=float(u.max()),
        grad_phi_max=grad,
        k_min=float(geo.k.min()),
        k_max=float(geo.k.max()),
        k_theta_min=k_theta_min,
        k_theta_max=k_theta_max,
        length=curve_length(state, cfg.eps_space),
        length_ode_residual=float(length_ode_residual),
        osc_rescaled=float(u_tilde.max() - u_tilde.min()),
        env_violation=env_violation,
        phidot_violation=phidot_violation,
        psi_identity_gap=float(np.max(np.abs(psi + phidot))),
        all_ok=_verdict(env_violation, phidot_violation, grad,
                        k_theta_min, k_theta_max, env, cfg),
    )


def length_flux(state, alpha):
    """int u^(-alpha) dH^1 = int u^(-alpha) sqrt(u^2 - u_xi^2) dxi (trapezoid)."""
    u = state.u
    ux, _ = spatial_derivatives(state)
    return _trapezoid(u ** (-alpha) * np.sqrt(u * u - ux * ux), state.h)


def length_ode_residual(prev, next, state_mid, cfg):
    """|dL/dt + int u^(-alpha) dH^1| at ``state_mid``.

    dL/dt is the three-point derivative through ``prev``, ``state_mid`` and
    ``next``, second order on unequal steps. ``prev`` and ``next`` only need
    ``t`` and ``length`` attributes.
    """
    h1 = state_mid.t - prev.t
    h2 = next.t - state_mid.t
    if not (h1 > 0.0 and h2 > 0.0):
        raise DomainError(f"need t_prev < t_mid < t_next, got {prev.t}, {state_mid.t}, {next.t}")
    mid = curve_length(state_mid, cfg.eps_space)
    slope = (h1 * h1 * (next.length - mid) + h2 * h2 * (mid - prev.length)) / (h1 * h2 * (h1 + h2))
    return abs(slope + length_flux(state_mid, cfg.alpha))


def oscillation_and_convergence(state, cfg):
    """(osc, velocity, converged) for a rescaled state u~."""
    osc = float(state.u.max() - state.u.min())
    velocity = float(np.max(np.abs(rhs_rescaled(state, cfg))))
    tol = cfg.convergence_tol
    return osc, velocity, bool(osc < tol and velocity < tol)
