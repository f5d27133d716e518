"""Closed-form barriers, a priori bounds and the limit-radius interval.

The radial solution of the flow with phi(0) = c is

    Theta(t, c) = (-alpha t + e^{alpha c})^(1/alpha)   (alpha < 0)
    Theta(t, c) = e^{c - t}                            (alpha = 0)

and every other quantity here is assembled from it and from the initial data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConvexity, DomainError, NotSpacelike, ValidationError
from .geometry import curve_length, geometry_fields
from .kernel import rhs_physical


def _check_alpha(alpha):
    if not alpha <= 0.0:
        raise DomainError(f"alpha must be <= 0, got {alpha}")


def _log_base(t, c, alpha):
    # ln(-alpha t + e^{alpha c}) computed without cancellation for small |alpha|
    return math.log1p(math.expm1(alpha * c) - alpha * t)


def log_theta(t, c, alpha):
    _check_alpha(alpha)
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t}")
    if alpha == 0.0:
        return c - t
    return _log_base(t, c, alpha) / alpha


def theta(t, c, alpha):
    """Radial barrier Theta(t, c); alpha = 0 uses the exponential limit."""
    return math.exp(log_theta(t, c, alpha))


def theta_ratio(t, a, c, alpha):
    """Theta(t, a) / Theta(t, c), evaluated stably for large t."""
    _check_alpha(alpha)
    if alpha == 0.0:
        return math.exp(a - c)
    return math.exp((_log_base(t, a, alpha) - _log_base(t, c, alpha)) / alpha)


def theta_pow_alpha(t, c, alpha):
    """Theta(t, c)^alpha = -alpha t + e^{alpha c}."""
    _check_alpha(alpha)
    return -alpha * t + math.exp(alpha * c)


def time_map(t, c, alpha):
    """Rescaled time s(t) = c - ln Theta(t, c), the integral of Theta^(-alpha) dt.

    Written as -ln(1 - alpha t e^{-alpha c}) / alpha, which is exactly 0 at t = 0.
    """
    _check_alpha(alpha)
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t}")
    if alpha == 0.0:
        return t
    return -math.log1p(-alpha * t * math.exp(-alpha * c)) / alpha


def inverse_time_map(s, c, alpha):
    """Physical time t(s), the closed-form inverse of :func:`time_map`."""
    _check_alpha(alpha)
    if s < 0.0:
        raise DomainError(f"s must be >= 0, got {s}")
    if alpha == 0.0:
        return s
    return math.exp(alpha * c) * math.expm1(-alpha * s) / (-alpha)


@dataclass(frozen=True)
class TheoryEnvelope:
    """All bounds predicted for one initial datum.

    phidot_lo/hi bound phi_t * Theta^alpha, k_theta_lo/hi bound k * Theta,
    r_lo/r_hi bound the limit radius. ``length0`` is L(M_0).
    """

    alpha: float
    phi1: float
    phi2: float
    c_ref: float
    grad0: float
    phidot_lo: float
    phidot_hi: float
    k_theta_lo: float
    k_theta_hi: float
    r_lo: float
    r_hi: float
    length0: float

    def c0_bounds(self, t):
        return theta(t, self.phi1, self.alpha), theta(t, self.phi2, self.alpha)

    def rescaled_c0_bounds(self, t):
        return (theta_ratio(t, self.phi1, self.c_ref, self.alpha),
                theta_ratio(t, self.phi2, self.c_ref, self.alpha))

    def rescaled_length_bounds(self):
        return self.length0 * math.exp(-self.phi2), self.length0 * math.exp(-self.phi1)


def resolve_c_ref(u0, c_ref=None):
    phi = np.log(u0.u)
    phi1, phi2 = float(phi.min()), float(phi.max())
    if c_ref is None:
        return 0.5 * (phi1 + phi2)
    if not phi1 <= c_ref <= phi2:
        raise ValidationError(
            "c_ref", f"c_ref={c_ref} must lie in [min ln u0, max ln u0] = [{phi1}, {phi2}]")
    return float(c_ref)


def radius_interval(u0):
    """Bounds on r_inf: L(M0) / (L(M) sup u0) and L(M0) / (L(M) inf u0)."""
    ratio = curve_length(u0) / (u0.d - u0.c)
    return ratio / float(u0.u.max()), ratio / float(u0.u.min())


def build_envelope(u0, cfg):
    """Evaluate every closed-form bound for the initial datum ``u0``.

    The pinching constants come from k Theta = v (u/Theta)^(-(1+alpha)) / (-M),
    M = phi_t Theta^alpha, with v >= sqrt(1 - grad0^2), u/Theta_c between
    e^{phi1 - c_ref} and e^{phi2 - c_ref}, and M between phidot_lo and
    phidot_hi.
    """
    alpha = float(cfg.alpha)
    _check_alpha(alpha)
    fields = geometry_fields(u0, alpha, cfg.eps_space, cfg.eps_conv)
    grad0 = float(np.max(np.abs(fields.u_xi / u0.u)))
    if grad0 >= 1.0:
        raise NotSpacelike(f"sup |D phi0| = {grad0} >= 1")
    if np.any(fields.k <= 0.0):
        raise DegenerateConvexity("initial curvature is not positive")
    phi = fields.phi
    phi1, phi2 = float(phi.min()), float(phi.max())
    c_ref = resolve_c_ref(u0, cfg.c_ref)

    m0 = rhs_physical(u0, cfg) * math.exp(alpha * c_ref)
    lo = min(float(m0.min()), -1.0)
    hi = max(float(m0.max()), -1.0)

    expo = -(1.0 + alpha)
    ends = (math.exp(expo * (phi1 - c_ref)), math.exp(expo * (phi2 - c_ref)))
    c3 = math.sqrt(1.0 - grad0 * grad0) * min(ends) / (-lo)
    c4 = max(ends) / (-hi)

    r_lo, r_hi = radius_interval(u0)
    return TheoryEnvelope(
        alpha=alpha, phi1=phi1, phi2=phi2, c_ref=c_ref, grad0=grad0,
        phidot_lo=lo, phidot_hi=hi, k_theta_lo=c3, k_theta_hi=c4,
        r_lo=r_lo, r_hi=r_hi, length0=curve_length(u0),
    )
