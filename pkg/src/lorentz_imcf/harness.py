"""Reproducible studies: convergence orders, alpha sweeps, scaling covariance."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateConvexity, FlowError, NotSpacelike
from .geometry import GraphState, curvature_frenet_oracle, geometry_fields
from .integrator import Termination, run_flow
from .kernel import FlowConfig
from .theory import radius_interval, theta

FAMILIES = ("constant", "cosine", "random_cosine_mix")
KINDS = ("order_spatial", "order_temporal", "alpha_sweep", "covariance")
EXACT_FLOOR = 1e-13


@dataclass(frozen=True)
class StudySpec:
    kind: str
    base_cfg: FlowConfig
    refinements: int = 3
    alphas: Sequence[float] = (-2.0, -1.0, -0.5, 0.0)
    initial_family: str = "cosine"
    r: float = 2.0
    amplitude: float = 0.05
    mode_m: int = 1
    seed: int = 0
    spatial_quantity: str = "curvature"
    radius_tol: float = 1e-3

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.initial_family not in FAMILIES:
            raise ValueError(f"initial_family must be one of {FAMILIES}")
        if self.refinements < 1:
            raise ValueError("refinements must be >= 1")
        if any(a > 0 for a in self.alphas):
            raise ValueError("alphas must be <= 0")
        if self.spatial_quantity not in ("curvature", "envelope"):
            raise ValueError("spatial_quantity must be 'curvature' or 'envelope'")

    def initial(self, n=None, cfg=None):
        cfg = cfg or self.base_cfg
        return initial_state(self.initial_family, cfg.c, cfg.d, n or cfg.n, r=self.r,
                             amplitude=self.amplitude, mode_m=self.mode_m, seed=self.seed)


def _admissible(state):
    try:
        geometry_fields(state, 0.0)
    except (NotSpacelike, DegenerateConvexity):
        return False
    return True


def initial_state(kind, c, d, n, r=1.0, amplitude=0.05, mode_m=1, seed=0):
    """Neumann-compatible initial data.

    ``cosine``: r (1 + A cos(m pi (xi - c)/(d - c))), returned as given even if
    it violates the guards, so callers can observe the rejection.
    ``random_cosine_mix``: modes 1..4 with coefficients uniform in [-A, A]
    from a seeded generator, halved until the data are spacelike and convex.
    """
    if kind not in FAMILIES:
        raise ValueError(f"unknown initial family {kind!r}")
    xi = c + (d - c) / n * np.arange(n + 1)
    angle = np.pi * (xi - c) / (d - c)
    if kind == "constant":
        return GraphState(c, d, np.full(n + 1, float(r)))
    if kind == "cosine":
        if int(mode_m) != mode_m or mode_m < 1:
            raise ValueError("mode_m must be a positive integer")
        return GraphState(c, d, r * (1.0 + amplitude * np.cos(mode_m * angle)))
    coeffs = np.random.default_rng(seed).uniform(-amplitude, amplitude, size=4)
    modes = np.arange(1, 5)
    for _ in range(60):
        u = r * (1.0 + np.cos(np.outer(angle, modes)) @ coeffs)
        if np.all(u > 0):
            state = GraphState(c, d, u)
            if _admissible(state):
                return state
        coeffs = 0.5 * coeffs
    return GraphState(c, d, np.full(n + 1, float(r)))


@dataclass(frozen=True)
class OrderRow:
    step: float
    error: float
    order: Optional[float]
    exact: bool


def _order_table(steps, errors):
    rows = []
    for i, (step, err) in enumerate(zip(steps, errors)):
        exact = err <= EXACT_FLOOR
        order = None
        if i > 0 and not exact and errors[i - 1] > EXACT_FLOOR:
            order = math.log2(errors[i - 1] / err) / math.log2(steps[i - 1] / step)
        rows.append(OrderRow(float(step), float(err), order, bool(exact)))
    return rows


def _spatial_error(spec, n):
    cfg = spec.base_cfg.replace(n=n)
    u0 = spec.initial(n, cfg)
    if spec.spatial_quantity == "curvature":
        closed = geometry_fields(u0, cfg.alpha, cfg.eps_space, cfg.eps_conv).k[1:-1]
        return float(np.max(np.abs(closed - curvature_frenet_oracle(u0, cfg.eps_space))))
    # dt proportional to h^2 keeps the time error in step with the space error
    cfg = cfg.replace(mode="physical",
                      dt_max=spec.base_cfg.dt_max * (spec.base_cfg.n / n) ** 2)
    result = run_flow(u0, cfg)
    if result.termination is not Termination.REACHED_T_END:
        raise FlowError(f"refinement n={n} ended with {result.termination.value}")
    return max(rec.env_violation for rec in result.series)


def _temporal_error(spec, dt):
    cfg = spec.base_cfg.replace(mode="physical", dt_max=dt)
    u0 = initial_state("constant", cfg.c, cfg.d, cfg.n, r=spec.r)
    result = run_flow(u0, cfg)
    if result.termination is not Termination.REACHED_T_END:
        raise FlowError(f"refinement dt={dt} ended with {result.termination.value}")
    exact = theta(cfg.t_end, math.log(spec.r), cfg.alpha)
    return float(np.max(np.abs(result.final_state.u - exact)))


def convergence_order_study(spec):
    """Errors and observed orders across grid doublings or step halvings.

    Spatial: n = base n * 2^k, error is the closed-form vs Frenet-oracle
    curvature gap (or the envelope violation of a physical run). Temporal:
    radial data with dt_max = base dt_max / 2^k, error against Theta at t_end;
    the base configuration must keep dt_max below the stability limit.
    """
    if spec.kind == "order_spatial":
        ns = [spec.base_cfg.n * 2 ** k for k in range(spec.refinements)]
        errors = []
        for n in ns:
            try:
                errors.append(_spatial_error(spec, n))
            except FlowError as exc:
                raise FlowError(f"n={n}: {exc}") from exc
        return _order_table([(spec.base_cfg.d - spec.base_cfg.c) / n for n in ns], errors)
    if spec.kind == "order_temporal":
        dts = [spec.base_cfg.dt_max / 2 ** k for k in range(spec.refinements)]
        errors = []
        for dt in dts:
            try:
                errors.append(_temporal_error(spec, dt))
            except FlowError as exc:
                raise FlowError(f"dt={dt}: {exc}") from exc
        return _order_table(dts, errors)
    raise ValueError(f"convergence_order_study needs an order_* kind, got {spec.kind!r}")


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    r_infinity: Optional[float]
    r_lo: float
    r_hi: float
    contained: bool
    termination: str
    steps: int


def _sweep_row(spec, alpha):
    cfg = spec.base_cfg.replace(alpha=alpha, mode="rescaled")
    u0 = spec.initial(cfg.n, cfg)
    try:
        r_lo, r_hi = radius_interval(u0)
    except NotSpacelike:
        r_lo = r_hi = math.nan
    result = run_flow(u0, cfg)
    r_inf = result.r_infinity
    contained = (r_inf is not None
                 and r_lo - spec.radius_tol <= r_inf <= r_hi + spec.radius_tol)
    return SweepRow(float(alpha), r_inf, r_lo, r_hi, bool(contained),
                    result.termination.value, result.steps)


def alpha_sweep(spec, max_workers=1):
    """One rescaled run per alpha; rows keep the order of ``spec.alphas``."""
    if spec.kind != "alpha_sweep":
        raise ValueError(f"alpha_sweep needs kind 'alpha_sweep', got {spec.kind!r}")
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_sweep_row, [spec] * len(spec.alphas), spec.alphas))
    return [_sweep_row(spec, a) for a in spec.alphas]


def scaling_covariance_check(r=1.0, lam=2.0, alpha=-1.0, t_probe=0.25, family="constant",
                             amplitude=0.05, mode_m=1, n=64, c=0.0, d=1.0, **cfg_kw):
    """max |lam u_r(., lam^(-alpha) t_probe) - u_(lam r)(., t_probe)| over nodes.

    u_rho is the physical run started from the ``family`` datum of base
    radius rho; extra keywords go to both FlowConfigs.
    """
    def final(radius, t_end):
        u0 = initial_state(family, c, d, n, r=radius, amplitude=amplitude, mode_m=mode_m)
        cfg = FlowConfig(alpha=alpha, c=c, d=d, n=n, mode="physical", t_end=t_end,
                         snapshot_stride=10 ** 9, **cfg_kw)
        result = run_flow(u0, cfg)
        if result.termination is not Termination.REACHED_T_END:
            raise FlowError(f"covariance run r={radius} ended with "
                            f"{result.termination.value}: {result.message}")
        return result.final_state.u

    small = final(r, lam ** (-alpha) * t_probe)
    large = final(lam * r, t_probe)
    return float(np.max(np.abs(lam * small - large)))
