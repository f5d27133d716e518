"""Spatial discretization of the scalar flow in the log variable phi = ln u."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import _numerics
from .errors import DegenerateConvexity, NotSpacelike, StepUnderflow, ValidationError
from .geometry import EPS_CONV, EPS_SPACE

MODES = ("physical", "rescaled")
MIN_INTERVALS = 8


@dataclass(frozen=True)
class FlowConfig:
    """Parameters of one run.

    ``t_end`` is the horizon on the clock of the chosen mode: physical time t
    in ``"physical"`` mode, rescaled time s in ``"rescaled"`` mode.
    ``c_ref=None`` means the midpoint of [min ln u0, max ln u0].
    """

    alpha: float
    c: float = 0.0
    d: float = 1.0
    n: int = 64
    mode: str = "physical"
    c_ref: Optional[float] = None
    sigma_cfl: float = 0.4
    dt_max: float = 1e-2
    t_end: float = 1.0
    eps_space: float = EPS_SPACE
    eps_conv: float = EPS_CONV
    convergence_tol: float = 1e-8
    snapshot_stride: int = 100
    tol_env: float = 1e-4
    tol_grad: float = 1e-8

    def __post_init__(self):
        _check(math.isfinite(self.alpha) and self.alpha <= 0.0,
               "alpha", f"alpha must be <= 0, got {self.alpha}")
        _check(math.isfinite(self.c) and math.isfinite(self.d) and self.d > self.c,
               "domain", f"need finite c < d, got c={self.c}, d={self.d}")
        _check(isinstance(self.n, (int, np.integer)) and self.n >= MIN_INTERVALS,
               "grid_n", f"grid_n must be an integer >= {MIN_INTERVALS}, got {self.n}")
        _check(self.mode in MODES, "mode", f"mode must be one of {MODES}, got {self.mode!r}")
        _check(self.c_ref is None or math.isfinite(self.c_ref), "c_ref", "c_ref must be finite")
        _check(0.0 < self.sigma_cfl < 1.0, "sigma_cfl", "sigma_cfl must lie in (0, 1)")
        _check(self.dt_max > 0.0, "dt_max", "dt_max must be > 0")
        _check(self.t_end > 0.0, "t_end", "t_end must be > 0")
        _check(0.0 <= self.eps_space < 1.0, "eps_space", "eps_space must lie in [0, 1)")
        _check(self.eps_conv >= 0.0, "eps_conv", "eps_conv must be >= 0")
        _check(self.convergence_tol > 0.0, "convergence_tol", "convergence_tol must be > 0")
        _check(isinstance(self.snapshot_stride, (int, np.integer)) and self.snapshot_stride >= 1,
               "snapshot_stride", "snapshot_stride must be a positive integer")
        _check(self.tol_env >= 0.0, "tol_env", "tol_env must be >= 0")
        _check(self.tol_grad >= 0.0, "tol_grad", "tol_grad must be >= 0")

    @property
    def h(self):
        return (self.d - self.c) / self.n

    @property
    def rescaled(self):
        return self.mode == "rescaled"

    def replace(self, **changes):
        return replace(self, **changes)


def _check(ok, key, message):
    if not ok:
        raise ValidationError(key, message)


def _raise_status(status, node, stage=None):
    where = f"node {node}" + (f", RK stage {stage}" if stage else "")
    if status == _numerics.NOT_SPACELIKE:
        raise NotSpacelike(f"spacelike guard violated at {where}", node=node, stage=stage)
    if status == _numerics.DEGENERATE:
        raise DegenerateConvexity(f"convexity guard violated at {where}", node=node, stage=stage)
    if status == _numerics.UNDERFLOW:
        raise StepUnderflow("stable step fell below 1e-14")
    raise RuntimeError(f"unknown kernel status {status}")


def _require_grid(state):
    if state.n < MIN_INTERVALS:
        raise ValueError(f"need n >= {MIN_INTERVALS} intervals, got {state.n}")


def spatial_derivatives(state):
    """Return (u_xi, u_xixi) by central differences with Neumann ghost reflection.

    The boundary first derivative is exactly zero; the boundary second
    derivative uses the reflected ghost and stays second order.
    """
    _require_grid(state)
    ux = np.empty(state.n + 1)
    uxx = np.empty(state.n + 1)
    _numerics.derivatives(state.u, state.h, ux, uxx)
    return ux, uxx


def _rhs(u, h, cfg, shift):
    out = np.empty(u.shape[0])
    status, node = _numerics.flow_rhs(u, h, float(cfg.alpha), shift,
                                      cfg.eps_space, cfg.eps_conv, out)
    if status != _numerics.OK:
        _raise_status(status, node)
    return out


def rhs_physical(state, cfg):
    """dphi/dt = -e^{-alpha phi} v^4 / (v^2 + phi_xixi), with v^2 = 1 - phi_xi^2.

    Equal to -v / (u^(1 + alpha) k) node by node.
    """
    _require_grid(state)
    return _rhs(state.u, state.h, cfg, 0.0)


def rhs_rescaled(state, cfg):
    """dphi~/ds: the physical expression evaluated on u~, plus one."""
    _require_grid(state)
    return _rhs(state.u, state.h, cfg, 1.0)


def diffusion_coefficient(state, cfg):
    """max over nodes of dQ/dphi_xixi = e^{-alpha phi} v^4 / (v^2 + phi_xixi)^2."""
    _require_grid(state)
    status, node, value = _numerics.max_diffusivity(
        state.u, state.h, float(cfg.alpha), cfg.eps_space, cfg.eps_conv)
    if status != _numerics.OK:
        _raise_status(status, node)
    return value
