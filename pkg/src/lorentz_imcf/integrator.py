"""Adaptive explicit RK4 integration of the physical or rescaled flow."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from . import _numerics
from .diagnostics import (DiagnosticsRecord, LengthSample, evaluate_invariants,
                          length_ode_residual, oscillation_and_convergence)
from .errors import DegenerateConvexity, NotSpacelike, StepUnderflow
from .geometry import GraphState, curve_length
from .kernel import _raise_status, _require_grid, diffusion_coefficient
from .theory import TheoryEnvelope, build_envelope, inverse_time_map, time_map

logger = logging.getLogger(__name__)


class Termination(str, enum.Enum):
    REACHED_T_END = "reached_t_end"
    CONVERGED = "converged"
    GUARD_VIOLATION = "guard_violation"
    STEP_UNDERFLOW = "step_underflow"


@dataclass
class RunResult:
    final_state: GraphState
    series: List[DiagnosticsRecord]
    termination: Termination
    r_infinity: Optional[float] = None
    envelope: Optional[TheoryEnvelope] = None
    steps: int = 0
    message: str = ""


def stable_dt(state, cfg):
    """min(dt_max, sigma_cfl h^2 / D) with D the largest parabolic coefficient."""
    dt = min(cfg.dt_max, cfg.sigma_cfl * state.h ** 2 / diffusion_coefficient(state, cfg))
    if dt < _numerics.DT_FLOOR:
        raise StepUnderflow(f"stable step {dt:.3e} below {_numerics.DT_FLOOR:g}")
    return dt


def rk4_step(state, cfg, dt):
    """Advance ``state`` by ``dt`` on the clock of ``cfg.mode``.

    Guards are checked at every stage; a failure names the stage.
    """
    _require_grid(state)
    shift = 1.0 if cfg.rescaled else 0.0
    out = np.empty(state.n + 1)
    status, stage, node = _numerics.rk4(state.phi, float(dt), state.h, float(cfg.alpha),
                                        shift, cfg.eps_space, cfg.eps_conv, out)
    if status != _numerics.OK:
        _raise_status(status, node, stage)
    if cfg.rescaled:
        return state.with_values(np.exp(out), s=state.s + dt)
    return state.with_values(np.exp(out), t=state.t + dt)


def rescale_initial(u0, c_ref):
    """u~0 = u0 / Theta(0, c_ref) = u0 e^{-c_ref}."""
    return GraphState(u0.c, u0.d, u0.u * math.exp(-c_ref))


def run_flow(initial, cfg):
    """Integrate from physical initial data ``initial`` until the horizon.

    In rescaled mode the data are first divided by Theta(0, c_ref) and the
    run stops early once both the oscillation and the velocity of u~ fall
    below ``cfg.convergence_tol``; r_infinity is then exp(mean phi~).
    Guard failures end the run with the last valid state instead of raising.
    """
    if (initial.c, initial.d, initial.n) != (cfg.c, cfg.d, cfg.n):
        raise ValueError("initial state grid does not match the configuration")
    try:
        env = build_envelope(initial, cfg)
    except (NotSpacelike, DegenerateConvexity) as exc:
        return RunResult(initial, [], Termination.GUARD_VIOLATION, message=str(exc))
    return _Runner(initial, cfg, env).run()


class _Runner:
    def __init__(self, initial, cfg, env):
        self.cfg = cfg
        self.env = env
        self.rescaled = cfg.rescaled
        self.shift = 1.0 if self.rescaled else 0.0
        self.alpha = float(cfg.alpha)
        self.h = initial.h
        if self.rescaled:
            self.phi = np.log(initial.u) - env.c_ref
        else:
            self.phi = np.log(initial.u)
        self.clock = 0.0
        self.step = 0
        self.series = []

    def state(self):
        u = np.exp(self.phi)
        if self.rescaled:
            t = inverse_time_map(self.clock, self.env.c_ref, self.alpha)
            return GraphState(self.cfg.c, self.cfg.d, u, t=t, s=self.clock)
        s = time_map(self.clock, self.env.c_ref, self.alpha)
        return GraphState(self.cfg.c, self.cfg.d, u, t=self.clock, s=s)

    def record(self, state):
        self.series.append(evaluate_invariants(state, self.env, self.cfg, step=self.step))

    def run(self):
        cfg = self.cfg
        stride = cfg.snapshot_stride
        self.record(self.state())
        pending = None  # (series index, sample before the recorded step, recorded state)
        termination = Termination.REACHED_T_END
        message = ""
        r_inf = None
        out = np.empty_like(self.phi)

        while self.clock < cfg.t_end:
            will_record = (self.step + 1) % stride == 0
            before = None
            if not self.rescaled and will_record:
                before = LengthSample(self.clock, curve_length(self.state(), cfg.eps_space))

            status, stage, node, dt, clock = _numerics.advance(
                self.phi, self.clock, cfg.t_end, self.h, self.alpha, self.shift,
                cfg.sigma_cfl, cfg.dt_max, cfg.eps_space, cfg.eps_conv, out)
            if status != _numerics.OK:
                try:
                    _raise_status(status, node, stage)
                except StepUnderflow as exc:
                    termination, message = Termination.STEP_UNDERFLOW, str(exc)
                except (NotSpacelike, DegenerateConvexity) as exc:
                    termination, message = Termination.GUARD_VIOLATION, str(exc)
                logger.warning("run stopped at step %d: %s", self.step, message)
                break

            self.phi, out = out, self.phi
            self.clock = clock
            self.step += 1
            last = self.clock >= cfg.t_end
            if pending is None and not (will_record or last):
                continue
            state = self.state()

            if pending is not None:
                idx, prev, mid = pending
                after = LengthSample(self.clock, curve_length(state, cfg.eps_space))
                res = length_ode_residual(prev, after, mid, cfg)
                self.series[idx] = replace(self.series[idx], length_ode_residual=res)
                pending = None

            if will_record or last:
                self.record(state)
                if before is not None and not last:
                    pending = (len(self.series) - 1, before, state)
                if self.rescaled:
                    _, _, converged = oscillation_and_convergence(state, cfg)
                    if converged:
                        termination = Termination.CONVERGED
                        r_inf = float(np.exp(np.mean(self.phi)))
                        break

        state = self.state()
        if self.series[-1].step != self.step:
            self.record(state)
        return RunResult(state, self.series, termination, r_infinity=r_inf,
                         envelope=self.env, steps=self.step, message=message)
