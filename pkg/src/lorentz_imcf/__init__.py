"""Anisotropic inverse mean curvature flow of spacelike radial graphs in the
Lorentz-Minkowski plane: simulator, closed-form bounds and invariant monitors."""

from .diagnostics import (DiagnosticsRecord, evaluate_invariants, length_ode_residual,
                          oscillation_and_convergence)
from .errors import (ConfigError, DegenerateConvexity, DomainError, FlowError,
                     NotSpacelike, ParseError, StepUnderflow, ValidationError)
from .geometry import (GeometryFields, GraphState, Point2L, curvature_closed_form,
                       curvature_frenet_oracle,
                       curve_length, embed_graph, geometry_fields, hyperbola_point,
                       minkowski_inner)
from .integrator import RunResult, Termination, rk4_step, run_flow, stable_dt
from .kernel import (FlowConfig, diffusion_coefficient, rhs_physical, rhs_rescaled,
                     spatial_derivatives)
from .theory import (TheoryEnvelope, build_envelope, inverse_time_map, radius_interval,
                     theta, time_map)

__version__ = "0.1.0"

__all__ = [
    "DiagnosticsRecord", "evaluate_invariants", "length_ode_residual",
    "oscillation_and_convergence",
    "ConfigError", "DegenerateConvexity", "DomainError", "FlowError", "NotSpacelike",
    "ParseError", "StepUnderflow", "ValidationError",
    "GeometryFields", "GraphState", "Point2L", "curvature_closed_form", "curvature_frenet_oracle",
    "curve_length",
    "embed_graph", "geometry_fields", "hyperbola_point", "minkowski_inner",
    "RunResult", "Termination", "rk4_step", "run_flow", "stable_dt",
    "FlowConfig", "diffusion_coefficient", "rhs_physical", "rhs_rescaled",
    "spatial_derivatives",
    "TheoryEnvelope", "build_envelope", "inverse_time_map", "radius_interval", "theta",
    "time_map",
]
