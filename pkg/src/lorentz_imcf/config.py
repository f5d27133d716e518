"""JSON run configuration: parsing, defaults and validation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import (DegenerateConvexity, NotSpacelike, ParseError, ValidationError)
from .geometry import GraphState, geometry_fields
from .harness import FAMILIES, KINDS, StudySpec, initial_state
from .kernel import MODES, FlowConfig
from .theory import resolve_c_ref

_SCHEMA = {
    "alpha": None,
    "domain": {"c", "d"},
    "grid_n": None,
    "mode": None,
    "c_ref": None,
    "time": {"t_end", "s_end", "sigma_cfl", "dt_max"},
    "initial": {"kind", "r", "amplitude", "mode_m", "seed"},
    "tolerances": {"convergence", "env", "grad"},
    "output": {"dir", "snapshot_stride"},
    "study": {"kind", "refinements", "alphas", "spatial_quantity", "radius_tol"},
}
_REQUIRED = ("alpha", "domain", "grid_n", "mode", "initial")
DEFAULT_HORIZON = {"physical": 1.0, "rescaled": 50.0}
_FLOW_KEYS = {
    "n": "grid_n", "sigma_cfl": "time.sigma_cfl", "dt_max": "time.dt_max",
    "convergence_tol": "tolerances.convergence", "tol_env": "tolerances.env",
    "tol_grad": "tolerances.grad", "snapshot_stride": "output.snapshot_stride",
}


@dataclass(frozen=True)
class ParsedConfig:
    flow: FlowConfig
    initial: GraphState
    initial_kind: str
    study: Optional[StudySpec]
    output_dir: Path


def _number(value, key, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(key, f"expected a number, got {value!r}")
    if integer and not (isinstance(value, int) or float(value).is_integer()):
        raise ValidationError(key, f"expected an integer, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(key, "must be finite")
    return int(value) if integer else float(value)


def _section(doc, key):
    value = doc.get(key, {})
    if not isinstance(value, dict):
        raise ValidationError(key, "expected an object")
    unknown = sorted(set(value) - _SCHEMA[key])
    if unknown:
        raise ValidationError(f"{key}.{unknown[0]}", "unknown key")
    return value


def load_document(path):
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    return doc


def parse_config(path, overrides=None):
    """Read and fully validate a run configuration.

    ``overrides`` may set ``alpha``, ``grid_n`` and ``mode`` before validation.
    The initial datum is built here, so a datum violating the spacelike or
    convexity guard is rejected before any integration starts.
    """
    return config_from_dict(load_document(path), overrides)


def config_from_dict(doc, overrides=None):
    doc = dict(doc)
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    if "mode" in overrides and overrides["mode"] != doc.get("mode"):
        # a switched mode drops the other clock's horizon and falls back to the default
        time = doc.get("time")
        if isinstance(time, dict):
            doc["time"] = {k: v for k, v in time.items() if k not in ("t_end", "s_end")}
    doc.update(overrides)
    unknown = sorted(set(doc) - set(_SCHEMA))
    if unknown:
        raise ValidationError(unknown[0], "unknown key")
    for key in _REQUIRED:
        if key not in doc:
            raise ValidationError(key, "missing required key")

    alpha = _number(doc["alpha"], "alpha")
    if alpha > 0:
        raise ValidationError("alpha", f"alpha must be <= 0, got {alpha}")
    domain = _section(doc, "domain")
    c = _number(domain.get("c", 0.0), "domain.c")
    d = _number(domain.get("d", 1.0), "domain.d")
    n = _number(doc["grid_n"], "grid_n", integer=True)
    mode = doc["mode"]
    if mode not in MODES:
        raise ValidationError("mode", f"must be one of {MODES}, got {mode!r}")

    time = _section(doc, "time")
    if "t_end" in time and "s_end" in time:
        raise ValidationError("time", "give t_end or s_end, not both")
    wrong = "s_end" if mode == "physical" else "t_end"
    if wrong in time:
        raise ValidationError(f"time.{wrong}", f"not valid in {mode} mode")
    right = "t_end" if mode == "physical" else "s_end"
    horizon = _number(time.get(right, DEFAULT_HORIZON[mode]), f"time.{right}")

    tol = _section(doc, "tolerances")
    out = _section(doc, "output")
    flow_kw = dict(
        alpha=alpha, c=c, d=d, n=n, mode=mode, t_end=horizon,
        sigma_cfl=_number(time.get("sigma_cfl", 0.4), "time.sigma_cfl"),
        dt_max=_number(time.get("dt_max", 1e-2), "time.dt_max"),
        convergence_tol=_number(tol.get("convergence", 1e-8), "tolerances.convergence"),
        tol_env=_number(tol.get("env", 1e-4), "tolerances.env"),
        tol_grad=_number(tol.get("grad", 1e-8), "tolerances.grad"),
        snapshot_stride=_number(out.get("snapshot_stride", 100), "output.snapshot_stride",
                                integer=True),
    )
    # FlowConfig validates ranges; report its complaint under the file's key path
    paths = dict(_FLOW_KEYS, t_end=f"time.{right}")
    try:
        FlowConfig(**flow_kw)
    except ValidationError as exc:
        raise ValidationError(paths.get(exc.key, exc.key), exc.message) from None

    init = _section(doc, "initial")
    kind = init.get("kind")
    if kind not in FAMILIES:
        raise ValidationError("initial.kind", f"must be one of {FAMILIES}, got {kind!r}")
    r = _number(init.get("r", 1.0), "initial.r")
    if r <= 0:
        raise ValidationError("initial.r", "must be > 0")
    amplitude = _number(init.get("amplitude", 0.05), "initial.amplitude")
    mode_m = _number(init.get("mode_m", 1), "initial.mode_m", integer=True)
    if mode_m < 1:
        raise ValidationError("initial.mode_m", "must be >= 1")
    seed = _number(init.get("seed", 0), "initial.seed", integer=True)
    try:
        u0 = initial_state(kind, c, d, n, r=r, amplitude=amplitude, mode_m=mode_m, seed=seed)
    except ValueError as exc:
        raise ValidationError("initial", str(exc)) from exc
    try:
        geometry_fields(u0, alpha)
    except NotSpacelike as exc:
        raise ValidationError("initial.amplitude", f"initial data violate the spacelike guard: {exc}")
    except DegenerateConvexity as exc:
        raise ValidationError("initial.amplitude", f"initial data violate the convexity guard: {exc}")

    c_ref = doc.get("c_ref", "auto")
    if c_ref == "auto":
        c_ref = resolve_c_ref(u0)
    else:
        c_ref = resolve_c_ref(u0, _number(c_ref, "c_ref"))
    flow = FlowConfig(c_ref=c_ref, **flow_kw)

    study = None
    if "study" in doc:
        st = _section(doc, "study")
        skind = st.get("kind", "alpha_sweep")
        if skind not in KINDS:
            raise ValidationError("study.kind", f"must be one of {KINDS}, got {skind!r}")
        alphas = st.get("alphas", [-2.0, -1.0, -0.5, 0.0])
        if not isinstance(alphas, list) or not alphas:
            raise ValidationError("study.alphas", "expected a non-empty list")
        alphas = tuple(_number(a, "study.alphas") for a in alphas)
        if any(a > 0 for a in alphas):
            raise ValidationError("study.alphas", "every alpha must be <= 0")
        refinements = _number(st.get("refinements", 3), "study.refinements", integer=True)
        if refinements < 1:
            raise ValidationError("study.refinements", "must be >= 1")
        quantity = st.get("spatial_quantity", "curvature")
        if quantity not in ("curvature", "envelope"):
            raise ValidationError("study.spatial_quantity", "must be 'curvature' or 'envelope'")
        study = StudySpec(kind=skind, base_cfg=flow, refinements=refinements, alphas=alphas,
                          initial_family=kind, r=r, amplitude=amplitude, mode_m=mode_m,
                          seed=seed, spatial_quantity=quantity,
                          radius_tol=_number(st.get("radius_tol", 1e-3), "study.radius_tol"))

    out_dir = out.get("dir", "out")
    if not isinstance(out_dir, str) or not out_dir:
        raise ValidationError("output.dir", "expected a non-empty string")
    return ParsedConfig(flow=flow, initial=u0, initial_kind=kind, study=study,
                        output_dir=Path(out_dir))
