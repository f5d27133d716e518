import json
import math

import numpy as np
import pytest

from lorentz_imcf import ParseError, ValidationError
from lorentz_imcf.config import config_from_dict, parse_config

MINIMAL = {"alpha": -1, "domain": {"c": 0, "d": 1}, "grid_n": 256, "mode": "rescaled",
           "initial": {"kind": "constant", "r": 2}}


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return path


def test_minimal_file_gets_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, MINIMAL))
    flow = cfg.flow
    assert (flow.alpha, flow.n, flow.mode) == (-1.0, 256, "rescaled")
    assert flow.t_end == 50.0 and flow.sigma_cfl == 0.4 and flow.convergence_tol == 1e-8
    assert flow.c_ref == pytest.approx(math.log(2.0))
    assert cfg.initial_kind == "constant" and cfg.study is None
    np.testing.assert_array_equal(cfg.initial.u, 2.0)
    assert str(cfg.output_dir) == "out"


def test_auto_c_ref_is_midpoint():
    doc = dict(MINIMAL, mode="physical", initial={"kind": "cosine", "r": 2, "amplitude": 0.05})
    cfg = config_from_dict(doc)
    phi = np.log(cfg.initial.u)
    assert cfg.flow.c_ref == pytest.approx(0.5 * (phi.min() + phi.max()))
    explicit = config_from_dict(dict(doc, c_ref=float(phi.min())))
    assert explicit.flow.c_ref == float(phi.min())


@pytest.mark.parametrize("patch, key", [
    ({"alpha": 0.5}, "alpha"),
    ({"alpha": "minus one"}, "alpha"),
    ({"grid_n": 100.5}, "grid_n"),
    ({"grid_n": 4}, "grid_n"),
    ({"mode": "slow"}, "mode"),
    ({"domain": {"c": 1, "d": 0}}, "domain"),
    ({"domain": {"c": 0, "e": 1}}, "domain.e"),
    ({"colour": "red"}, "colour"),
    ({"time": {"t_end": 1.0}}, "time.t_end"),
    ({"time": {"sigma_cfl": 1.5}}, "time.sigma_cfl"),
    ({"time": {"s_end": -2}}, "time.s_end"),
    ({"tolerances": {"env": -1}}, "tolerances.env"),
    ({"initial": {"kind": "gaussian"}}, "initial.kind"),
    ({"initial": {"kind": "cosine", "r": -1}}, "initial.r"),
    ({"initial": {"kind": "cosine", "mode_m": 0}}, "initial.mode_m"),
    ({"c_ref": 9.0}, "c_ref"),
    ({"output": {"dir": ""}}, "output.dir"),
    ({"study": {"kind": "fit"}}, "study.kind"),
    ({"study": {"alphas": [0.1]}}, "study.alphas"),
])
def test_validation_errors_name_the_key(patch, key):
    with pytest.raises(ValidationError) as info:
        config_from_dict(dict(MINIMAL, **patch))
    assert info.value.key == key


def test_missing_required_key():
    doc = dict(MINIMAL)
    del doc["grid_n"]
    with pytest.raises(ValidationError) as info:
        config_from_dict(doc)
    assert info.value.key == "grid_n"


def test_alpha_message():
    with pytest.raises(ValidationError, match="alpha must be <= 0"):
        config_from_dict(dict(MINIMAL, alpha=0.5))


def test_non_convex_initial_data_rejected_before_run():
    doc = dict(MINIMAL, initial={"kind": "cosine", "r": 1, "amplitude": 0.05, "mode_m": 5})
    with pytest.raises(ValidationError, match="convexity guard") as info:
        config_from_dict(doc)
    assert info.value.key == "initial.amplitude"


def test_spacelike_violation_rejected():
    doc = dict(MINIMAL, initial={"kind": "cosine", "r": 1, "amplitude": 0.9, "mode_m": 1})
    with pytest.raises(ValidationError, match="spacelike guard"):
        config_from_dict(doc)


def test_syntax_error_reports_position(tmp_path):
    path = write(tmp_path, '{\n  "alpha": -1,\n  "grid_n": ,\n}')
    with pytest.raises(ParseError) as info:
        parse_config(path)
    assert info.value.line == 3 and info.value.column == 13


def test_top_level_must_be_object(tmp_path):
    with pytest.raises(ParseError):
        parse_config(write(tmp_path, "[1, 2]"))


def test_overrides_and_mode_switch():
    doc = dict(MINIMAL, mode="physical", time={"t_end": 0.3, "dt_max": 1e-3})
    cfg = config_from_dict(doc, {"alpha": -2.0, "grid_n": 32, "mode": None})
    assert (cfg.flow.alpha, cfg.flow.n, cfg.flow.t_end) == (-2.0, 32, 0.3)
    assert cfg.initial.n == 32
    # switching the mode drops the physical horizon in favour of the rescaled default
    switched = config_from_dict(doc, {"mode": "rescaled"})
    assert switched.flow.rescaled and switched.flow.t_end == 50.0
    assert switched.flow.dt_max == 1e-3


def test_study_section():
    doc = dict(MINIMAL, study={"kind": "order_spatial", "refinements": 2,
                               "spatial_quantity": "envelope"})
    cfg = config_from_dict(doc)
    assert cfg.study.kind == "order_spatial" and cfg.study.refinements == 2
    assert cfg.study.base_cfg == cfg.flow and cfg.study.r == 2.0
    assert cfg.study.alphas == (-2.0, -1.0, -0.5, 0.0)
