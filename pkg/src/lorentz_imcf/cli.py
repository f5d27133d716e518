"""Command-line front end: simulate, verify, sweep, order.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 guard violation or step underflow.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from .config import DEFAULT_HORIZON, parse_config
from .csvio import _fmt, write_series_csv, write_snapshot
from .errors import ConfigError
from .harness import StudySpec, alpha_sweep, convergence_order_study
from .integrator import Termination, run_flow

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3

logger = logging.getLogger("lorentz_imcf")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lorentz-imcf",
        description="Anisotropic inverse mean curvature flow of radial graphs in R^2_1.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, type=Path, help="JSON configuration file")
        p.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
        p.add_argument("--alpha", type=float, help="override alpha")
        p.add_argument("--grid-n", type=int, help="override grid_n")
        p.add_argument("--mode", choices=("physical", "rescaled"), help="override mode")
        p.add_argument("-v", "--verbose", action="store_true")
        return p

    common(sub.add_parser("simulate", help="run one flow and write its time series"))
    common(sub.add_parser("verify", help="run and check every invariant at every record"))
    common(sub.add_parser("sweep", help="limit radius against its interval for several alphas"))
    order = common(sub.add_parser("order", help="spatial or temporal convergence study"))
    order.add_argument("--kind", choices=("spatial", "temporal"),
                       help="study kind (default: study.kind from the config, else spatial)")
    return parser


def _load(args):
    overrides = {"alpha": args.alpha, "grid_n": args.grid_n, "mode": args.mode}
    cfg = parse_config(args.config, overrides)
    out_dir = args.out if args.out is not None else cfg.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    return cfg, out_dir


def _dump_json(obj, path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n")


def _run(cfg, out_dir):
    result = run_flow(cfg.initial, cfg.flow)
    write_series_csv(result, out_dir / "series.csv")
    write_snapshot(cfg.initial, out_dir / "snapshot_initial.csv")
    write_snapshot(result.final_state, out_dir / "snapshot_final.csv")
    summary = {
        "termination": result.termination.value,
        "steps": result.steps,
        "r_infinity": result.r_infinity,
        "message": result.message,
        "config": asdict(cfg.flow),
        "initial_kind": cfg.initial_kind,
        "envelope": asdict(result.envelope) if result.envelope else None,
    }
    _dump_json(summary, out_dir / "summary.json")
    return result


def _guard_failed(result):
    return result.termination in (Termination.GUARD_VIOLATION, Termination.STEP_UNDERFLOW)


def cmd_simulate(args):
    cfg, out_dir = _load(args)
    result = _run(cfg, out_dir)
    print(f"{result.termination.value}: {result.steps} steps, "
          f"{len(result.series)} records -> {out_dir}")
    if result.r_infinity is not None:
        print(f"r_infinity = {result.r_infinity:.12g}")
    if _guard_failed(result):
        print(f"guard: {result.message}", file=sys.stderr)
        return EXIT_GUARD
    return EXIT_OK


def verification_lines(result, cfg):
    """(name, passed, detail) for each monitored invariant over the whole series."""
    series = result.series
    env = result.envelope
    tol = cfg.tol_env
    grads = [rec.grad_phi_max for rec in series]
    rises = np.diff(grads) if len(grads) > 1 else np.zeros(1)
    checks = [
        ("c0_envelope", max(r.env_violation for r in series), tol),
        ("phidot_bounds", max(r.phidot_violation for r in series), tol),
        ("gradient_non_increasing", float(max(rises.max(), 0.0)), cfg.tol_grad),
        ("gradient_below_sup0",
         max(max(grads) - env.grad0, 0.0), cfg.tol_grad),
        ("k_theta_lower", max(env.k_theta_lo - min(r.k_theta_min for r in series), 0.0), tol),
        ("k_theta_upper", max(max(r.k_theta_max for r in series) - env.k_theta_hi, 0.0), tol),
        ("psi_identity", max(r.psi_identity_gap for r in series), 1e-12),
    ]
    lines = [(name, value <= limit, f"{value:.3e} <= {limit:.1e}")
             for name, value, limit in checks]
    lines.append(("all_ok", all(r.all_ok for r in series), f"{len(series)} records"))
    return lines


def cmd_verify(args):
    cfg, out_dir = _load(args)
    result = _run(cfg, out_dir)
    if not result.series:
        print(f"FAIL initial data: {result.message}")
        return EXIT_GUARD
    for name, passed, detail in verification_lines(result, cfg.flow):
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    if _guard_failed(result):
        print(f"FAIL run: {result.termination.value}: {result.message}")
        return EXIT_GUARD
    # the exit status is the conjunction of the per-record verdicts
    return EXIT_OK if all(r.all_ok for r in result.series) else EXIT_VERIFY_FAILED


def _study(cfg, kind):
    if cfg.study is not None:
        return replace(cfg.study, kind=kind, base_cfg=cfg.flow)
    return StudySpec(kind=kind, base_cfg=cfg.flow, initial_family=cfg.initial_kind)


def _write_table(path, header, rows):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else _fmt(v) if not isinstance(v, str) else v
                             for v in row])


def cmd_sweep(args):
    cfg, out_dir = _load(args)
    spec = _study(cfg, "alpha_sweep")
    if cfg.flow.mode != "rescaled":
        # a physical horizon means nothing for the slow-time runs of the sweep
        spec = replace(spec, base_cfg=cfg.flow.replace(mode="rescaled",
                                                       t_end=DEFAULT_HORIZON["rescaled"]))
    if cfg.study is None:
        # without a study section, take the family parameters from the initial block
        doc = json.loads(Path(args.config).read_text())
        init = doc.get("initial", {})
        spec = replace(spec, r=float(init.get("r", 1.0)),
                       amplitude=float(init.get("amplitude", 0.05)),
                       mode_m=int(init.get("mode_m", 1)), seed=int(init.get("seed", 0)))
    rows = alpha_sweep(spec)
    header = ["alpha", "r_infinity", "r_lo", "r_hi", "contained", "termination", "steps"]
    _write_table(out_dir / "sweep.csv", header,
                 [(r.alpha, r.r_infinity, r.r_lo, r.r_hi, r.contained, r.termination, r.steps)
                  for r in rows])
    for r in rows:
        r_inf = "-" if r.r_infinity is None else f"{r.r_infinity:.10g}"
        print(f"alpha={r.alpha:g} r_inf={r_inf} interval=[{r.r_lo:.6g}, {r.r_hi:.6g}] "
              f"contained={r.contained} ({r.termination})")
    return EXIT_OK if all(r.contained for r in rows) else EXIT_VERIFY_FAILED


def cmd_order(args):
    cfg, out_dir = _load(args)
    if args.kind is not None:
        kind = f"order_{args.kind}"
    elif cfg.study is not None and cfg.study.kind.startswith("order_"):
        kind = cfg.study.kind
    else:
        kind = "order_spatial"
    spec = _study(cfg, kind)
    if kind == "order_spatial" and cfg.study is None:
        doc = json.loads(Path(args.config).read_text())
        init = doc.get("initial", {})
        spec = replace(spec, r=float(init.get("r", 1.0)),
                       amplitude=float(init.get("amplitude", 0.05)),
                       mode_m=int(init.get("mode_m", 1)), seed=int(init.get("seed", 0)))
    elif kind == "order_temporal" and cfg.study is None:
        spec = replace(spec, r=float(cfg.initial.u[0]))
    rows = convergence_order_study(spec)
    _write_table(out_dir / "order.csv", ["step", "error", "order", "exact"],
                 [(r.step, r.error, r.order, r.exact) for r in rows])
    for r in rows:
        order = "exact" if r.exact else ("-" if r.order is None else f"{r.order:.3f}")
        print(f"step={r.step:.6g} error={r.error:.6e} order={order}")
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "verify": cmd_verify,
            "sweep": cmd_sweep, "order": cmd_order}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
