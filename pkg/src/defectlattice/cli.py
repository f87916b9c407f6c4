"""Command-line front end.

Subcommands: closed-form, propagate, finite-size, eme-simulate,
eme-reconstruct, eme-fit, compare, preset.  Each accepts --config FILE
(JSON) whose keys mirror the long option names; explicit flags override
config values, and unknown config keys are rejected.  Exit codes: 0 on
success, 1 on domain errors, 2 on usage errors.

Units on the wire: tau = beta*z is dimensionless, couplings are 1/cm,
transverse lengths and wavelengths are um, propagation distances cm.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import errors
from .experiments import (
    DEFAULT_EME_CONFIG,
    EmeConfig,
    compare_models,
    preset,
    preset_labels,
    run_eme,
)
from .finitesize import cumulative_deviation, deviation, onset_time
from .lattice import (
    LatticeSpec,
    TimeGrid,
    build_hamiltonian,
    effective_decay_rate,
    initial_state,
    propagate,
    site_probabilities,
)
from .survival import c0_closed_form
from .eme.grid import read_field, write_field, Field
from .eme.reconstruct import fit_ricker, implied_n_eff, reconstruct_index
from .svgplot import line_chart
from .textio import write_csv

# ValueError covers the toolkit's invalid-input exceptions plus bad
# numeric values arriving through config files
_DOMAIN_ERRORS = (
    ValueError,
    TypeError,
    errors.SeriesDivergenceError,
    errors.QuadratureError,
    errors.EigensolverError,
    errors.SigmaExtractionError,
    errors.FitFailureError,
    FileNotFoundError,
)


def _write_json(path: str, payload: dict) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Fill unset options from --config JSON; reject unknown keys."""
    if not getattr(args, "config", None):
        return args
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        parser.error("--config must contain a JSON object")
    known = {k for k in vars(args) if k not in ("config", "func")}
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest not in known:
            parser.error(f"unknown config key {key!r}")
        if getattr(args, dest) is None:  # flags take precedence
            setattr(args, dest, value)
    return args


def _defaults(args: argparse.Namespace, **pairs) -> None:
    for dest, value in pairs.items():
        if getattr(args, dest) is None:
            setattr(args, dest, value)


def _tau_grid(tau_max: float, steps: int) -> TimeGrid:
    if steps < 2:
        raise errors.InvalidSpecError("steps must be >= 2")
    return TimeGrid.uniform(float(tau_max), int(steps))


# ---------------------------------------------------------------- commands

def _cmd_closed_form(args, parser):
    _defaults(args, tau_max=4.0, steps=400, mode="reconciled")
    if args.delta is None or args.out is None:
        parser.error("--delta and --out are required")
    grid = _tau_grid(args.tau_max, args.steps)
    c0 = np.array([c0_closed_form(float(args.delta), t, mode=args.mode) for t in grid.tau])
    prob = np.abs(c0) ** 2
    rate = effective_decay_rate(prob, grid)
    rows = [
        (grid.tau[i], c0[i].real, c0[i].imag, prob[i], rate[i])
        for i in range(len(grid))
    ]
    write_csv(args.out, ["tau", "re_c0", "im_c0", "prob", "gamma_eff"], rows)
    if args.svg:
        line_chart(
            args.svg,
            [("|c0|^2", list(grid.tau), list(prob))],
            "tau = beta z",
            "survival probability",
            title=f"closed form, delta={args.delta}",
        )
    return 0


def _cmd_propagate(args, parser):
    # the time axis is always the dimensionless tau = beta*z, so only the
    # site count and the coupling ratio enter
    _defaults(args, tau_max=4.0, steps=400)
    if args.sites is None or args.delta is None or args.out is None:
        parser.error("--sites, --delta and --out are required")
    spec = LatticeSpec(n_sites=int(args.sites), delta=float(args.delta))
    grid = _tau_grid(args.tau_max, args.steps)
    trace = propagate(build_hamiltonian(spec), initial_state(spec.n_sites), grid)
    probs = site_probabilities(trace)
    header = ["tau"] + [f"prob_site_{i}" for i in range(spec.n_sites)]
    rows = [(grid.tau[i], *probs[i]) for i in range(len(grid))]
    write_csv(args.out, header, rows)
    if args.svg:
        line_chart(
            args.svg,
            [("site 0", list(grid.tau), list(probs[:, 0]))],
            "tau = beta z",
            "site probability",
            title=f"N={spec.n_sites}, delta={spec.delta}",
        )
    return 0


def _cmd_finite_size(args, parser):
    _defaults(args, ref_sites=600, tau_max=4.0, steps=400, threshold=None)
    if args.sites is None or args.delta is None or args.out is None:
        parser.error("--sites, --delta and --out are required")
    grid = _tau_grid(args.tau_max, args.steps)
    ser = cumulative_deviation(
        deviation(
            LatticeSpec(n_sites=int(args.sites), delta=float(args.delta)),
            LatticeSpec(n_sites=int(args.ref_sites), delta=float(args.delta)),
            grid,
        )
    )
    rows = [(grid.tau[i], ser.d_values[i], ser.c_values[i]) for i in range(len(grid))]
    write_csv(args.out, ["tau", "d_n", "c_n"], rows)
    if args.threshold is not None:
        t = onset_time(ser, float(args.threshold))
        print("" if t is None else format(t, ".17g"))
    if args.svg:
        line_chart(
            args.svg,
            [
                ("D_N", list(grid.tau), list(ser.d_values)),
                ("C_N", list(grid.tau), list(ser.c_values)),
            ],
            "tau = beta z",
            "deviation",
            title=f"N={args.sites} vs {args.ref_sites}, delta={args.delta}",
            log_y=True,
        )
    return 0


def _eme_config_from(args) -> EmeConfig:
    cfg = DEFAULT_EME_CONFIG
    overrides = {}
    for name in ("wavelength", "n0", "delta_n", "sigma_x", "sigma_y", "step", "margin"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = float(v)
    if overrides:
        cfg = EmeConfig(**{**cfg.__dict__, **overrides})
    return cfg


def _cmd_eme_simulate(args, parser):
    _defaults(args, tau_max=4.0, steps=40)
    if args.preset is None or args.out is None:
        parser.error("--preset and --out are required")
    exp = preset(args.preset)
    grid = _tau_grid(min(float(args.tau_max), exp.tau_max), args.steps)
    run = run_eme(exp, grid, _eme_config_from(args), coherent=bool(args.coherent))
    header = ["tau", "z_cm"] + [f"c2_site_{i}" for i in range(exp.n_sites)]
    rows = [
        (grid.tau[i], grid.tau[i] / run.beta_fit, *run.site_probs[i])
        for i in range(len(grid))
    ]
    write_csv(args.out, header, rows)
    if args.calibration_out:
        _write_json(
            args.calibration_out,
            {
                "preset": exp.label,
                "beta_per_cm": run.beta_fit,
                "beta0_per_cm": run.beta0_fit,
                "delta_fit": run.delta_fit,
                "mode_count": run.mode_count,
            },
        )
    return 0


def _cmd_eme_reconstruct(args, parser):
    _defaults(args, wavelength=0.633, n0=1.457, floor=0.05)
    if args.mode_file is None or args.out is None:
        parser.error("--mode-file and --out are required")
    mode = read_field(args.mode_file)
    n_eff = args.n_eff
    if n_eff is None:
        n_eff = implied_n_eff(mode.normalized(), float(args.wavelength), float(args.n0))
    rec = reconstruct_index(mode.normalized(), float(n_eff), float(args.wavelength), float(args.floor))
    write_field(args.out, Field(rec.grid, rec.n))
    if rec.negative_count:
        print(f"negative radicand at {rec.negative_count} points (masked)", file=sys.stderr)
    return 0


def _cmd_eme_fit(args, parser):
    _defaults(args, wavelength=0.633, n0=1.457, floor=0.05)
    if args.mode_file is None or args.out is None:
        parser.error("--mode-file and --out are required")
    mode = read_field(args.mode_file)
    params, fidelity = fit_ricker(mode, float(args.wavelength), float(args.n0), float(args.floor))
    _write_json(
        args.out,
        {
            "delta_n": params.delta_n,
            "sigma_x": params.sigma_x,
            "sigma_y": params.sigma_y,
            "n0": params.n0,
            "fidelity": fidelity,
        },
    )
    return 0


def _cmd_compare(args, parser):
    _defaults(args, steps=401)
    if args.preset is None or args.out is None:
        parser.error("--preset and --out are required")
    exp = preset(args.preset)
    grid = _tau_grid(exp.tau_max, args.steps)
    report = compare_models(exp, grid, _eme_config_from(args), include_eme=not args.skip_eme)
    _write_json(args.out, report.to_json_dict())
    if args.svg:
        series = [
            ("closed form", list(report.tau), list(report.closed_form_prob0)),
            ("coupled mode", list(report.tau), list(report.coupled_probs[:, 0])),
        ]
        if report.eme is not None:
            series.append(("EME", list(report.tau), list(report.eme.site_probs[:, 0])))
        line_chart(
            args.svg,
            series,
            "tau = beta z",
            "survival probability |c0|^2",
            title=f"preset {exp.label}",
        )
    return 0


def _cmd_preset(args, parser):
    exp = preset(args.label)
    payload = {
        "label": exp.label,
        "d0_um": exp.d0,
        "d_um": exp.d,
        "beta0_per_cm": exp.beta0,
        "beta_per_cm": exp.beta,
        "delta": exp.delta,
        "n_sites": exp.n_sites,
        "tau_max": exp.tau_max,
    }
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for k, v in payload.items():
            print(f"{k}={v}")
    return 0


# ---------------------------------------------------------------- wiring

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file with option values (flags override)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="defectlattice",
        description="Boundary-defect lattice dynamics and EME optics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closed-form", help="survival amplitude c0(tau) to CSV")
    p.add_argument("--delta", type=float)
    p.add_argument("--tau-max", type=float, dest="tau_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--mode", choices=["reconciled", "printed"])
    p.add_argument("--out")
    p.add_argument("--svg")
    _add_common(p)
    p.set_defaults(func=_cmd_closed_form)

    p = sub.add_parser("propagate", help="finite-chain site probabilities to CSV")
    p.add_argument("--sites", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--tau-max", type=float, dest="tau_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--out")
    p.add_argument("--svg")
    _add_common(p)
    p.set_defaults(func=_cmd_propagate)

    p = sub.add_parser("finite-size", help="deviation D_N and C_N to CSV")
    p.add_argument("--sites", type=int)
    p.add_argument("--ref-sites", type=int, dest="ref_sites")
    p.add_argument("--delta", type=float)
    p.add_argument("--tau-max", type=float, dest="tau_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--threshold", type=float, help="print onset time for this D_N threshold")
    p.add_argument("--out")
    p.add_argument("--svg")
    _add_common(p)
    p.set_defaults(func=_cmd_finite_size)

    p = sub.add_parser("eme-simulate", help="EME per-guide intensity traces to CSV")
    p.add_argument("--preset", choices=list(preset_labels()))
    p.add_argument("--tau-max", type=float, dest="tau_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--coherent", action="store_true")
    p.add_argument("--calibration-out", dest="calibration_out")
    for name in ("wavelength", "n0", "delta-n", "sigma-x", "sigma-y", "step", "margin"):
        p.add_argument(f"--{name}", type=float, dest=name.replace("-", "_"))
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_eme_simulate)

    p = sub.add_parser("eme-reconstruct", help="invert a mode image to an index map")
    p.add_argument("--mode-file", dest="mode_file")
    p.add_argument("--n-eff", type=float, dest="n_eff")
    p.add_argument("--wavelength", type=float)
    p.add_argument("--n0", type=float)
    p.add_argument("--floor", type=float)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_eme_reconstruct)

    p = sub.add_parser("eme-fit", help="fit guide parameters to a mode image")
    p.add_argument("--mode-file", dest="mode_file")
    p.add_argument("--wavelength", type=float)
    p.add_argument("--n0", type=float)
    p.add_argument("--floor", type=float)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_eme_fit)

    p = sub.add_parser("compare", help="three-way model comparison report (JSON)")
    p.add_argument("--preset", choices=list(preset_labels()))
    p.add_argument("--steps", type=int)
    p.add_argument("--skip-eme", action="store_true", dest="skip_eme")
    for name in ("wavelength", "n0", "delta-n", "sigma-x", "sigma-y", "step", "margin"):
        p.add_argument(f"--{name}", type=float, dest=name.replace("-", "_"))
    p.add_argument("--out")
    p.add_argument("--svg")
    _add_common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("preset", help="print a Table-style array preset")
    p.add_argument("label", choices=list(preset_labels()))
    p.add_argument("--json", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_preset)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args, parser)
        return args.func(args, parser)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
