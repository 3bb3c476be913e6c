"""Command-line front end.

Subcommands write CSV (default) or JSON. Every CSV starts with ``#``
metadata lines carrying the command and the fully resolved configuration.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__
from . import config as cfgmod
from .compensation import build_plan, fidelity_vs_time, joint_gammas, optimal_gamma_for_ratio
from .errors import DomainError, IntegrationError, OptimizationError
from .interferometer import contrast, contrast_vs_interval, fringe_scan, relative_sensitivity_gain
from .montecarlo import RNG_ALGORITHM, mc_contrast, mc_single_pulse_p2
from .physics import cloud_sigma, diameter_ratio
from .quadrature import single_pulse_average

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(fh, command, configs, columns, rows, notes=()):
    fh.write(f"# aicontrast {__version__} {command}\n")
    for cfg in configs:
        fh.write(f"# config: {cfgmod.as_json(cfg)}\n")
    for note in notes:
        fh.write(f"# {note}\n")
    fh.write(",".join(columns) + "\n")
    for row in rows:
        fh.write(",".join(_fmt(v) for v in row) + "\n")


def _dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args, scenario=None):
    overrides = {"seed": args.seed, "mc_samples": args.mc_samples, "workers": args.workers}
    return cfgmod.load(args.config, scenario or args.scenario, overrides)


def _table(args, command, configs, columns, rows, notes=(), extra=None):
    if args.format == "json":
        doc = {
            "command": command,
            "config": [c.to_units() for c in configs],
            "columns": list(columns),
            "rows": [list(r) for r in rows],
        }
        if extra:
            doc.update(extra)
        _emit(args, _dump_json(doc))
    else:
        buf = io.StringIO()
        write_csv(buf, command, configs, columns, rows, notes)
        _emit(args, buf.getvalue())


def cmd_expansion(args):
    if args.config or args.scenario:
        configs = [_config(args)]
    else:
        configs = [_config(args, "normal"), _config(args, "better")]
    columns = ["t_s"]
    for c in configs:
        columns += [f"sigma_{c.scenario}_mm", f"ratio_{c.scenario}"]
    rows = []
    for t in np.linspace(0.0, args.t_max, args.n_points):
        row = [float(t)]
        for c in configs:
            row += [cloud_sigma(c.cloud(), float(t)) * 1e3, diameter_ratio(c.beam(), c.cloud(), float(t))]
        rows.append(row)
    _table(args, "expansion", configs, columns, rows)


def cmd_rabi(args):
    cfg = _config(args)
    grid = cfg.grid()
    if args.ratio:
        ratios = [float(s) for s in args.ratio]
    elif args.pulse_index:
        ratios = [cfg.sequence().ratios[args.pulse_index - 1]]
    else:
        ratios = list(cfg.sequence().ratios)
    lo, hi = args.tau_range
    taus = [float(x) for x in np.linspace(lo, hi, args.n_points)]
    rows, notes, peaks = [], [], []
    for s in ratios:
        g_opt = optimal_gamma_for_ratio(s, grid)
        gamma = g_opt if args.compensated else 1.0
        for x in taus:
            rows.append([s, gamma, x, single_pulse_average(gamma * math.pi * x, s, grid)])
        peak_tau = g_opt / gamma
        peak_p = single_pulse_average(g_opt * math.pi, s, grid)
        peaks.append({"ratio": s, "gamma": gamma, "peak_tau_over_tau0": peak_tau, "peak_p2": peak_p})
        notes.append(f"peak ratio={s!r} gamma={gamma!r} tau_over_tau0={peak_tau!r} p2={peak_p!r}")
    _table(args, "rabi", [cfg], ["ratio", "gamma", "tau_over_tau0", "p2"], rows, notes,
           {"peaks": peaks})


def _mc_summary(seq, cfg):
    est = mc_contrast(seq, cfg.mc_samples, cfg.seed, workers=cfg.workers)
    return {
        "samples": est.n_samples,
        "seed": cfg.seed,
        "rng": RNG_ALGORITHM,
        "contrast": est.contrast,
        "contrast_std_error": est.std_error,
        "p0": est.p_at_0.mean,
        "ppi": est.p_at_pi.mean,
    }


def cmd_fringe(args):
    cfg = _config(args)
    grid, cut = cfg.grid(), cfg.cutoff()
    seq = cfg.sequence()
    if args.compensated:
        seq = seq.with_gammas(build_plan(seq, grid, cfg.compensate_first).gamma)
    res = fringe_scan(seq, args.n_points, grid, cut, cfg.detection_renormalize)
    summary = {
        "scenario": cfg.scenario,
        "compensated": bool(args.compensated),
        "contrast": res.contrast,
        "extrema_contrast": res.extrema_contrast,
        "p0": res.p_at_0,
        "ppi": res.p_at_pi,
        "gammas": list(seq.gammas),
        "ratios": list(seq.ratios),
        "detection_rho": cut,
    }
    if cfg.mc_samples:
        summary["montecarlo"] = _mc_summary(seq, cfg)
    rows = [list(r) for r in res.phi3_samples]
    if args.format == "json":
        _table(args, "fringe", [cfg], ["phi3_rad", "p2"], rows, extra={"summary": summary})
        return
    _table(args, "fringe", [cfg], ["phi3_rad", "p2"], rows)
    text = _dump_json(summary)
    if args.out:
        with open(args.out + ".summary.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stderr.write(text)


def cmd_sweep(args):
    cfg = _config(args)
    grid = cfg.grid()
    lo, hi = args.range if args.range else (
        (0.4, 1.6) if args.kind == "fidelity_vs_t" else (0.0, 0.4))
    if args.kind == "fidelity_vs_t":
        data = fidelity_vs_time(cfg.beam(), cfg.cloud(), (lo, hi), args.n_points, grid, cfg.workers)
        base = [(t, f0) for t, f0, _, _ in data]
        comp = [(t, f1) for t, _, f1, _ in data]
        x_name = "t_s"
    else:
        seq = cfg.sequence()
        base = contrast_vs_interval(seq, (lo, hi), args.n_points, False, cfg.compensate_first,
                                    grid, cfg.workers)
        comp = (contrast_vs_interval(seq, (lo, hi), args.n_points, True, cfg.compensate_first,
                                     grid, cfg.workers) if args.compensated else None)
        x_name = "T_s"
    if args.kind == "fidelity_vs_t" and not args.compensated:
        comp = None
    if comp is None:
        columns = [x_name, "value_uncompensated"]
        rows = [[x, v] for x, v in base]
    else:
        columns = [x_name, "value_uncompensated", "value_compensated", "gap"]
        rows = [[x, v0, v1, v1 - v0] for (x, v0), (_, v1) in zip(base, comp)]
    _table(args, f"sweep {args.kind}", [cfg], columns, rows)


def cmd_plan(args):
    cfg = _config(args)
    grid = cfg.grid()
    seq = cfg.sequence()
    plan = build_plan(seq, grid, cfg.compensate_first, cfg.cutoff(), cfg.detection_renormalize)
    report = {"scenario": cfg.scenario, "compensate_first": cfg.compensate_first, **plan.as_dict()}
    # pulse spacing unchanged by compensation
    report["relative_sensitivity_gain"] = relative_sensitivity_gain(
        plan.contrast_before, plan.contrast_after, 1.0, 1.0)
    if args.joint:
        gj = joint_gammas(seq.with_gammas((1.0, 1.0, 1.0)), grid)
        report["joint_extension"] = {"gamma": list(gj),
                                     "contrast": contrast(seq.with_gammas(gj), grid)}
    if args.format == "csv":
        rows = [[i + 1, plan.firing_times[i], plan.ratios[i], plan.gamma[i],
                 plan.fidelity_before[i], plan.fidelity_after[i]] for i in range(3)]
        notes = [f"contrast_before={plan.contrast_before!r} contrast_after={plan.contrast_after!r} "
                 f"sensitivity_gain={report['relative_sensitivity_gain']!r}"]
        buf = io.StringIO()
        write_csv(buf, "plan", [cfg], ["pulse", "t_fire_s", "ratio", "gamma",
                                       "fidelity_before", "fidelity_after"], rows, notes)
        _emit(args, buf.getvalue())
    else:
        report["config"] = cfg.to_units()
        _emit(args, _dump_json(report))


def cmd_mc_check(args):
    cfg = _config(args)
    n = cfg.mc_samples or 200_000
    grid = cfg.grid()
    seq = cfg.sequence()
    if args.compensated:
        seq = seq.with_gammas(build_plan(seq, grid, cfg.compensate_first).gamma)
    beam, cloud = seq.beam, seq.cloud
    t1 = seq.firing_times[0]
    quad_single = single_pulse_average(math.pi, diameter_ratio(beam, cloud, t1), grid)
    mc_single = mc_single_pulse_p2(beam, cloud, t1, beam.tau_pi, n, cfg.seed, workers=cfg.workers)
    quad_c = contrast(seq, grid)
    mc_c = mc_contrast(seq, n, cfg.seed + 1, workers=cfg.workers)
    report = {
        "scenario": cfg.scenario,
        "samples": n,
        "seed": cfg.seed,
        "rng": RNG_ALGORITHM,
        "gammas": list(seq.gammas),
        "single_pulse_t1": {
            "quadrature": quad_single,
            "montecarlo": mc_single.mean,
            "std_error": mc_single.std_error,
            "z": (mc_single.mean - quad_single) / mc_single.std_error if mc_single.std_error else 0.0,
        },
        "contrast": {
            "quadrature": quad_c,
            "montecarlo": mc_c.contrast,
            "std_error": mc_c.std_error,
            "gap": mc_c.contrast - quad_c,
            "z": (mc_c.contrast - quad_c) / mc_c.std_error if mc_c.std_error else 0.0,
        },
        "config": cfg.to_units(),
    }
    _emit(args, _dump_json(report))


def _add_global(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--config", default=d(None), help="JSON scenario file")
    p.add_argument("--scenario", default=d(None), choices=sorted(cfgmod.PRESETS))
    p.add_argument("--out", default=d(None), help="output file (default stdout)")
    p.add_argument("--format", default=d("csv"), choices=["csv", "json"])
    p.add_argument("--compensated", action="store_true", default=d(False))
    p.add_argument("--mc-samples", type=int, default=d(None))
    p.add_argument("--seed", type=int, default=d(None))
    p.add_argument("--workers", type=int, default=d(None))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aicontrast",
        description="Cloud-expansion contrast loss and intensity compensation for atom interferometers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expansion", help="cloud width and diameter ratio versus time")
    p.add_argument("--t-max", type=float, default=1.0, help="seconds")
    p.add_argument("--n-points", type=int, default=101)
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("rabi", help="cloud-averaged Rabi curves")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pulse-index", type=int, choices=[1, 2, 3])
    g.add_argument("--ratio", type=float, action="append", help="explicit diameter ratio (repeatable)")
    p.add_argument("--tau-range", type=float, nargs=2, default=(0.0, 3.0), metavar=("LO", "HI"),
                   help="durations in units of the nominal pi time")
    p.add_argument("--n-points", type=int, default=301)
    p.set_defaults(func=cmd_rabi)

    p = sub.add_parser("fringe", help="interferometer fringe and contrast")
    p.add_argument("--n-points", type=int, default=73)
    p.set_defaults(func=cmd_fringe)

    p = sub.add_parser("sweep", help="fidelity versus time or contrast versus pulse spacing")
    p.add_argument("--kind", choices=["fidelity_vs_t", "contrast_vs_T"], default="fidelity_vs_t")
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"), help="seconds")
    p.add_argument("--n-points", type=int, default=25)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plan", help="per-pulse compensation factors (JSON report)")
    p.add_argument("--joint", action="store_true",
                   help="also run joint contrast optimization (extension)")
    p.set_defaults(func=cmd_plan, format="json")

    p = sub.add_parser("mc-check", help="Monte Carlo cross-check of the quadrature model")
    p.set_defaults(func=cmd_mc_check)

    for name, sp in sub.choices.items():
        _add_global(sp, suppress=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (cfgmod.ConfigError, DomainError) as exc:
        print(f"aicontrast: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, OptimizationError) as exc:
        print(f"aicontrast: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
