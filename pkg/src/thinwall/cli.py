"""
Command line interface.

    thinwall run <config> [--out PATH] [--format csv|records] [--precision P]
    thinwall sweep <config> --grid KEY=V1,V2,... [--grid ...] --out-dir DIR [--jobs N]
    thinwall profile <config> --t T --xmin X0 --xmax X1 --points N [--out PATH]
    thinwall check <config>

Exit status: 0 success, 1 configuration error, 2 runtime/numeric error,
3 I/O error.
"""

import argparse
import csv
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .config import config_from_dict, load_config, set_key, tomllib
from .errors import ConfigError, ThinWallError
from .evolution import Regime, run_simulation, schedule_eval, transition_times
from .field_profile import eval_grad_phi, eval_phi
from .output import summary, write_csv, write_profile, write_records

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3


def _fail(code, msg):
    print(f"thinwall: error: {msg}", file=sys.stderr)
    return code


def _write(records, fh, fmt, precision):
    if fmt == "records":
        return write_records(records, fh, precision)
    return write_csv(records, fh, precision)


def cmd_run(args):
    cfg = load_config(args.config)
    fmt = args.format or cfg.output.format
    precision = args.precision or cfg.output.precision
    out = args.out or cfg.output.path
    records = run_simulation(cfg.simulation)
    summ = summary(records, precision)
    if out is None or out == "-":
        _write(records, sys.stdout, fmt, precision)
        print(json.dumps(summ, indent=2), file=sys.stderr)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            _write(records, fh, fmt, precision)
        with open(out + ".summary.json", "w", encoding="utf-8") as fh:
            json.dump(summ, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def parse_grid(specs):
    """``["a.b=1,2", "c=0.5"]`` -> ``[("a.b", [1, 2]), ("c", [0.5])]``."""
    grid = []
    for spec in specs or []:
        key, sep, rhs = spec.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"grid spec {spec!r} is not of the form KEY=V1,V2,...")
        try:
            values = tomllib.loads(f"v = [{rhs}]")["v"]
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"bad value list {rhs!r}: {exc}", key=key) from exc
        if not values:
            raise ConfigError("empty sweep", key=key)
        grid.append((key, values))
    if not grid:
        raise ConfigError("empty sweep")
    return grid


def _point_name(idx, keys, values, fmt):
    parts = [f"{k}={v}".replace("/", "_") for k, v in zip(keys, values)]
    ext = "csv" if fmt == "csv" else "jsonl"
    return f"point{idx:04d}__" + "__".join(parts) + f".{ext}"


def _run_point(job):
    raw, path, fmt, precision = job
    try:
        cfg = config_from_dict(raw)
        records = run_simulation(cfg.simulation)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _write(records, fh, fmt, precision)
    except (ThinWallError, OSError) as exc:
        return "error", None, None, str(exc)
    times = transition_times(records)
    return "ok", times[Regime.BREAKDOWN], times[Regime.COSMOLOGICAL_CONSTANT], ""


def cmd_sweep(args):
    base = load_config(args.config)
    grid = parse_grid(args.grid)
    keys = [k for k, _ in grid]
    for k in keys:
        # rejects unknown keys before any run starts
        set_key(base.raw, k, None)
    fmt = args.format or base.output.format
    precision = base.output.precision
    os.makedirs(args.out_dir, exist_ok=True)

    points = list(itertools.product(*(vals for _, vals in grid)))
    jobs, names = [], []
    for idx, values in enumerate(points):
        raw = base.raw
        for k, v in zip(keys, values):
            raw = set_key(raw, k, v)
        name = _point_name(idx, keys, values, fmt)
        names.append(name)
        jobs.append((raw, os.path.join(args.out_dir, name), fmt, precision))

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_run_point, jobs))
    else:
        results = [_run_point(j) for j in jobs]

    def _t(t):
        return "never" if t is None else f"{t:.{precision}g}"

    with open(os.path.join(args.out_dir, "manifest.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", *keys, "file", "status", "breakdown_onset", "cc_onset", "error"])
        for idx, (values, name, (status, t_b, t_cc, err)) in enumerate(zip(points, names, results)):
            w.writerow([idx, *values, name, status,
                        _t(t_b) if status == "ok" else "", _t(t_cc) if status == "ok" else "", err])

    failed = sum(1 for r in results if r[0] != "ok")
    if failed:
        return _fail(EXIT_RUNTIME, f"{failed} of {len(results)} sweep points failed; see manifest.csv")
    return EXIT_OK


def cmd_profile(args):
    cfg = load_config(args.config)
    if args.points < 2:
        raise ConfigError(f"--points must be >= 2, got {args.points}")
    if not args.xmin < args.xmax:
        raise ConfigError(f"--xmin must be below --xmax, got {args.xmin} >= {args.xmax}")
    if not args.t >= 0:
        raise ConfigError(f"--t must be >= 0, got {args.t}")
    if args.t > cfg.simulation.t_end:
        print(f"thinwall: note: t={args.t} is past numerics.t_end", file=sys.stderr)
    p = schedule_eval(cfg.simulation.schedule, args.t)
    x = np.linspace(args.xmin, args.xmax, args.points)
    phi, dphi = eval_phi(p, x), eval_grad_phi(p, x)
    precision = cfg.output.precision
    if args.out is None or args.out == "-":
        write_profile(x, phi, dphi, sys.stdout, precision)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_profile(x, phi, dphi, fh, precision)
    return EXIT_OK


def cmd_check(args):
    cfg = load_config(args.config)
    sim = cfg.simulation
    print(f"config OK: {args.config}")
    print(f"calibration: T = {sim.calibration.T!r}, relative residual = {cfg.calibration_residual:.3e}")
    print(f"steps: {sim.n_steps + 1} records at dt = {sim.dt!r} up to t_end = {sim.t_end!r}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="thinwall", description="Thin-wall breakdown simulator.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one simulation")
    p.add_argument("config")
    p.add_argument("--out", help="output file (default: output.path or stdout)")
    p.add_argument("--format", choices=("csv", "records"))
    p.add_argument("--precision", type=int, help="significant digits (default: output.precision)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a grid of configurations")
    p.add_argument("config")
    p.add_argument("--grid", action="append", metavar="KEY=V1,V2,...")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--format", choices=("csv", "records"))
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("profile", help="dump phi(x) and dphi/dx at one time")
    p.add_argument("config")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--xmin", type=float, required=True)
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("check", help="validate a configuration and its calibration")
    p.add_argument("config")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    precision = getattr(args, "precision", None)
    if precision is not None and not 1 <= precision <= 17:
        return _fail(EXIT_CONFIG, "--precision must be between 1 and 17")
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc)
    except ThinWallError as exc:
        return _fail(EXIT_RUNTIME, exc)
    except OSError as exc:
        return _fail(EXIT_IO, exc)


if __name__ == "__main__":
    sys.exit(main())
