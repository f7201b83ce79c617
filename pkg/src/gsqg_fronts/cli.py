"""Command-line front end: ``gsqg-fronts {simulate,stability,symbols,expand,diagnose}``."""
import argparse
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import io
from .config import ConfigError, parse_config
from .diagnostics import diagnostic_record
from .expansion import build_tables
from .kernels import PhysicalParams
from .quadrature import ChordArcError
from .solver import AmplitudeWarning, CflError, run_simulation
from .special import PoleError
from .stability import (NoInstabilityError, NoSignChangeError, discriminant,
                        find_marginal_wavenumber, find_peak_growth, growth_rates)
from .symbols import linear_matrix, normalized_b2, self_symbol, shear_profile, symbol_b2

DOMAIN_ERRORS = (ConfigError, CflError, ChordArcError, PoleError, NoSignChangeError,
                 NoInstabilityError, ValueError, OSError)

DIAG_COLUMNS = ["time", "l2_phi", "l2_psi", "chord_margin", "max_slope",
                "hamiltonian", "hamiltonian_tol"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def _add_params(p, required=True):
    p.add_argument("--alpha", type=float, required=required)
    p.add_argument("--theta-plus", type=float, default=1.0)
    p.add_argument("--theta-minus", type=float, default=-1.0)
    p.add_argument("--h", type=float, default=1.0)


def _add_xi_range(p, lo=0.01, hi=3.0, n=300):
    p.add_argument("--xi-min", type=float, default=lo)
    p.add_argument("--xi-max", type=float, default=hi)
    p.add_argument("--n-xi", type=int, default=n)


def _params(args):
    return PhysicalParams(args.alpha, args.theta_plus, args.theta_minus, args.h)


def _xi_grid(args):
    if not 0 < args.xi_min < args.xi_max or args.n_xi < 2:
        raise ValueError("need 0 < xi-min < xi-max and n-xi >= 2")
    return np.linspace(args.xi_min, args.xi_max, args.n_xi)


def build_parser():
    parser = _Parser(prog="gsqg-fronts",
                     description="Two-front GSQG contour dynamics and linear stability.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="evolve a two-front configuration")
    p.add_argument("--config", required=True, help="key = value configuration file")
    p.add_argument("--out-dir", help="parent directory for run_<timestamp>/")
    p.add_argument("--format", choices=["ndjson", "csv"], help="snapshot format")

    p = sub.add_parser("stability", help="dispersion relation of the flat two-front flow")
    _add_params(p)
    _add_xi_range(p)
    p.add_argument("--find-marginal", action="store_true", help="print h|xi| where Delta = 0")
    p.add_argument("--find-peak", action="store_true", help="print argmax h|xi| and peak rate")

    p = sub.add_parser("symbols", help="b1, b2 and the entries of A(xi)")
    _add_params(p)
    _add_xi_range(p)
    p.add_argument("--frame", choices=["generic", "system"], default="generic")

    p = sub.add_parser("expand", help="small-amplitude expansion coefficients")
    _add_params(p)
    p.add_argument("--n-max", type=int, default=3)

    p = sub.add_parser("diagnose", help="diagnostics of stored snapshots or the shear profile")
    p.add_argument("run", nargs="?", help="run directory (config.cfg + snapshots.ndjson)")
    p.add_argument("--config")
    p.add_argument("--snapshots", help="NDJSON file or directory of snapshot CSV files")
    p.add_argument("--hamiltonian", action="store_true", help="also evaluate the Hamiltonian")
    p.add_argument("--shear-profile", action="store_true",
                   help="print the base-flow velocity u(y) instead")
    _add_params(p, required=False)
    p.add_argument("--y-min", type=float, default=-3.0)
    p.add_argument("--y-max", type=float, default=3.0)
    p.add_argument("--n-y", type=int, default=121)
    return parser


def cmd_stability(args, out):
    params = _params(args)
    meta = io.params_meta(params)
    if args.find_marginal or args.find_peak:
        header, row = [], []
        if args.find_marginal:
            header.append("marginal_hxi")
            row.append(find_marginal_wavenumber(params))
        if args.find_peak:
            hx, rate = find_peak_growth(params)
            header += ["peak_hxi", "peak_rate"]
            row += [hx, rate]
        io.write_csv(out, header, [row], meta)
        return 0
    xi = _xi_grid(args)
    mu_p, mu_m = growth_rates(params, xi)
    delta = discriminant(params, xi)
    # phase speed of exp(i xi (x - c t)): c = i mu / xi
    c_p, c_m = -mu_p.imag / xi, -mu_m.imag / xi
    rows = zip(xi, delta, mu_p.real, mu_p.imag, mu_m.imag, c_p, c_m)
    io.write_csv(out, ["xi", "delta", "re_mu", "im_mu_plus", "im_mu_minus",
                       "speed_plus", "speed_minus"], rows, meta)
    return 0


def cmd_symbols(args, out):
    params = _params(args)
    xi = _xi_grid(args)
    a = linear_matrix(params, xi, frame=args.frame)
    b1 = self_symbol(params.alpha, xi)
    b2 = symbol_b2(params, xi)
    nb2 = normalized_b2(params, xi)
    # A(xi) is purely imaginary; its imaginary parts are listed
    rows = zip(xi, b1, b2, nb2, a[:, 0, 0].imag, a[:, 0, 1].imag,
               a[:, 1, 0].imag, a[:, 1, 1].imag)
    io.write_csv(out, ["xi", "b1", "b2", "g_b2", "im_a11", "im_a12", "im_a21", "im_a22"],
                 rows, {**io.params_meta(params), "frame": args.frame})
    return 0


def cmd_expand(args, out):
    params = _params(args)
    if args.n_max < 1:
        raise ValueError("n-max must be >= 1")
    tab = build_tables(params, args.n_max)
    rows = []
    for n in range(1, args.n_max + 1):
        rows.append(["c", n, "", "", tab.c[n - 1]])
        rows.append(["c_tilde", n, "", "", tab.c_tilde[n - 1]])
    for key, val in tab.d.items():
        if len(key) == 2:
            rows.append(["d", key[0], key[1], "", val])
        else:
            n, l, m, variant = key
            rows.append([f"d_{variant}", n, l, m, val])
    io.write_csv(out, ["kind", "n", "l", "m", "value"], rows,
                 {**io.params_meta(params), "n_max": args.n_max})
    return 0


def _run_dir(parent):
    parent = Path(parent)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    path = parent / f"run_{stamp}"
    k = 1
    while path.exists():
        path = parent / f"run_{stamp}_{k}"
        k += 1
    path.mkdir(parents=True)
    return path


def cmd_simulate(args, out):
    cfg_path = Path(args.config)
    config = parse_config(cfg_path.read_text(encoding="utf-8"), base_dir=cfg_path.parent)
    if args.format:
        config.output_format = args.format
    parent = args.out_dir if args.out_dir is not None else config.out_dir
    config.initial_state()  # surface bad init data before creating the run directory
    run = _run_dir(parent)
    (run / "config.cfg").write_text(config.to_text())
    grid = config.grid
    diag_fh = open(run / "diagnostics.csv", "w")
    diag_fh.write(io.preamble(**io.params_meta(config.params)) + "\n")
    diag_fh.write(",".join(DIAG_COLUMNS) + "\n")
    with io.SnapshotWriter(run, config.output_format, config.params, grid) as writer, diag_fh:
        def on_snapshot(state, rec):
            writer.write(state)
            diag_fh.write(",".join(io.fmt_float(v) for v in rec.as_row().values()) + "\n")

        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", AmplitudeWarning)
            traj = run_simulation(config, on_snapshot=on_snapshot)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    lines = [io.preamble(**io.params_meta(config.params)),
             f"n_points = {grid.n_points}", f"length = {io.fmt_float(grid.length)}",
             f"snapshots = {len(traj.snapshots)}",
             f"final_time = {io.fmt_float(traj.snapshots[-1].time)}",
             f"halted = {traj.halted}"]
    if traj.halted:
        lines += [f"halt_time = {io.fmt_float(traj.halt_time)}", f"reason = {traj.message}"]
    (run / "meta.txt").write_text("\n".join(lines) + "\n")
    out.write(f"{run}\n")
    if traj.halted:
        print(f"halted at t = {traj.halt_time:g}: {traj.message}", file=sys.stderr)
        return 1
    return 0


def cmd_diagnose(args, out):
    if args.shear_profile:
        if args.alpha is None:
            raise ValueError("--shear-profile needs --alpha")
        params = _params(args)
        y = np.linspace(args.y_min, args.y_max, args.n_y)
        y = y[(y != params.h) & (y != -params.h)]
        io.write_csv(out, ["y", "u"], zip(y, shear_profile(params, y)),
                     io.params_meta(params))
        return 0
    cfg_path = Path(args.config) if args.config else None
    snap_path = Path(args.snapshots) if args.snapshots else None
    if args.run:
        cfg_path = cfg_path or Path(args.run) / "config.cfg"
        if snap_path is None:
            snap_path = Path(args.run) / "snapshots.ndjson"
            if not snap_path.exists():
                snap_path = Path(args.run)
    if cfg_path is None or snap_path is None:
        raise ValueError("diagnose needs a run directory or both --config and --snapshots")
    config = parse_config(cfg_path.read_text(encoding="utf-8"), base_dir=cfg_path.parent)
    if snap_path.is_dir():
        states = [io.load_state(f) for f in sorted(snap_path.glob("snapshot_*.csv"))]
    else:
        states = io.load_snapshots(snap_path)
    scheme = config.scheme()
    rows = []
    for st in states:
        rec = diagnostic_record(config.params, st, scheme, with_hamiltonian=args.hamiltonian)
        rows.append(list(rec.as_row().values()))
    io.write_csv(out, DIAG_COLUMNS, rows, io.params_meta(config.params))
    return 0


COMMANDS = {"simulate": cmd_simulate, "stability": cmd_stability, "symbols": cmd_symbols,
            "expand": cmd_expand, "diagnose": cmd_diagnose}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
