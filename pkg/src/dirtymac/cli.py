"""Command-line interface.

Subcommands:
  region      region vertices per element count (columns
              m,vertex_index,r1_bps_hz,r2_bps_hz,mode)
  outage      closed form vs Monte Carlo outage; sweeps when the config has
              a [sweep] section, single point otherwise (columns
              gamma_tilde_db,op_closed,op_mc,mc_halfwidth,abs_diff)
  sweep       like outage but requires the [sweep] section
  dist-check  closed-form vs quadrature CDF on a grid (columns
              g,cdf_closed,cdf_quadrature,abs_diff)
  validate    run the oracle battery, exit 0 iff every check passes

Exit codes: 0 success, 1 validation failure, 2 I/O error, 3 numerical
non-convergence. Outputs are pure functions of (config, seed): reruns are
byte-identical for any worker count.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from typing import List

import numpy as np

from .capacity import ergodic_region
from .channel import average_snrs
from .checks import format_report, run_battery
from .config import RunConfig, load_config, preset_path
from .errors import ConfigError, ConvergenceError, DirtyMacError
from .gaindist import (
    CLT_WARN_ELEMENTS,
    cdf_gamma_closed,
    cdf_gamma_quadrature,
    snr_distribution,
)
from .mathutil import dbm_to_linear
from .outage import op_doubly_closed, op_montecarlo_sweep, op_single_closed

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; map those onto the validation code
    def error(self, message):
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    # repr of the builtin float round-trips; numpy scalars must not leak
    # their own repr into the CSV
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _emit(rows: List[dict], header: List[str], cfg: RunConfig, out_flag):
    path = out_flag if out_flag is not None else cfg.out_path
    buf = io.StringIO()
    if cfg.out_format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in header])
    else:
        def py(v):
            return v.item() if hasattr(v, "item") else v
        buf.write(json.dumps([{k: py(r[k]) for k in header} for r in rows], indent=2))
        buf.write("\n")
    text = buf.getvalue()
    if not all(
        math.isfinite(r[k]) for r in rows for k in header if isinstance(r[k], float)
    ):
        raise ConvergenceError("refusing to emit non-finite values")
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _warn_clt(ms):
    small = sorted(m for m in set(ms) if 0 < m < CLT_WARN_ELEMENTS)
    if small:
        sys.stderr.write(
            f"warning: closed forms use a Gaussian cascade model; M={small} is below "
            f"{CLT_WARN_ELEMENTS} elements and the model is a rough fit there\n"
        )


def cmd_region(cfg: RunConfig, out_flag=None) -> int:
    ms = cfg.region_m_list or (cfg.scenario.ris_elements[0],)
    _warn_clt(ms)
    rows = []
    for m in ms:
        scen = replace(cfg.scenario, ris_elements=(m, m))
        region = ergodic_region(
            scen,
            mode=cfg.region_mode,
            n_trials=cfg.region_trials,
            seed=cfg.seed,
            kind=cfg.query.model,
        )
        for vi, v in enumerate(region.vertices):
            rows.append(
                {
                    "m": m,
                    "vertex_index": vi,
                    "r1_bps_hz": v.r1,
                    "r2_bps_hz": v.r2,
                    "mode": cfg.region_mode,
                }
            )
    _emit(rows, ["m", "vertex_index", "r1_bps_hz", "r2_bps_hz", "mode"], cfg, out_flag)
    return EXIT_OK


def _sweep_values(cfg: RunConfig):
    sw = cfg.sweep
    vals = np.linspace(sw.start, sw.stop, sw.points)
    base = average_snrs(cfg.scenario)
    base_gt1 = base[0].ris
    points = []
    for v in vals:
        target = dbm_to_linear(v) if sw.scale == "db" else float(v)
        c = target / base_gt1
        c2 = c if sw.lock else 1.0
        gt_db = 10.0 * math.log10(target)
        points.append((gt_db, c, c2))
    return points


def cmd_outage(cfg: RunConfig, out_flag=None) -> int:
    base = average_snrs(cfg.scenario)
    if cfg.sweep is None:
        ms = (cfg.scenario.ris_elements[0],)
        points = [(10.0 * math.log10(base[0].ris), 1.0, 1.0)]
    else:
        ms = cfg.sweep.m_list or (cfg.scenario.ris_elements[0],)
        points = _sweep_values(cfg)
    _warn_clt(ms)

    rows = []
    for m in ms:
        scen = replace(cfg.scenario, ris_elements=(m, m))
        policy = cfg.truncation_policy()
        mc = op_montecarlo_sweep(
            scen, cfg.query, cfg.n_trials, cfg.seed, [(c, c2) for _, c, c2 in points],
            workers=cfg.workers,
        )
        for (gt_db, c, c2), (p_mc, hw, _n) in zip(points, mc):
            d1 = snr_distribution(m, base[0].scaled(c), policy)
            d2 = snr_distribution(m, base[1].scaled(c2), policy)
            if cfg.query.model == "doubly":
                p_cf = op_doubly_closed(d1, d2, cfg.query.rt_doubly)
            else:
                p_cf = op_single_closed(d1, d2, cfg.query)
            rows.append(
                {
                    "gamma_tilde_db": gt_db,
                    "op_closed": p_cf,
                    "op_mc": p_mc,
                    "mc_halfwidth": hw,
                    "abs_diff": abs(p_cf - p_mc),
                }
            )
    _emit(
        rows,
        ["gamma_tilde_db", "op_closed", "op_mc", "mc_halfwidth", "abs_diff"],
        cfg,
        out_flag,
    )
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, out_flag=None) -> int:
    if cfg.sweep is None:
        raise ConfigError("sweep requires a [sweep] section in the config")
    return cmd_outage(cfg, out_flag)


def cmd_dist_check(cfg: RunConfig, out_flag=None) -> int:
    m = cfg.scenario.ris_elements[0]
    _warn_clt((m,))
    dist = snr_distribution(m, average_snrs(cfg.scenario)[0], cfg.truncation_policy())
    grid = np.linspace(0.0, 20.0 * dist.mean_snr(), 102)[1:-1]
    closed = cdf_gamma_closed(grid, dist)
    quadr = cdf_gamma_quadrature(grid, dist)
    rows = [
        {
            "g": float(g),
            "cdf_closed": float(c),
            "cdf_quadrature": float(q),
            "abs_diff": float(abs(c - q)),
        }
        for g, c, q in zip(grid, closed, quadr)
    ]
    _emit(rows, ["g", "cdf_closed", "cdf_quadrature", "abs_diff"], cfg, out_flag)
    return EXIT_OK


def cmd_validate(cfg: RunConfig, out_flag=None) -> int:
    results = run_battery(cfg)
    report = format_report(results)
    path = out_flag if out_flag is not None else cfg.out_path
    if path == "-":
        sys.stdout.write(report)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(report)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dirtymac", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("region", "outage", "sweep", "dist-check", "validate"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="config file path, or a bundled preset name (fig2, fig3)")
        sp.add_argument(
            "--set", dest="overrides", action="append", default=[],
            metavar="SECTION.KEY=VALUE", help="override one config key (repeatable)",
        )
        sp.add_argument("--seed", type=int, help="override mc.seed")
        sp.add_argument("--format", choices=("csv", "json"), help="override output.format")
        sp.add_argument("--out", help="override output.path ('-' for stdout)")
    return p


_COMMANDS = {
    "region": cmd_region,
    "outage": cmd_outage,
    "sweep": cmd_sweep,
    "dist-check": cmd_dist_check,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg_path = args.config
        if cfg_path is not None and not cfg_path.endswith(".cfg") and "/" not in cfg_path:
            cfg_path = preset_path(cfg_path)
        cfg = load_config(cfg_path, args.overrides)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.format is not None:
            cfg = replace(cfg, out_format=args.format)
        return _COMMANDS[args.command](cfg, args.out)
    except ConfigError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_VALIDATION
    except ConvergenceError as e:
        sys.stderr.write(f"numerical error: {e}\n")
        return EXIT_NUMERICAL
    except OSError as e:
        sys.stderr.write(f"i/o error: {e}\n")
        return EXIT_IO
    except DirtyMacError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
