"""Print capacity-region vertices for a few RIS sizes and both interference models.

Writes a CSV compatible with the region subcommand and, if matplotlib is
importable, a quick overlay plot of the nested regions.
"""

import argparse
import csv
import dataclasses
import sys

from dirtymac.capacity import ergodic_region
from dirtymac.config import load_config, preset_path


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=None, help="config path, defaults to the fig2 preset")
    ap.add_argument("--m", type=int, nargs="+", default=[0, 16, 32, 64])
    ap.add_argument("--mode", default="mean-snr",
                    choices=["mean-snr", "per-realization", "ergodic-mc"])
    ap.add_argument("--kind", default="doubly", choices=["doubly", "single"])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default=None, help="optional CSV path")
    ap.add_argument("--plot", default=None, help="optional PNG path")
    args = ap.parse_args()

    cfg = load_config(args.config if args.config else preset_path("fig2"))
    seed = cfg.seed if args.seed is None else args.seed

    regions = {}
    for m in args.m:
        s = dataclasses.replace(cfg.scenario, ris_elements=(m, m))
        reg = ergodic_region(s, mode=args.mode, n_trials=args.trials,
                             seed=seed, kind=args.kind)
        regions[m] = reg
        print(f"M={m:4d}  kind={reg.kind}  sum_cap={reg.sum_cap:.6f}"
              + (f"  r2_cap={reg.r2_cap:.6f}" if reg.r2_cap is not None else ""))
        for i, v in enumerate(reg.vertices):
            print(f"    v{i}: ({v.r1:.6f}, {v.r2:.6f})")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["m", "vertex_index", "r1_bps_hz", "r2_bps_hz", "mode"])
            for m, reg in regions.items():
                for i, v in enumerate(reg.vertices):
                    w.writerow([m, i, repr(v.r1), repr(v.r2), args.mode])
        print("wrote", args.out)

    if args.plot:
        try:
            import matplotlib
            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            print("matplotlib not installed, skipping plot", file=sys.stderr)
            return 0
        fig, ax = plt.subplots(figsize=(5, 4))
        for m, reg in sorted(regions.items(), reverse=True):
            xs = [v.r1 for v in reg.vertices] + [reg.vertices[0].r1]
            ys = [v.r2 for v in reg.vertices] + [reg.vertices[0].r2]
            ax.fill(xs, ys, alpha=0.25, label=f"M={m}")
            ax.plot(xs, ys, lw=1.0)
        ax.set_xlabel("R1 [bps/Hz]")
        ax.set_ylabel("R2 [bps/Hz]")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print("wrote", args.plot)
    return 0


if __name__ == "__main__":
    sys.exit(main())
