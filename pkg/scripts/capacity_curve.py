#!/usr/bin/env python3
"""Coherent information of the full-coverage channel versus coupling strength.

Sweeps lambda_phi / sigma over a log grid with the fine-tuning rule
gamma_A = pi/4 applied at every point, and writes capacity.csv plus a
plot script. Equivalent to `fieldchannel capacity` with defaults.
"""

import argparse

import numpy as np

from fieldchannel.channel import ChannelConfig, capacity_sweep
from fieldchannel.cli import write_csv, write_plot_script


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=30)
    ap.add_argument("--out", default="capacity.csv")
    args = ap.parse_args()

    grid = np.logspace(-1, 3, args.points)
    rows = capacity_sweep(grid, ChannelConfig(lambda_phi=1.0))
    write_csv(args.out, ["lambda_phi_over_sigma", "ic", "ic_clamped"], rows)
    write_plot_script(args.out.replace(".csv", "_plot.py"), args.out,
                      "capacity", logx=True)
    for lam, ic, clamped in rows:
        print(f"lambda_phi/sigma = {lam:10.4f}   Ic = {ic:+.6f}   max(0,Ic) = {clamped:.6f}")


if __name__ == "__main__":
    main()
