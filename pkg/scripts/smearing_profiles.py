#!/usr/bin/env python3
"""Receiver smearing profiles after a flight time Delta, in d = 3 and d = 2.

The 3d profiles are Gaussian lightcone shells; the 2d ones fill the
lightcone interior (strong Huygens violation). Writes one CSV per
dimension.
"""

import argparse

import numpy as np

from fieldchannel.cli import write_csv
from fieldchannel.propagation import bob_profiles_2d_numeric, bob_profiles_3d


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta", type=float, default=10.0)
    ap.add_argument("--points", type=int, default=401)
    args = ap.parse_args()

    rs = np.linspace(0.0, args.delta + 10.0, args.points)
    for d in (3, 2):
        profiles = bob_profiles_3d(1.0, args.delta) if d == 3 \
            else bob_profiles_2d_numeric(1.0, args.delta)
        cols = [np.asarray(p(rs)) for p in profiles]
        out = f"smearings_{d}d.csv"
        write_csv(out, ["r", "fb1", "fb2", "fb3"], np.column_stack([rs] + cols))
        interior = np.argmin(np.abs(rs - args.delta / 2))
        peak = np.max(np.abs(cols[0]))
        print(f"d={d}: wrote {out}; |fb1(Delta/2)|/peak = {abs(cols[0][interior])/peak:.3e}")


if __name__ == "__main__":
    main()
