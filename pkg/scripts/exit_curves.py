#!/usr/bin/env python3
"""Dump BP transfer curves as CSV, one file per ensemble.

Produces the curve family for the regular ensembles (3,6,m) and, with
--coupled, for terminated chains (3,6,m,L).  Plot the CSVs with whatever
you like; this package deliberately does no rendering.
"""

import argparse
import pathlib
import sys

import numpy as np

from nbldpc.coupled import build_chain, sc_exit_curve
from nbldpc.de import EnsembleSpec
from nbldpc.exitchart import bp_exit_curve


def write_curve(path, curve):
    with open(path, "w") as fh:
        fh.write("eps,h\n")
        for e, h in curve.points:
            fh.write(f"{e:.12g},{h:.12g}\n")
    print(f"wrote {path}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="curves")
    ap.add_argument("--ms", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6, 7])
    ap.add_argument("--eps-step", type=float, default=0.005)
    ap.add_argument("--coupled", action="store_true",
                    help="also dump chain curves for the given --Ls")
    ap.add_argument("--Ls", type=int, nargs="+", default=[3, 9, 33])
    args = ap.parse_args(argv)

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = np.arange(0.0, 1.0 + 1e-12, args.eps_step)
    grid[-1] = 1.0

    for m in args.ms:
        curve = bp_exit_curve(EnsembleSpec(3, 6, m), grid)
        write_curve(out / f"exit_3_6_m{m}.csv", curve)
    if args.coupled:
        for m in args.ms:
            for L in args.Ls:
                curve = sc_exit_curve(build_chain(3, 6, L), m, grid)
                write_curve(out / f"exit_sc_3_6_m{m}_L{L}.csv", curve)
    return 0


if __name__ == "__main__":
    sys.exit(main())
