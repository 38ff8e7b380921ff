#!/usr/bin/env python3
"""Plot the normalized gap column of `ballgap sweep` output.

Usage: ballgap sweep --dim 3 --n-list 100,200,500,1000 > sweep.csv
       python3 scripts/plot_sweep.py sweep.csv sweep.png

Optional helper; needs matplotlib. The CSV is the actual interface.
"""
import csv
import sys


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(sys.argv[1], newline="") as f:
        rows = list(csv.DictReader(f))
    fig, ax = plt.subplots()
    for d in sorted({r["d"] for r in rows}, key=int):
        sub = [r for r in rows if r["d"] == d]
        ax.plot([int(r["n"]) for r in sub], [float(r["c_hat"]) for r in sub], "o-", label=f"d={d}")
    ax.set_xscale("log")
    ax.set_xlabel("vertices n")
    ax.set_ylabel("gap * n^(2/(d-1)) / (d vol B)")
    ax.legend()
    fig.savefig(sys.argv[2], dpi=120)


if __name__ == "__main__":
    main()
