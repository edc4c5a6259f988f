"""Sensitivity of the run-to-failure ratio to the Weibull shape.

Evaluates ``(r1/r0)^beta`` on the published grid twice: with the accelerations
of the bundled histograms, and with the ratio backed out of the published
curve at its first grid point. Writes ``beta_sweep.csv``.

    python scripts/beta_sweep.py [--grid 2.75:3.24:0.01] [--out DIR]
"""

import argparse
from pathlib import Path

import numpy as np

from mvcable import PILC_TABLE1, effective_acceleration, shortcut_run_to_failure
from mvcable.config import parse_range
from mvcable.csvio import read_distribution, read_table, write_csv

PAPER = Path(__file__).resolve().parents[1] / "src" / "mvcable" / "data" / "paper"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", default="2.75:3.24:0.01")
    ap.add_argument("--out", default="out/beta_sweep")
    args = ap.parse_args(argv)
    betas = np.array(parse_range(args.grid))
    header, fig = read_table(PAPER / "fig12_beta_sweep.csv")
    r0 = effective_acceleration(read_distribution(PAPER / "fig6a_without_der.csv"), PILC_TABLE1)
    cols, names = [], []
    for k, name in enumerate(("pv", "wind"), start=1):
        r1 = effective_acceleration(read_distribution(PAPER / f"fig6a_{name}.csv"), PILC_TABLE1)
        bundled = np.array([shortcut_run_to_failure(r0, r1, b) for b in betas])
        q = fig[0, k] ** (1.0 / fig[0, 0])
        backed = np.array([shortcut_run_to_failure(1.0, q, b) for b in betas])
        cols += [bundled, backed]
        names += [f"{name}_bundled", f"{name}_published_ratio"]
        print(f"{name}: r1/r0 bundled {r1 / r0:.5f}, from published curve {q:.5f}")
        print(f"    beta={betas[0]:.2f}: bundled {bundled[0]:.6g}, published-ratio {backed[0]:.6g}, figure {fig[0, k]:.6g}")
        print(f"    beta={betas[-1]:.2f}: bundled {bundled[-1]:.6g}, published-ratio {backed[-1]:.6g}, figure {fig[-1, k]:.6g}")
    print(write_csv(Path(args.out) / "beta_sweep.csv", ("beta", *names), zip(betas, *cols)))


if __name__ == "__main__":
    main()
