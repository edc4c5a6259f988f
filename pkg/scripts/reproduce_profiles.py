"""Effective age of a 10-year-old PILC cable under the four yearly current profiles.

Compares ``A(10, t)`` from the bundled profiles with the published curves and
writes ``profiles_effective_age.csv`` with both series side by side.

    python scripts/reproduce_profiles.py [--out DIR]
"""

import argparse
from pathlib import Path

import numpy as np

from mvcable import PILC_TABLE1, TemperatureTrajectory, effective_age
from mvcable.csvio import read_series, read_table, write_csv

DATA = Path(__file__).resolve().parents[1] / "src" / "mvcable" / "data"
PROFILES = ("constant", "linear", "step", "logistic")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/profiles")
    ap.add_argument("--age", type=float, default=10.0)
    args = ap.parse_args(argv)
    header, fig = read_table(DATA / "paper" / "fig5c_effective_age_a10.csv")
    t = fig[:, 0]
    cols, names = [], []
    for k, name in enumerate(PROFILES, start=1):
        times, i, _ = read_series(DATA / "profiles" / f"current_{name}.csv")
        traj = TemperatureTrajectory.from_current(times, i, PILC_TABLE1, interpolation="hold")
        A = effective_age(traj, args.age, t, PILC_TABLE1)
        cols += [A, fig[:, k]]
        names += [name, f"{name}_published"]
        err = np.max(np.abs(A / fig[:, k] - 1.0))
        print(f"{name:9s} A(10, 49) = {A[-1]:10.4f}   max rel. diff vs published {err:.2e}")
    print(write_csv(Path(args.out) / "profiles_effective_age.csv", ("time_years", *names), zip(t, *cols)))


if __name__ == "__main__":
    main()
