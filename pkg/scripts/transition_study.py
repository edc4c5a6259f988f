"""Temperature-histogram study for the PV and Wind loading scenarios.

Reports the effective acceleration of each histogram, the share of time and
of ageing above the PILC maximum temperature, and the effective age of 5 and
10 year old cables along the logistic transition. Writes ``transition.csv``.

    python scripts/transition_study.py [--c1 0.2] [--c2 25] [--out DIR]
"""

import argparse
from pathlib import Path

import numpy as np

from mvcable import PILC_TABLE1, TransitionScenario, ageing_share_above, effective_acceleration, effective_age_transition
from mvcable.csvio import read_distribution, write_csv

PAPER = Path(__file__).resolve().parents[1] / "src" / "mvcable" / "data" / "paper"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c1", type=float, default=0.2)
    ap.add_argument("--c2", type=float, default=25.0)
    ap.add_argument("--out", default="out/transition")
    args = ap.parse_args(argv)
    spec = PILC_TABLE1
    rho = {n: read_distribution(PAPER / f"fig6a_{n}.csv") for n in ("without_der", "pv", "wind")}
    for n, d in rho.items():
        time_share, ageing_share = ageing_share_above(d, spec.T_max, spec)
        print(f"{n:12s} r = {effective_acceleration(d, spec):8.4f}   above {spec.T_max:g} degC: "
              f"{100 * time_share:5.2f} % of time, {100 * ageing_share:5.1f} % of ageing")
    t = np.arange(0, 50, dtype=float)
    cols, names = [], []
    for n in ("pv", "wind"):
        s = TransitionScenario(rho["without_der"], rho[n], args.c1, args.c2)
        for a in (5.0, 10.0):
            cols.append(effective_age_transition(s, a, t, spec))
            names.append(f"a{int(a)}_{n}")
        print(f"{n:12s} A(10, 49) = {cols[-1][-1]:.4f}")
    print(write_csv(Path(args.out) / "transition.csv", ("time_years", *names), zip(t, *cols)))


if __name__ == "__main__":
    main()
