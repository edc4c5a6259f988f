"""Run-to-failure migration from PILC to XLPE under constant loading.

PILC cables carry half their ampacity, XLPE cables their full ampacity. Failed
PILC cables come back as new XLPE cables the following year. Prints the PILC
share of expected failures at t=0 and the PILC fleet share over time, and
writes the yearly series to ``population_migration.csv``.

    python scripts/population_migration.py [--out DIR] [--years 100]
"""

import argparse
from pathlib import Path

import numpy as np

from mvcable import PILC_TABLE1, XLPE_TABLE1, AgePopulation, WeibullParams, acceleration_factor, conductor_temperature
from mvcable.csvio import write_csv
from mvcable.fleet import run_to_failure_migration

PILC_SHARE = 0.25
PILC_AGES = (58.0, 21.0, -3.0)
XLPE_AGES = (10.0, 15.0, 3.0)
PILC_CURRENT = 0.5
XLPE_CURRENT = 1.0


def age_hazard(spec, i_rel):
    """Yearly failure rate as a function of calendar age at a constant current."""
    r = acceleration_factor(conductor_temperature(i_rel, spec), spec)
    p = WeibullParams.from_spec(spec)

    def lam(a):
        a = np.asarray(a, dtype=float)
        return (p.beta / p.eta_hat_r) * (a * r / p.eta_hat_r) ** (p.beta - 1.0) * r
    return lam


def migrate(years: int = 100):
    old = PILC_SHARE * AgePopulation.skew_normal(*PILC_AGES).masses
    new = (1 - PILC_SHARE) * AgePopulation.skew_normal(*XLPE_AGES).masses
    res = run_to_failure_migration(old, new, age_hazard(PILC_TABLE1, PILC_CURRENT),
                                   age_hazard(XLPE_TABLE1, XLPE_CURRENT), years)
    res["failure_share_old"] = res["F_old"] / (res["F_old"] + res["F_new"])
    return res


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/population_migration")
    ap.add_argument("--years", type=int, default=100)
    args = ap.parse_args(argv)
    res = migrate(args.years)
    print(f"PILC share of failures at t=0: {100 * res['failure_share_old'][0]:.1f} %")
    for t in (0, 10, 20, 25, 50):
        if t <= args.years:
            print(f"t={t:3d}  PILC fleet share {100 * res['share_old'][t]:6.2f} %  "
                  f"F/|fleet| {res['F_old'][t] + res['F_new'][t]:.4f}")
    rows = zip(range(args.years + 1), res["share_old"], res["share_new"], res["F_old"], res["F_new"],
               res["failure_share_old"])
    path = write_csv(Path(args.out) / "population_migration.csv",
                     ("year", "share_PILC", "share_XLPE", "F_PILC", "F_XLPE", "failure_share_PILC"), rows)
    print(path)


if __name__ == "__main__":
    main()
