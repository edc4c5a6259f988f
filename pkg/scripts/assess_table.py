"""Maintenance-increase table for the bundled PV and Wind transition scenarios.

Prints the three strategy ratios per cable type and scenario next to the
published values, plus the effective accelerations behind them. Writes
``assess_table.csv`` (computed) and ``assess_vs_published.csv``.

    python scripts/assess_table.py [--config FILE] [--out DIR]
"""

import argparse
import csv
from pathlib import Path

from mvcable import Insulation
from mvcable.cli import _assess_cell
from mvcable.config import load_config
from mvcable.csvio import write_csv

DATA = Path(__file__).resolve().parents[1] / "src" / "mvcable" / "data"
CONFIG = DATA / "scenarios" / "transition.toml"
PUBLISHED = DATA / "paper" / "table2_maintenance_increase.csv"
STRATEGIES = ("run-to-failure", "replace-all", "preventive")


def published():
    with open(PUBLISHED, newline="") as f:
        return {r["strategy"]: {k: float(v) for k, v in r.items() if k != "strategy"} for r in csv.DictReader(f)}


def compute(config=CONFIG):
    cfg = load_config(config)
    return {f"{c.value}/{n}": _assess_cell(cfg, c, n) for c in (Insulation.PILC, Insulation.XLPE)
            for n in cfg.loading.scenarios}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(CONFIG))
    ap.add_argument("--out", default="out/assess_table")
    args = ap.parse_args(argv)
    res, pub = compute(args.config), published()
    rows = []
    for col, a in res.items():
        print(f"{col:10s} r0={a.r0:.6g} r1={a.r1:.6g} beta={a.beta} mu={a.mu:.6g} F0={a.F0:.6g}")
        for s in STRATEGIES:
            got, want = a.ratios[s], pub[s][col]
            rows.append((col, s, got, want, got / want - 1.0))
            print(f"    {s:15s} {got:14.6g}  published {want:12.6g}  rel. diff {100 * (got / want - 1):+8.1f} %")
    out = Path(args.out)
    write_csv(out / "assess_table.csv", ("strategy", *res), [(s, *[a.ratios[s] for a in res.values()]) for s in STRATEGIES])
    print(write_csv(out / "assess_vs_published.csv", ("column", "strategy", "computed", "published", "rel_diff"), rows))


if __name__ == "__main__":
    main()
