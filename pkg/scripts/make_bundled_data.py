"""Regenerate the derived data files shipped under src/mvcable/data/.

Inputs are the verbatim figure tables in data/paper/. Outputs:

* data/profiles/*.csv: the four yearly current profiles, extended back to
  t = -10 by holding the t = 0 value, so that A(10, t) is defined from t = 0.
* data/oberrhein/registry.csv and line_loading.csv: a 181-line synthetic
  fleet consistent with the t = 0 age histogram and the hourly maximum line
  loading curve (see data/paper/README.md for the construction).

Run from the repository root: ``python scripts/make_bundled_data.py``.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from mvcable.csvio import write_csv, write_line_loadings, write_registry, write_series
from mvcable.fleet import CableAsset, StationaryCurrent

DATA = Path(__file__).resolve().parents[1] / "src" / "mvcable" / "data"
PAPER = DATA / "paper"

PROFILE_START = -10
PILC_SHARE = 0.25
LINE_LIMIT_PERCENT = 50.0  # maximal line loading taken as the ampacity
PAIRING_SEED = 20240101  # fixed permutation pairing PILC ages with PILC lines


def _table(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def profile_at_zero():
    """t = 0 values of the four profiles from their defining formulas."""
    return {
        "constant": 0.5,
        "linear": 0.3,
        "step": 0.3,
        "logistic": 0.3 + 0.4 / (1.0 + np.exp(-0.2 * (0.0 - 25.0))),
    }


def make_profiles():
    header, tab = _table(PAPER / "fig5a_current_ratio.csv")
    t_fig = tab[:, 0]
    start = profile_at_zero()
    out = []
    for k, name in enumerate(header[1:], start=1):
        times = np.concatenate([np.arange(PROFILE_START, 1.0), t_fig])
        vals = np.concatenate([np.full(1 - PROFILE_START, start[name]), tab[:, k]])
        out.append(write_series(DATA / "profiles" / f"current_{name}.csv", times, vals, "current"))
    return out


def oberrhein_ages():
    """Whole-year ages spread evenly over the years inside each histogram bin.

    Every age stays inside its bin, so re-binning the registry gives back the histogram.
    """
    _, tab = _table(PAPER / "fig10a_age_histogram_t0.csv")
    ages = []
    for lo, hi, n in tab:
        n = int(n)
        years = np.arange(np.ceil(lo), np.ceil(hi)).astype(int)
        ages.extend(years[(np.arange(n) * years.size) // n])
    return np.sort(np.array(ages))


def make_oberrhein():
    ages = oberrhein_ages()
    n = ages.size
    n_pilc = int(round(PILC_SHARE * n))
    _, prof = _table(PAPER / "fig3b_max_line_loading.csv")
    hourly_max = prof[:, 1]

    # line j carries scale (j+1)/n of the hourly maximum; the heaviest line is the maximum itself
    scales = (np.arange(n) + 1.0) / n
    loadings = {f"line{j:03d}": StationaryCurrent(tuple(s * hourly_max / LINE_LIMIT_PERCENT)) for j, s in
                enumerate(scales)}

    # lowest-loaded quarter are PILC and take the oldest ages; remaining ages go to XLPE lines
    rng = np.random.default_rng(PAIRING_SEED)
    pilc_ages = rng.permutation(ages[n - n_pilc:])
    xlpe_ages = rng.permutation(ages[: n - n_pilc])
    assets = []
    for j in range(n):
        if j < n_pilc:
            ins, age = "PILC", pilc_ages[j]
        else:
            ins, age = "XLPE", xlpe_ages[j - n_pilc]
        assets.append(CableAsset(f"c{j:03d}", ins, int(age), 0.0, None, f"line{j:03d}"))
    return [write_registry(DATA / "oberrhein" / "registry.csv", assets),
            write_line_loadings(DATA / "oberrhein" / "line_loading.csv", loadings)]


def make_table2_reference():
    rows = [
        ("run-to-failure", 307, 54, 1491111, 79504),
        ("replace-all", 307, 54, 10.4, 1.07),
        ("preventive", 254, 44, 1, 1),
    ]
    return write_csv(PAPER / "table2_maintenance_increase.csv",
                     ("strategy", "PILC/PV", "PILC/Wind", "XLPE/PV", "XLPE/Wind"), rows)


if __name__ == "__main__":
    for p in make_profiles() + make_oberrhein() + [make_table2_reference()]:
        print(p.relative_to(DATA.parents[2]))
