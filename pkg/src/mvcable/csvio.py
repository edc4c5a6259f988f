"""CSV readers and writers for distributions, trajectories, populations, registries and traces.

Every writer emits ASCII with LF line endings, independent of the process
locale. Result files carry 9 significant digits; input-data writers use the
shortest exact representation so that data files round-trip losslessly.
"""

from __future__ import annotations

import csv
import warnings
from pathlib import Path

import numpy as np

from .fleet import CableAsset, StationaryCurrent, SimulationTrace
from .loading import TemperatureDistribution
from .maintenance import AgePopulation
from .thermal import Insulation, ModelError

DIGITS = 9
MASS_WARN_TOL = 0.01


class DataError(Exception):
    """A data file is missing, malformed or violates a domain invariant."""

    def __init__(self, code: str, message: str, file=None, line: int | None = None):
        self.code = code
        self.file = None if file is None else str(file)
        self.line = line
        where = ""
        if self.file:
            where = f"{self.file}:{line}: " if line else f"{self.file}: "
        super().__init__(where + message)
        self.message = message


def fmt(x, digits: int | None = DIGITS) -> str:
    """Locale-independent number text; ``digits=None`` gives the shortest exact form."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if digits is None:
        return repr(x)
    return format(x, f".{digits}g")


def write_csv(path, header, rows, digits: int | None = DIGITS) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v, digits) for v in row])
    return path


def _read_rows(path, required):
    """Header-checked rows as dicts plus their 1-based line numbers."""
    path = Path(path)
    if not path.is_file():
        raise DataError("file-not-found", "file does not exist", path)
    try:
        with open(path, encoding="ascii", newline="") as f:
            reader = csv.DictReader(f)
            header = reader.fieldnames or []
            missing = [c for c in required if c not in header]
            if missing:
                raise DataError("csv-header", f"missing column(s) {missing}; found {header}", path, 1)
            rows = [(reader.line_num, row) for row in reader]
    except UnicodeDecodeError as exc:
        raise DataError("csv-encoding", f"non-ASCII content ({exc.reason})", path) from exc
    if not rows:
        raise DataError("csv-empty", "no data rows", path)
    return header, rows


def _num(row, col, path, line, *, optional=False):
    text = (row.get(col) or "").strip()
    if text == "" and optional:
        return None
    try:
        v = float(text)
    except ValueError:
        raise DataError("csv-number", f"column {col!r}: cannot parse {text!r} as a number", path, line) from None
    if not np.isfinite(v):
        raise DataError("csv-number", f"column {col!r}: non-finite value {text!r}", path, line)
    return v


def read_table(path):
    """Generic numeric table: ``(header, 2-D array)``."""
    path = Path(path)
    header, rows = _read_rows(path, ())
    return tuple(header), np.array([[_num(r, c, path, ln) for c in header] for ln, r in rows])


def write_table(path, header, values) -> Path:
    return write_csv(path, header, np.asarray(values, dtype=float), digits=None)


# temperature distributions ---------------------------------------------------

DIST_COLS = ("bin_lower_celsius", "bin_upper_celsius", "density_per_celsius")


def read_distribution(path, warn_tol: float = MASS_WARN_TOL) -> TemperatureDistribution:
    """Histogram density; warns if the raw mass deviates from 1 by more than ``warn_tol``."""
    _, rows = _read_rows(path, DIST_COLS)
    lo, hi, dens = [], [], []
    for line, row in rows:
        lo.append(_num(row, DIST_COLS[0], path, line))
        hi.append(_num(row, DIST_COLS[1], path, line))
        d = _num(row, DIST_COLS[2], path, line)
        if d < 0:
            raise DataError("distribution-density", "negative density", path, line)
        dens.append(d)
    lo, hi = np.array(lo), np.array(hi)
    if np.any(hi <= lo):
        k = int(np.argmax(hi <= lo))
        raise DataError("distribution-edges", "bin upper edge must exceed lower edge", path, rows[k][0])
    gaps = np.flatnonzero(np.abs(lo[1:] - hi[:-1]) > 1e-9 * np.maximum(1.0, np.abs(hi[:-1])))
    if gaps.size:
        raise DataError("distribution-edges", "bins must be contiguous and ascending", path, rows[gaps[0] + 1][0])
    edges = np.concatenate([lo, hi[-1:]])
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            rho = TemperatureDistribution(edges, dens, warn_tol=warn_tol)
    except ModelError as exc:
        raise DataError("distribution-mass", str(exc), path) from exc
    for w in caught:
        warnings.warn(f"{path}: {w.message}", stacklevel=2)
    return rho


def write_distribution(path, rho: TemperatureDistribution) -> Path:
    rows = zip(rho.edges[:-1], rho.edges[1:], rho.densities)
    return write_csv(path, DIST_COLS, rows, digits=None)


# time series -----------------------------------------------------------------

TRAJ_QUANTITIES = {"temp_celsius": "temperature", "current_ratio": "current"}


def read_series(path):
    """Time series ``(times, values, quantity)``; ``quantity`` is ``"temperature"`` or ``"current"``."""
    header, rows = _read_rows(path, ("time_years",))
    cols = [c for c in header if c in TRAJ_QUANTITIES]
    if len(cols) != 1:
        raise DataError("csv-header", f"need exactly one of {sorted(TRAJ_QUANTITIES)}; found {header}", path, 1)
    col = cols[0]
    t = np.array([_num(r, "time_years", path, ln) for ln, r in rows])
    v = np.array([_num(r, col, path, ln) for ln, r in rows])
    bad = np.flatnonzero(np.diff(t) <= 0)
    if bad.size:
        raise DataError("series-time-order", "times must be strictly increasing", path, rows[bad[0] + 1][0])
    if col == "current_ratio" and np.any(v < 0):
        raise DataError("series-value", "current ratios must be >= 0", path, rows[int(np.argmax(v < 0))][0])
    return t, v, TRAJ_QUANTITIES[col]


def write_series(path, times, values, quantity: str = "temperature") -> Path:
    col = {v: k for k, v in TRAJ_QUANTITIES.items()}[quantity]
    return write_csv(path, ("time_years", col), zip(times, values), digits=None)


# age populations ---------------------------------------------------------------

POP_COLS = ("age_years", "probability_mass")


def read_population(path, count: float = 1.0) -> AgePopulation:
    _, rows = _read_rows(path, POP_COLS)
    ages, mass = [], []
    for line, row in rows:
        a = _num(row, POP_COLS[0], path, line)
        if a < 0 or a != int(a):
            raise DataError("population-age", "ages must be non-negative whole years", path, line)
        m = _num(row, POP_COLS[1], path, line)
        if m < 0:
            raise DataError("population-mass", "negative probability mass", path, line)
        ages.append(int(a))
        mass.append(m)
    if len(set(ages)) != len(ages):
        raise DataError("population-age", "duplicate age rows", path)
    masses = np.zeros(max(ages) + 1)
    masses[ages] = mass
    try:
        return AgePopulation(masses, count)
    except ModelError as exc:
        raise DataError("population-mass", str(exc), path) from exc


def write_population(path, pop: AgePopulation) -> Path:
    return write_csv(path, POP_COLS, zip(pop.ages, pop.masses), digits=None)


# asset registry ----------------------------------------------------------------

REGISTRY_COLS = ("id", "insulation", "age_years", "x_c", "h_c_optional", "loading_ref")


def read_registry(path) -> list:
    _, rows = _read_rows(path, REGISTRY_COLS)
    assets, seen = [], set()
    for line, row in rows:
        aid = row["id"].strip()
        if not aid or aid in seen:
            raise DataError("asset-id", f"empty or duplicate id {aid!r}", path, line)
        seen.add(aid)
        try:
            ins = Insulation(row["insulation"].strip())
        except ValueError:
            raise DataError("asset-insulation", f"unknown insulation {row['insulation']!r}", path, line) from None
        age = _num(row, "age_years", path, line)
        x = _num(row, "x_c", path, line)
        h = _num(row, "h_c_optional", path, line, optional=True)
        if age < 0:
            raise DataError("asset-age", "age must be >= 0", path, line)
        if not 0 <= x <= 1:
            raise DataError("asset-maintenance", "x_c must lie in [0, 1]", path, line)
        assets.append(CableAsset(aid, ins, age, x, h, row["loading_ref"].strip()))
    return assets


def write_registry(path, assets) -> Path:
    rows = (
        (a.id, a.insulation.value, a.age, a.maintenance_level, "" if a.health_index is None else a.health_index,
         a.loading_ref)
        for a in assets
    )
    return write_csv(path, REGISTRY_COLS, rows, digits=None)


LINE_LOADING_COLS = ("loading_ref", "hour", "current_ratio")


def read_line_loadings(path) -> dict:
    """Per-line stationary loading from equally weighted samples of ``|I_c|/I_z``."""
    _, rows = _read_rows(path, LINE_LOADING_COLS)
    samples: dict = {}
    for line, row in rows:
        ref = row["loading_ref"].strip()
        h = _num(row, "hour", path, line)
        i = _num(row, "current_ratio", path, line)
        if i < 0:
            raise DataError("series-value", "current ratios must be >= 0", path, line)
        samples.setdefault(ref, []).append((h, i))
    return {ref: StationaryCurrent(tuple(i for _, i in sorted(s))) for ref, s in samples.items()}


def write_line_loadings(path, loadings: dict) -> Path:
    rows = []
    for ref in sorted(loadings):
        rows.extend((ref, h, i) for h, i in enumerate(loadings[ref].i_rel))
    return write_csv(path, LINE_LOADING_COLS, rows, digits=None)


# simulation output ----------------------------------------------------------------

TRACE_COLS = ("year", "N", "F", "share_PILC", "share_XLPE")


def write_trace(outdir, trace: SimulationTrace, prefix: str = "trace") -> list:
    """Trace CSV plus one age-histogram CSV per snapshot year."""
    outdir = Path(outdir)
    rows = zip(trace.years, trace.replacements, trace.expected_failures,
               trace.share(Insulation.PILC), trace.share(Insulation.XLPE))
    paths = [write_csv(outdir / f"{prefix}.csv", TRACE_COLS, rows)]
    for year in sorted(trace.histograms):
        snap = trace.histograms[year]
        top = max([int(np.max(a)) if a.size else 0 for a in snap.values()] + [0])
        counts = {ins: np.bincount(snap[ins].astype(int), minlength=top + 1) for ins in snap}
        hist_rows = ((a, counts[Insulation.PILC][a], counts[Insulation.XLPE][a]) for a in range(top + 1))
        paths.append(write_csv(outdir / f"{prefix}_hist_t{year}.csv", ("age_years", "PILC", "XLPE"), hist_rows))
    return paths


def read_trace(path):
    _, rows = _read_rows(path, TRACE_COLS)
    out = {c: np.array([_num(r, c, path, ln) for ln, r in rows]) for c in TRACE_COLS}
    out["N"] = out["N"].astype(int)
    return out
