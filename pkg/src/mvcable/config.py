"""Scenario configuration: TOML parsing, validation and resolution into model objects.

Relative data-file paths in a config resolve against the config file's
directory; the output directory resolves against the working directory.
Every rejected config raises :class:`ConfigError` (or :class:`DataError` for a
referenced file) carrying one of the codes in :data:`ERROR_CODES`.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .csvio import DataError, read_distribution, read_line_loadings, read_population, read_registry, read_series
from .fleet import CurrentProfile, SimulationConfig
from .loading import SeasonSchedule, TransitionScenario
from .maintenance import AgePopulation, Preventive, ReplaceAll, RunToFailure, SkewNormal
from .reliability import TemperatureTrajectory, WeibullParams
from .thermal import PRESETS, Arrhenius, CableSpec, Insulation, Montsinger

ERROR_CODES = {
    # config errors (exit 2)
    "config-parse": "the file is not valid TOML",
    "config-missing": "a required key is absent",
    "config-unknown-key": "a key is not part of the schema",
    "config-type": "a value has the wrong type",
    "config-units": "a unit other than celsius / years / ampere was declared",
    "config-file-missing": "a referenced data file does not exist",
    "loading-source": "not exactly one loading source, or an unknown loading kind",
    "cable-preset": "unknown cable preset",
    "cable-insulation": "unknown insulation family",
    "cable-beta": "Weibull shape beta must be > 1",
    "cable-eta": "mean lifetime eta_r must be > 1 year (or eta_hat_r > 0)",
    "cable-temperatures": "T_max must exceed T_a",
    "cable-ampacity": "I_z must be > 0",
    "cable-alpha": "temperature coefficient alpha must be >= 0",
    "cable-ageing-model": "Arrhenius B and Montsinger delta_T must be > 0, exactly one given",
    "transition-rate": "logistic rate c1 must be > 0",
    "season-order": "season starts must increase and precede the end",
    "population-skew-normal": "skew-normal sigma must be > 0",
    "population-count": "population count must be >= 1",
    "policy-kind": "unknown policy kind",
    "policy-replacement-age": "replacement age a_R must be > 0",
    "policy-kappa": "kappa retention must lie in [0, 1]",
    "policy-scheduled-share": "scheduled replacement share must lie in [0, 1]",
    "simulation-horizon": "horizon must be an integer >= 1",
    "simulation-dt": "season length dt must be > 0",
    "simulation-seed": "seed must be an integer in [0, 2^64)",
    "simulation-option": "unknown probability mode or retire rule",
    "query": "invalid ages / times request",
    # data errors (exit 3) are raised as DataError by the CSV readers
    "file-not-found": "a data file does not exist",
    "csv-header": "a CSV file lacks required columns",
    "csv-number": "a CSV cell is not a finite number",
    "csv-empty": "a CSV file has no data rows",
    "csv-encoding": "a CSV file is not ASCII",
    "distribution-edges": "histogram bins are not contiguous and ascending",
    "distribution-density": "negative histogram density",
    "distribution-mass": "histogram has zero mass",
    "series-time-order": "series times are not strictly increasing",
    "series-value": "negative current ratio",
    "population-age": "population ages are negative, fractional or duplicated",
    "population-mass": "population masses are negative or all zero",
    "asset-id": "asset ids are empty or duplicated",
    "asset-insulation": "unknown insulation in the registry",
    "asset-age": "asset age is negative",
    "asset-maintenance": "asset maintenance level outside [0, 1]",
    "missing-loading": "an asset's loading_ref does not resolve",
    "coverage": "loading data does not cover the requested window",
}


class ConfigError(Exception):
    def __init__(self, code: str, message: str, file=None, key: str | None = None):
        assert code in ERROR_CODES, code
        self.code = code
        self.file = None if file is None else str(file)
        self.key = key
        self.message = message
        ctx = ", ".join(x for x in (self.file, f"key {key}" if key else None) if x)
        super().__init__(f"{ctx}: {message}" if ctx else message)


# -- small typed accessors -----------------------------------------------------------


class _Section:
    """Dict wrapper that records which keys were read so leftovers can be rejected."""

    def __init__(self, data, path: str, file):
        if not isinstance(data, dict):
            raise ConfigError("config-type", "expected a table", file, path)
        self.data = data
        self.path = path
        self.file = file
        self.used = set()

    def _key(self, k):
        return f"{self.path}.{k}" if self.path else k

    def has(self, k):
        return k in self.data

    def get(self, k, default=None, *, types=None, required=False):
        if k not in self.data:
            if required:
                raise ConfigError("config-missing", "required key is missing", self.file, self._key(k))
            return default
        self.used.add(k)
        v = self.data[k]
        if types is not None and (not isinstance(v, types) or isinstance(v, bool) and bool not in _tuple(types)):
            raise ConfigError("config-type", f"expected {_names(types)}, got {type(v).__name__}", self.file, self._key(k))
        return v

    def num(self, k, default=None, *, required=False):
        v = self.get(k, default, types=(int, float), required=required)
        return None if v is None else float(v)

    def sub(self, k, *, required=False):
        if k not in self.data:
            if required:
                raise ConfigError("config-missing", "required table is missing", self.file, self._key(k))
            return None
        self.used.add(k)
        return _Section(self.data[k], self._key(k), self.file)

    def finish(self):
        extra = sorted(set(self.data) - self.used)
        if extra:
            raise ConfigError("config-unknown-key", f"unknown key(s) {extra}", self.file, self.path or None)


def _tuple(t):
    return t if isinstance(t, tuple) else (t,)


def _names(t):
    return " or ".join(x.__name__ for x in _tuple(t))


def _check(cond, code, message, file, key):
    if not cond:
        raise ConfigError(code, message, file, key)


# -- resolved config -------------------------------------------------------------------


@dataclass
class LoadingSource:
    """Exactly one of the loading kinds, resolved to model objects."""

    kind: str  # trajectory | distribution | seasonal | transition | registry
    trajectory: object = None  # TemperatureTrajectory or CurrentProfile
    distribution: object = None
    schedule: SeasonSchedule | None = None
    rho0: object = None
    scenarios: dict = field(default_factory=dict)  # name -> TransitionScenario
    assets: list = field(default_factory=list)
    loadings: dict = field(default_factory=dict)


@dataclass
class Query:
    ages: tuple = ()
    times: tuple = ()
    cable: Insulation | None = None


@dataclass
class ScenarioConfig:
    path: Path
    cables: dict  # Insulation -> CableSpec
    params: dict  # Insulation -> WeibullParams
    loading: LoadingSource
    populations: dict  # Insulation -> AgePopulation
    policy: dict  # "replace-all" / "preventive" / "kind" settings
    simulation: dict
    query: Query
    output_dir: Path
    sweep: tuple | None = None

    def simulation_config(self, seed: int | None = None) -> SimulationConfig:
        s = dict(self.simulation)
        s.pop("seeds", None)
        if seed is not None:
            s["seed"] = seed
        return SimulationConfig(policy=self.policy["simulate"], **s)

    def seeds(self, override: int | None = None):
        first = self.simulation.get("seed", 0) if override is None else override
        return list(range(first, first + self.simulation.get("seeds", 1)))

    def default_cable(self) -> Insulation:
        if self.query.cable is not None:
            return self.query.cable
        return next(iter(self.cables))


# -- parsing -------------------------------------------------------------------------------


def parse_range(text: str, what="range"):
    """``start:stop:step`` (stop inclusive) to a float grid."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigError("query", f"{what} must be start:stop:step, got {text!r}") from None
    if not step > 0 or stop < start:
        raise ConfigError("query", f"{what} needs step > 0 and stop >= start, got {text!r}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(float(x) for x in np.round(start + step * np.arange(n), 12))


def _file(sec: _Section, key: str, base: Path, *, required=True):
    v = sec.get(key, types=str, required=required)
    if v is None:
        return None
    p = (base / v).resolve()
    _check(p.is_file(), "config-file-missing", f"file {v!r} not found (resolved to {p})", sec.file, sec._key(key))
    return p


def _units(sec: _Section | None):
    if sec is None:
        return
    expected = {"temperature": "celsius", "time": "years", "current": "ampere"}
    for k, unit in expected.items():
        v = sec.get(k, unit, types=str)
        _check(v.lower() == unit, "config-units", f"{k} unit must be {unit!r}, got {v!r}", sec.file, sec._key(k))
    sec.finish()


def _cable(sec: _Section, name: str) -> tuple[CableSpec, WeibullParams]:
    f, key = sec.file, sec._key
    try:
        ins = Insulation(name)
    except ValueError:
        raise ConfigError("cable-insulation", f"unknown insulation {name!r}", f, sec.path) from None
    preset = sec.get("preset", types=str)
    if preset is not None:
        _check(preset in PRESETS, "cable-preset", f"unknown preset {preset!r}; known {sorted(PRESETS)}", f, key("preset"))
        base = PRESETS[preset]
        _check(base.insulation == ins, "cable-preset", f"preset {preset!r} is {base.insulation.value}", f, key("preset"))
        vals = dict(eta_r_mean=base.eta_r_mean, beta=base.beta, T_r=base.T_r, T_max=base.T_max, T_a=base.T_a,
                    I_z=base.I_z, alpha=base.alpha, I_r=base.I_r)
        model = base.ageing_model
    else:
        vals = dict(alpha=0.0, I_r=None)
        model = None
    for k in ("eta_r_mean", "beta", "T_r", "T_max", "T_a", "I_z", "alpha", "I_r"):
        v = sec.num(k)
        if v is not None:
            vals[k] = v
        elif k not in vals:
            raise ConfigError("config-missing", "required key is missing (no preset given)", f, key(k))
    B, dT = sec.num("B"), sec.num("delta_T")
    _check(B is None or dT is None, "cable-ageing-model", "give either B or delta_T, not both", f, sec.path)
    if B is not None:
        _check(B > 0, "cable-ageing-model", "Arrhenius B must be > 0", f, key("B"))
        model = Arrhenius(B)
    elif dT is not None:
        _check(dT > 0, "cable-ageing-model", "Montsinger delta_T must be > 0", f, key("delta_T"))
        model = Montsinger(dT)
    _check(model is not None, "cable-ageing-model", "need B (Arrhenius) or delta_T (Montsinger)", f, sec.path)
    _check(vals["beta"] > 1, "cable-beta", f"beta must be > 1, got {vals['beta']}", f, key("beta"))
    _check(vals["eta_r_mean"] > 1, "cable-eta", f"eta_r_mean must be > 1, got {vals['eta_r_mean']}", f, key("eta_r_mean"))
    _check(vals["T_max"] > vals["T_a"], "cable-temperatures", "T_max must exceed T_a", f, key("T_max"))
    _check(vals["I_z"] > 0, "cable-ampacity", "I_z must be > 0", f, key("I_z"))
    _check(vals["alpha"] >= 0, "cable-alpha", "alpha must be >= 0", f, key("alpha"))
    spec = CableSpec(insulation=ins, ageing_model=model, name=preset or name, **vals)
    eta_hat = sec.num("eta_hat_r")
    if eta_hat is not None:
        _check(eta_hat > 0, "cable-eta", "eta_hat_r must be > 0", f, key("eta_hat_r"))
        params = WeibullParams(spec.beta, eta_hat)
    else:
        params = WeibullParams.from_spec(spec)
    sec.finish()
    return spec, params


def _population(sec: _Section, base: Path) -> AgePopulation:
    f = sec.file
    count = sec.num("count", 1.0)
    _check(count >= 1, "population-count", "count must be >= 1", f, sec._key("count"))
    path = _file(sec, "file", base, required=False)
    sn = sec.sub("skew_normal")
    _check((path is None) != (sn is None), "config-missing", "give exactly one of file or skew_normal", f, sec.path)
    if path is not None:
        sec.finish()
        return read_population(path, count)
    mu, sigma, delta = sn.num("mu", required=True), sn.num("sigma", required=True), sn.num("delta", required=True)
    _check(sigma > 0, "population-skew-normal", "sigma must be > 0", f, sn._key("sigma"))
    sn.finish()
    sec.finish()
    return AgePopulation(SkewNormal(mu, sigma, delta).discretize(), count)


def _step_kappa(age, value):
    def kappa(a):
        return np.where(np.asarray(a) >= age, value, 0.0)

    return kappa


def _policy(sec: _Section | None) -> dict:
    out = {"replace-all": None, "preventive": Preventive(), "simulate": RunToFailure()}
    if sec is None:
        return out
    f = sec.file
    a_R = sec.num("a_R")
    if a_R is not None:
        _check(a_R > 0, "policy-replacement-age", "a_R must be > 0", f, sec._key("a_R"))
        out["replace-all"] = ReplaceAll(a_R)
    share = sec.num("scheduled_share", 0.0)
    _check(0 <= share <= 1, "policy-scheduled-share", "scheduled_share must lie in [0, 1]", f, sec._key("scheduled_share"))
    ksec = sec.sub("kappa")
    if ksec is not None:
        age, value = ksec.num("age", required=True), ksec.num("value", required=True)
        _check(0 <= value <= 1, "policy-kappa", "kappa value must lie in [0, 1]", f, ksec._key("value"))
        ksec.finish()
        out["preventive"] = Preventive(kappa=_step_kappa(age, value), scheduled_share=share)
    else:
        out["preventive"] = Preventive(scheduled_share=share)
    kind = sec.get("kind", "replace-all" if a_R is not None else "run-to-failure", types=str)
    _check(kind in ("replace-all", "run-to-failure"), "policy-kind",
           f"simulation policy must be replace-all or run-to-failure, got {kind!r}", f, sec._key("kind"))
    if kind == "replace-all":
        _check(a_R is not None, "config-missing", "replace-all needs a_R", f, sec._key("a_R"))
        out["simulate"] = out["replace-all"]
    sec.finish()
    return out


def _simulation(sec: _Section | None) -> dict:
    if sec is None:
        return {"horizon": 1}
    f, key = sec.file, sec._key
    horizon = sec.get("horizon", required=True, types=int)
    _check(horizon >= 1, "simulation-horizon", "horizon must be >= 1", f, key("horizon"))
    seed = sec.get("seed", 0, types=int)
    _check(0 <= seed < 2**64, "simulation-seed", "seed must lie in [0, 2^64)", f, key("seed"))
    seeds = sec.get("seeds", 1, types=int)
    _check(seeds >= 1, "simulation-seed", "seeds (run count) must be >= 1", f, key("seeds"))
    dt = sec.num("dt", 1.0)
    _check(dt > 0, "simulation-dt", "dt must be > 0", f, key("dt"))
    snaps = sec.get("snapshots", [0, 25, 50], types=list)
    _check(all(isinstance(s, int) and s >= 0 for s in snaps), "config-type", "snapshots must be non-negative integers",
           f, key("snapshots"))
    prob = sec.get("probability", "clamp", types=str)
    rule = sec.get("retire_rule", "completes", types=str)
    _check(prob in ("clamp", "exp"), "simulation-option", f"unknown probability mode {prob!r}", f, key("probability"))
    _check(rule in ("completes", "exceeds"), "simulation-option", f"unknown retire rule {rule!r}", f, key("retire_rule"))
    rep = sec.sub("replacement")
    type_map = {}
    if rep is not None:
        for k in list(rep.data):
            v = rep.get(k, types=str)
            try:
                type_map[Insulation(k)] = Insulation(v)
            except ValueError:
                raise ConfigError("cable-insulation", f"unknown insulation in {k} = {v!r}", f, rep._key(k)) from None
        rep.finish()
    sec.finish()
    return dict(horizon=horizon, seed=seed, seeds=seeds, dt=dt, snapshots=tuple(snaps), probability=prob,
                retire_rule=rule, replacement_type_map=type_map)


def _loading(sec: _Section, base: Path, cables: dict) -> LoadingSource:
    f = sec.file
    kinds = ("trajectory", "distribution", "seasonal", "transition", "registry")
    kind = sec.get("kind", required=True, types=str)
    _check(kind in kinds, "loading-source", f"unknown loading kind {kind!r}; expected one of {kinds}", f, sec._key("kind"))
    # keys that belong to other kinds make the source ambiguous
    own = {
        "trajectory": {"file", "interpolation"},
        "distribution": {"file"},
        "seasonal": {"seasons", "end"},
        "transition": {"rho0_file", "rho1_file", "c1", "c2", "scenarios", "name"},
        "registry": {"registry_file", "line_loading_file", "loading_dir"},
    }
    foreign = sorted(set(sec.data) - own[kind] - {"kind"})
    _check(not foreign, "loading-source", f"keys {foreign} do not belong to a {kind!r} loading source", f, sec.path)
    src = LoadingSource(kind)
    if kind == "trajectory":
        path = _file(sec, "file", base)
        interp = sec.get("interpolation", "linear", types=str)
        _check(interp in ("linear", "hold"), "config-type", "interpolation must be linear or hold", f,
               sec._key("interpolation"))
        t, v, quantity = read_series(path)
        if len(t) < 2:
            raise DataError("csv-empty", "a trajectory needs at least 2 samples", path)
        src.trajectory = CurrentProfile(tuple(t), tuple(v), interp) if quantity == "current" else \
            TemperatureTrajectory(t, v, interp)
    elif kind == "distribution":
        src.distribution = read_distribution(_file(sec, "file", base))
    elif kind == "seasonal":
        seasons = sec.get("seasons", required=True, types=list)
        end = sec.num("end", required=True)
        starts, dists = [], []
        for k, item in enumerate(seasons):
            ss = _Section(item, f"{sec.path}.seasons[{k}]", f)
            starts.append(ss.num("start", required=True))
            dists.append(read_distribution(_file(ss, "file", base)))
            ss.finish()
        ok = bool(starts) and all(b > a for a, b in zip(starts + [end], starts[1:] + [end]))
        _check(ok, "season-order", "season starts must increase and precede end", f, sec._key("seasons"))
        src.schedule = SeasonSchedule(tuple(starts), tuple(dists), end)
    elif kind == "transition":
        c1, c2 = sec.num("c1", required=True), sec.num("c2", required=True)
        _check(c1 > 0, "transition-rate", "c1 must be > 0", f, sec._key("c1"))
        src.rho0 = read_distribution(_file(sec, "rho0_file", base))
        items = []
        if sec.has("rho1_file"):
            items.append((sec.get("name", "scenario", types=str), _file(sec, "rho1_file", base)))
        for k, item in enumerate(sec.get("scenarios", [], types=list)):
            ss = _Section(item, f"{sec.path}.scenarios[{k}]", f)
            items.append((ss.get("name", required=True, types=str), _file(ss, "rho1_file", base)))
            ss.finish()
        _check(items, "loading-source", "a transition needs rho1_file or [[loading.scenarios]]", f, sec.path)
        names = [n for n, _ in items]
        _check(len(set(names)) == len(names), "loading-source", "scenario names must be unique", f, sec.path)
        for name, path in items:
            src.scenarios[name] = TransitionScenario(src.rho0, read_distribution(path), c1, c2, name)
    else:
        src.assets = read_registry(_file(sec, "registry_file", base))
        lf = _file(sec, "line_loading_file", base, required=False)
        ldir = sec.get("loading_dir", types=str)
        _check((lf is None) != (ldir is None), "loading-source", "give exactly one of line_loading_file or loading_dir",
               f, sec.path)
        if lf is not None:
            src.loadings = read_line_loadings(lf)
        else:
            src.loadings = _loadings_from_dir(base / ldir, {a.loading_ref for a in src.assets})
        missing = sorted(a.id for a in src.assets if a.loading_ref not in src.loadings)
        if missing:
            raise DataError("missing-loading", f"unresolved loading_ref for assets {missing}", f)
        unknown = sorted({a.insulation.value for a in src.assets} - {c.value for c in cables})
        _check(not unknown, "config-missing", f"registry uses cable types {unknown} without a [cables] entry", f,
               "cables")
    sec.finish()
    return src


def _loadings_from_dir(d: Path, refs) -> dict:
    """Resolve each ref to a distribution or series CSV in ``d``."""
    out = {}
    for ref in sorted(refs):
        p = d / ref
        if not p.is_file():
            continue
        with open(p, encoding="ascii") as fh:
            header = fh.readline()
        if "density_per_celsius" in header:
            out[ref] = read_distribution(p)
        else:
            t, v, q = read_series(p)
            out[ref] = CurrentProfile(tuple(t), tuple(v)) if q == "current" else TemperatureTrajectory(t, v)
    return out


def _query(sec: _Section | None, cables) -> Query:
    if sec is None:
        return Query()
    f = sec.file
    ages = sec.get("ages", [], types=list)
    times = sec.get("times", [], types=(list, str))
    if isinstance(times, str):
        times = parse_range(times, "times")
    _check(all(isinstance(a, (int, float)) and a >= 0 for a in ages), "query", "ages must be numbers >= 0", f,
           sec._key("ages"))
    _check(all(isinstance(t, (int, float)) for t in times), "query", "times must be numbers", f, sec._key("times"))
    cable = sec.get("cable", types=str)
    if cable is not None:
        try:
            cable = Insulation(cable)
        except ValueError:
            raise ConfigError("cable-insulation", f"unknown insulation {cable!r}", f, sec._key("cable")) from None
        _check(cable in cables, "config-missing", f"no [cables.{cable.value}] entry", f, sec._key("cable"))
    sec.finish()
    return Query(tuple(float(a) for a in ages), tuple(float(t) for t in times), cable)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config-file-missing", "config file not found", path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("config-parse", str(exc), path) from None
    base = path.parent.resolve()
    root = _Section(raw, "", path)
    _units(root.sub("units"))

    csec = root.sub("cables", required=True)
    _check(csec.data, "config-missing", "at least one cable type is required", path, "cables")
    cables, params = {}, {}
    for name in list(csec.data):
        spec, p = _cable(csec.sub(name), name)
        cables[spec.insulation], params[spec.insulation] = spec, p
    csec.finish()

    loading = _loading(root.sub("loading", required=True), base, cables)

    pops = {}
    psec = root.sub("population")
    if psec is not None:
        for name in list(psec.data):
            try:
                ins = Insulation(name)
            except ValueError:
                raise ConfigError("cable-insulation", f"unknown insulation {name!r}", path, f"population.{name}") from None
            pops[ins] = _population(psec.sub(name), base)
        psec.finish()

    policy = _policy(root.sub("policy"))
    simulation = _simulation(root.sub("simulation"))
    query = _query(root.sub("query"), cables)

    sweep = None
    ssec = root.sub("sweep")
    if ssec is not None:
        sweep = parse_range(ssec.get("beta", required=True, types=str), "sweep.beta")
        ssec.finish()

    out = root.sub("output")
    outdir = Path("out")
    if out is not None:
        outdir = Path(out.get("directory", "out", types=str))
        out.finish()
    root.finish()
    return ScenarioConfig(path, cables, params, loading, pops, policy, simulation, query, outdir, sweep)
