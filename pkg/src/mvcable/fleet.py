"""Asset-level bookkeeping and Monte Carlo fleet simulation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

import numpy as np

from .loading import TemperatureDistribution, effective_acceleration
from .maintenance import Preventive, ReplaceAll, RunToFailure
from .reliability import TemperatureTrajectory, WeibullParams, effective_age
from .rng import season_uniforms
from .thermal import CableSpec, Insulation, ModelError, acceleration_factor, conductor_temperature


class MissingLoadingData(KeyError):
    code = "missing-loading"

    def __init__(self, ids):
        self.ids = sorted(ids)
        super().__init__(f"no loading data for assets: {', '.join(map(str, self.ids))}")


class MissingHealthIndex(ValueError):
    code = "missing-health-index"

    def __init__(self, ids):
        self.ids = sorted(ids)
        super().__init__(f"no health index for assets: {', '.join(map(str, self.ids))}")


@dataclass(frozen=True)
class StationaryCurrent:
    """Steady-state yearly loading as weighted samples of ``|I_c|/I_z``."""

    i_rel: tuple
    weights: tuple | None = None

    def __post_init__(self):
        i = np.asarray(self.i_rel, dtype=float)
        if i.size == 0 or np.any(i < 0):
            raise ModelError("current ratios must be non-negative and non-empty")
        if self.weights is not None and len(self.weights) != i.size:
            raise ModelError("one weight per current sample")

    def acceleration(self, spec: CableSpec) -> float:
        i = np.asarray(self.i_rel, dtype=float)
        w = np.ones(i.size) if self.weights is None else np.asarray(self.weights, dtype=float)
        return float(np.sum(w * acceleration_factor(conductor_temperature(i, spec), spec)) / np.sum(w))


@dataclass(frozen=True)
class CurrentProfile:
    """Time series of ``|I_c|/I_z``; converted per cable type to a temperature trajectory."""

    times: tuple
    i_rel: tuple
    interpolation: str = "linear"

    def trajectory(self, spec: CableSpec) -> TemperatureTrajectory:
        return TemperatureTrajectory.from_current(self.times, self.i_rel, spec, self.interpolation)


Loading = Union[StationaryCurrent, CurrentProfile, TemperatureDistribution, TemperatureTrajectory]


def _is_stationary(loading) -> bool:
    return isinstance(loading, (StationaryCurrent, TemperatureDistribution))


def stationary_acceleration(loading, spec: CableSpec) -> float:
    if isinstance(loading, StationaryCurrent):
        return loading.acceleration(spec)
    if isinstance(loading, TemperatureDistribution):
        return effective_acceleration(loading, spec)
    raise TypeError(f"{type(loading).__name__} is not a stationary loading")


def _trajectory(loading, spec):
    if isinstance(loading, CurrentProfile):
        return loading.trajectory(spec)
    if isinstance(loading, TemperatureTrajectory):
        return loading
    raise TypeError(f"{type(loading).__name__} is not a trajectory loading")


@dataclass
class CableAsset:
    id: str
    insulation: Insulation
    age: float
    maintenance_level: float = 0.0
    health_index: float | None = None
    loading_ref: str = ""

    def __post_init__(self):
        self.insulation = Insulation(self.insulation)
        if self.age < 0:
            raise ModelError(f"asset {self.id}: age must be >= 0")
        if not 0 <= self.maintenance_level <= 1:
            raise ModelError(f"asset {self.id}: maintenance level must be in [0, 1]")


def _params(specs, params, insulation) -> WeibullParams:
    if params and insulation in params:
        return params[insulation]
    return WeibullParams.from_spec(specs[insulation])


def _check_loadings(assets, loadings):
    missing = [a.id for a in assets if a.loading_ref not in loadings]
    if missing:
        raise MissingLoadingData(missing)


def asset_failure_rate(asset: CableAsset, t: float, specs, loadings, params=None) -> float:
    """Failure rate of one cable at time ``t`` from its own loading history."""
    spec = specs[asset.insulation]
    p = _params(specs, params, asset.insulation)
    loading = loadings[asset.loading_ref]
    if _is_stationary(loading):
        r = stationary_acceleration(loading, spec)
        A = asset.age * r
    else:
        traj = _trajectory(loading, spec)
        A = effective_age(traj, asset.age, t, spec)
        r = float(traj.rate_at(t, spec))
    return (p.beta / p.eta_hat_r) * (A / p.eta_hat_r) ** (p.beta - 1.0) * r * (1.0 - asset.maintenance_level)


def fleet_expected_failures(assets, t: float, specs: Mapping, loadings: Mapping, params=None, dt: float = 1.0) -> float:
    """Expected failures in the season of length ``dt`` starting at ``t``."""
    _check_loadings(assets, loadings)
    return float(sum(asset_failure_rate(a, t, specs, loadings, params) for a in assets) * dt)


def preventive_assignment(assets, h_R: float):
    """Split assets into (keep, maintain, replace) id lists.

    Replace when the health index is at or below ``h_R``; of the rest, assets
    with a positive maintenance level are maintained and the others kept.
    """
    missing = [a.id for a in assets if a.health_index is None]
    if missing:
        raise MissingHealthIndex(missing)
    keep, maintain, replace = [], [], []
    for a in assets:
        if a.health_index <= h_R:
            replace.append(a.id)
        elif a.maintenance_level > 0:
            maintain.append(a.id)
        else:
            keep.append(a.id)
    return keep, maintain, replace


@dataclass(frozen=True)
class SimulationConfig:
    """Monte Carlo settings.

    ``probability`` turns a rate into a yearly failure probability: ``"clamp"``
    uses ``min(lambda dt, 1)``, ``"exp"`` uses ``1 - exp(-lambda dt)``.
    ``retire_rule`` fixes when replace-all retires a cable: ``"completes"``
    retires it in the season in which it completes ``a_R`` years of service
    (period ``a_R``); ``"exceeds"`` retires it once its age is above ``a_R``.
    Replacements enter service at age 0 in the next season.
    """

    horizon: int
    seed: int = 0
    policy: Union[RunToFailure, ReplaceAll] = field(default_factory=RunToFailure)
    dt: float = 1.0
    replacement_type_map: Mapping = field(default_factory=dict)
    snapshots: tuple = (0, 25, 50)
    probability: str = "clamp"
    retire_rule: str = "completes"
    t0: float = 0.0

    def __post_init__(self):
        if self.horizon < 1:
            raise ModelError("horizon must be >= 1")
        if not self.dt > 0:
            raise ModelError("season length dt must be > 0")
        if self.probability not in ("clamp", "exp"):
            raise ModelError(f"unknown probability mode {self.probability!r}")
        if self.retire_rule not in ("completes", "exceeds"):
            raise ModelError(f"unknown retire rule {self.retire_rule!r}")
        if isinstance(self.policy, Preventive):
            raise ModelError("the fleet simulation supports run-to-failure and replace-all only")
        if not 0 <= self.seed < 2**64:
            raise ModelError("seed must be a 64-bit unsigned integer")


@dataclass
class SimulationTrace:
    years: np.ndarray
    replacements: np.ndarray
    expected_failures: np.ndarray
    shares: dict
    histograms: dict

    def share(self, insulation) -> np.ndarray:
        return self.shares[Insulation(insulation)]


def _retire_mask(ages, policy, cfg):
    if not isinstance(policy, ReplaceAll):
        return np.zeros(ages.shape, dtype=bool)
    if cfg.retire_rule == "completes":
        return ages + cfg.dt >= policy.a_R - 1e-9
    return ages > policy.a_R + 1e-9


def simulate_replace_all(assets, cfg: SimulationConfig, specs: Mapping, loadings: Mapping, params=None) -> SimulationTrace:
    """Bernoulli failure draws per cable and season, with replace-all retirement.

    Failed or retired cables re-enter at age 0 in the following season with the
    type given by ``cfg.replacement_type_map`` (same type by default).
    """
    _check_loadings(assets, loadings)
    assets = sorted(assets, key=lambda a: str(a.id))
    types = list(Insulation)
    kind = np.array([types.index(a.insulation) for a in assets])
    ages = np.array([a.age for a in assets], dtype=float)
    x = np.array([a.maintenance_level for a in assets])
    refs = [a.loading_ref for a in assets]
    n = len(assets)

    beta = np.empty(len(types))
    eta = np.empty(len(types))
    for k, ins in enumerate(types):
        if ins in specs:
            p = _params(specs, params, ins)
            beta[k], eta[k] = p.beta, p.eta_hat_r
    type_map = np.array([types.index(Insulation(cfg.replacement_type_map.get(ins, ins))) for ins in types])

    # per (loading, type) stationary acceleration or trajectory, built on demand
    cache = {}

    def loading_for(i, k):
        key = (refs[i], k)
        if key not in cache:
            loading = loadings[refs[i]]
            spec = specs[types[k]]
            cache[key] = stationary_acceleration(loading, spec) if _is_stationary(loading) else _trajectory(loading, spec)
        return cache[key]

    def rbar_of(i, k):
        src = loading_for(i, k)
        return src if isinstance(src, float) else np.nan

    rbar = np.array([rbar_of(i, kind[i]) for i in range(n)])

    steps = int(cfg.horizon)
    N = np.zeros(steps, dtype=int)
    F = np.zeros(steps)
    shares = {ins: np.zeros(steps) for ins in types}
    hists = {}
    for step in range(steps):
        t = cfg.t0 + step * cfg.dt
        stat = ~np.isnan(rbar)
        r = np.where(stat, rbar, 0.0)
        A = ages * r
        for i in np.flatnonzero(~stat):
            spec = specs[types[kind[i]]]
            traj = loading_for(i, kind[i])
            A[i] = effective_age(traj, ages[i], t, spec)
            r[i] = float(traj.rate_at(t, spec))
        b, e = beta[kind], eta[kind]
        lam = (b / e) * (A / e) ** (b - 1.0) * r * (1.0 - x)
        mean_fail = lam * cfg.dt
        prob = np.minimum(mean_fail, 1.0) if cfg.probability == "clamp" else -np.expm1(-mean_fail)
        failed = season_uniforms(cfg.seed, step, n) < prob
        replaced = failed | _retire_mask(ages, cfg.policy, cfg)

        N[step] = int(replaced.sum())
        F[step] = float(mean_fail.sum())
        for k, ins in enumerate(types):
            shares[ins][step] = np.mean(kind == k)
        if step in cfg.snapshots:
            hists[step] = {ins: ages[kind == k].copy() for k, ins in enumerate(types)}

        ages = np.where(replaced, 0.0, ages + cfg.dt)
        changed = replaced & (type_map[kind] != kind)
        kind = np.where(replaced, type_map[kind], kind)
        for i in np.flatnonzero(changed):
            rbar[i] = rbar_of(i, kind[i])

    return SimulationTrace(np.arange(steps) * cfg.dt + cfg.t0, N, F, shares, hists)


def evolve_age_distribution(masses, lambda_of_age: Callable, steps: int, inject="none"):
    """Yearly age-distribution recursion ``rho(a+1, t) = rho(a, t-1) (1 - lambda(a))``.

    ``inject`` sets the age-0 mass of each new year: ``"none"`` (attrition, the
    type dies out), ``"self"`` (own failures are replaced in kind), or a
    callable ``f(step, failed_mass) -> float`` returning the injected mass.
    Masses are absolute shares of the whole fleet. Returns ``steps + 1`` arrays.
    """
    rho = np.asarray(masses, dtype=float).copy()
    out = [rho.copy()]
    for step in range(steps):
        lam = np.clip(np.asarray(lambda_of_age(np.arange(rho.size)), dtype=float) * np.ones(rho.size), 0.0, 1.0)
        failed = rho * lam
        nxt = np.zeros(rho.size + 1)
        nxt[1:] = rho - failed
        if inject == "self":
            nxt[0] = failed.sum()
        elif callable(inject):
            nxt[0] = float(inject(step, failed.sum()))
        elif inject != "none":
            raise ModelError(f"unknown injection mode {inject!r}")
        rho = nxt
        out.append(rho.copy())
    return out


def run_to_failure_migration(old_masses, new_masses, lambda_old: Callable, lambda_new: Callable, steps: int):
    """Two-type run-to-failure fleet where failed old cables are replaced by the new type.

    Old-type failures and new-type failures both re-enter as new-type cables
    at age 0 in the following year. Returns per-year shares and normalised
    expected failures ``F/|Omega|`` (probabilities clamped to [0, 1]).
    """
    old = np.asarray(old_masses, dtype=float).copy()
    new = np.asarray(new_masses, dtype=float).copy()
    share_old, share_new, f_old, f_new = [], [], [], []
    for step in range(steps + 1):
        lo = np.clip(np.asarray(lambda_old(np.arange(old.size)), float) * np.ones(old.size), 0, 1)
        ln = np.clip(np.asarray(lambda_new(np.arange(new.size)), float) * np.ones(new.size), 0, 1)
        fo, fn = old * lo, new * ln
        total = old.sum() + new.sum()
        share_old.append(old.sum() / total)
        share_new.append(new.sum() / total)
        f_old.append(fo.sum())
        f_new.append(fn.sum())
        nxt_old = np.zeros(old.size + 1)
        nxt_old[1:] = old - fo
        nxt_new = np.zeros(new.size + 1)
        nxt_new[1:] = new - fn
        nxt_new[0] = fo.sum() + fn.sum()
        old, new = nxt_old, nxt_new
    return {
        "share_old": np.array(share_old),
        "share_new": np.array(share_new),
        "F_old": np.array(f_old),
        "F_new": np.array(f_new),
    }
