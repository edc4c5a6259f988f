"""Population failure counts, replacement strategies and before/after shortcut ratios.

Ages are whole years; integrals over age are sums over integer ages.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.stats import skewnorm

from .reliability import WeibullParams, hazard_rate
from .thermal import ModelError

MAX_AGE = 150


class DegeneratePopulation(ValueError):
    """No population mass beyond the replacement age."""

    code = "degenerate-population"


@dataclass(frozen=True)
class SkewNormal:
    """Location-scale-shape skew normal; ``delta`` is the usual shape parameter."""

    mu: float
    sigma: float
    delta: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ModelError(f"sigma must be > 0, got {self.sigma}")

    def pdf(self, a):
        return skewnorm.pdf(a, self.delta, loc=self.mu, scale=self.sigma)

    def cdf(self, a):
        return skewnorm.cdf(a, self.delta, loc=self.mu, scale=self.sigma)

    def sample(self, rng: np.random.Generator, n: int):
        """Integer ages (completed years); negative draws are clamped to 0."""
        x = skewnorm.rvs(self.delta, loc=self.mu, scale=self.sigma, size=n, random_state=rng)
        return np.clip(np.floor(x), 0, MAX_AGE).astype(int)

    def quantile_ages(self, n: int):
        """Deterministic representative sample at the mid-quantiles ``(k+1/2)/n``."""
        q = (np.arange(n) + 0.5) / n
        x = skewnorm.ppf(q, self.delta, loc=self.mu, scale=self.sigma)
        return np.clip(np.floor(x), 0, MAX_AGE).astype(int)

    def discretize(self, max_age: int = MAX_AGE):
        """Mass of each integer age ``a``: probability of ``[a, a+1)``.

        Mass below 0 is added to age 0, mass beyond ``max_age`` to ``max_age``.
        """
        edges = np.arange(max_age + 2, dtype=float)
        c = self.cdf(edges)
        m = np.diff(c)
        m[0] += c[0]
        m[-1] += 1.0 - c[-1]
        return m


class AgePopulation:
    """Discrete age distribution of ``count`` cables."""

    def __init__(self, masses, count: float = 1.0, *, normalize: bool = True):
        m = np.asarray(masses, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise ModelError("age masses must be a non-empty 1-D array")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise ModelError("age masses must be finite and non-negative")
        total = m.sum()
        if not total > 0:
            raise ModelError("age distribution has zero mass")
        if not normalize and abs(total - 1.0) > 1e-6:
            raise ModelError(f"age masses sum to {total}, expected 1")
        if not count >= 1:
            raise ModelError(f"population count must be >= 1, got {count}")
        self.masses = m / total
        self.count = float(count)

    @classmethod
    def skew_normal(cls, mu, sigma, delta, count=1.0, max_age: int = MAX_AGE) -> "AgePopulation":
        return cls(SkewNormal(mu, sigma, delta).discretize(max_age), count)

    @classmethod
    def point(cls, age: int, count=1.0) -> "AgePopulation":
        m = np.zeros(int(age) + 1)
        m[-1] = 1.0
        return cls(m, count)

    @classmethod
    def from_ages(cls, ages) -> "AgePopulation":
        ages = np.asarray(ages, dtype=int)
        return cls(np.bincount(ages).astype(float), count=ages.size)

    @property
    def ages(self):
        return np.arange(self.masses.size)

    def mean_age(self) -> float:
        return float(np.sum(self.ages * self.masses))

    def __eq__(self, other):
        return (
            isinstance(other, AgePopulation)
            and self.count == other.count
            and self.masses.shape == other.masses.shape
            and np.allclose(self.masses, other.masses, rtol=1e-12, atol=1e-15)
        )


@dataclass(frozen=True)
class RunToFailure:
    pass


@dataclass(frozen=True)
class ReplaceAll:
    a_R: float

    def __post_init__(self):
        if not self.a_R > 0:
            raise ModelError(f"replacement age must be > 0, got {self.a_R}")


def step_kappa(a):
    """Failure retention 0.98 from age 25 on, 0 below (case-study setting)."""
    return np.where(np.asarray(a) >= 25, 0.98, 0.0)


@dataclass(frozen=True)
class Preventive:
    """Preventive maintenance.

    ``kappa(a)`` multiplies the hazard at age ``a`` (average of ``1 - x`` over
    the maintenance levels applied at that age). ``scheduled_share`` is the
    yearly planned replacement count as a share of the fleet. ``h_R`` is the
    health-index threshold used for asset-level assignment.
    """

    kappa: Callable = step_kappa
    scheduled_share: float = 0.0
    h_R: float | None = None

    def __post_init__(self):
        if not 0 <= self.scheduled_share <= 1:
            raise ModelError(f"scheduled_share must be in [0, 1], got {self.scheduled_share}")

    def kappa_at(self, a):
        k = np.asarray(self.kappa(np.asarray(a)), dtype=float) * np.ones(np.shape(a))
        if np.any(k < 0) or np.any(k > 1):
            raise ModelError("kappa(a) must lie in [0, 1]")
        return k


MaintenancePolicy = Union[RunToFailure, ReplaceAll, Preventive]


def expected_failures(pop: AgePopulation, lambda_of_age: Callable) -> float:
    lam = np.asarray(lambda_of_age(pop.ages), dtype=float) * np.ones(pop.ages.shape)
    return float(pop.count * np.sum(lam * pop.masses))


def annual_replacements(pop: AgePopulation, policy: MaintenancePolicy, lambda_of_age: Callable) -> float:
    a = pop.ages
    lam = np.asarray(lambda_of_age(a), dtype=float) * np.ones(a.shape)
    if isinstance(policy, RunToFailure):
        return float(pop.count * np.sum(lam * pop.masses))
    if isinstance(policy, ReplaceAll):
        young = a < policy.a_R
        return float(pop.count * (np.sum(lam[young] * pop.masses[young]) + np.sum(pop.masses[~young])))
    if isinstance(policy, Preventive):
        failures = pop.count * np.sum(lam * policy.kappa_at(a) * pop.masses)
        return float(failures + policy.scheduled_share * pop.count)
    raise TypeError(f"unknown policy {policy!r}")


def replacement_age_from_rate(lambda_R, p: WeibullParams):
    """Age at which the constant-loading hazard reaches ``lambda_R``."""
    lambda_R = np.asarray(lambda_R, dtype=float)
    if np.any(lambda_R <= 0):
        raise ModelError("lambda_R must be > 0")
    eta = p.eta_hat_r
    out = eta * (lambda_R * eta / p.beta) ** (1.0 / (p.beta - 1.0))
    return float(out) if out.ndim == 0 else out


def shortcut_run_to_failure(r0: float, r1: float, beta: float) -> float:
    if not r0 > 0:
        raise ModelError("r0 must be > 0")
    return float((r1 / r0) ** beta)


def replace_all_mu(p: WeibullParams, pop: AgePopulation, a_R: float) -> float:
    a = pop.ages
    young = a < a_R
    tail = np.sum(pop.masses[~young])
    if not tail > 0:
        raise DegeneratePopulation(f"no population mass at or beyond a_R={a_R}")
    return float(p.beta * np.sum(a[young] ** (p.beta - 1.0) * pop.masses[young]) / tail)


def shortcut_replace_all(r0, r1, p: WeibullParams, pop: AgePopulation, a_R: float, *, strict: bool = True) -> float:
    """Replace-all maintenance ratio for the same replacement age before and after.

    With ``strict=False`` a population without mass beyond ``a_R`` falls back
    to the run-to-failure ratio and warns instead of raising.
    """
    try:
        mu = replace_all_mu(p, pop, a_R)
    except DegeneratePopulation:
        if strict:
            raise
        warnings.warn("no tail mass beyond a_R; using the run-to-failure ratio", stacklevel=2)
        return shortcut_run_to_failure(r0, r1, p.beta)
    eta0 = p.eta_hat_r / r0
    eta1 = p.eta_hat_r / r1
    return float((eta1 ** -p.beta * mu + 1.0) / (eta0 ** -p.beta * mu + 1.0))


def preventive_base_failures(r0: float, p: WeibullParams, pop: AgePopulation, kappa: Callable) -> float:
    """Expected failures per year before the transition, with maintenance reduction."""
    lam0 = WeibullParams(p.beta, p.eta_hat_r / r0)
    k = np.asarray(kappa(pop.ages), dtype=float) * np.ones(pop.ages.shape)
    return float(pop.count * np.sum(hazard_rate(pop.ages, lam0) * k * pop.masses))


def shortcut_preventive(r0, r1, p: WeibullParams, F0: float, scheduled: float) -> float:
    if F0 < 0 or scheduled < 0 or not F0 + scheduled > 0:
        raise ModelError("need F0 >= 0, scheduled >= 0 and F0 + scheduled > 0")
    growth = shortcut_run_to_failure(r0, r1, p.beta)
    return float((growth * F0 + scheduled) / (F0 + scheduled))


def beta_sensitivity_sweep(r0: float, r1: float, start: float, stop: float, step: float):
    """Run-to-failure ratio over an inclusive grid of shape parameters."""
    if not start > 1 or stop < start or not step > 0:
        raise ModelError("need 1 < start <= stop and step > 0")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    betas = start + step * np.arange(n)
    return [(float(b), shortcut_run_to_failure(r0, r1, float(b))) for b in betas]


@dataclass
class Assessment:
    """Before/after ratios of the three strategies for one cable type and scenario."""

    cable: str
    scenario: str
    r0: float
    r1: float
    beta: float
    mu: float
    F0: float
    scheduled: float
    ratios: dict = field(default_factory=dict)


def assess_strategies(cable: str, scenario: str, r0: float, r1: float, p: WeibullParams,
                      pop: AgePopulation, a_R: float, preventive: Preventive) -> Assessment:
    try:
        mu = replace_all_mu(p, pop, a_R)
    except DegeneratePopulation:
        mu = float("nan")
    F0 = preventive_base_failures(r0, p, pop, preventive.kappa_at)
    scheduled = preventive.scheduled_share * pop.count
    ratios = {
        "run-to-failure": shortcut_run_to_failure(r0, r1, p.beta),
        "replace-all": shortcut_replace_all(r0, r1, p, pop, a_R, strict=False),
        "preventive": shortcut_preventive(r0, r1, p, F0, scheduled),
    }
    return Assessment(cable, scenario, r0, r1, p.beta, mu, F0, scheduled, ratios)
