"""Temperature distributions, distribution-weighted ageing and the logistic transition.

Distributions are piecewise-constant histograms. Integrals of the ageing
factor against a histogram use the midpoint rule: each bin contributes
``r(T_mid) * mass``. Because r is convex in T this slightly underestimates
the exact bin integral for wide bins.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .reliability import CoverageError
from .thermal import CableSpec, ModelError, acceleration_factor


class TemperatureDistribution:
    """Histogram density over conductor temperature (per degC).

    Densities are renormalised on construction so the total mass is 1.
    """

    def __init__(self, bin_edges, densities, *, warn_tol: float | None = None):
        edges = np.asarray(bin_edges, dtype=float)
        dens = np.asarray(densities, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or dens.shape != (edges.size - 1,):
            raise ModelError("need n+1 bin edges for n densities")
        if np.any(np.diff(edges) <= 0):
            raise ModelError("bin edges must be strictly increasing")
        if np.any(dens < 0) or not np.all(np.isfinite(dens)):
            raise ModelError("densities must be finite and non-negative")
        mass = float(np.sum(dens * np.diff(edges)))
        if not mass > 0:
            raise ModelError("distribution has zero mass")
        if warn_tol is not None and abs(mass - 1.0) > warn_tol:
            warnings.warn(f"raw distribution mass {mass:.6g} deviates from 1; renormalising", stacklevel=2)
        self.edges = edges
        self.densities = dens / mass
        self.raw_mass = mass
        self.edges.setflags(write=False)
        self.densities.setflags(write=False)

    @classmethod
    def from_masses(cls, bin_edges, masses, **kw) -> "TemperatureDistribution":
        edges = np.asarray(bin_edges, dtype=float)
        return cls(edges, np.asarray(masses, dtype=float) / np.diff(edges), **kw)

    @classmethod
    def point_mass(cls, T: float, width: float = 1e-6) -> "TemperatureDistribution":
        return cls([T - width / 2, T + width / 2], [1.0 / width])

    @property
    def widths(self):
        return np.diff(self.edges)

    @property
    def masses(self):
        return self.densities * self.widths

    @property
    def midpoints(self):
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    def density_at(self, T):
        T = np.asarray(T, dtype=float)
        k = np.searchsorted(self.edges, T, side="right") - 1
        inside = (k >= 0) & (k < self.densities.size)
        # the closing edge belongs to the last bin
        k = np.where(T == self.edges[-1], self.densities.size - 1, k)
        inside |= T == self.edges[-1]
        out = np.where(inside, self.densities[np.clip(k, 0, self.densities.size - 1)], 0.0)
        return float(out) if out.ndim == 0 else out

    def resample(self, new_edges) -> "TemperatureDistribution":
        """Redistribute mass onto ``new_edges`` by overlap length."""
        new_edges = np.asarray(new_edges, dtype=float)
        cdf = np.concatenate([[0.0], np.cumsum(self.masses)])
        cum = np.interp(new_edges, self.edges, cdf)
        masses = np.diff(cum)
        if not masses.sum() > 0:
            raise ModelError("resampling grid does not overlap the distribution")
        return TemperatureDistribution.from_masses(new_edges, masses)

    def __eq__(self, other):
        return (
            isinstance(other, TemperatureDistribution)
            and np.array_equal(self.edges, other.edges)
            and np.allclose(self.densities, other.densities, rtol=1e-12, atol=0)
        )

    def __repr__(self):
        return f"TemperatureDistribution({self.densities.size} bins, {self.edges[0]:g}..{self.edges[-1]:g} degC)"


def effective_acceleration(rho: TemperatureDistribution, spec: CableSpec) -> float:
    return float(np.sum(acceleration_factor(rho.midpoints, spec) * rho.masses))


def ageing_share_above(rho: TemperatureDistribution, T_thresh: float, spec: CableSpec):
    """Share of time and of ageing spent above ``T_thresh``.

    Bins are counted by their midpoint, consistent with the midpoint rule in
    :func:`effective_acceleration`.
    """
    above = rho.midpoints > T_thresh
    weighted = acceleration_factor(rho.midpoints, spec) * rho.masses
    time_share = float(np.sum(rho.masses[above]))
    ageing_share = float(np.sum(weighted[above]) / np.sum(weighted))
    return time_share, ageing_share


@dataclass(frozen=True)
class SeasonSchedule:
    """Piecewise-constant loading: season k runs from ``starts[k]`` to ``starts[k+1]``.

    The last season ends at ``end``.
    """

    starts: tuple
    distributions: tuple
    end: float

    def __post_init__(self):
        starts = tuple(float(s) for s in self.starts)
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "distributions", tuple(self.distributions))
        if len(starts) != len(self.distributions) or not starts:
            raise ModelError("one distribution per season start is required")
        bounds = starts + (float(self.end),)
        if any(b <= a for a, b in zip(bounds, bounds[1:])):
            raise ModelError("season starts must be strictly increasing and before the end")

    @property
    def bounds(self):
        return np.array(self.starts + (float(self.end),))

    @property
    def durations(self):
        return np.diff(self.bounds)

    def accelerations(self, spec: CableSpec):
        return np.array([effective_acceleration(d, spec) for d in self.distributions])


def effective_age_seasonal(sched: SeasonSchedule, a: float, t: float, spec: CableSpec) -> float:
    """Sum of season accelerations weighted by their overlap with ``[t-a, t]``."""
    if a < 0:
        raise ModelError("age must be >= 0")
    lo, hi = t - a, t
    b = sched.bounds
    eps = 1e-9 * max(1.0, abs(b[0]), abs(b[-1]))
    if lo < b[0] - eps or hi > b[-1] + eps:
        raise CoverageError(f"window [{lo:g}, {hi:g}] outside schedule [{b[0]:g}, {b[-1]:g}]")
    overlap = np.clip(np.minimum(b[1:], hi) - np.maximum(b[:-1], lo), 0.0, None)
    return float(np.sum(overlap * sched.accelerations(spec)))


class TransitionScenario:
    """Logistic morph from ``rho0`` to ``rho1`` with rate ``c1`` and midpoint ``c2``."""

    def __init__(self, rho0: TemperatureDistribution, rho1: TemperatureDistribution, c1: float, c2: float,
                 name: str = ""):
        if not c1 > 0:
            raise ModelError(f"transition rate c1 must be > 0, got {c1}")
        if not (rho0.edges.shape == rho1.edges.shape and np.array_equal(rho0.edges, rho1.edges)):
            grid = np.union1d(rho0.edges, rho1.edges)
            rho0, rho1 = rho0.resample(grid), rho1.resample(grid)
        self.rho0 = rho0
        self.rho1 = rho1
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.name = name

    def weight(self, t):
        """Logistic weight of ``rho1`` at time ``t``."""
        t = np.asarray(t, dtype=float)
        out = 0.5 * (1.0 + np.tanh(0.5 * self.c1 * (t - self.c2)))
        return float(out) if out.ndim == 0 else out

    def distribution_at(self, t: float) -> TemperatureDistribution:
        w = self.weight(t)
        return TemperatureDistribution(self.rho0.edges, (1 - w) * self.rho0.densities + w * self.rho1.densities)

    def __repr__(self):
        return f"TransitionScenario({self.name!r}, c1={self.c1}, c2={self.c2})"


def logistic_density(s: TransitionScenario, T, t: float):
    d0 = np.asarray(s.rho0.density_at(T))
    d1 = np.asarray(s.rho1.density_at(T))
    out = d0 + (d1 - d0) * s.weight(t)
    return float(out) if out.ndim == 0 else out


def acceleration_in_time(s: TransitionScenario, t, spec: CableSpec):
    """Mean ageing factor of the transitioning distribution at time ``t``."""
    r0 = effective_acceleration(s.rho0, spec)
    r1 = effective_acceleration(s.rho1, spec)
    out = r0 + (r1 - r0) * np.asarray(s.weight(t))
    return float(out) if np.ndim(out) == 0 else out


def transition_limits(s: TransitionScenario, a, spec: CableSpec):
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise ModelError("age must be >= 0")
    A0 = a * effective_acceleration(s.rho0, spec)
    A1 = a * effective_acceleration(s.rho1, spec)
    if A0.ndim == 0:
        return float(A0), float(A1)
    return A0, A1


def _log_window(c1, c2, a, t):
    # ln((1 + e^{c1(t-c2)}) / (1 + e^{c1(t-a-c2)})) without overflow
    return np.logaddexp(0.0, c1 * (t - c2)) - np.logaddexp(0.0, c1 * (t - a - c2))


def effective_age_transition(s: TransitionScenario, a, t, spec: CableSpec):
    """Closed-form effective age under the logistic transition.

    Integrates the logistic weight over ``[t-a, t]`` analytically; the result
    interpolates between ``a * r0`` and ``a * r1``.
    """
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(a < 0):
        raise ModelError("age must be >= 0")
    r0 = effective_acceleration(s.rho0, spec)
    r1 = effective_acceleration(s.rho1, spec)
    out = a * r0 + _log_window(s.c1, s.c2, a, t) / s.c1 * (r1 - r0)
    return float(out) if np.ndim(out) == 0 else out


def effective_age_transition_compact(s: TransitionScenario, a, t, spec: CableSpec):
    """The same quantity written through the two limits (requires ``a > 0``)."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise ModelError("compact form needs a > 0")
    A0, A1 = transition_limits(s, a, spec)
    out = A0 + _log_window(s.c1, s.c2, a, np.asarray(t, float)) / (s.c1 * a) * (np.asarray(A1) - A0)
    return float(out) if np.ndim(out) == 0 else out
