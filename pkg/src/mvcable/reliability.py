"""Weibull hazard on effective (thermal) age."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .thermal import CableSpec, ModelError, acceleration_factor, conductor_temperature


class CoverageError(ValueError):
    """Requested time window is not covered by the loading data."""

    code = "coverage"


def characteristic_from_mean(eta_r_mean: float, beta: float) -> float:
    """Weibull scale from a mean life: ``eta_r / Gamma(1 + 1/beta)``."""
    if not beta > 1:
        raise ModelError(f"beta must be > 1, got {beta}")
    if not eta_r_mean > 0:
        raise ModelError(f"mean life must be > 0, got {eta_r_mean}")
    return eta_r_mean / float(gamma(1.0 + 1.0 / beta))


@dataclass(frozen=True)
class WeibullParams:
    beta: float
    eta_hat_r: float

    def __post_init__(self):
        if not self.beta > 1:
            raise ModelError(f"beta must be > 1, got {self.beta}")
        if not self.eta_hat_r > 0:
            raise ModelError(f"eta_hat_r must be > 0, got {self.eta_hat_r}")

    @classmethod
    def from_mean(cls, eta_r_mean: float, beta: float) -> "WeibullParams":
        return cls(beta=beta, eta_hat_r=characteristic_from_mean(eta_r_mean, beta))

    @classmethod
    def from_spec(cls, spec: CableSpec) -> "WeibullParams":
        return cls.from_mean(spec.eta_r_mean, spec.beta)


def hazard_rate(a, p: WeibullParams):
    a = np.asarray(a, dtype=float)
    out = (p.beta / p.eta_hat_r) * (a / p.eta_hat_r) ** (p.beta - 1.0)
    return float(out) if out.ndim == 0 else out


def cumulative_hazard(u, p: WeibullParams):
    u = np.asarray(u, dtype=float)
    out = (u / p.eta_hat_r) ** p.beta
    return float(out) if out.ndim == 0 else out


class TemperatureTrajectory:
    """Sampled conductor temperature over time (years, degC).

    ``interpolation="linear"`` integrates the ageing factor with the
    trapezoidal rule on the sample grid. ``interpolation="hold"`` treats every
    sample as constant until the next one, which is how yearly profiles are
    accumulated (a window ``[t-a, t]`` on integer years sums the samples
    ``t-a, ..., t-1``).
    """

    def __init__(self, times, temps, interpolation: str = "linear"):
        times = np.asarray(times, dtype=float)
        temps = np.asarray(temps, dtype=float)
        if times.ndim != 1 or times.shape != temps.shape:
            raise ModelError("times and temps must be 1-D arrays of equal length")
        if times.size < 2:
            raise ModelError("a trajectory needs at least 2 samples")
        if np.any(np.diff(times) <= 0):
            raise ModelError("trajectory times must be strictly increasing")
        if interpolation not in ("linear", "hold"):
            raise ModelError(f"unknown interpolation {interpolation!r}")
        self.times = times
        self.temps = temps
        self.interpolation = interpolation
        self.times.setflags(write=False)
        self.temps.setflags(write=False)

    @classmethod
    def from_current(cls, times, i_rel, spec: CableSpec, interpolation: str = "linear"):
        return cls(times, conductor_temperature(np.abs(np.asarray(i_rel, float)), spec), interpolation)

    @classmethod
    def constant(cls, T: float, start: float, stop: float) -> "TemperatureTrajectory":
        return cls([start, stop], [T, T])

    @property
    def span(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    def __eq__(self, other):
        return (
            isinstance(other, TemperatureTrajectory)
            and self.interpolation == other.interpolation
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.temps, other.temps)
        )

    def __repr__(self):
        lo, hi = self.span
        return f"TemperatureTrajectory({self.times.size} samples, [{lo}, {hi}], {self.interpolation})"

    def _check(self, x):
        lo, hi = self.span
        x = np.asarray(x, dtype=float)
        # tolerate rounding at the edges of the grid
        eps = 1e-9 * max(1.0, abs(lo), abs(hi))
        if np.any(x < lo - eps) or np.any(x > hi + eps):
            raise CoverageError(
                f"window reaches {float(np.min(x)):g}..{float(np.max(x)):g}, "
                f"trajectory covers [{lo:g}, {hi:g}]"
            )
        return np.clip(x, lo, hi)

    def rate_at(self, x, spec: CableSpec):
        """Ageing factor r(T(x)) under the trajectory's interpolation."""
        x = self._check(x)
        r = acceleration_factor(self.temps, spec)
        if self.interpolation == "linear":
            return np.interp(x, self.times, r)
        k = np.clip(np.searchsorted(self.times, x, side="right") - 1, 0, self.times.size - 1)
        return r[k]

    def _cumulative(self, x, spec: CableSpec):
        """Integral of r from the first sample to ``x``."""
        x = self._check(x)
        t = self.times
        r = acceleration_factor(self.temps, spec)
        dt = np.diff(t)
        if self.interpolation == "linear":
            seg = 0.5 * (r[:-1] + r[1:]) * dt
        else:
            seg = r[:-1] * dt
        C = np.concatenate([[0.0], np.cumsum(seg)])
        k = np.clip(np.searchsorted(t, x, side="right") - 1, 0, t.size - 2)
        h = x - t[k]
        if self.interpolation == "linear":
            rx = r[k] + (r[k + 1] - r[k]) * h / dt[k]
            return C[k] + 0.5 * (r[k] + rx) * h
        return C[k] + r[k] * h


def effective_age(traj: TemperatureTrajectory, a, t, spec: CableSpec):
    """Integral of the ageing factor over the service window ``[t-a, t]``."""
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(a < 0):
        raise ModelError("age must be >= 0")
    out = traj._cumulative(t, spec) - traj._cumulative(t - a, spec)
    out = np.where(a == 0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def failure_rate_trajectory(traj: TemperatureTrajectory, a, t, spec: CableSpec, p: WeibullParams):
    A = np.asarray(effective_age(traj, a, t, spec))
    out = (p.beta / p.eta_hat_r) * (A / p.eta_hat_r) ** (p.beta - 1.0) * traj.rate_at(t, spec)
    return float(out) if np.ndim(out) == 0 else out


def failure_rate_constant(a, T, spec: CableSpec, p: WeibullParams):
    """Weibull rate at a constant temperature, with the scale shrunk by r(T)."""
    eta = p.eta_hat_r / np.asarray(acceleration_factor(T, spec))
    a = np.asarray(a, dtype=float)
    out = (p.beta / eta) * (a / eta) ** (p.beta - 1.0)
    return float(out) if np.ndim(out) == 0 else out
