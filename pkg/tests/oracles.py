"""Independent reference computations used to check the package.

Nothing here imports the numerical routines under test; each oracle is a
direct, slow transcription of the defining formula.
"""

import math

import mpmath
from scipy import integrate

KELVIN = 273.15


def gamma_scale(eta_mean, beta):
    return float(mpmath.mpf(eta_mean) / mpmath.gamma(1 + mpmath.mpf(1) / beta))


def temperature(i_rel, T_a, T_max):
    return T_a + (T_max - T_a) * i_rel**2


def resistive_temperature_bisect(i_rel, T_a, T_max, alpha, hi=1e4):
    """Root of T - T_a - span i^2 (1 + alpha (T - T_a)) / (1 + alpha span) by bisection."""
    span = T_max - T_a

    def g(T):
        return T - T_a - span * i_rel**2 * (1 + alpha * (T - T_a)) / (1 + alpha * span)

    lo = T_a
    assert g(lo) <= 0 <= g(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def montsinger(T, T_r, dT):
    return 2.0 ** ((T - T_r) / dT)


def arrhenius(T, T_r, B):
    return math.exp(B * (1.0 / (T_r + KELVIN) - 1.0 / (T + KELVIN)))


def quad_effective_age(rate_of_time, a, t, breakpoints=()):
    pts = [p for p in breakpoints if t - a < p < t] or None
    val, _ = integrate.quad(rate_of_time, t - a, t, epsabs=0, epsrel=1e-11, limit=400, points=pts)
    return val


def logistic(t, c1, c2):
    return 1.0 / (1.0 + math.exp(-c1 * (t - c2)))


def weibull_hazard(a, beta, eta):
    return beta / eta * (a / eta) ** (beta - 1)


def population_failures(masses, beta, eta, count=1.0):
    return count * sum(m * weibull_hazard(a, beta, eta) for a, m in enumerate(masses))


def autocorrelation(x, max_lag):
    n = len(x)
    mean = sum(x) / n
    d = [v - mean for v in x]
    den = sum(v * v for v in d)
    return [sum(d[i] * d[i + k] for i in range(n - k)) / den for k in range(1, max_lag + 1)]
