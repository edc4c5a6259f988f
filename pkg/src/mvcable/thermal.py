"""Conductor temperature and thermal ageing acceleration for MV cables.

Two insulation families are supported: XLPE aged with an Arrhenius law and
PILC aged with Montsinger's doubling rule. All public temperatures are in
degrees Celsius; the Arrhenius law converts to kelvin internally.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

KELVIN_OFFSET = 273.15


class ModelError(ValueError):
    """Invalid model parameters (a violated domain invariant)."""

    code = "invalid-parameter"


class NonConvergence(ArithmeticError):
    """Fixed-point iteration did not settle within the iteration cap."""

    code = "non-convergence"


class Insulation(str, enum.Enum):
    XLPE = "XLPE"
    PILC = "PILC"


@dataclass(frozen=True)
class Arrhenius:
    B: float  # kelvin

    def __post_init__(self):
        if not self.B > 0:
            raise ModelError(f"Arrhenius slope B must be > 0, got {self.B}")

    def factor(self, T, T_r):
        Tk = np.asarray(T, dtype=float) + KELVIN_OFFSET
        return np.exp(self.B * (1.0 / (T_r + KELVIN_OFFSET) - 1.0 / Tk))


@dataclass(frozen=True)
class Montsinger:
    delta_T: float  # kelvin increment per doubling

    def __post_init__(self):
        if not self.delta_T > 0:
            raise ModelError(f"Montsinger increment delta_T must be > 0, got {self.delta_T}")

    def factor(self, T, T_r):
        return np.exp2((np.asarray(T, dtype=float) - T_r) / self.delta_T)


AgeingModel = Union[Arrhenius, Montsinger]


@dataclass(frozen=True)
class CableSpec:
    """Physical and statistical parameters of one cable type.

    ``I_r`` (rated current per conductor) is carried as metadata only; every
    computation uses the adjusted ampacity ``I_z``.
    """

    insulation: Insulation
    ageing_model: AgeingModel
    eta_r_mean: float
    beta: float
    T_r: float
    T_max: float
    T_a: float
    I_z: float
    alpha: float = 0.0
    I_r: float | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "insulation", Insulation(self.insulation))
        if not self.beta > 1:
            raise ModelError(f"Weibull shape beta must be > 1, got {self.beta}")
        if not self.eta_r_mean > 1:
            raise ModelError(f"mean lifetime eta_r must be > 1 year, got {self.eta_r_mean}")
        if not self.T_max > self.T_a:
            raise ModelError(f"T_max ({self.T_max}) must exceed T_a ({self.T_a})")
        if not self.I_z > 0:
            raise ModelError(f"ampacity I_z must be > 0, got {self.I_z}")
        if self.alpha < 0:
            raise ModelError(f"temperature coefficient alpha must be >= 0, got {self.alpha}")

    def with_(self, **changes) -> "CableSpec":
        return replace(self, **changes)


# Table 1 values; beta from the case-study text (3 for XLPE, 3.4 for PILC).
XLPE_TABLE1 = CableSpec(
    insulation=Insulation.XLPE,
    ageing_model=Arrhenius(B=16237.0),
    eta_r_mean=55.0,
    beta=3.0,
    T_r=90.0,
    T_max=90.0,
    T_a=20.0,
    I_z=313.0,
    alpha=4.03e-3,
    I_r=313.0,
    name="xlpe-table1",
)

PILC_TABLE1 = CableSpec(
    insulation=Insulation.PILC,
    ageing_model=Montsinger(delta_T=6.5),
    eta_r_mean=100.0,
    beta=3.4,
    T_r=15.0,
    T_max=65.0,
    T_a=20.0,
    I_z=250.0,
    alpha=3.9e-3,
    I_r=302.0,
    name="pilc-table1",
)

PRESETS = {"xlpe-table1": XLPE_TABLE1, "pilc-table1": PILC_TABLE1}


def conductor_temperature(i_rel, spec: CableSpec):
    """Steady conductor temperature for current ratio ``|I_c|/I_z``.

    Overload (``i_rel > 1``) is allowed and simply extrapolates the quadratic.
    """
    i_rel = np.asarray(i_rel, dtype=float)
    out = spec.T_a + (spec.T_max - spec.T_a) * i_rel**2
    return float(out) if out.ndim == 0 else out


def conductor_temperature_resistive(
    i_rel: float, spec: CableSpec, tol: float = 1e-9, max_iter: int = 10_000
) -> float:
    """Steady temperature with temperature-dependent conductor resistance.

    Solves ``T = T_a + (T_max - T_a) i^2 (1 + alpha (T - T_a)) / (1 + alpha (T_max - T_a))``
    by successive substitution seeded with the resistance-free estimate.
    The map is affine in ``T`` with slope ``k = (T_max-T_a) i^2 alpha / (1 + alpha (T_max-T_a))``;
    for ``k >= 1`` there is no physical steady state and NonConvergence is raised.
    """
    if i_rel < 0:
        raise ModelError("i_rel must be >= 0")
    if not tol > 0:
        raise ModelError("tol must be > 0")
    span = spec.T_max - spec.T_a
    denom = 1.0 + spec.alpha * span
    T = conductor_temperature(i_rel, spec)
    for _ in range(max_iter):
        T_next = spec.T_a + span * i_rel**2 * (1.0 + spec.alpha * (T - spec.T_a)) / denom
        if not math.isfinite(T_next):
            break
        if abs(T_next - T) < tol:
            return T_next
        T = T_next
    raise NonConvergence(
        f"resistive temperature did not converge for i_rel={i_rel}, alpha={spec.alpha} "
        f"after {max_iter} iterations"
    )


def acceleration_factor(T, spec: CableSpec):
    """Instantaneous ageing acceleration r(T); equals 1 at ``spec.T_r``."""
    out = spec.ageing_model.factor(T, spec.T_r)
    return float(out) if np.ndim(out) == 0 else out


def lifetime_at_constant_temperature(T, spec: CableSpec):
    """Weibull scale life at a constant conductor temperature."""
    from .reliability import characteristic_from_mean

    return characteristic_from_mean(spec.eta_r_mean, spec.beta) / acceleration_factor(T, spec)
