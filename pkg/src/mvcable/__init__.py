"""Thermal ageing, Weibull reliability and maintenance assessment for MV cable fleets."""

from .thermal import (
    PILC_TABLE1,
    PRESETS,
    XLPE_TABLE1,
    Arrhenius,
    CableSpec,
    Insulation,
    ModelError,
    Montsinger,
    NonConvergence,
    acceleration_factor,
    conductor_temperature,
    conductor_temperature_resistive,
    lifetime_at_constant_temperature,
)
from .reliability import (
    CoverageError,
    TemperatureTrajectory,
    WeibullParams,
    characteristic_from_mean,
    cumulative_hazard,
    effective_age,
    failure_rate_constant,
    failure_rate_trajectory,
    hazard_rate,
)
from .loading import (
    SeasonSchedule,
    TemperatureDistribution,
    TransitionScenario,
    acceleration_in_time,
    ageing_share_above,
    effective_acceleration,
    effective_age_seasonal,
    effective_age_transition,
    effective_age_transition_compact,
    transition_limits,
)
from .maintenance import (
    AgePopulation,
    Preventive,
    ReplaceAll,
    RunToFailure,
    SkewNormal,
    annual_replacements,
    assess_strategies,
    beta_sensitivity_sweep,
    expected_failures,
    replacement_age_from_rate,
    shortcut_preventive,
    shortcut_replace_all,
    shortcut_run_to_failure,
)
from .fleet import (
    CableAsset,
    CurrentProfile,
    SimulationConfig,
    SimulationTrace,
    StationaryCurrent,
    evolve_age_distribution,
    fleet_expected_failures,
    preventive_assignment,
    run_to_failure_migration,
    simulate_replace_all,
)

__version__ = "0.1.0"
