"""Stationary kinetics of an N-level atom in a non-equilibrium radiation field."""
from .closedform import (
    Regime,
    ThreeLevelParams,
    double_einstein_quotient,
    einstein_relation_2level,
    inversion_condition,
    normalized_stationary_3level,
    regime_classifier,
    stationary_3level,
)
from .errors import (
    ConfigError,
    DegenerateBohrFrequency,
    DisconnectedSystem,
    MissingFieldEntry,
    NonequibathError,
    NonPositiveBeta,
    NonPositiveOccupation,
    ReducibleGenerator,
    StepTooLarge,
    ZeroOccupation,
)
from .field import (
    FieldSpec,
    einstein_quotient,
    local_beta,
    occupation,
    susceptivity_minus,
    susceptivity_plus,
)
from .flux import energy_rate, line_fluxes, stationary_flux_3level_closed, total_photon_rate
from .kinetics import (
    Generator,
    build_generator,
    detailed_balance_residuals,
    evolve,
    stationary_state,
    system_energy_rate,
)
from .levels import BohrLine, LevelSystem, bohr_lines, validate_generic

__version__ = "0.1.0"
