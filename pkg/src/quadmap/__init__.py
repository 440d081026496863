"""Closed-form Schrodinger evolution in quadratic potentials by mapping free solutions."""

from .genquad import (
    GeneralQuadraticMap,
    ProfileCurve,
    builtin_profiles,
    map_free_to_general,
    potential_V,
    quadratic_coefficient_VQ,
    repulsive_crossover,
    time_map_T,
)
from .maps import (
    BranchError,
    TrapParams,
    extend_half_period,
    map_falling_to_free,
    map_free_to_falling,
    map_free_to_inverted,
    map_free_to_trapped,
    map_inverted_to_free,
    map_trap_to_trap,
    map_trapped_to_free,
)
from .potentials import Free, General, Gravity, Harmonic, Inverted
from .qcore import NATURAL, EvaluationError, Grid, PhysicalParams, l2_distance, l2_norm, sample_on_grid
from .states import FreeGaussian, GaussianPacket, HOEigenstate, Superposition, gaussian_value, superpose
from .timeline import Scenario, Segment, Timeline, build_timeline, energy_jump, wave_at
from .verify import (
    OracleConfig,
    ResidualReport,
    WindowLeakageError,
    ehrenfest_check,
    observables,
    oracle_propagate,
    schrodinger_residual,
)

__version__ = "0.1.0"

__all__ = [
    "BranchError",
    "build_timeline",
    "builtin_profiles",
    "ehrenfest_check",
    "energy_jump",
    "EvaluationError",
    "extend_half_period",
    "Free",
    "FreeGaussian",
    "gaussian_value",
    "GaussianPacket",
    "General",
    "GeneralQuadraticMap",
    "Gravity",
    "Grid",
    "Harmonic",
    "HOEigenstate",
    "Inverted",
    "l2_distance",
    "l2_norm",
    "map_falling_to_free",
    "map_free_to_falling",
    "map_free_to_general",
    "map_free_to_inverted",
    "map_free_to_trapped",
    "map_inverted_to_free",
    "map_trap_to_trap",
    "map_trapped_to_free",
    "NATURAL",
    "observables",
    "oracle_propagate",
    "OracleConfig",
    "PhysicalParams",
    "potential_V",
    "ProfileCurve",
    "quadratic_coefficient_VQ",
    "repulsive_crossover",
    "ResidualReport",
    "sample_on_grid",
    "Scenario",
    "schrodinger_residual",
    "Segment",
    "superpose",
    "Superposition",
    "time_map_T",
    "Timeline",
    "TrapParams",
    "wave_at",
    "WindowLeakageError",
]
