"""Constrained ergodic optimization for locally constant data on subshifts of finite type."""
from ._backend import COMPILED
from .beta_alpha import (
    InfeasibleError,
    MaxItersError,
    NotInteriorError,
    RotationSet,
    alpha,
    alpha_gradient,
    beta,
    beta_dual,
    fenchel_check,
    is_cohomologous_to_constant,
    rotation_interval,
    rotation_set,
)
from .cycles import CapExceeded, Cycle, cycle_measure, enumerate_simple_cycles, max_mean_cycle, min_mean_cycle
from .edge_measure import StationaryEdgeMeasure
from .lp import LpSolution, decompose_into_cycles, markov_extension, solve_beta_primal
from .periodic import (
    DegenerateRotationSet,
    PeriodicResult,
    PeriodicStatus,
    alpha_periodic_approx,
    best_periodic_with_rotation,
    periodic_beta_gap,
)
from .sft import (
    LocallyConstantFn,
    NoCycleError,
    NotTransitiveError,
    Problem,
    SftSpec,
    SpecError,
    WeightedDigraph,
    add_coboundary,
    build_graph,
    load_problem,
    read_problem,
    validate_spec,
)
from .subaction import (
    CalibratedSubaction,
    Trajectory,
    calibrated_subaction,
    contact_locus,
    optimal_trajectory,
    recurrence_defect,
    verify_alpha_differential,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
