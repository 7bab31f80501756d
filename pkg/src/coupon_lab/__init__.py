"""Sticker-album collecting as an absorbing Markov chain.

Exact distributions, tail bounds, seeded Monte Carlo, and a cost-aware
CLI answering how many single stickers complete an n-sticker album at a
given confidence.
"""

__version__ = "0.1.0"

from .album_model import (
    AlbumSpec,
    CollectorState,
    TransitionMatrix,
    build_transition_matrix,
    transition_probability,
)
from .errors import (
    CostOverflowError,
    CouponLabError,
    HorizonTooSmallError,
    InvalidInstanceError,
    InvalidProbabilityError,
    InvalidStateError,
    InvalidTrialError,
    OracleRangeError,
)
from .exact_engine import (
    CompletionLaw,
    GeometricLaw,
    StateDistribution,
    completion_law,
    completion_quantile,
    evolve_distribution,
    exact_tail,
    expected_completion,
    expected_draws_for_next,
    geometric_mean,
    geometric_pmf,
    inclusion_exclusion_tail,
)
from .monte_carlo import (
    SimulationConfig,
    SimulationReport,
    TransitionFrequencyTable,
    empirical_transition_check,
    run_simulation,
)
from .report_cli import CostReport, cost_of, format_brl, run_cli
from .tail_bounds import (
    BoundQuery,
    BoundResult,
    ConvergencePoint,
    invert_confidence,
    monotone_convergence_check,
    tail_bound,
    threshold,
)

__all__ = [
    "AlbumSpec",
    "BoundQuery",
    "BoundResult",
    "CollectorState",
    "CompletionLaw",
    "ConvergencePoint",
    "CostOverflowError",
    "CostReport",
    "CouponLabError",
    "GeometricLaw",
    "HorizonTooSmallError",
    "InvalidInstanceError",
    "InvalidProbabilityError",
    "InvalidStateError",
    "InvalidTrialError",
    "OracleRangeError",
    "SimulationConfig",
    "SimulationReport",
    "StateDistribution",
    "TransitionFrequencyTable",
    "TransitionMatrix",
    "build_transition_matrix",
    "completion_law",
    "completion_quantile",
    "cost_of",
    "empirical_transition_check",
    "evolve_distribution",
    "exact_tail",
    "expected_completion",
    "expected_draws_for_next",
    "format_brl",
    "geometric_mean",
    "geometric_pmf",
    "inclusion_exclusion_tail",
    "invert_confidence",
    "monotone_convergence_check",
    "run_cli",
    "run_simulation",
    "tail_bound",
    "threshold",
    "transition_probability",
]
