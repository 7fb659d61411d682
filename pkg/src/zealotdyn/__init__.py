"""Voter model with zealots on complete graphs: exact analysis and simulation."""
from .equilibrium import equilibrium_expectation, nullspace_oracle, stationary_distribution
from .mixing import MixingNotReached, MixingResult, mixing_time, total_variation
from .model import (
    Distribution,
    InvalidParams,
    ModelParams,
    RateMatrix,
    StateSpace,
    new_model,
    rate_matrix,
    transition_rates,
)
from .montecarlo import (
    EnsembleStats,
    Trajectory,
    confidence_interval,
    run_ensemble,
    simulate_agents,
    simulate_aggregate,
)
from .planner import (
    PlanOutcome,
    PlanRequest,
    conversion_feasible,
    equilibrium_opinion,
    max_alpha_for_conversion,
    optimal_injection,
    round_zealots,
)
from .transient import (
    dense_expm_oracle,
    expected_opinion1,
    mean_closed_form,
    transient_distribution,
)

__version__ = "0.1.0"
