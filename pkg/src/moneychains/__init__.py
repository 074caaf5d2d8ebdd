"""Conservative coin-exchange chains on connected graphs.

Three Markov chains (reshuffle, exchange, saving) move a fixed supply of
coins along the edges of a connected graph. The package simulates them at
scale, evaluates their exact stationary single-vertex laws in closed
form, and audits the structural claims behind those laws by exhaustive
enumeration on small systems.
"""

from .dynamics import (
    EdgeKernel,
    ModelKind,
    MoneyConfig,
    RngStream,
    apply_step,
    derive_seed,
    edge_kernel,
    self_transition_probability,
)
from .engine import (
    AllAtVertexInit,
    CustomInit,
    EqualInit,
    Histogram,
    SimParams,
    SimReport,
    chi_square_stat,
    run_simulation,
    tv_distance,
    write_histogram_csv,
)
from .exact import (
    ExactMarginal,
    asymptotic_density,
    binomial,
    exact_marginal,
    lambda_mass,
    s_identity,
    stationary_weight,
)
from .graph import (
    GRAPH_FAMILIES,
    Graph,
    GraphError,
    build,
    from_edge_list,
    is_connected,
    sample_edge,
)
from .oracle import (
    CheckResult,
    ConfigSpace,
    StateSpaceTooLarge,
    TransitionMatrix,
    VerificationReport,
    check_detailed_balance,
    check_doubly_stochastic,
    check_irreducible_aperiodic,
    enumerate_configs,
    marginal_from_stationary,
    run_verification,
    stationary_solve,
    transition_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AllAtVertexInit",
    "CheckResult",
    "ConfigSpace",
    "CustomInit",
    "EdgeKernel",
    "EqualInit",
    "ExactMarginal",
    "GRAPH_FAMILIES",
    "Graph",
    "GraphError",
    "Histogram",
    "ModelKind",
    "MoneyConfig",
    "RngStream",
    "SimParams",
    "SimReport",
    "StateSpaceTooLarge",
    "TransitionMatrix",
    "VerificationReport",
    "apply_step",
    "asymptotic_density",
    "binomial",
    "build",
    "check_detailed_balance",
    "check_doubly_stochastic",
    "check_irreducible_aperiodic",
    "chi_square_stat",
    "derive_seed",
    "edge_kernel",
    "enumerate_configs",
    "exact_marginal",
    "from_edge_list",
    "is_connected",
    "lambda_mass",
    "marginal_from_stationary",
    "run_simulation",
    "run_verification",
    "s_identity",
    "sample_edge",
    "self_transition_probability",
    "stationary_solve",
    "stationary_weight",
    "transition_matrix",
    "tv_distance",
    "write_histogram_csv",
    "__version__",
]
