"""Exact solvers and instance generators for Bayesian principal-agent contracts."""

from .agent import (
    ActionProfile,
    SolveResult,
    best_response,
    evaluate_many,
    ic_slacks,
    induced_profile,
    make_result,
    overall_utility,
)
from .estimators import GridLinearContract, LinearContractOptimizer, OptimalContract
from .exact import (
    Hyperplane,
    brute_force_grid,
    enumerate_candidate_vertices,
    hyperplanes,
    min_payment_lp,
    min_payment_program,
    solve_by_outcome_enumeration,
    solve_by_type_enumeration,
)
from .exceptions import ContractError, EnumerationCapExceeded, InvalidInstanceError
from .generators import (
    Graph,
    LabelCoverInstance,
    Labeling,
    completeness_contract_independent_set,
    completeness_contract_label_cover,
    gen_bi_approx_gap,
    gen_from_graph,
    gen_from_label_cover,
    gen_linear_gap,
    gen_random,
)
from .io import load_instance, save_instance
from .linear import (
    LinearContract,
    LinearSweepResult,
    best_grid_contract,
    breakpoints,
    grid_contracts,
    indifference_alpha,
    optimize_linear,
    to_contract,
)
from .lp import LinearProgram, LPSolution, solve_lp
from .model import (
    Contract,
    Instance,
    ValidationReport,
    agent_utility,
    expected_payment,
    expected_reward,
    principal_utility_for_action,
    validate_instance,
    welfare_bound,
)

__version__ = "0.1.0"
