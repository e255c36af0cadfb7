"""Word sense disambiguation as a quadratic 0-1 semi-assignment problem."""
from .instance import (
    Assignment,
    Instance,
    InstanceFormatError,
    SenseCandidate,
    TargetWord,
    enumerate_assignments,
    load_corpus,
    load_instance,
    validate_assignment,
)
from .kernels import BACKEND
from .model import QipModel, SolverConfig, Variant, apply_theta_pruning, build_model, objective
from .network import demonstrate_order_dependence, path_length
from .pipeline import EvalReport, compare_runs, run_pipeline
from .similarity import RelatednessParams, SimTables, build_sim_tables, cosine, relatedness
from .solvers import (
    SolveResult,
    SolverError,
    solve_branch_and_bound,
    solve_brute_force,
    solve_chain_dp,
    solve_local_search,
    solve_qip_r,
)

__version__ = "0.1.0"
