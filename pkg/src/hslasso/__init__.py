"""Homotopy-shrinkage Lasso solver, baseline solvers, and an
operation-counting benchmark harness."""

from .baselines import (
    BaselineConfig,
    cd_solve,
    fista_solve,
    ista_solve,
    sl_solve,
    soft_threshold,
    theoretical_bound,
)
from .cli import BenchmarkGrid, run_bench
from .datagen import SyntheticSpec, beta_pattern, equicorrelated_design, generate, noise_scale_for_snr
from .diagnostics import (
    SupportConditionReport,
    estimation_error,
    jacobi_svd,
    pinv,
    prediction_error,
    support_conditions_check,
    support_set,
)
from .homotopy import (
    AGDState,
    HSConfig,
    agd_state,
    agd_step,
    find_t0,
    hs_solve,
    initial_beta,
    inner_solve,
    inner_tolerance,
    outer_iteration_count,
)
from .opcount import (
    CounterSnapshot,
    OpCounter,
    charge_axpy,
    charge_matvec,
    charge_scalar,
    snapshot,
)
from .problem import (
    LassoProblem,
    NumericalFailure,
    ReferenceSolution,
    epsilon_precision,
    lasso_objective,
    load_problem_binary,
    load_problem_json,
    reference_minimum,
    save_problem_binary,
    save_problem_json,
    subgradient_residual,
    surrogate_objective,
)
from .surrogate import (
    SmoothnessConstants,
    SurrogateSpec,
    condition_number_bound,
    smoothness_constants,
    surrogate_gap_bounds,
)
from .trace import SolverTrace, TraceRecord

__version__ = "0.1.0"
