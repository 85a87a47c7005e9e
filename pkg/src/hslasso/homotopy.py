"""Two-loop homotopy solver for the Lasso objective.

Outer loop: shrink the smoothing level geometrically, t_k = t0*(1-h)^k.
Inner loop: minimize the smoothed objective F_t with accelerated gradient
descent using step constants derived from the curvature bounds, warm
started from the previous outer iterate.

The starting level t0 can be searched automatically: the search predicate
solves the ridge system with shift lambda*log(1+t)^2/(3 t^3) and accepts
t once the solution is bounded entrywise by t.  The initial iterate
solves the ridge system with the stationarity shift of the smoothed
objective on its quadratic branch, 2*lambda*log(1+t0)^2/(3 t0^3); both
shift conventions are recorded in the trace metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .opcount import (
    OpCounter,
    charge_matvec,
    charge_scalar,
    charge_setup,
    charge_vec_add,
    charge_vec_scale,
)
from .problem import LassoProblem, NumericalFailure, ReferenceSolution, lasso_objective
from .surrogate import SmoothnessConstants, SurrogateSpec, smoothness_constants
from .trace import SolverTrace

INNER_STOP_MODES = ("fixed", "theoretical", "gradient")
OUTER_STOP_MODES = ("oracle", "theoretical-count", "t-floor")

T0_PREDICATE_SHIFT = "lambda*log1p(t)^2/(3*t^3)"
INIT_SHIFT = "2*lambda*log1p(t0)^2/(3*t0^3)"


@dataclass
class HSConfig:
    """Tunables of the homotopy solver.

    ``t0=None`` resolves the starting level with :func:`find_t0`;
    ``B=None`` defaults to 10x the largest entry magnitude of the initial
    iterate (floor 1.0).
    """

    t0: float | None = None
    h: float = 0.1
    epsilon: float = 1e-3
    B: float | None = None
    tau: float = 1e-4
    inner_stop: str = "fixed"
    inner_fixed_count: int = 50
    inner_grad_tol: float = 1e-8
    outer_stop: str = "oracle"
    outer_ref: ReferenceSolution | None = None
    max_outer: int = 1000
    max_inner: int = 100000

    def validate(self) -> None:
        if not 0.0 < self.h < 1.0:
            raise ValueError("h must lie strictly in (0, 1)")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.t0 is not None and not self.tau < self.t0:
            raise ValueError("tau must be smaller than t0")
        if self.B is not None and not self.B > 0:
            raise ValueError("B must be positive")
        if self.inner_stop not in INNER_STOP_MODES:
            raise ValueError(f"inner_stop must be one of {INNER_STOP_MODES}")
        if self.outer_stop not in OUTER_STOP_MODES:
            raise ValueError(f"outer_stop must be one of {OUTER_STOP_MODES}")
        if self.inner_fixed_count < 1:
            raise ValueError("inner_fixed_count must be >= 1")
        if not self.inner_grad_tol > 0:
            raise ValueError("inner_grad_tol must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration caps must be >= 1")

    @classmethod
    def from_dict(cls, doc: dict) -> "HSConfig":
        cfg = cls()
        for key, value in doc.items():
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config key {key!r}")
            if key == "t0" and value == "auto":
                value = None
            setattr(cfg, key, value)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "HSConfig":
        import json

        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class AGDState:
    """Iterate pair plus the constant step coefficients of one inner loop."""

    beta: np.ndarray
    beta_bar: np.ndarray
    alpha: float
    q: float
    gamma: float
    constants: SmoothnessConstants


def agd_coefficients(constants: SmoothnessConstants) -> tuple[float, float, float]:
    """Momentum/step constants from the curvature pair.

    Degenerate L == mu gives (alpha, q, gamma) = (1, 0, inf), reducing the
    update to an exact gradient step of size 1/mu.
    """
    L, mu = constants.L, constants.mu
    if not mu > 0:
        raise ValueError("strong convexity modulus must be positive")
    if L <= mu:
        return 1.0, 0.0, math.inf
    alpha = math.sqrt(mu / L)
    ratio = mu / L
    q = (alpha - ratio) / (1.0 - ratio)
    gamma = alpha / (mu * (1.0 - alpha))
    return alpha, q, gamma


def agd_state(beta: np.ndarray, constants: SmoothnessConstants) -> AGDState:
    alpha, q, gamma = agd_coefficients(constants)
    beta = np.asarray(beta, dtype=float)
    return AGDState(beta=beta.copy(), beta_bar=beta.copy(),
                    alpha=alpha, q=q, gamma=gamma, constants=constants)


def agd_step(state: AGDState, grad, counter: OpCounter | None = None) -> AGDState:
    """One accelerated step; the proximal subproblem is solved in closed form.

    With the Euclidean prox V(x, z) = ||z - x||^2 / 2 the inner argmin is
    beta+ = (beta + gamma*mu*mid - gamma*g) / (1 + gamma*mu) where mid is
    the extrapolated point and g its gradient.
    """
    p = state.beta.size
    mu = state.constants.mu
    mid = (1.0 - state.q) * state.beta_bar + state.q * state.beta
    charge_vec_scale(counter, p)
    charge_vec_scale(counter, p)
    charge_vec_add(counter, p)
    g = grad(mid)
    if math.isinf(state.gamma):
        beta_new = mid - g / mu
        charge_vec_scale(counter, p)
        charge_vec_add(counter, p)
    else:
        gm = state.gamma * mu
        beta_new = (state.beta + gm * mid - state.gamma * g) / (1.0 + gm)
        charge_vec_scale(counter, p)
        charge_vec_scale(counter, p)
        charge_vec_add(counter, p)
        charge_vec_add(counter, p)
        charge_vec_scale(counter, p)
    beta_bar_new = (1.0 - state.alpha) * state.beta_bar + state.alpha * beta_new
    charge_vec_scale(counter, p)
    charge_vec_scale(counter, p)
    charge_vec_add(counter, p)
    return replace(state, beta=beta_new, beta_bar=beta_bar_new)


def surrogate_grad(problem: LassoProblem, spec: SurrogateSpec, beta: np.ndarray,
                   counter: OpCounter | None = None) -> np.ndarray:
    """Gradient of the smoothed objective, charged at matvec + O(p)."""
    p = problem.p
    g = problem.gram @ beta - problem.xty
    charge_matvec(counter, p, p)
    charge_vec_add(counter, p)
    g = g + problem.lam * spec.grad(beta)
    if counter is not None:
        # penalty derivative: 1 branch comparison, ~3 mults, 1 add per entry
        counter.comparisons += p
        counter.mults += 3 * p
        counter.adds += p
    charge_vec_scale(counter, p)
    charge_vec_add(counter, p)
    return g


def surrogate_value(problem: LassoProblem, spec: SurrogateSpec, beta: np.ndarray) -> float:
    r = problem.y - problem.X @ beta
    return float(r @ r / (2.0 * problem.n) + problem.lam * np.sum(spec.value(beta)))


def find_t0(problem: LassoProblem, counter: OpCounter | None = None) -> float:
    """Smallest bracketed level satisfying the boundedness predicate.

    Doubles upward from t = 1 until the predicate holds (at most 60
    doublings), then runs 40 bisection steps toward the smallest
    satisfying point.  The returned value always satisfies the predicate.
    """
    p = problem.p
    probes = 0

    def predicate(t: float) -> bool:
        nonlocal probes
        probes += 1
        shift = problem.lam * math.log1p(t) ** 2 / (3.0 * t**3)
        sol = problem.ridge_solve(shift)
        return float(np.max(np.abs(sol))) <= t

    t = 1.0
    if predicate(t):
        lo, hi = 0.0, t
    else:
        satisfied = False
        for _ in range(60):
            t *= 2.0
            if predicate(t):
                satisfied = True
                break
        if not satisfied:
            raise NumericalFailure("no starting level found after 60 doublings")
        lo, hi = t / 2.0, t
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    charge_setup(counter, probes * (2 * p * (2 * p - 1) + 2 * p))
    return hi


def initial_beta(problem: LassoProblem, t0: float,
                 counter: OpCounter | None = None) -> np.ndarray:
    """Exact minimizer of the smoothed objective restricted to its quadratic
    branch: solves (X'X/n + 2*lambda*log(1+t0)^2/(3 t0^3) I) b = X'y/n."""
    if not t0 > 0:
        raise ValueError("t0 must be positive")
    shift = 2.0 * problem.lam * math.log1p(t0) ** 2 / (3.0 * t0**3)
    beta = problem.ridge_solve(shift)
    p = problem.p
    charge_scalar(counter, "transcendental")
    charge_scalar(counter, "mult")
    charge_scalar(counter, "mult")
    charge_matvec(counter, p, p)
    charge_vec_add(counter, p)
    charge_vec_scale(counter, p)
    charge_matvec(counter, p, p)
    return beta


def inner_tolerance(lam: float, p: int, B: float, t_k: float) -> float:
    """Early-stopping tolerance of the inner loop at level t_k."""
    if not (lam > 0 and p > 0 and B > 0 and t_k > 0):
        raise ValueError("inner_tolerance arguments must be positive")
    return lam * p * math.log1p(t_k) ** 2 / (3.0 * B)


def outer_iteration_count(lam: float, p: int, t0: float, B: float,
                          h: float, epsilon: float) -> int:
    """Shrink steps sufficient for epsilon precision: smallest k with
    lam*p*(2B+1)*t0*(1-h)^k <= epsilon, clamped below at 0."""
    if not (lam > 0 and p > 0 and t0 > 0 and B > 0 and epsilon > 0):
        raise ValueError("arguments must be positive")
    if not 0.0 < h < 1.0:
        raise ValueError("h must lie in (0, 1)")
    raw = -math.log(lam * p * t0 * (2.0 * B + 1.0) / epsilon) / math.log(1.0 - h)
    return max(0, math.ceil(raw))


def default_iterate_bound(beta0: np.ndarray) -> float:
    m = float(np.max(np.abs(beta0))) if beta0.size else 0.0
    return 10.0 * m if m > 0 else 1.0


def _charge_level_constants(counter: OpCounter | None) -> None:
    # per-outer scalar work: log1p, branch coefficients, step constants
    if counter is None:
        return
    counter.transcendentals += 2  # log1p and the sqrt in alpha
    counter.mults += 10
    counter.adds += 4


@dataclass
class _InnerResult:
    beta: np.ndarray
    steps: int
    cap_hit: bool
    max_abs: float


def _auxiliary_surrogate_minimum(problem, spec, constants, beta_init, gap_target):
    """High-accuracy minimum of F_t, used only as a stopping oracle.

    Never charges a counter: this is measurement machinery, not solver
    work.  Stops once the gradient norm certifies a gap below gap_target.
    """
    gtol = math.sqrt(2.0 * constants.mu * max(gap_target, 1e-18)) * 1e-2
    state = agd_state(beta_init, constants)
    best = surrogate_value(problem, spec, state.beta_bar)
    for _ in range(500_000):
        g = surrogate_grad(problem, spec, state.beta_bar)
        if float(np.linalg.norm(g)) <= gtol:
            break
        state = agd_step(state, lambda v: surrogate_grad(problem, spec, v))
        best = min(best, surrogate_value(problem, spec, state.beta_bar))
    return min(best, surrogate_value(problem, spec, state.beta_bar))


def _inner_solve_full(problem: LassoProblem, t_k: float, beta_init: np.ndarray,
                      config: HSConfig, counter: OpCounter | None,
                      B: float | None = None) -> _InnerResult:
    if B is None:
        B = config.B if config.B is not None else default_iterate_bound(beta_init)
    if t_k < config.tau * (1.0 - 1e-12):
        raise ValueError("inner solve called below the level floor tau")
    spec = SurrogateSpec(t_k)
    constants = smoothness_constants(problem, spec, B)
    _charge_level_constants(counter)
    state = agd_state(beta_init, constants)
    grad_fn = lambda v: surrogate_grad(problem, spec, v, counter)
    max_abs = float(np.max(np.abs(state.beta)))
    steps = 0
    cap_hit = False

    if config.inner_stop == "fixed":
        target = config.inner_fixed_count
        budget = min(target, config.max_inner)
        for _ in range(budget):
            state = agd_step(state, grad_fn, counter)
            steps += 1
            max_abs = max(max_abs, float(np.max(np.abs(state.beta))),
                          float(np.max(np.abs(state.beta_bar))))
        cap_hit = budget < target
    elif config.inner_stop == "gradient":
        p = problem.p
        while True:
            g = surrogate_grad(problem, spec, state.beta_bar, counter)
            if counter is not None:  # norm: p mults, p-1 adds, sqrt, compare
                counter.mults += p
                counter.adds += p - 1
                counter.transcendentals += 1
                counter.comparisons += 1
            if float(np.linalg.norm(g)) <= config.inner_grad_tol:
                break
            if steps >= config.max_inner:
                cap_hit = True
                break
            state = agd_step(state, grad_fn, counter)
            steps += 1
            max_abs = max(max_abs, float(np.max(np.abs(state.beta))),
                          float(np.max(np.abs(state.beta_bar))))
    else:  # theoretical
        eps_k = inner_tolerance(problem.lam, problem.p, B, t_k)
        fmin_k = _auxiliary_surrogate_minimum(problem, spec, constants, beta_init,
                                              gap_target=eps_k * 1e-3)
        while True:
            if surrogate_value(problem, spec, state.beta_bar) - fmin_k <= eps_k:
                break
            if steps >= config.max_inner:
                cap_hit = True
                break
            state = agd_step(state, grad_fn, counter)
            steps += 1
            max_abs = max(max_abs, float(np.max(np.abs(state.beta))),
                          float(np.max(np.abs(state.beta_bar))))

    return _InnerResult(beta=state.beta_bar, steps=steps, cap_hit=cap_hit, max_abs=max_abs)


def inner_solve(problem: LassoProblem, t_k: float, beta_init: np.ndarray,
                config: HSConfig, counter: OpCounter | None = None):
    """Minimize the level-t_k smoothed objective from beta_init.

    Returns (final averaged iterate, steps taken).
    """
    res = _inner_solve_full(problem, t_k, np.asarray(beta_init, dtype=float), config, counter)
    return res.beta, res.steps


def hs_solve(problem: LassoProblem, config: HSConfig,
             counter: OpCounter | None = None) -> SolverTrace:
    """Run the full two-loop solver and return its trace.

    The level floor tau is hard in every outer stopping mode; oracle mode
    additionally stops as soon as the objective gap against the reference
    drops to config.epsilon.
    """
    config.validate()
    if config.outer_stop == "oracle" and config.outer_ref is None:
        raise ValueError("oracle outer stop requires config.outer_ref")
    if counter is None:
        counter = OpCounter()

    t0 = config.t0 if config.t0 is not None else find_t0(problem, counter)
    if not config.tau < t0:
        raise ValueError("tau must be smaller than the resolved t0")
    beta = initial_beta(problem, t0, counter)
    B = config.B if config.B is not None else default_iterate_bound(beta)
    max_abs = float(np.max(np.abs(beta)))
    violated = bool(np.any(np.abs(beta) > B))

    planned = None
    if config.outer_stop == "theoretical-count":
        planned = outer_iteration_count(problem.lam, problem.p, t0, B,
                                        config.h, config.epsilon)

    trace = SolverTrace()
    trace.metadata = {
        "method": "hs",
        "t0": t0,
        "h": config.h,
        "B": B,
        "tau": config.tau,
        "epsilon": config.epsilon,
        "inner_stop": config.inner_stop,
        "inner_fixed_count": config.inner_fixed_count,
        "inner_grad_tol": config.inner_grad_tol,
        "outer_stop": config.outer_stop,
        "planned_outer": planned,
        "init_shift": INIT_SHIFT,
        "t0_predicate_shift": T0_PREDICATE_SHIFT,
    }
    spec0 = SurrogateSpec(t0)
    trace.append(0, t0, 0, lasso_objective(problem, beta),
                 surrogate_value(problem, spec0, beta), counter.total())

    ref = config.outer_ref
    t_cur = t0
    k_done = 0
    inner_caps = 0
    converged = False
    while True:
        if config.outer_stop == "oracle":
            if lasso_objective(problem, beta) - ref.f_min <= config.epsilon:
                converged = True
                break
        elif config.outer_stop == "theoretical-count":
            if k_done >= planned:
                converged = True
                break
        if t_cur * (1.0 - config.h) < config.tau:
            converged = config.outer_stop == "t-floor"
            break
        if k_done >= config.max_outer:
            converged = False
            break
        t_cur *= 1.0 - config.h
        charge_scalar(counter, "mult")
        k_done += 1
        res = _inner_solve_full(problem, t_cur, beta, config, counter, B=B)
        beta = res.beta
        inner_caps += int(res.cap_hit)
        max_abs = max(max_abs, res.max_abs)
        violated = violated or res.max_abs > B
        spec_k = SurrogateSpec(t_cur)
        trace.append(k_done, t_cur, res.steps, lasso_objective(problem, beta),
                     surrogate_value(problem, spec_k, beta), counter.total())

    trace.final_beta = beta
    trace.converged = converged and inner_caps == 0
    trace.metadata.update({
        "outer_iterations": k_done,
        "inner_cap_hits": inner_caps,
        "violated_bound": violated,
        "max_abs_iterate": max_abs,
    })
    return trace
