import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import central_diff, identity_closed_form, identity_problem, make_problem
from hslasso.baselines import (
    BaselineConfig,
    cd_solve,
    fista_solve,
    ista_solve,
    sl_penalty_grad,
    sl_solve,
    soft_threshold,
    theoretical_bound,
)
from hslasso.opcount import OpCounter
from hslasso.problem import (
    LassoProblem,
    lasso_objective,
    reference_minimum,
    subgradient_residual,
)


def test_soft_threshold_values():
    assert soft_threshold(3.0, 1.0) == 2.0
    assert soft_threshold(-0.5, 1.0) == 0.0
    assert soft_threshold(-3.0, 1.0) == -2.0
    assert soft_threshold(0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        soft_threshold(1.0, -0.1)


@given(st.floats(-5.0, 5.0), st.floats(0.0, 3.0))
@settings(max_examples=200, deadline=None)
def test_soft_threshold_is_prox(x, alpha):
    z = soft_threshold(x, alpha)
    grid = np.linspace(x - 2 * alpha - 1, x + 2 * alpha + 1, 4001)
    vals = 0.5 * (grid - x) ** 2 + alpha * np.abs(grid)
    best = grid[np.argmin(vals)]
    res = grid[1] - grid[0]
    assert abs(z - best) <= res + 1e-12


def _cfg(method, pr, ref, eps=1e-8, beta0=None, iters=20000, alpha=None):
    b0 = np.ones(pr.p) if beta0 is None else beta0
    return BaselineConfig(method=method, beta0=b0, epsilon=eps, max_iters=iters,
                          ref=ref, sl_alpha=alpha)


def test_validation():
    pr = make_problem(0)
    ref = reference_minimum(pr, 1e-10)
    with pytest.raises(ValueError):
        _cfg("nope", pr, ref).validate()
    with pytest.raises(ValueError):
        _cfg("sl", pr, ref).validate()  # missing alpha
    with pytest.raises(ValueError):
        _cfg("ista", pr, ref, alpha=3.0).validate()  # stray alpha


def test_ista_stops_immediately_at_reference():
    pr = make_problem(1)
    ref = reference_minimum(pr, 1e-10)
    tr = ista_solve(pr, _cfg("ista", pr, ref, beta0=ref.beta_hat.copy()))
    assert tr.converged
    assert len(tr.records) == 1  # only the initial row


def test_ista_identity_one_step_reaches_closed_form():
    rng = np.random.default_rng(5)
    y = rng.standard_normal(5) * 2
    lam = 0.1
    pr = identity_problem(y, lam)
    ref = reference_minimum(pr, 1e-10)
    tr = ista_solve(pr, _cfg("ista", pr, ref, eps=1e-12, beta0=np.zeros(5), iters=3))
    expected = identity_closed_form(y, 5, lam)
    assert np.max(np.abs(tr.final_beta - expected)) < 1e-10


def test_fista_momentum_recurrence():
    t1 = 1.0
    t2 = (1 + math.sqrt(5.0)) / 2.0
    t3 = (1 + math.sqrt(1 + 4 * t2**2)) / 2.0
    assert t2 == pytest.approx(1.618033988749895, rel=1e-14)
    assert t3 == pytest.approx((1 + math.sqrt(1 + 4 * t2 * t2)) / 2)
    # first iteration equals an ISTA step (zero momentum weight)
    pr = make_problem(2)
    ref = reference_minimum(pr, 1e-10)
    a = ista_solve(pr, _cfg("ista", pr, ref, eps=1e-30, iters=1))
    b = fista_solve(pr, _cfg("fista", pr, ref, eps=1e-30, iters=1))
    assert np.array_equal(a.final_beta, b.final_beta)


def test_cd_one_sweep_on_orthonormal_columns():
    # X'X = n I: a single sweep lands on the closed-form minimizer
    n = 8
    q, _ = np.linalg.qr(np.random.default_rng(3).standard_normal((n, 4)))
    X = q * math.sqrt(n)
    y = np.random.default_rng(4).standard_normal(n)
    pr = LassoProblem(y=y, X=X, lam=0.05)
    ref = reference_minimum(pr, 1e-10)
    tr = cd_solve(pr, _cfg("cd", pr, ref, eps=1e-30, beta0=np.zeros(4), iters=1))
    expected = soft_threshold(X.T @ y, n * pr.lam) / n
    assert np.max(np.abs(tr.final_beta - expected)) < 1e-10
    assert lasso_objective(pr, tr.final_beta) - ref.f_min < 1e-10


def test_cd_fixed_point_is_subgradient_optimal():
    pr = make_problem(6, n=25, p=8, lam=0.05)
    ref = reference_minimum(pr, 1e-10)
    tr = cd_solve(pr, _cfg("cd", pr, ref, eps=1e-30, iters=400))
    assert subgradient_residual(pr, tr.final_beta) < 1e-8


def test_cd_rejects_zero_diagonal():
    from hslasso.problem import ReferenceSolution

    X = np.zeros((4, 2))
    X[:, 0] = 1.0
    pr = LassoProblem(y=np.ones(4), X=X, lam=0.1)
    fake = ReferenceSolution(beta_hat=np.zeros(2), f_min=0.0, gap_tolerance=1e-10)
    with pytest.raises(ValueError):
        cd_solve(pr, _cfg("cd", pr, fake))


def test_cd_deterministic():
    pr = make_problem(7, p=5)
    ref = reference_minimum(pr, 1e-10)
    t1 = cd_solve(pr, _cfg("cd", pr, ref, iters=50))
    t2 = cd_solve(pr, _cfg("cd", pr, ref, iters=50))
    assert np.array_equal(t1.final_beta, t2.final_beta)
    assert t1.f_values().tolist() == t2.f_values().tolist()


def test_sl_penalty_grad_matches_finite_differences():
    alpha = 100.0
    lam = 0.01
    rng = np.random.default_rng(8)
    ws = rng.uniform(0.1, 3.0, 200) * rng.choice([-1.0, 1.0], 200)

    def penalty(u):
        z = alpha * u
        return lam * (2.0 * (np.maximum(z, 0) + np.log1p(np.exp(-abs(z)))) / alpha - u)

    for w in ws:
        fd = central_diff(penalty, w)
        v, guards = sl_penalty_grad(np.array([w]), alpha)
        assert guards == 0
        assert lam * v[0] == pytest.approx(fd, rel=1e-6, abs=1e-10)


def test_sl_penalty_grad_finite_at_zero():
    v, guards = sl_penalty_grad(np.array([0.0, 1e-15, -1e-15]), 50.0)
    assert np.all(np.isfinite(v))
    assert abs(v[0]) < 1e-12
    assert guards == 0


def test_sl_gradient_at_least_squares_point():
    # residual gradient vanishes at the unpenalized minimizer: only the
    # penalty term remains
    pr = make_problem(9, n=20, p=4, lam=0.02)
    beta_ls = np.linalg.solve(pr.gram, pr.xty)
    v, _ = sl_penalty_grad(beta_ls, 80.0)
    g_full = pr.gram @ beta_ls - pr.xty + pr.lam * v
    assert np.allclose(g_full, pr.lam * v, atol=1e-10)


def test_sl_objective_decreases_and_converges():
    pr = make_problem(10, n=30, p=6, lam=1e-3)
    ref = reference_minimum(pr, 1e-10)
    tr = sl_solve(pr, _cfg("sl", pr, ref, eps=1e-4, iters=20000, alpha=200.0))
    assert tr.converged
    assert tr.metadata["guard_events"] == 0
    assert lasso_objective(pr, tr.final_beta) - ref.f_min <= 1e-4


def test_theoretical_bound_values():
    pr = make_problem(11)
    ref = reference_minimum(pr, 1e-10)
    beta0 = np.ones(pr.p)
    d2 = float(np.sum((beta0 - ref.beta_hat) ** 2))
    L = pr.eig_max
    assert theoretical_bound("ista", 10, pr, beta0, ref) == pytest.approx(L * d2 / 20)
    assert theoretical_bound("fista", 10, pr, beta0, ref) == pytest.approx(2 * L * d2 / 121)
    # ratio FISTA/ISTA = 4k/(k+1)^2
    for k in (1, 3, 17):
        ratio = (theoretical_bound("fista", k, pr, beta0, ref)
                 / theoretical_bound("ista", k, pr, beta0, ref))
        assert ratio == pytest.approx(4 * k / (k + 1) ** 2, rel=1e-12)
    # ISTA bound vanishes as k grows
    assert theoretical_bound("ista", 10**9, pr, beta0, ref) < 1e-6
    # CD bound finite at k = 0
    assert math.isfinite(theoretical_bound("cd", 0, pr, beta0, ref))
    with pytest.raises(ValueError):
        theoretical_bound("nope", 1, pr, beta0, ref)
    with pytest.raises(ValueError):
        theoretical_bound("ista", 0, pr, beta0, ref)


@pytest.mark.parametrize("method,solver,alpha", [
    ("ista", ista_solve, None),
    ("fista", fista_solve, None),
    ("cd", cd_solve, None),
    ("sl", sl_solve, 100.0),
])
def test_bound_dominance_small_instance(method, solver, alpha):
    pr = make_problem(12, n=30, p=8, lam=1e-3)
    ref = reference_minimum(pr, 1e-10)
    beta0 = np.ones(8)
    tr = solver(pr, _cfg(method, pr, ref, eps=1e-30, beta0=beta0, iters=800, alpha=alpha))
    f = tr.f_values()
    for k in range(1, len(f)):
        bound = theoretical_bound(method, k, pr, beta0, ref)
        assert f[k] - ref.f_min <= bound + 1e-9


def test_solver_agreement_at_tight_precision():
    pr = make_problem(13, n=30, p=6, lam=0.02)
    ref = reference_minimum(pr, 1e-10)
    finals = {}
    for m, s in (("ista", ista_solve), ("fista", fista_solve), ("cd", cd_solve)):
        tr = s(pr, _cfg(m, pr, ref, eps=1e-10, iters=200000))
        assert tr.converged
        finals[m] = lasso_objective(pr, tr.final_beta)
    vals = list(finals.values())
    assert max(vals) - min(vals) < 1e-8


def test_trace_schema_for_flat_methods():
    pr = make_problem(14)
    ref = reference_minimum(pr, 1e-10)
    c = OpCounter()
    tr = fista_solve(pr, _cfg("fista", pr, ref, eps=1e-6), c)
    csv = tr.to_csv().splitlines()
    assert csv[0] == "k,t_k,inner_iters,F,F_t,ops"
    assert all(line.split(",")[1] == "0.0" for line in csv[1:])
    assert int(csv[-1].split(",")[-1]) == c.total()
