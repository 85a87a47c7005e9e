import numpy as np
import pytest

from helpers import make_problem
from hslasso.datagen import SyntheticSpec, generate
from hslasso.diagnostics import (
    closeness_sweep,
    default_support_tol,
    estimation_error,
    jacobi_svd,
    pinv,
    prediction_error,
    support_conditions_check,
    support_set,
    surrogate_minimizer,
)
from hslasso.problem import reference_minimum


# ---------------------------------------------------------------------------
# Jacobi SVD / pseudo-inverse
# ---------------------------------------------------------------------------


def test_jacobi_svd_reconstruction_random():
    rng = np.random.default_rng(0)
    for shape in ((5, 3), (3, 5), (6, 6), (8, 2)):
        a = rng.standard_normal(shape)
        u, s, vt = jacobi_svd(a)
        assert np.linalg.norm(u @ np.diag(s) @ vt - a) < 1e-10
        # against the LAPACK oracle
        s_ref = np.linalg.svd(a, compute_uv=False)
        assert np.max(np.abs(np.sort(s)[::-1] - s_ref)) < 1e-10


def test_jacobi_svd_rank_deficient():
    rng = np.random.default_rng(1)
    base = rng.standard_normal((6, 2))
    a = np.hstack([base, base[:, :1]])  # rank 2, 3 columns
    u, s, vt = jacobi_svd(a)
    assert np.linalg.norm(u @ np.diag(s) @ vt - a) < 1e-10
    assert s[-1] < 1e-12 * s[0]


def test_pinv_identities():
    rng = np.random.default_rng(2)
    for shape in ((5, 3), (3, 5), (4, 4)):
        a = rng.standard_normal(shape)
        ap = pinv(a)
        assert np.linalg.norm(a @ ap @ a - a) < 1e-10
        assert np.linalg.norm(ap @ a @ ap - ap) < 1e-10
        assert np.allclose(ap, np.linalg.pinv(a), atol=1e-10)


# ---------------------------------------------------------------------------
# support set and error measures
# ---------------------------------------------------------------------------


def test_support_set_cases():
    assert support_set(np.zeros(4), 0.0).size == 0
    got = support_set(np.array([1.0, 1e-12, -2.0]), 1e-8)
    assert got.tolist() == [0, 2]
    with pytest.raises(ValueError):
        support_set(np.ones(2), -1.0)


def test_support_of_identity_reference_matches_threshold_rule():
    rng = np.random.default_rng(3)
    y = rng.standard_normal(8)
    lam = 0.08
    from helpers import identity_problem

    pr = identity_problem(y, lam)
    ref = reference_minimum(pr, 1e-10)
    got = support_set(ref.beta_hat, default_support_tol(ref.beta_hat))
    expected = np.flatnonzero(np.abs(y) > pr.n * lam)
    assert got.tolist() == expected.tolist()


def test_prediction_error_cases():
    pr = make_problem(4, n=10, p=4)
    beta = np.ones(4)
    assert prediction_error(pr, beta, beta) == 0.0
    # a null-space direction leaves the prediction unchanged
    wide = make_problem(5, n=3, p=6)
    _, _, vt = np.linalg.svd(wide.X)
    null_dir = vt[-1]
    assert abs(wide.X @ null_dir).max() < 1e-12
    assert prediction_error(wide, beta_tilde=null_dir, beta_hat=np.zeros(6)) < 1e-24


def test_estimation_error_cases():
    assert estimation_error(np.ones(3), np.ones(3)) == 0.0
    e = np.zeros(3)
    e[1] = 1.0
    assert estimation_error(e, np.zeros(3)) == 1.0
    with pytest.raises(ValueError):
        estimation_error(np.ones(2), np.ones(3))


def test_prediction_error_sweep_decreases():
    pr = generate(SyntheticSpec(n=50, p=20, rho=0.1, seed=4), lam=1e-3)
    ref = reference_minimum(pr, 1e-10)
    rows = closeness_sweep(pr, ref, ts=(1.0, 0.1, 0.01, 1e-3, 1e-4))
    errs = [r["prediction_error"] for r in rows]
    for a, b in zip(errs, errs[1:]):
        assert b <= a + 1e-12  # allow noise-level inversions only
    assert errs[-1] < 1e-6


def test_estimation_error_small_under_well_conditioned_design():
    pr = generate(SyntheticSpec(n=50, p=10, rho=0.0, seed=6), lam=1e-3)
    ref = reference_minimum(pr, 1e-10)
    bt = surrogate_minimizer(pr, 1e-4)
    assert estimation_error(bt, ref.beta_hat) < 1e-4


# ---------------------------------------------------------------------------
# design-condition report
# ---------------------------------------------------------------------------


def _orthonormal_design(n=8, p=5, seed=7):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    return q


def test_conditions_hold_on_orthogonal_construction():
    X = _orthonormal_design()
    rep = support_conditions_check(X, [0, 1])
    assert rep.condition3_holds
    assert rep.sigma_max_s1 < 1e-10
    assert rep.sigma_min_s2 == pytest.approx(1.0, abs=1e-10)
    assert rep.svd_method == "one-sided-jacobi"
    assert rep.to_dict()["condition3_holds"] is True


def test_conditions_fail_on_duplicate_column():
    X = _orthonormal_design()
    X_dup = X.copy()
    X_dup[:, 2] = X_dup[:, 0]  # duplicate a support column into the complement
    rep = support_conditions_check(X_dup, [0, 1])
    assert not rep.condition3_holds
    assert rep.sigma_max_s1 >= 2.0 - 1e-10


def test_condition_flag_matches_invariant():
    rng = np.random.default_rng(8)
    for seed in range(5):
        X = np.random.default_rng(seed).standard_normal((10, 6))
        rep = support_conditions_check(X, [0, 1, 2])
        assert rep.condition3_holds == (
            rep.sigma_max_s1 < min(2.0, 2.0 * rep.sigma_min_s2))


def test_conditions_validate_support():
    X = _orthonormal_design()
    with pytest.raises(ValueError):
        support_conditions_check(X, [])
    with pytest.raises(ValueError):
        support_conditions_check(X, list(range(5)))  # not a proper subset
    X_rankdef = X.copy()
    X_rankdef[:, 1] = X_rankdef[:, 0]
    with pytest.raises(ValueError):
        support_conditions_check(X_rankdef, [0, 1])  # rank-deficient X_S
