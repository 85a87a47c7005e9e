"""Shared independent oracles for the test suite: brute-force grid search,
multiresolution refinement, finite differences, and instance factories.
These deliberately avoid the library's own solver paths."""

from __future__ import annotations

import numpy as np

from hslasso.problem import LassoProblem


def make_problem(seed, n=12, p=4, lam=0.1, scale=0.5):
    """Small random instance with the minimizer well inside [-3, 3]^p."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta_star = scale * rng.uniform(-1.0, 1.0, size=p)
    y = X @ beta_star + 0.3 * rng.standard_normal(n)
    return LassoProblem(y=y, X=X, lam=lam)


def objective_on_grid(problem, pts):
    """Vectorized objective over an (m, p) array of points."""
    r = problem.y[None, :] - pts @ problem.X.T
    return (np.einsum("ij,ij->i", r, r) / (2.0 * problem.n)
            + problem.lam * np.sum(np.abs(pts), axis=1))


def grid_search_2d(problem, lo=-3.0, hi=3.0, res=1e-3, chunk=400):
    """Exhaustive objective minimum over the full 2-d grid at the given
    resolution, evaluated in row chunks via the gram expansion."""
    g = np.arange(lo, hi + res / 2.0, res)
    G = problem.gram
    b = problem.xty
    const = float(problem.y @ problem.y) / (2.0 * problem.n)
    lam = problem.lam
    best = np.inf
    best_pt = None
    for start in range(0, g.size, chunk):
        x1 = g[start:start + chunk][:, None]
        x2 = g[None, :]
        val = (0.5 * (G[0, 0] * x1 * x1 + 2.0 * G[0, 1] * x1 * x2 + G[1, 1] * x2 * x2)
               - (b[0] * x1 + b[1] * x2) + const
               + lam * (np.abs(x1) + np.abs(x2)))
        flat = np.argmin(val)
        if val.flat[flat] < best:
            best = float(val.flat[flat])
            i, j = np.unravel_index(flat, val.shape)
            best_pt = np.array([x1[i, 0], x2[0, j]])
    return best, best_pt


def grid_refine(problem, lo=-3.0, hi=3.0, points=41, rounds=10, keep_cells=3):
    """Multiresolution grid search for p dims; safe for convex objectives.

    Each round evaluates a full tensor grid and re-centers a window of
    keep_cells grid cells around the argmin.
    """
    p = problem.p
    lows = np.full(p, lo, dtype=float)
    highs = np.full(p, hi, dtype=float)
    best = np.inf
    best_pt = None
    for _ in range(rounds):
        axes = [np.linspace(lows[d], highs[d], points) for d in range(p)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        vals = objective_on_grid(problem, pts)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best = float(vals[k])
            best_pt = pts[k]
        spacing = (highs - lows) / (points - 1)
        lows = pts[k] - keep_cells * spacing
        highs = pts[k] + keep_cells * spacing
    return best, best_pt


def central_diff(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def numeric_prox_argmin(prox_obj, lo, hi, rounds=10):
    """2-d grid-refinement minimizer, independent of any closed form.

    Keep probe scales small so value differences near the minimum stay
    above the double-precision noise floor at 1e-8 resolution.
    """
    for _ in range(rounds):
        xs = np.linspace(lo[0], hi[0], 41)
        ys = np.linspace(lo[1], hi[1], 41)
        vals = np.array([[prox_obj(np.array([a, b])) for b in ys] for a in xs])
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        span = (hi - lo) / 40.0
        center = np.array([xs[i], ys[j]])
        lo, hi = center - 2 * span, center + 2 * span
    return center


def identity_problem(y, lam):
    """X = I instance (n = p) with the closed-form minimizer."""
    y = np.asarray(y, dtype=float)
    n = y.size
    return LassoProblem(y=y, X=np.eye(n), lam=lam)


def identity_closed_form(y, n, lam):
    """Per-coordinate solution for the X = I instance."""
    y = np.asarray(y, dtype=float)
    return np.sign(y) * np.maximum(np.abs(y) - n * lam, 0.0)
