"""Lasso problem container, objectives, precision test, reference oracle.

The problem instance is immutable after construction: the normalized gram
matrix X'X/n, the vector X'y/n, and the gram eigendecomposition are
computed once and shared read-only by every solver.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np

from .surrogate import SurrogateSpec

BINARY_MAGIC = b"LSSO"


class NumericalFailure(RuntimeError):
    """Raised when an oracle or factorization cannot reach its tolerance."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


class LassoProblem:
    """Immutable least-squares-plus-l1 instance.

    Objective: (1/(2n)) ||y - X beta||_2^2 + lambda ||beta||_1.
    """

    def __init__(self, y, X, lam: float):
        y = np.asarray(y, dtype=float)
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            raise ValueError("X must be a 2-d matrix")
        n, p = X.shape
        if n < 1 or p < 1:
            raise ValueError("need n >= 1 and p >= 1")
        if y.shape != (n,):
            raise ValueError(f"y must have shape ({n},), got {y.shape}")
        if not lam > 0:
            raise ValueError("lambda must be strictly positive")
        self.n = n
        self.p = p
        self.lam = float(lam)
        self.y = _readonly(y)
        self.X = _readonly(X)
        self.gram = _readonly(X.T @ X / n)
        self.xty = _readonly(X.T @ y / n)
        eigvals, eigvecs = np.linalg.eigh(self.gram)
        if eigvals[0] < -1e-10:
            raise ValueError("gram matrix not positive semidefinite within 1e-10")
        self.gram_eigvals = _readonly(eigvals)
        self.gram_eigvecs = _readonly(eigvecs)
        self.eig_min = float(max(eigvals[0], 0.0))
        self.eig_max = float(max(eigvals[-1], 0.0))

    def ridge_solve(self, shift: float) -> np.ndarray:
        """Solve (X'X/n + shift I) b = X'y/n through the cached spectrum.

        Eigenvalue noise below zero is clamped (the gram is validated
        positive semidefinite at construction).
        """
        denom = np.maximum(self.gram_eigvals, 0.0) + shift
        if np.min(denom) <= 0:
            raise NumericalFailure("ridge system not positive definite")
        return self.gram_eigvecs @ ((self.gram_eigvecs.T @ self.xty) / denom)

    def __repr__(self):
        return f"LassoProblem(n={self.n}, p={self.p}, lambda={self.lam})"


@dataclass(frozen=True)
class ReferenceSolution:
    """High-accuracy minimizer used to measure objective gaps."""

    beta_hat: np.ndarray
    f_min: float
    gap_tolerance: float


def lasso_objective(problem: LassoProblem, beta) -> float:
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (problem.p,):
        raise ValueError(f"beta must have shape ({problem.p},), got {beta.shape}")
    r = problem.y - problem.X @ beta
    return float(r @ r / (2.0 * problem.n) + problem.lam * np.sum(np.abs(beta)))


def surrogate_objective(problem: LassoProblem, t: float, beta) -> float:
    """Objective with the l1 penalty replaced by the level-t smoothed penalty."""
    if not t > 0:
        raise ValueError("surrogate level t must be strictly positive")
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (problem.p,):
        raise ValueError(f"beta must have shape ({problem.p},), got {beta.shape}")
    spec = SurrogateSpec(t)
    r = problem.y - problem.X @ beta
    return float(r @ r / (2.0 * problem.n) + problem.lam * np.sum(spec.value(beta)))


def epsilon_precision(problem: LassoProblem, beta, ref: ReferenceSolution, epsilon: float) -> bool:
    """True iff the objective at beta is within epsilon of the reference minimum."""
    if not np.isfinite(ref.f_min):
        raise ValueError("reference minimum must be finite")
    return lasso_objective(problem, beta) - ref.f_min <= epsilon


def subgradient_residual(problem: LassoProblem, beta) -> float:
    """Sup-norm of the minimum-norm subgradient of the objective at beta.

    Zero exactly at the minimizer; entries at beta_i = 0 contribute the
    distance of the smooth gradient from the interval [-lambda, lambda].
    """
    beta = np.asarray(beta, dtype=float)
    g = problem.gram @ beta - problem.xty
    lam = problem.lam
    r = np.where(beta != 0.0, g + lam * np.sign(beta), g - np.clip(g, -lam, lam))
    return float(np.max(np.abs(r))) if r.size else 0.0


def reference_minimum(problem: LassoProblem, tol: float) -> ReferenceSolution:
    """Cross-checked ground-truth minimum from two independent solvers.

    Runs an accelerated proximal-gradient solver and a cyclic coordinate
    descent solver until the subgradient residual drops below ``tol`` and
    returns the lower of the two final objective values.  Disagreement of
    the objectives beyond 10*tol signals ill-conditioning.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    from .baselines import cd_minimize_to_residual, fista_minimize_to_residual

    beta0 = np.zeros(problem.p)
    beta_f = fista_minimize_to_residual(problem, beta0, tol)
    beta_c = cd_minimize_to_residual(problem, beta0, tol)
    if beta_f is None or beta_c is None:
        raise NumericalFailure("reference solvers did not reach the residual tolerance")
    f_f = lasso_objective(problem, beta_f)
    f_c = lasso_objective(problem, beta_c)
    if abs(f_f - f_c) > 10.0 * tol:
        raise NumericalFailure(
            f"reference solvers disagree: {f_f!r} vs {f_c!r} (tol {tol!r}); "
            "lower the tolerance or inspect conditioning"
        )
    if f_f <= f_c:
        return ReferenceSolution(beta_hat=_readonly(beta_f), f_min=f_f, gap_tolerance=tol)
    return ReferenceSolution(beta_hat=_readonly(beta_c), f_min=f_c, gap_tolerance=tol)


# ---------------------------------------------------------------------------
# Serialization.  JSON carries the instance as plain lists (X row-major);
# the binary format is a little-endian stream: magic "LSSO", u32 n, u32 p,
# f64 lambda, then y (n doubles) and X in column-major order (n*p doubles).
# ---------------------------------------------------------------------------


def problem_to_json(problem: LassoProblem) -> str:
    doc = {
        "n": problem.n,
        "p": problem.p,
        "lambda": problem.lam,
        "y": problem.y.tolist(),
        "X": problem.X.tolist(),
    }
    return json.dumps(doc)


def problem_from_json(text: str) -> LassoProblem:
    doc = json.loads(text)
    missing = {"n", "p", "lambda", "y", "X"} - doc.keys()
    if missing:
        raise ValueError(f"problem document missing keys: {sorted(missing)}")
    X = np.asarray(doc["X"], dtype=float)
    y = np.asarray(doc["y"], dtype=float)
    if X.shape != (doc["n"], doc["p"]):
        raise ValueError("X dimensions disagree with the declared n, p")
    return LassoProblem(y=y, X=X, lam=doc["lambda"])


def save_problem_json(problem: LassoProblem, path) -> None:
    with open(path, "w") as fh:
        fh.write(problem_to_json(problem))


def load_problem_json(path) -> LassoProblem:
    with open(path) as fh:
        return problem_from_json(fh.read())


def save_problem_binary(problem: LassoProblem, path) -> None:
    with open(path, "wb") as fh:
        fh.write(BINARY_MAGIC)
        fh.write(struct.pack("<IId", problem.n, problem.p, problem.lam))
        fh.write(problem.y.astype("<f8").tobytes())
        fh.write(np.asfortranarray(problem.X).astype("<f8").tobytes(order="F"))


def load_problem_binary(path) -> LassoProblem:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != BINARY_MAGIC:
            raise ValueError(f"bad magic {magic!r}; expected {BINARY_MAGIC!r}")
        n, p, lam = struct.unpack("<IId", fh.read(16))
        y = np.frombuffer(fh.read(8 * n), dtype="<f8")
        X = np.frombuffer(fh.read(8 * n * p), dtype="<f8").reshape((n, p), order="F")
    return LassoProblem(y=y.copy(), X=X.copy(), lam=lam)
