"""Exact projections onto the span of a dictionary.

For a function ``k(x, .)`` and atoms with Gram matrix ``K_D`` the optimal
coefficients are ``xi = K_D^{-1} k_D(x)``; the squared norm of the projection
is ``k_D(x)^T xi`` and the squared residual is ``k(x, x)`` minus that.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .criteria import Dictionary
from .errors import SingularMatrixError
from .linalg import jacobi_eigen, solve_spd

# residuals this far below zero are rounding noise
CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class ResidualReport:
    """Squared residual, projection coefficients and projected squared norm.

    ``raw_residual`` is the value before clamping at zero; ``jittered`` is set
    when the Gram matrix had to be regularized to be factorized.
    """

    squared_residual: float
    coefficients: np.ndarray
    projected_norm_sq: float
    raw_residual: float
    jittered: bool = False


def solve_gram(gram: np.ndarray, rhs: np.ndarray):
    """Solve with a Gram matrix, retrying once with a tiny diagonal jitter.

    Returns ``(solution, jittered)``.
    """
    try:
        return solve_spd(gram, rhs), False
    except SingularMatrixError:
        m = gram.shape[0]
        jitter = 1e-12 * float(np.trace(gram)) / m
        if not jitter > 0:
            raise
        return solve_spd(gram, rhs, jitter=jitter), True


def _report(kxx: float, kvec: np.ndarray, gram: np.ndarray) -> ResidualReport:
    coef, jittered = solve_gram(gram, kvec)
    projected = float(kvec @ coef)
    raw = kxx - projected
    return ResidualReport(max(raw, 0.0), coef, projected, raw, jittered)


def project_sample(d: Dictionary, x) -> ResidualReport:
    """Project ``k(x, .)`` onto the span of the atoms of ``d``."""
    x = np.asarray(x, dtype=float)
    return _report(float(d.kernel.diag(x)[0]), d.kernel_vector(x), d.gram)


def atom_loo_residual(d: Dictionary, i: int) -> ResidualReport:
    """Project atom ``i`` onto the span of the other ``m - 1`` atoms."""
    m = d.size
    if m < 2:
        raise ValueError("leave-one-out residual needs at least two atoms")
    if not 0 <= i < m:
        raise IndexError(f"atom index {i} out of range for {m} atoms")
    keep = np.r_[0:i, i + 1:m]
    return _report(float(d.gram[i, i]), d.gram[keep, i], d.gram[np.ix_(keep, keep)])


def deleted_gram(d: Dictionary, i: int) -> np.ndarray:
    keep = np.r_[0:i, i + 1:d.size]
    return d.gram[np.ix_(keep, keep)]


def submatrix_min_eigenvalue(d: Dictionary, i: int) -> float:
    """Smallest eigenvalue of the Gram matrix with row and column ``i`` removed."""
    if d.size < 2:
        raise ValueError("submatrix eigenvalue needs at least two atoms")
    if not 0 <= i < d.size:
        raise IndexError(f"atom index {i} out of range for {d.size} atoms")
    return float(jacobi_eigen(deleted_gram(d, i)).values[-1])
