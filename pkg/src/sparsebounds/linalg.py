"""Dense symmetric linear algebra used throughout the package.

Symmetric matrices are plain ``float64`` numpy arrays whose symmetry has been
checked and made exact by :func:`sym_matrix`. The factorization and the
eigensolver are implemented here (compiled core or numpy fallback, see
``_backend``); LAPACK is never called.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ConvergenceError, DependentAtomError, SingularMatrixError

DEFAULT_EIG_TOL = 1e-10
DEFAULT_MAX_SWEEPS = 100


def sym_matrix(entries, rtol: float = 1e-10) -> np.ndarray:
    """Validate a square symmetric matrix and return an exactly symmetric copy.

    Parameters
    ----------
    entries : array_like, shape (n, n)
    rtol : float
        Largest tolerated asymmetry relative to ``max |entries|``.

    Raises
    ------
    ValueError
        If the input is not a non-empty square matrix of finite reals, or is
        asymmetric beyond ``rtol``.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if np.max(np.abs(a - a.T)) > rtol * max(scale, 1.0):
        raise ValueError("matrix is not symmetric")
    # (a + a.T) / 2 is exactly symmetric: floating-point addition commutes
    return np.ascontiguousarray(0.5 * (a + a.T))


@dataclass(frozen=True)
class EigenResult:
    """Eigenpairs of a symmetric matrix.

    ``values`` are sorted non-increasing and ``vectors[:, k]`` is the unit
    eigenvector for ``values[k]`` (numpy ``eigh`` layout, reversed order).
    """

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int
    off_norm: float


def jacobi_eigen(
    m, tol: float = DEFAULT_EIG_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS
) -> EigenResult:
    """Eigendecomposition by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius mass is at most
    ``tol * ||m||_F``.

    Raises
    ------
    ConvergenceError
        If ``max_sweeps`` sweeps were not enough.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = sym_matrix(m)
    stop = tol * float(np.sqrt(np.sum(a * a)))
    vectors, sweeps, off = _backend.jacobi(a, stop, int(max_sweeps))
    if sweeps < 0:
        raise ConvergenceError(off, max_sweeps)
    diag = np.diag(a).copy()
    # stable sort on the negated values keeps solver order within ties
    order = np.argsort(-diag, kind="stable")
    vecs = vectors[:, order]
    vecs /= np.linalg.norm(vecs, axis=0)
    return EigenResult(values=diag[order], vectors=vecs, sweeps=sweeps, off_norm=off)


def cholesky(m, jitter: float = 0.0) -> np.ndarray:
    """Lower Cholesky factor of ``m + jitter * I``.

    Raises
    ------
    SingularMatrixError
        Carrying the index of the first non-positive pivot.
    """
    a = sym_matrix(m)
    if jitter:
        a = a + jitter * np.eye(a.shape[0])
    L, failed = _backend.cholesky(np.ascontiguousarray(a))
    if failed >= 0:
        raise SingularMatrixError(failed)
    return L


def solve_spd(m, rhs, jitter: float = 0.0) -> np.ndarray:
    """Solve ``(m + jitter * I) x = rhs`` for symmetric positive definite ``m``."""
    b = np.asarray(rhs, dtype=float)
    a = np.asarray(m, dtype=float)
    if b.ndim != 1 or a.ndim != 2 or b.shape[0] != a.shape[0]:
        raise ValueError(f"rhs of length {b.shape} does not match matrix {a.shape}")
    L = cholesky(a, jitter)
    return _backend.cho_solve(L, np.ascontiguousarray(b))


def inverse_append(inv, new_col, new_diag: float) -> np.ndarray:
    """Inverse of a Gram matrix bordered by one new row and column.

    With ``A^{-1}`` given, ``b = new_col`` and ``c = new_diag``, the Schur
    complement is ``s = c - b^T A^{-1} b`` and::

        [A   b]^-1   [A^-1 + u u^T / s   -u / s]
        [b^T c]    = [      -u^T / s      1 / s],   u = A^{-1} b

    Raises
    ------
    DependentAtomError
        If ``s <= 0``; the caller must not append the atom.
    """
    A_inv = np.asarray(inv, dtype=float)
    b = np.asarray(new_col, dtype=float)
    m = A_inv.shape[0]
    if b.shape != (m,):
        raise ValueError(f"new_col has shape {b.shape}, expected ({m},)")
    u = A_inv @ b
    s = float(new_diag) - float(b @ u)
    if not s > 0.0:
        raise DependentAtomError(s)
    out = np.empty((m + 1, m + 1))
    out[:m, :m] = A_inv + np.outer(u, u) / s
    out[:m, m] = -u / s
    out[m, :m] = -u / s
    out[m, m] = 1.0 / s
    return out
