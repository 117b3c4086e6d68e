"""Dictionary-level properties each criterion is supposed to leave behind.

Each function returns the worst-case margin: a non-negative value means the
property holds, a negative one is the amount by which it fails.
"""
import numpy as np

from sparsebounds.approximation import atom_loo_residual


def ald_margin(d, delta):
    """``min_i loo_residual_i - delta^2`` (infinite when m < 2)."""
    if d.size < 2:
        return np.inf
    return min(atom_loo_residual(d, i).squared_residual for i in range(d.size)) - delta ** 2


def distance_margin(d, delta):
    """``min over ordered pairs i != j of K_ii - K_ij^2 / K_jj - delta^2``."""
    K = d.gram
    m = d.size
    if m < 2:
        return np.inf
    vals = np.diag(K)[:, None] - K ** 2 / np.diag(K)[None, :]
    vals[np.arange(m), np.arange(m)] = np.inf
    return float(vals.min()) - delta ** 2


def distance_margin_admission_order(d, delta):
    """Same as :func:`distance_margin` but only for pairs (later atom i, earlier atom j)."""
    K = d.gram
    m = d.size
    if m < 2:
        return np.inf
    return min(K[i, i] - K[i, j] ** 2 / K[j, j] for i in range(m) for j in range(i)) - delta ** 2


def coherence_margin(d, gamma):
    """``gamma - max_{i != j} |K_ij| / sqrt(K_ii K_jj)``."""
    K = d.gram
    if d.size < 2:
        return np.inf
    dg = np.sqrt(np.diag(K))
    C = np.abs(K) / np.outer(dg, dg)
    np.fill_diagonal(C, 0.0)
    return gamma - float(C.max())


def babel_margin(d, gamma):
    """``gamma - max_i sum_{j != i} |K_ij|``."""
    A = np.abs(d.gram)
    np.fill_diagonal(A, 0.0)
    return gamma - float(A.sum(axis=1).max())


def babel_margin_admission_order(d, gamma):
    """``gamma - max_i sum_{j < i} |K_ij|``: only atoms older than ``i`` count."""
    A = np.tril(np.abs(d.gram), -1)
    return gamma - float(A.sum(axis=1).max())
