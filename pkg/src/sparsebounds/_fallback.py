"""Pure numpy implementations of the compiled kernels in ``_core.pyx``.

Same signatures, same operation order. Gram routines accumulate over the
input dimension one coordinate at a time, exactly like the compiled loops,
so both backends return bit-identical Gram matrices.
"""
import math

import numpy as np


def cross_dot(X, Y):
    out = np.zeros((X.shape[0], Y.shape[0]))
    for k in range(X.shape[1]):
        out = out + X[:, k, None] * Y[None, :, k]
    return out


def cross_sqdist(X, Y):
    out = np.zeros((X.shape[0], Y.shape[0]))
    for k in range(X.shape[1]):
        diff = X[:, k, None] - Y[None, :, k]
        out = out + diff * diff
    return out


def _mirror_upper(full):
    iu = np.triu_indices(full.shape[0], 1)
    full[(iu[1], iu[0])] = full[iu]
    return full


def sym_dot(X):
    return _mirror_upper(cross_dot(X, X))


def sym_sqdist(X):
    out = _mirror_upper(cross_sqdist(X, X))
    np.fill_diagonal(out, 0.0)
    return out


def cholesky(A):
    n = A.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        acc = A[j, j] - L[j, :j] @ L[j, :j]
        if not acc > 0.0:
            return L, j
        L[j, j] = math.sqrt(acc)
        if j + 1 < n:
            L[j + 1:, j] = (A[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L, -1


def cho_solve(L, b):
    n = L.shape[0]
    y = np.array(b, dtype=float)
    for i in range(n):
        y[i] = (y[i] - L[i, :i] @ y[:i]) / L[i, i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - L[i + 1:, i] @ y[i + 1:]) / L[i, i]
    return y


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return math.sqrt(float(np.sum(off * off)))


def jacobi(a, stop, max_sweeps):
    n = a.shape[0]
    W = np.eye(n)
    off = _off_norm(a)
    if off <= stop:
        return W.T.copy(), 0, off
    for sweep in range(1, max_sweeps + 1):
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * abs(apq)
                app, aqq = a[p, p], a[q, q]
                if sweep > 4 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                x = a[p].copy()
                y = a[q].copy()
                a[p] = c * x - s * y
                a[q] = s * x + c * y
                a[:, p] = a[p]
                a[:, q] = a[q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                x = W[p].copy()
                y = W[q].copy()
                W[p] = c * x - s * y
                W[q] = s * x + c * y
        off = _off_norm(a)
        if off <= stop:
            return W.T.copy(), sweep, off
    return W.T.copy(), -1, off
