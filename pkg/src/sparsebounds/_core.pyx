# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: Gram assembly, Cholesky and cyclic Jacobi.

Every routine mirrors ``_fallback`` operation for operation so that the two
backends agree to rounding (Gram entries agree bit for bit).
"""
import numpy as np

from libc.math cimport sqrt, fabs


def cross_dot(const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t n = X.shape[0], m = Y.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc
    out = np.empty((n, m))
    cdef double[:, ::1] o = out
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for k in range(d):
                acc = acc + X[i, k] * Y[j, k]
            o[i, j] = acc
    return out


def cross_sqdist(const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t n = X.shape[0], m = Y.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc, diff
    out = np.empty((n, m))
    cdef double[:, ::1] o = out
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for k in range(d):
                diff = X[i, k] - Y[j, k]
                acc = acc + diff * diff
            o[i, j] = acc
    return out


def sym_dot(const double[:, ::1] X):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc
    out = np.empty((n, n))
    cdef double[:, ::1] o = out
    for i in range(n):
        for j in range(i, n):
            acc = 0.0
            for k in range(d):
                acc = acc + X[i, k] * X[j, k]
            o[i, j] = acc
            o[j, i] = acc
    return out


def sym_sqdist(const double[:, ::1] X):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc, diff
    out = np.empty((n, n))
    cdef double[:, ::1] o = out
    for i in range(n):
        o[i, i] = 0.0
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(d):
                diff = X[i, k] - X[j, k]
                acc = acc + diff * diff
            o[i, j] = acc
            o[j, i] = acc
    return out


def cholesky(const double[:, ::1] A):
    """Lower Cholesky factor of ``A``.

    Returns ``(L, failed)`` where ``failed`` is the index of the first
    non-positive pivot, or -1 on success.
    """
    cdef Py_ssize_t n = A.shape[0], i, j, k
    cdef double acc
    out = np.zeros((n, n))
    cdef double[:, ::1] L = out
    for j in range(n):
        acc = A[j, j]
        for k in range(j):
            acc = acc - L[j, k] * L[j, k]
        if not acc > 0.0:
            return out, j
        L[j, j] = sqrt(acc)
        for i in range(j + 1, n):
            acc = A[i, j]
            for k in range(j):
                acc = acc - L[i, k] * L[j, k]
            L[i, j] = acc / L[j, j]
    return out, -1


def cho_solve(const double[:, ::1] L, const double[::1] b):
    cdef Py_ssize_t n = L.shape[0], i, k
    cdef double acc
    y = np.empty(n)
    cdef double[::1] yv = y
    for i in range(n):
        acc = b[i]
        for k in range(i):
            acc = acc - L[i, k] * yv[k]
        yv[i] = acc / L[i, i]
    for i in range(n - 1, -1, -1):
        acc = yv[i]
        for k in range(i + 1, n):
            acc = acc - L[k, i] * yv[k]
        yv[i] = acc / L[i, i]
    return y


cdef double _off_norm(double[:, ::1] a) nogil:
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc = acc + a[i, j] * a[i, j]
    return sqrt(acc)


def jacobi(double[:, ::1] a, double stop, int max_sweeps):
    """Cyclic row-ordered Jacobi on ``a`` (modified in place).

    Returns ``(V, sweeps, off)``; the diagonal of ``a`` holds the eigenvalues
    and the columns of ``V`` the eigenvectors. ``sweeps == -1`` signals that
    the budget ran out. From the fifth sweep on, an off-diagonal entry too
    small to change either diagonal entry in floating point is set to zero
    instead of rotated.
    """
    cdef Py_ssize_t n = a.shape[0], p, q, k
    cdef double apq, theta, t, c, s, x, y, off, g
    cdef int sweep
    vt = np.eye(n)  # eigenvectors stored as rows
    cdef double[:, ::1] W = vt
    off = _off_norm(a)
    if off <= stop:
        return vt.T.copy(), 0, off
    for sweep in range(1, max_sweeps + 1):
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * fabs(apq)
                if sweep > 4 and fabs(a[p, p]) + g == fabs(a[p, p]) and fabs(a[q, q]) + g == fabs(a[q, q]):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * y
                    a[q, k] = s * x + c * y
                    a[k, p] = a[p, k]
                    a[k, q] = a[q, k]
                a[p, p] = a[p, p] - t * apq
                a[q, q] = a[q, q] + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    x = W[p, k]
                    y = W[q, k]
                    W[p, k] = c * x - s * y
                    W[q, k] = s * x + c * y
        off = _off_norm(a)
        if off <= stop:
            return vt.T.copy(), sweep, off
    return vt.T.copy(), -1, off
