"""Approximating kernel expansions ("features") with a sparse dictionary.

A feature is ``psi = sum_i alpha_i k(x_i, .)`` over all ``n`` stream samples.
Its best approximation in the span of ``m`` atoms has squared error
``alpha^T K alpha - b^T K_D^{-1} b`` with ``b = K_{D,X} alpha``.

KPCA is computed on the raw (uncentered) Gram matrix. Principal values are
``lambda_k = eig_k(K) / n`` and axes are scaled to unit RKHS norm, so
``sum_i alpha_{i,k}^2 = 1 / (n lambda_k)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .approximation import solve_gram
from .bounds import (
    BoundId,
    Direction,
    certify,
    discard_bound_babel,
    discard_bound_coherence,
    distance_discard_min,
)
from .criteria import CriterionConfig, Dictionary, Kind
from .errors import KernelError, SparseBoundsError
from .kernels import KernelSpec, NormBounds, as_points, gram
from .linalg import jacobi_eigen


@dataclass(frozen=True)
class FeatureExpansion:
    coefficients: np.ndarray
    samples: np.ndarray
    kernel: KernelSpec
    gram: np.ndarray | None = None  # Gram of ``samples`` when already known

    def __post_init__(self):
        if self.coefficients.shape != (self.samples.shape[0],):
            raise ValueError("one coefficient per sample is required")

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    def norm_sq(self) -> float:
        K = self.gram if self.gram is not None else gram(self.kernel, self.samples)
        return float(self.coefficients @ K @ self.coefficients)


@dataclass(frozen=True)
class KpcaAxes:
    axes: list
    principal_values: np.ndarray
    retained_count: int
    numerical_rank: int


def project_feature(f: FeatureExpansion, d: Dictionary):
    """Best approximation of ``f`` in the span of ``d``.

    Returns ``(squared_error, dictionary_coefficients)``.
    """
    if f.kernel != d.kernel:
        raise KernelError(f"feature kernel {f.kernel} differs from dictionary kernel {d.kernel}")
    b = d.kernel.cross(d.atoms, f.samples) @ f.coefficients
    coef, _ = solve_gram(d.gram, b)
    err = f.norm_sq() - float(b @ coef)
    return max(err, 0.0), coef


def empirical_mean(samples, k: KernelSpec, K=None) -> FeatureExpansion:
    X = as_points(samples)
    n = X.shape[0]
    return FeatureExpansion(np.full(n, 1.0 / n), X, k, K)


def kpca(samples, k: KernelSpec, k_max: int, K=None, clamp: bool = False) -> KpcaAxes:
    """Top ``k_max`` principal axes of the uncentered Gram matrix.

    With ``clamp=True`` at most the numerical rank of axes is returned
    instead of raising.

    Raises
    ------
    SparseBoundsError
        If ``k_max`` exceeds the number of eigenvalues above
        ``1e-10 * trace(K) / n``.
    """
    X = as_points(samples)
    n = X.shape[0]
    K = gram(k, X) if K is None else K
    eig = jacobi_eigen(K)
    floor = 1e-10 * float(np.trace(K)) / n
    rank = int(np.sum(eig.values > floor))
    if clamp:
        k_max = min(k_max, rank)
    if not 1 <= k_max <= rank:
        raise SparseBoundsError(f"requested {k_max} axes but the Gram matrix has numerical rank {rank}")
    axes = [
        FeatureExpansion(eig.vectors[:, j] / np.sqrt(eig.values[j]), X, k, K)
        for j in range(k_max)
    ]
    return KpcaAxes(axes, eig.values[:k_max] / n, k_max, rank)


# -- bounds ------------------------------------------------------------------


def feature_bound_general(n: int, m: int, alpha_norm_sq: float, eps_sq: float) -> float:
    """``(n - m) ||alpha||^2 eps^2``."""
    if n < m:
        raise ValueError(f"n={n} is smaller than m={m}")
    return (n - m) * alpha_norm_sq * eps_sq


def mean_bound_sharp(n: int, m: int, eps_sq: float) -> float:
    """``(1 - m/n)^2 eps^2`` for the empirical mean."""
    if n < 1 or n < m:
        raise ValueError(f"need n >= max(m, 1), got n={n}, m={m}")
    return (1.0 - m / n) ** 2 * eps_sq


def kpca_bound(n: int, m: int, eps_sq: float, lam: float) -> float:
    """``(1 - m/n) eps^2 / lambda_k`` for a principal axis."""
    if not lam > 0:
        raise ValueError(f"principal value must be positive, got {lam}")
    return (1.0 - m / n) * eps_sq / lam


_T8 = {
    Kind.DISTANCE: BoundId.T8_dist,
    Kind.APPROXIMATION: BoundId.T8_approx,
    Kind.COHERENCE: BoundId.T8_coh,
    Kind.BABEL: BoundId.T8_babel,
}


def epsilon_sq(c: CriterionConfig, d: Dictionary, records, samples, nb: NormBounds) -> float:
    """Upper bound on the squared residual of any stream sample.

    Unit-norm kernels use the closed forms in the threshold; otherwise the
    largest per-sample discard bound over the discarded samples.
    """
    t = c.threshold
    m = d.size
    if c.kind is Kind.APPROXIMATION:
        return t * t
    if d.kernel.unit_norm:
        if c.kind is Kind.DISTANCE:
            return 1.0 - np.sqrt(1.0 - t * t)
        if c.kind is Kind.COHERENCE:
            return 1.0 - t
        return 1.0 - t / np.sqrt(m * (1.0 + t))
    X = as_points(samples)
    discarded = [r.stream_index for r in records if not r.accepted]
    if not discarded:
        return 0.0
    kxx = d.kernel.diag(X[discarded])
    if c.kind is Kind.DISTANCE:
        vals = [distance_discard_min(float(v), t) for v in kxx]
    elif c.kind is Kind.COHERENCE:
        vals = [discard_bound_coherence(float(v), t) for v in kxx]
    else:
        vals = [discard_bound_babel(float(v), t, m, nb.R_sq) for v in kxx]
    return float(max(vals))


def mean_certificates(d: Dictionary, samples, c: CriterionConfig, eps_sq: float, nb: NormBounds, K=None,
                      offset: float = 0.0):
    """Certificates for the empirical mean: general and sharpened bounds.

    Returns ``(certificates, measured_error)``.
    """
    f = empirical_mean(samples, d.kernel, K)
    n, m = f.n, d.size
    err, _ = project_feature(f, d)
    err += offset
    certs = [
        certify(_T8[c.kind], "mean", feature_bound_general(n, m, 1.0 / n, eps_sq), err,
                Direction.UPPER, nb.provenance),
        certify(BoundId.MeanSharp, "mean", mean_bound_sharp(n, m, eps_sq), err, Direction.UPPER, nb.provenance),
    ]
    return certs, err


def kpca_certificates(d: Dictionary, axes: KpcaAxes, eps_sq: float, nb: NormBounds, offsets=None):
    """Per-axis certificates (general feature bound and principal-axis bound).

    Returns ``(certificates, measured_errors)``.
    """
    offsets = offsets or {}
    certs, errors = [], []
    m = d.size
    for k, (axis, lam) in enumerate(zip(axes.axes, axes.principal_values)):
        subject = f"axis:{k}"
        err, _ = project_feature(axis, d)
        err += offsets.get(subject, 0.0)
        errors.append(err)
        alpha_sq = float(axis.coefficients @ axis.coefficients)
        certs.append(certify(BoundId.T7, subject, feature_bound_general(axis.n, m, alpha_sq, eps_sq), err,
                             Direction.UPPER, nb.provenance))
        certs.append(certify(BoundId.T9, subject, kpca_bound(axis.n, m, eps_sq, float(lam)), err,
                             Direction.UPPER, nb.provenance))
    return certs, errors
