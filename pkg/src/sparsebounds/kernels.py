"""Positive-definite kernels, Gram assembly and diagonal norm bounds.

Supported families::

    linear        <x, y>
    poly          (<x, y> + c) ** p
    exp           exp(<x, y>)
    gaussian      exp(-||x - y||^2 / (2 sigma^2))

Only the Gaussian kernel is unit-norm (``k(x, x) == 1``).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import KernelError

# exp(700) is close to the float64 ceiling
EXP_MAX_ARG = 700.0


class Family(str, enum.Enum):
    LINEAR = "linear"
    POLYNOMIAL = "poly"
    EXPONENTIAL = "exp"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family with its parameters.

    ``degree`` and ``offset`` are used by the polynomial family only,
    ``sigma`` by the Gaussian family only.
    """

    family: Family
    degree: int = 2
    offset: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not (isinstance(self.degree, int) and self.degree >= 1):
            raise KernelError(f"polynomial degree must be an integer >= 1, got {self.degree!r}")
        if not (math.isfinite(self.offset) and self.offset >= 0):
            raise KernelError(f"polynomial offset must be >= 0, got {self.offset!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise KernelError(f"Gaussian bandwidth must be > 0, got {self.sigma!r}")

    @classmethod
    def linear(cls) -> KernelSpec:
        return cls(Family.LINEAR)

    @classmethod
    def polynomial(cls, degree: int = 2, offset: float = 1.0) -> KernelSpec:
        return cls(Family.POLYNOMIAL, degree=degree, offset=offset)

    @classmethod
    def exponential(cls) -> KernelSpec:
        return cls(Family.EXPONENTIAL)

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> KernelSpec:
        return cls(Family.GAUSSIAN, sigma=sigma)

    @property
    def unit_norm(self) -> bool:
        return self.family is Family.GAUSSIAN

    @classmethod
    def parse(cls, text: str) -> KernelSpec:
        """Parse ``gaussian:sigma=1.0``, ``linear``, ``poly:p=2,c=1`` or ``exp``."""
        name, _, params = text.strip().partition(":")
        try:
            family = Family(name.strip().lower())
        except ValueError:
            raise KernelError(f"unknown kernel family {name!r}") from None
        allowed = {
            Family.LINEAR: {},
            Family.EXPONENTIAL: {},
            Family.POLYNOMIAL: {"p": "degree", "c": "offset"},
            Family.GAUSSIAN: {"sigma": "sigma"},
        }[family]
        kwargs = {}
        for item in filter(None, (s.strip() for s in params.split(","))):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in allowed:
                raise KernelError(f"bad kernel parameter {item!r} for {family.value}")
            try:
                kwargs[allowed[key]] = int(value) if key == "p" else float(value)
            except ValueError:
                raise KernelError(f"bad kernel parameter value {item!r}") from None
        return cls(family, **kwargs)

    def __str__(self) -> str:
        if self.family is Family.POLYNOMIAL:
            return f"poly:p={self.degree},c={self.offset!r}"
        if self.family is Family.GAUSSIAN:
            return f"gaussian:sigma={self.sigma!r}"
        return self.family.value

    def _apply(self, dots_or_dists: np.ndarray) -> np.ndarray:
        f = self.family
        if f is Family.LINEAR:
            return dots_or_dists
        if f is Family.POLYNOMIAL:
            return (dots_or_dists + self.offset) ** self.degree
        if f is Family.EXPONENTIAL:
            if dots_or_dists.size and np.max(dots_or_dists) > EXP_MAX_ARG:
                raise KernelError(
                    f"exponential kernel argument exceeds {EXP_MAX_ARG}: result would overflow"
                )
            return np.exp(dots_or_dists)
        return np.exp(dots_or_dists * (-0.5 / (self.sigma * self.sigma)))

    def cross(self, X, Y) -> np.ndarray:
        """Kernel matrix ``out[i, j] = k(X[i], Y[j])``."""
        X = as_points(X)
        Y = as_points(Y)
        if X.shape[1] != Y.shape[1]:
            raise KernelError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
        if self.family is Family.GAUSSIAN:
            return self._apply(_backend.cross_sqdist(X, Y))
        return self._apply(_backend.cross_dot(X, Y))

    def diag(self, X) -> np.ndarray:
        """``k(x, x)`` for every row of ``X``."""
        X = as_points(X)
        if self.family is Family.GAUSSIAN:
            return np.ones(X.shape[0])
        sq = np.zeros(X.shape[0])
        for k in range(X.shape[1]):
            sq = sq + X[:, k] * X[:, k]
        return self._apply(sq)


def as_points(points) -> np.ndarray:
    """Coerce samples to a C-contiguous ``(n, d)`` float array.

    A 1-d input is a single sample.
    """
    X = np.array(points, dtype=float, ndmin=1)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise KernelError(f"expected a non-empty (n, d) array of samples, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise KernelError("samples contain non-finite values")
    return np.ascontiguousarray(X)


def kernel_eval(k: KernelSpec, x, y) -> float:
    """``k(x, y)`` for two samples of equal dimension."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1:
        raise KernelError("kernel_eval expects two 1-d samples")
    return float(k.cross(x, y)[0, 0])


def gram(k: KernelSpec, points) -> np.ndarray:
    """Symmetric Gram matrix of ``points``; every unordered pair is evaluated once."""
    X = as_points(points)
    if k.family is Family.GAUSSIAN:
        return k._apply(_backend.sym_sqdist(X))
    return k._apply(_backend.sym_dot(X))


class Provenance(str, enum.Enum):
    ANALYTIC = "analytic"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class NormBounds:
    """Infimum ``r_sq`` and supremum ``R_sq`` of ``k(x, x)``.

    Empirical bounds only cover the samples they were computed from.
    """

    r_sq: float
    R_sq: float
    provenance: Provenance

    def __post_init__(self):
        if not (0 <= self.r_sq <= self.R_sq and self.R_sq > 0):
            raise KernelError(f"invalid norm bounds r^2={self.r_sq}, R^2={self.R_sq}")

    @property
    def unit(self) -> bool:
        return self.r_sq == 1.0 and self.R_sq == 1.0


def norm_bounds(k: KernelSpec, points=None) -> NormBounds:
    """Bounds on the kernel diagonal.

    Analytic ``(1, 1)`` for the Gaussian kernel; otherwise the min and max of
    ``k(x, x)`` over ``points``, which must then be given.
    """
    if k.unit_norm:
        return NormBounds(1.0, 1.0, Provenance.ANALYTIC)
    if points is None or len(points) == 0:
        raise KernelError(f"{k.family.value} kernel is not unit-norm: samples are required")
    d = k.diag(points)
    return NormBounds(float(np.min(d)), float(np.max(d)), Provenance.EMPIRICAL)
