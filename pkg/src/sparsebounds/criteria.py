"""Online admission rules for kernel dictionaries.

Each ``admit_*`` function compares a new sample ``x`` with the atoms of a
dictionary and returns an :class:`AdmissionRecord` together with the (possibly
extended) dictionary. Dictionaries are never mutated.

=============  =============================================  ===============
criterion      statistic                                      accept iff
=============  =============================================  ===============
approximation  k(x,x) - k_D(x)^T K_D^{-1} k_D(x)              stat >= delta^2
distance       min_j k(x,x) - k(x,x_j)^2 / k(x_j,x_j)          stat >= delta^2
coherence      max_j |k(x,x_j)| / sqrt(k(x,x) k(x_j,x_j))      stat <= gamma
babel          sum_j |k(x,x_j)|                               stat <= gamma
=============  =============================================  ===============
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DependentAtomError, InputError, KernelError
from .kernels import KernelSpec, as_points
from .linalg import inverse_append


class Kind(str, enum.Enum):
    APPROXIMATION = "approx"
    DISTANCE = "distance"
    COHERENCE = "coherence"
    BABEL = "babel"


_PARAM = {
    Kind.APPROXIMATION: "delta",
    Kind.DISTANCE: "delta",
    Kind.COHERENCE: "gamma",
    Kind.BABEL: "gamma",
}


@dataclass(frozen=True)
class CriterionConfig:
    kind: Kind
    threshold: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        t = self.threshold
        if not math.isfinite(t):
            raise ValueError(f"threshold must be finite, got {t!r}")
        if self.kind is Kind.COHERENCE:
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"coherence threshold gamma must lie in [0, 1], got {t!r}")
        elif not t > 0.0:
            raise ValueError(f"{_PARAM[self.kind]} must be > 0, got {t!r}")

    @property
    def param_name(self) -> str:
        return _PARAM[self.kind]

    @classmethod
    def parse(cls, text: str) -> CriterionConfig:
        """Parse ``approx:delta=..``, ``distance:delta=..``, ``coherence:gamma=..``
        or ``babel:gamma=..``."""
        name, _, params = text.strip().partition(":")
        try:
            kind = Kind(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown criterion {name!r}") from None
        key, eq, value = params.partition("=")
        if not eq or key.strip() != _PARAM[kind] or "," in value:
            raise ValueError(f"criterion {kind.value} expects '{_PARAM[kind]}=<value>', got {params!r}")
        try:
            threshold = float(value)
        except ValueError:
            raise ValueError(f"bad threshold {value!r}") from None
        return cls(kind, threshold)

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.param_name}={self.threshold!r}"


class Decision(str, enum.Enum):
    ACCEPTED = "accepted"
    DISCARDED = "discarded"


@dataclass(frozen=True)
class AdmissionRecord:
    """Audit entry for one stream sample.

    ``statistic`` is the left-hand side of the admission test. The first sample
    of a stream is admitted unconditionally (``initial=True``); its statistic
    is the empty-dictionary value (``k(x, x)`` for approximation/distance, 0 for
    coherence/Babel).
    """

    stream_index: int
    decision: Decision
    statistic: float
    threshold_used: float
    dictionary_size: int  # atoms present when the sample was examined
    initial: bool = False
    numeric_dependence: bool = False

    @property
    def accepted(self) -> bool:
        return self.decision is Decision.ACCEPTED


@dataclass(frozen=True)
class Dictionary:
    """Ordered atoms with their Gram matrix.

    ``gram_inv`` is only maintained for the approximation criterion.
    ``origin_indices[j]`` is the stream position of atom ``j``.
    """

    kernel: KernelSpec
    atoms: np.ndarray
    gram: np.ndarray
    origin_indices: tuple = ()
    gram_inv: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def start(cls, kernel: KernelSpec, x, index: int = 0, maintain_inverse: bool = False) -> Dictionary:
        X = as_points(x)
        kxx = float(kernel.diag(X)[0])
        if maintain_inverse and not kxx > 0:
            raise DependentAtomError(kxx)
        return cls(
            kernel=kernel,
            atoms=X,
            gram=np.array([[kxx]]),
            origin_indices=(index,),
            gram_inv=np.array([[1.0 / kxx]]) if maintain_inverse else None,
        )

    @property
    def size(self) -> int:
        return self.atoms.shape[0]

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def diag(self) -> np.ndarray:
        return np.diag(self.gram)

    def kernel_vector(self, x) -> np.ndarray:
        """``k(x_j, x)`` for every atom ``x_j``."""
        return self.kernel.cross(self.atoms, x)[:, 0]

    def appended(self, x, index: int, kvec, kxx: float, gram_inv=None) -> Dictionary:
        m = self.size
        g = np.empty((m + 1, m + 1))
        g[:m, :m] = self.gram
        g[:m, m] = kvec
        g[m, :m] = kvec
        g[m, m] = kxx
        return replace(
            self,
            atoms=np.vstack([self.atoms, as_points(x)]),
            gram=g,
            origin_indices=self.origin_indices + (index,),
            gram_inv=gram_inv,
        )

    def prefix(self, k: int) -> Dictionary:
        """The dictionary formed by the first ``k`` atoms (its state at an earlier time)."""
        if not 1 <= k <= self.size:
            raise ValueError(f"prefix length {k} outside [1, {self.size}]")
        return replace(
            self,
            atoms=self.atoms[:k],
            gram=self.gram[:k, :k].copy(),
            origin_indices=self.origin_indices[:k],
            gram_inv=None,
        )


def _prepare(d: Dictionary, x):
    X = as_points(x)
    if X.shape[0] != 1:
        raise InputError("admission expects a single sample")
    if X.shape[1] != d.dim:
        raise KernelError(f"sample dimension {X.shape[1]} does not match dictionary dimension {d.dim}")
    return X, d.kernel_vector(X), float(d.kernel.diag(X)[0])


def admit_approximation(d: Dictionary, x, delta: float, index: int = -1):
    """Approximate-linear-dependence test with a maintained Gram inverse."""
    if d.gram_inv is None:
        raise ValueError("approximation criterion needs a dictionary with a maintained inverse")
    X, kvec, kxx = _prepare(d, x)
    raw = kxx - float(kvec @ (d.gram_inv @ kvec))
    # a non-positive Schur complement means x lies in the span up to rounding
    dependent = raw <= 0.0
    stat = max(raw, 0.0)
    threshold = delta * delta
    if stat >= threshold:
        try:
            new_inv = inverse_append(d.gram_inv, kvec, kxx)
        except DependentAtomError:
            record = AdmissionRecord(index, Decision.DISCARDED, 0.0, threshold, d.size, numeric_dependence=True)
            return record, d
        record = AdmissionRecord(index, Decision.ACCEPTED, stat, threshold, d.size)
        return record, d.appended(X, index, kvec, kxx, gram_inv=new_inv)
    return AdmissionRecord(index, Decision.DISCARDED, stat, threshold, d.size, numeric_dependence=dependent), d


def admit_distance(d: Dictionary, x, delta: float, index: int = -1):
    """Distance (novelty) test against every atom taken alone."""
    X, kvec, kxx = _prepare(d, x)
    stat = float(np.min(kxx - kvec * kvec / d.diag))
    threshold = delta * delta
    if stat >= threshold:
        return AdmissionRecord(index, Decision.ACCEPTED, stat, threshold, d.size), d.appended(X, index, kvec, kxx)
    return AdmissionRecord(index, Decision.DISCARDED, stat, threshold, d.size), d


def admit_coherence(d: Dictionary, x, gamma: float, index: int = -1):
    X, kvec, kxx = _prepare(d, x)
    if not kxx > 0:
        raise KernelError(f"coherence is undefined for k(x, x) = {kxx}")
    stat = float(np.max(np.abs(kvec) / np.sqrt(kxx * d.diag)))
    if stat <= gamma:
        return AdmissionRecord(index, Decision.ACCEPTED, stat, gamma, d.size), d.appended(X, index, kvec, kxx)
    return AdmissionRecord(index, Decision.DISCARDED, stat, gamma, d.size), d


def admit_babel(d: Dictionary, x, gamma: float, index: int = -1):
    """Cumulative-correlation test (unnormalized)."""
    X, kvec, kxx = _prepare(d, x)
    stat = float(np.sum(np.abs(kvec)))
    if stat <= gamma:
        return AdmissionRecord(index, Decision.ACCEPTED, stat, gamma, d.size), d.appended(X, index, kvec, kxx)
    return AdmissionRecord(index, Decision.DISCARDED, stat, gamma, d.size), d


_ADMIT = {
    Kind.APPROXIMATION: admit_approximation,
    Kind.DISTANCE: admit_distance,
    Kind.COHERENCE: admit_coherence,
    Kind.BABEL: admit_babel,
}


def admit(d: Dictionary, x, config: CriterionConfig, index: int = -1):
    return _ADMIT[config.kind](d, x, config.threshold, index)


def run_stream(samples, kernel: KernelSpec, config: CriterionConfig):
    """Process ``samples`` in order and return ``(dictionary, records)``.

    The first sample always becomes the first atom.
    """
    X = as_points(samples)
    first = X[0]
    d = Dictionary.start(kernel, first, 0, maintain_inverse=config.kind is Kind.APPROXIMATION)
    k0 = float(d.gram[0, 0])
    initial_stat = k0 if config.kind in (Kind.APPROXIMATION, Kind.DISTANCE) else 0.0
    threshold = config.threshold ** 2 if config.param_name == "delta" else config.threshold
    records = [AdmissionRecord(0, Decision.ACCEPTED, initial_stat, threshold, 0, initial=True)]
    step = _ADMIT[config.kind]
    for t in range(1, X.shape[0]):
        record, d = step(d, X[t], config.threshold, t)
        records.append(record)
    return d, records


def dictionary_at(d: Dictionary, record: AdmissionRecord) -> Dictionary:
    """The dictionary as it was when ``record``'s sample was examined."""
    return d.prefix(record.dictionary_size)
