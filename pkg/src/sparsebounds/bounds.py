"""Closed-form error and eigenvalue bounds and their certification.

Bounds that cannot be evaluated (negative radicand, non-positive denominator)
are returned as ``None`` and certified as ``Vacuous``. Bound identifiers:

======== ============================================ ============
id       quantity bounded                             direction
======== ============================================ ============
T1a      residual of a sample discarded by distance   upper
T1b      same, second expression                      upper
T2       residual of a sample discarded by coherence  upper
T3       residual of a sample discarded by Babel      upper
T4-T6    leave-one-out residual of an atom            lower
L*_low   smallest Gram eigenvalue                     lower
L*_high  largest Gram eigenvalue                      upper
T7-T9    feature projection errors (``features``)     upper
======== ============================================ ============
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

from .approximation import atom_loo_residual, project_sample
from .criteria import CriterionConfig, Dictionary, Kind, dictionary_at
from .errors import InputError
from .kernels import NormBounds, Provenance, as_points
from .linalg import jacobi_eigen

SLACK = 1e-9


class BoundId(str, enum.Enum):
    T1a = "T1a"
    T1b = "T1b"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"
    T7 = "T7"
    T8_dist = "T8_dist"
    T8_approx = "T8_approx"
    T8_coh = "T8_coh"
    T8_babel = "T8_babel"
    T9 = "T9"
    MeanSharp = "MeanSharp"
    L1_low = "L1_low"
    L1_high = "L1_high"
    L2_low = "L2_low"
    L2_high = "L2_high"
    L3_low = "L3_low"
    L3_high = "L3_high"
    # the approximation criterion has no eigenvalue bound; always Vacuous
    APPROX_low = "APPROX_low"
    APPROX_high = "APPROX_high"


class Direction(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


class Status(str, enum.Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    VACUOUS = "vacuous"


@dataclass(frozen=True)
class BoundCertificate:
    """A bound value checked against a measured quantity.

    ``bound_value`` is ``None`` when the bound is inapplicable. ``informative``
    is false for lower bounds that are not positive (they hold trivially).
    """

    bound_id: BoundId
    subject: str
    bound_value: float | None
    measured_value: float
    direction: Direction
    status: Status
    provenance: Provenance
    informative: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id.value,
            "subject": self.subject,
            "bound_value": "inapplicable" if self.bound_value is None else self.bound_value,
            "measured_value": self.measured_value,
            "direction": self.direction.value,
            "status": self.status.value,
            "provenance": self.provenance.value,
            "informative": self.informative,
            "note": self.note,
        }


def certify(bound_id, subject, bound, measured, direction, provenance=Provenance.ANALYTIC, note=""):
    """Build a certificate, deciding its status with a ``1e-9`` slack."""
    measured = float(measured)
    if bound is None:
        status = Status.VACUOUS
    elif direction is Direction.UPPER:
        status = Status.HOLDS if measured <= bound + SLACK else Status.VIOLATED
    else:
        status = Status.HOLDS if measured >= bound - SLACK else Status.VIOLATED
    informative = not (direction is Direction.LOWER and bound is not None and bound <= 0)
    return BoundCertificate(
        BoundId(bound_id), subject, None if bound is None else float(bound), measured,
        direction, status, provenance, informative, note,
    )


# -- discarded samples -------------------------------------------------------


def discard_bound_distance(kxx: float, delta: float):
    """Both upper bounds for a sample the distance criterion rejected.

    Returns ``(delta**2, kxx - sqrt(kxx - delta**2))``; the second entry is
    ``None`` when ``kxx < delta**2``. For ``kxx > delta**2`` the second is the
    smaller one exactly when ``delta**2 > kxx - 1``.
    """
    d2 = delta * delta
    second = kxx - math.sqrt(kxx - d2) if kxx >= d2 else None
    return d2, second


def distance_discard_min(kxx: float, delta: float) -> float:
    first, second = discard_bound_distance(kxx, delta)
    return first if second is None else min(first, second)


def discard_bound_coherence(kxx: float, gamma: float) -> float:
    return kxx - gamma * math.sqrt(kxx)


def discard_bound_babel(kxx: float, gamma: float, m: int, R_sq: float) -> float:
    if m < 1:
        raise ValueError("dictionary size must be >= 1")
    return kxx - gamma / math.sqrt(m * (R_sq + gamma))


# -- atoms -------------------------------------------------------------------


def accept_bound_distance(kii: float, delta: float, m: int, nb: NormBounds):
    if m < 2:
        raise ValueError("acceptance bounds need m >= 2")
    d2 = delta * delta
    if nb.R_sq < d2 or kii < d2:
        return None
    R = math.sqrt(nb.R_sq)
    denom = nb.r_sq - (m - 2) * R * math.sqrt(nb.R_sq - d2)
    if not denom > 0:
        return None
    return kii - math.sqrt((kii - d2) * (m - 1) * nb.R_sq / denom)


def accept_bound_coherence(kii: float, gamma: float, m: int, nb: NormBounds):
    if m < 2:
        raise ValueError("acceptance bounds need m >= 2")
    denom = nb.r_sq - (m - 2) * gamma * nb.R_sq
    if not denom > 0:
        return None
    return kii - math.sqrt((m - 1) * gamma * gamma * nb.R_sq * kii / denom)


def accept_bound_babel(kii: float, gamma: float, nb: NormBounds):
    if not nb.r_sq > gamma:
        return None
    return kii - gamma / math.sqrt(nb.r_sq - gamma)


# -- eigenvalues ---------------------------------------------------------------


def gershgorin_bounds(c: CriterionConfig, m: int, nb: NormBounds):
    """Interval ``(low, high)`` holding every eigenvalue of the dictionary Gram.

    ``None`` for the approximation criterion (no such bound) and when the
    distance radius is undefined (``R^2 < delta^2`` with ``m > 1``).
    """
    if m < 1:
        raise ValueError("dictionary size must be >= 1")
    if c.kind is Kind.APPROXIMATION:
        return None
    if m == 1:
        return nb.r_sq, nb.R_sq
    if c.kind is Kind.DISTANCE:
        d2 = c.threshold ** 2
        if nb.R_sq < d2:
            return None
        radius = (m - 1) * math.sqrt(nb.R_sq) * math.sqrt(nb.R_sq - d2)
    elif c.kind is Kind.COHERENCE:
        radius = (m - 1) * c.threshold * nb.R_sq
    else:
        radius = c.threshold
    return nb.r_sq - radius, nb.R_sq + radius


_EIGEN_IDS = {
    Kind.DISTANCE: (BoundId.L1_low, BoundId.L1_high),
    Kind.COHERENCE: (BoundId.L2_low, BoundId.L2_high),
    Kind.BABEL: (BoundId.L3_low, BoundId.L3_high),
    Kind.APPROXIMATION: (BoundId.APPROX_low, BoundId.APPROX_high),
}


def sample_subject(index: int) -> str:
    return f"sample:{index}"


def atom_subject(index: int) -> str:
    return f"atom:{index}"


def discard_certificates(d_then: Dictionary, x, c: CriterionConfig, nb: NormBounds, subject: str,
                         offset: float = 0.0):
    """Certificates for one discarded sample against the dictionary that rejected it."""
    measured = project_sample(d_then, x).squared_residual + offset
    kxx = float(d_then.kernel.diag(x)[0])
    if c.kind is Kind.DISTANCE:
        first, second = discard_bound_distance(kxx, c.threshold)
        return [
            certify(BoundId.T1a, subject, first, measured, Direction.UPPER),
            certify(BoundId.T1b, subject, second, measured, Direction.UPPER),
        ]
    if c.kind is Kind.COHERENCE:
        return [certify(BoundId.T2, subject, discard_bound_coherence(kxx, c.threshold), measured, Direction.UPPER)]
    if c.kind is Kind.BABEL:
        bound = discard_bound_babel(kxx, c.threshold, d_then.size, nb.R_sq)
        return [certify(BoundId.T3, subject, bound, measured, Direction.UPPER, nb.provenance)]
    return []


def atom_certificates(d: Dictionary, i: int, c: CriterionConfig, nb: NormBounds, offset: float = 0.0):
    """Acceptance certificate for atom ``i`` of a dictionary with ``m >= 2`` atoms."""
    if c.kind is Kind.APPROXIMATION:
        return []
    measured = atom_loo_residual(d, i).squared_residual + offset
    kii = float(d.gram[i, i])
    subject = atom_subject(i)
    if c.kind is Kind.DISTANCE:
        return [certify(BoundId.T4, subject, accept_bound_distance(kii, c.threshold, d.size, nb),
                        measured, Direction.LOWER, nb.provenance)]
    if c.kind is Kind.COHERENCE:
        return [certify(BoundId.T5, subject, accept_bound_coherence(kii, c.threshold, d.size, nb),
                        measured, Direction.LOWER, nb.provenance)]
    note = ""
    if nb.unit:
        note = f"reference bound 1-gamma = {1.0 - c.threshold!r}"
    return [certify(BoundId.T6, subject, accept_bound_babel(kii, c.threshold, nb),
                    measured, Direction.LOWER, nb.provenance, note)]


def eigen_certificates(d: Dictionary, c: CriterionConfig, nb: NormBounds):
    values = jacobi_eigen(d.gram).values
    low_id, high_id = _EIGEN_IDS[c.kind]
    interval = gershgorin_bounds(c, d.size, nb)
    low, high = (None, None) if interval is None else interval
    note = "no eigenvalue bound for the approximation criterion" if c.kind is Kind.APPROXIMATION else ""
    return [
        certify(low_id, "gram", low, values[-1], Direction.LOWER, nb.provenance, note),
        certify(high_id, "gram", high, values[0], Direction.UPPER, nb.provenance, note),
    ]


def certify_dictionary(d: Dictionary, records, c: CriterionConfig, nb: NormBounds, samples,
                       perturb: Mapping[str, float] | None = None):
    """Certify every discard, acceptance and eigenvalue bound that applies.

    Parameters
    ----------
    d : Dictionary
        Final dictionary built from ``samples`` by criterion ``c``.
    records : list of AdmissionRecord
        One record per sample, in stream order.
    nb : NormBounds
        Diagonal bounds; empirical ones should cover all of ``samples``.
    perturb : mapping, optional
        Additive offsets applied to measured values, keyed by certificate
        subject. Only meant for detector self-checks.

    Returns
    -------
    list of BoundCertificate
        Discarded samples first (stream order), then atoms, then the two
        eigenvalue certificates.
    """
    X = as_points(samples)
    if len(records) != X.shape[0]:
        raise InputError(f"{len(records)} records for {X.shape[0]} samples")
    for pos, rec in enumerate(records):
        if rec.stream_index != pos:
            raise InputError(f"record {pos} refers to stream index {rec.stream_index}")
    accepted = tuple(r.stream_index for r in records if r.accepted)
    if accepted != tuple(d.origin_indices):
        raise InputError("accepted records do not match the dictionary atoms")
    perturb = perturb or {}

    certs = []
    prefixes = {}
    for rec in records:
        if rec.accepted:
            continue
        size = rec.dictionary_size
        if size not in prefixes:
            prefixes[size] = dictionary_at(d, rec)
        subject = sample_subject(rec.stream_index)
        certs += discard_certificates(prefixes[size], X[rec.stream_index], c, nb, subject,
                                      perturb.get(subject, 0.0))
    if d.size >= 2:
        for i in range(d.size):
            certs += atom_certificates(d, i, c, nb, perturb.get(atom_subject(i), 0.0))
    certs += eigen_certificates(d, c, nb)
    return certs


def count_violations(certs) -> int:
    return sum(cert.status is Status.VIOLATED for cert in certs)
