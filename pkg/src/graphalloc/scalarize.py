"""Preference-conditioned scalarization of objective vectors.

All four scalarizers consume objectives normalized into [0, 1] so that the
utopia point is exactly the all-ones vector; higher scalar values are always
better. Normalization divides by a running per-component maximum that only
ever grows, so a stream of evaluations can be normalized online and two
streams can be merged losslessly.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidSpec,
    NegativeObjective,
    NegativeTheta,
    NonPositiveMu,
)

__all__ = [
    "Normalizer",
    "merge_normalizers",
    "ScalarizationMethod",
    "ScalarizerSpec",
    "scalarize",
    "DEFAULT_MU",
    "DEFAULT_THETA",
]

# Floor on the running maximum; keeps division well-defined before the first
# non-zero objective value arrives.
RUNNING_FLOOR = 1e-6

DEFAULT_MU = 0.1
DEFAULT_THETA = 5.0


class Normalizer:
    """Tracks a running per-component maximum and maps J to J / max.

    The running maximum starts at a small positive floor and is updated
    before dividing, so normalized values never exceed 1 and a later merge of
    two normalizers (componentwise maximum) is associative, commutative, and
    idempotent.
    """

    __slots__ = ("running_ideal",)

    def __init__(self, running_ideal: np.ndarray):
        self.running_ideal = np.asarray(running_ideal, dtype=np.float64).copy()

    @classmethod
    def fresh(cls, num_objectives: int) -> "Normalizer":
        if num_objectives < 1:
            raise DimensionMismatch("need at least one objective")
        return cls(np.full(num_objectives, RUNNING_FLOOR))

    def copy(self) -> "Normalizer":
        return Normalizer(self.running_ideal)

    def _check(self, objectives) -> np.ndarray:
        j = np.asarray(objectives, dtype=np.float64)
        if j.shape != self.running_ideal.shape:
            raise DimensionMismatch(
                f"objective vector has shape {j.shape}, normalizer tracks "
                f"{self.running_ideal.shape}"
            )
        if np.any(j < 0):
            raise NegativeObjective(f"objectives must be non-negative, got {j}")
        return j

    def normalize(self, objectives) -> np.ndarray:
        """Absorb one objective vector into the running maximum, then scale it."""
        j = self._check(objectives)
        np.maximum(self.running_ideal, j, out=self.running_ideal)
        return j / self.running_ideal

    def peek(self, objectives) -> np.ndarray:
        """Scale against the running maximum as if it had absorbed this vector,
        without mutating. Used to compare candidate actions fairly."""
        j = self._check(objectives)
        return j / np.maximum(self.running_ideal, j)

    def to_dict(self) -> dict:
        return {"running_ideal": [float(v) for v in self.running_ideal]}

    @classmethod
    def from_dict(cls, payload: dict) -> "Normalizer":
        return cls(np.asarray(payload["running_ideal"], dtype=np.float64))


def merge_normalizers(first: Normalizer, second: Normalizer) -> Normalizer:
    """Componentwise maximum of the two running maxima."""
    if first.running_ideal.shape != second.running_ideal.shape:
        raise DimensionMismatch("cannot merge normalizers of different widths")
    return Normalizer(np.maximum(first.running_ideal, second.running_ideal))


class ScalarizationMethod(enum.Enum):
    WEIGHTED_SUM = "weighted-sum"
    TCHEBYCHEFF = "tchebycheff"
    SMOOTH_TCHEBYCHEFF = "smooth-tchebycheff"
    PBI = "pbi"


@dataclass(frozen=True)
class ScalarizerSpec:
    """A scalarization method plus its hyperparameters.

    ``mu`` only applies to smooth Tchebycheff (smoothing temperature) and
    ``theta`` only to PBI (distance penalty); both carry benchmark defaults.
    """

    method: ScalarizationMethod
    mu: float = DEFAULT_MU
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if self.method is ScalarizationMethod.SMOOTH_TCHEBYCHEFF and self.mu <= 0:
            raise NonPositiveMu(f"mu must be positive, got {self.mu}")
        if self.method is ScalarizationMethod.PBI and self.theta < 0:
            raise NegativeTheta(f"theta must be non-negative, got {self.theta}")

    @classmethod
    def from_str(cls, name: str, mu: float = DEFAULT_MU, theta: float = DEFAULT_THETA) -> "ScalarizerSpec":
        try:
            method = ScalarizationMethod(name)
        except ValueError:
            valid = ", ".join(m.value for m in ScalarizationMethod)
            raise InvalidSpec(f"unknown scalarizer {name!r}; valid: {valid}") from None
        return cls(method, mu=mu, theta=theta)

    def describe(self) -> dict:
        payload: dict = {"method": self.method.value}
        if self.method is ScalarizationMethod.SMOOTH_TCHEBYCHEFF:
            payload["mu"] = self.mu
        if self.method is ScalarizationMethod.PBI:
            payload["theta"] = self.theta
        return payload


def scalarize(normalized, preference, spec: ScalarizerSpec) -> float:
    """Scalar utility of a normalized objective vector under a preference.

    Inputs live in [0, 1] with the utopia point at all ones; every method is
    oriented so larger is better and the utopia point attains the maximum.
    """
    j_hat = np.asarray(normalized, dtype=np.float64)
    w = np.asarray(preference, dtype=np.float64)
    if j_hat.shape != w.shape or j_hat.ndim != 1:
        raise DimensionMismatch(
            f"normalized objectives {j_hat.shape} and preference {w.shape} must be "
            "vectors of equal length"
        )

    if spec.method is ScalarizationMethod.WEIGHTED_SUM:
        return float(np.dot(w, j_hat))

    gaps = 1.0 - j_hat
    if spec.method is ScalarizationMethod.TCHEBYCHEFF:
        return float(-np.max(w * gaps))

    if spec.method is ScalarizationMethod.SMOOTH_TCHEBYCHEFF:
        costs = w * gaps / spec.mu
        # log-sum-exp, stabilized; exact -mu*log(N) at the utopia point
        peak = float(np.max(costs))
        return float(-spec.mu * (peak + np.log(np.sum(np.exp(costs - peak)))))

    # PBI: projection distance along w plus penalized orthogonal distance,
    # both measured from the utopia point, negated so larger is better.
    diff = 1.0 - j_hat
    w_norm = float(np.linalg.norm(w))
    if w_norm == 0.0:
        raise DimensionMismatch("preference vector has zero norm")
    d1 = float(abs(np.dot(diff, w)) / w_norm)
    d2 = float(np.linalg.norm(diff - d1 * w / w_norm))
    return -(d1 + spec.theta * d2)
