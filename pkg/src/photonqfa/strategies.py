"""Decision rules on detector counts and their analytic error probabilities.

H strategy: accept when the H count lies strictly above the floor of its
threshold.  V strategy: accept when the V count lies at or below the floor of
its threshold.  These boundaries are exactly the summation limits of the
closed-form error probabilities, so simulated decisions and analytic errors
describe the same rule.

Joint strategy: both detectors are read.  A verdict is conclusive when the two
single-detector rules agree; ``Decision.accept`` is their AND.  The joint
error probability counts a mistake only when both detectors agree on the
wrong verdict, so a disagreement is an inconclusive run rather than an error.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from scipy import integrate

from .automaton import AutomatonSpec
from .errors import DomainError
from .photon import (
    Detector,
    PhotonBudget,
    ThresholdSet,
    _check_detector,
    binary_regime_min_photons,
    hypothesis_means,
    threshold,
)
from .special import poisson_cdf_sf

__all__ = [
    "Strategy",
    "DetectorCounts",
    "Decision",
    "Confusion",
    "ErrorProbabilities",
    "EQUAL_PRIORS",
    "decide",
    "confusion_matrix",
    "error_probability_h",
    "error_probability_v",
    "error_probability_v_integral",
    "error_probability_joint",
    "error_probability",
    "error_probabilities",
    "binary_valid",
]

# (p(a^k1), p(a^m))
EQUAL_PRIORS = (0.5, 0.5)


class Strategy(enum.Enum):
    H = "H"
    V = "V"
    JOINT = "Joint"

    @classmethod
    def parse(cls, value) -> "Strategy":
        if isinstance(value, cls):
            return value
        for member in cls:
            if member.value.lower() == str(value).lower():
                return member
        raise DomainError(f"unknown strategy {value!r}")


@dataclass(frozen=True)
class DetectorCounts:
    n_h: int
    n_v: int

    def __post_init__(self):
        for name in ("n_h", "n_v"):
            value = getattr(self, name)
            if value < 0 or int(value) != value:
                raise DomainError(f"{name} must be a non-negative integer, got {value!r}")


@dataclass(frozen=True)
class Decision:
    accept: bool
    per_detector: Optional[Tuple[bool, bool]] = None

    @property
    def conclusive(self) -> bool:
        """False only for a joint decision whose detectors disagree."""
        return self.per_detector is None or self.per_detector[0] == self.per_detector[1]


@dataclass(frozen=True)
class Confusion:
    """Single-detector verdict probabilities for the two hypotheses."""

    accept_given_correct: float
    reject_given_correct: float
    accept_given_worst: float
    reject_given_worst: float


@dataclass(frozen=True)
class ErrorProbabilities:
    p_h: float
    p_v: float
    p_joint: float
    priors: Tuple[float, float] = EQUAL_PRIORS
    binary_valid: Optional[dict] = None

    def __getitem__(self, strategy) -> float:
        strategy = Strategy.parse(strategy)
        return {Strategy.H: self.p_h, Strategy.V: self.p_v, Strategy.JOINT: self.p_joint}[strategy]


def accepts(detector: Detector, count: int, thresholds: ThresholdSet) -> bool:
    if detector is Detector.H:
        return count > thresholds.floor_h
    return count <= thresholds.floor_v


def decide(strategy, counts: DetectorCounts, thresholds: ThresholdSet) -> Decision:
    strategy = Strategy.parse(strategy)
    if strategy is Strategy.H:
        return Decision(accepts(Detector.H, counts.n_h, thresholds))
    if strategy is Strategy.V:
        return Decision(accepts(Detector.V, counts.n_v, thresholds))
    h = accepts(Detector.H, counts.n_h, thresholds)
    v = accepts(Detector.V, counts.n_v, thresholds)
    return Decision(h and v, (h, v))


def _check_priors(priors) -> Tuple[float, float]:
    p_worst, p_correct = priors
    if p_worst < 0 or p_correct < 0 or abs(p_worst + p_correct - 1.0) > 1e-12:
        raise DomainError(f"priors must be non-negative and sum to 1, got {priors!r}")
    return float(p_worst), float(p_correct)


def confusion_matrix(spec: AutomatonSpec, budget: PhotonBudget, detector) -> Confusion:
    detector = _check_detector(detector)
    budget.require_signal()
    floor = threshold(spec, budget).floor(detector)
    mu_correct, mu_worst = hypothesis_means(spec, budget, detector)
    below_correct, above_correct = poisson_cdf_sf(floor, mu_correct)
    below_worst, above_worst = poisson_cdf_sf(floor, mu_worst)
    if detector is Detector.H:
        return Confusion(above_correct, below_correct, above_worst, below_worst)
    return Confusion(below_correct, above_correct, below_worst, above_worst)


def _single(spec, budget, detector, priors) -> float:
    p_worst, p_correct = _check_priors(priors)
    c = confusion_matrix(spec, budget, detector)
    return p_worst * c.accept_given_worst + p_correct * c.reject_given_correct


def error_probability_h(spec: AutomatonSpec, budget: PhotonBudget, priors=EQUAL_PRIORS) -> float:
    return _single(spec, budget, Detector.H, priors)


def error_probability_v(spec: AutomatonSpec, budget: PhotonBudget, priors=EQUAL_PRIORS) -> float:
    return _single(spec, budget, Detector.V, priors)


def error_probability_v_integral(spec: AutomatonSpec, budget: PhotonBudget) -> float:
    """V-strategy error at equal priors from the gamma-density integral.

    1/2 [1 - int_{mu_dc}^{mu_k1} e^-t t^n / n! dt] with n the floored
    V threshold.  Independent of the incomplete gamma code path.
    """
    budget.require_signal()
    n = threshold(spec, budget).floor_v
    lower, upper = hypothesis_means(spec, budget, Detector.V)
    log_norm = math.lgamma(n + 1)

    def density(t):
        if t <= 0.0:
            return 1.0 if n == 0 else 0.0
        return math.exp(n * math.log(t) - t - log_norm)

    points = [float(n)] if lower < n < upper else None
    mass, _ = integrate.quad(density, lower, upper, points=points, epsabs=1e-14, epsrel=1e-13, limit=200)
    return 0.5 * (1.0 - mass)


def error_probability_joint(spec: AutomatonSpec, budget: PhotonBudget, priors=EQUAL_PRIORS) -> float:
    p_worst, p_correct = _check_priors(priors)
    h = confusion_matrix(spec, budget, Detector.H)
    v = confusion_matrix(spec, budget, Detector.V)
    return (
        p_worst * h.accept_given_worst * v.accept_given_worst
        + p_correct * h.reject_given_correct * v.reject_given_correct
    )


def error_probability(spec: AutomatonSpec, budget: PhotonBudget, strategy, priors=EQUAL_PRIORS) -> float:
    strategy = Strategy.parse(strategy)
    if strategy is Strategy.H:
        return error_probability_h(spec, budget, priors)
    if strategy is Strategy.V:
        return error_probability_v(spec, budget, priors)
    return error_probability_joint(spec, budget, priors)


@functools.lru_cache(maxsize=4096)
def _binary_minimum(m: int, mean_dark: float, detector: Detector) -> int:
    return binary_regime_min_photons(AutomatonSpec(m), mean_dark, detector)


def binary_valid(spec: AutomatonSpec, budget: PhotonBudget, strategy) -> bool:
    """Whether Nc reaches the binary-regime minimum for the detectors used.

    For m = 2 there are only two residue classes, so the problem is exactly
    binary for every budget.
    """
    strategy = Strategy.parse(strategy)
    if spec.m == 2:
        return True
    detectors = {
        Strategy.H: (Detector.H,),
        Strategy.V: (Detector.V,),
        Strategy.JOINT: (Detector.H, Detector.V),
    }[strategy]
    return all(
        budget.mean_signal >= _binary_minimum(spec.m, float(budget.mean_dark), d) for d in detectors
    )


def error_probabilities(spec: AutomatonSpec, budget: PhotonBudget, priors=EQUAL_PRIORS) -> ErrorProbabilities:
    p_worst, p_correct = priors = _check_priors(priors)
    h = confusion_matrix(spec, budget, Detector.H)
    v = confusion_matrix(spec, budget, Detector.V)
    return ErrorProbabilities(
        p_h=p_worst * h.accept_given_worst + p_correct * h.reject_given_correct,
        p_v=p_worst * v.accept_given_worst + p_correct * v.reject_given_correct,
        p_joint=p_worst * h.accept_given_worst * v.accept_given_worst
        + p_correct * h.reject_given_correct * v.reject_given_correct,
        priors=priors,
        binary_valid={s.value: binary_valid(spec, budget, s) for s in Strategy},
    )
