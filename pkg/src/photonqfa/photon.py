"""Photodetection model: Poisson counts with dark counts, thresholds and budgets.

For a word a^k the H and V detectors see independent Poisson counts with means

    mu_k^H = Nc cos^2(k theta_m) + Ndc
    mu_k^V = Nc sin^2(k theta_m) + Ndc

(the convolution of a signal Poisson with a dark-count Poisson is again a
Poisson with the summed mean).  The decision thresholds sit where the count
distributions of a^m and of the worst-case word a^(k1), k1 = 1 mod m, cross.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .automaton import AutomatonSpec, _cos2_residue, _sin2_residue, _check_word
from .errors import DomainError, SearchCapError
from .special import poisson_cdf, poisson_pmf, poisson_sf

__all__ = [
    "Detector",
    "PhotonBudget",
    "MeanCounts",
    "ThresholdSet",
    "CountDistribution",
    "DEFAULT_SEARCH_CAP",
    "mean_counts",
    "hypothesis_means",
    "threshold",
    "threshold_eta_form",
    "ideal_min_photons",
    "ideal_condition",
    "binary_regime_min_photons",
    "binary_regime_condition",
    "detection_frequency",
    "threshold_frequency",
]

DEFAULT_SEARCH_CAP = 10**7


class Detector(enum.Enum):
    H = "H"
    V = "V"


@dataclass(frozen=True)
class PhotonBudget:
    """Mean signal photons per run and mean dark counts per detector per run."""

    mean_signal: float
    mean_dark: float = 0.0

    def __post_init__(self):
        if not self.mean_signal >= 0:
            raise DomainError(f"mean_signal must be >= 0, got {self.mean_signal!r}")
        if not self.mean_dark >= 0:
            raise DomainError(f"mean_dark must be >= 0, got {self.mean_dark!r}")

    @property
    def eta(self) -> float:
        if self.mean_signal == 0:
            raise DomainError("eta is undefined for mean_signal = 0")
        return self.mean_dark / self.mean_signal

    def require_signal(self) -> None:
        if self.mean_signal <= 0:
            raise DomainError("mean_signal must be > 0")


@dataclass(frozen=True)
class MeanCounts:
    mu_h: float
    mu_v: float
    k: int


@dataclass(frozen=True)
class ThresholdSet:
    n_th_h: float
    n_th_v: float
    floor_h: int = field(init=False)
    floor_v: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "floor_h", math.floor(self.n_th_h))
        object.__setattr__(self, "floor_v", math.floor(self.n_th_v))

    def floor(self, detector: Detector) -> int:
        return self.floor_h if detector is Detector.H else self.floor_v

    def value(self, detector: Detector) -> float:
        return self.n_th_h if detector is Detector.H else self.n_th_v


@dataclass(frozen=True)
class CountDistribution:
    """Poisson law of the counts registered by one detector."""

    mu: float

    def pmf(self, n: int) -> float:
        return poisson_pmf(n, self.mu)

    def cdf(self, n: int) -> float:
        return poisson_cdf(n, self.mu)

    def sf(self, n: int) -> float:
        return poisson_sf(n, self.mu)


def mean_counts(spec: AutomatonSpec, k: int, budget: PhotonBudget) -> MeanCounts:
    k = _check_word(k)
    nc, ndc = budget.mean_signal, budget.mean_dark
    return MeanCounts(
        mu_h=nc * _cos2_residue(k, spec.m) + ndc,
        mu_v=nc * _sin2_residue(k, spec.m) + ndc,
        k=k,
    )


def hypothesis_means(spec: AutomatonSpec, budget: PhotonBudget, detector: Detector) -> tuple[float, float]:
    """(mean for a^m, mean for a^(k1)) at one detector."""
    correct = mean_counts(spec, spec.m, budget)
    worst = mean_counts(spec, spec.m + 1, budget)
    if detector is Detector.H:
        return correct.mu_h, worst.mu_h
    return correct.mu_v, worst.mu_v


def _crossing(mu_a: float, mu_b: float) -> float:
    """Count at which Poi(N; mu_a) == Poi(N; mu_b)."""
    lo, hi = min(mu_a, mu_b), max(mu_a, mu_b)
    if lo == hi:
        raise DomainError("the two hypotheses have identical mean counts")
    if lo == 0.0:
        # limit of (hi - lo) / (ln hi - ln lo) as lo -> 0
        return 0.0
    return (hi - lo) / (math.log(hi) - math.log(lo))


def threshold(spec: AutomatonSpec, budget: PhotonBudget) -> ThresholdSet:
    """Exact pmf-intersection thresholds for both detectors."""
    budget.require_signal()
    h_m, h_k1 = hypothesis_means(spec, budget, Detector.H)
    v_m, v_k1 = hypothesis_means(spec, budget, Detector.V)
    return ThresholdSet(n_th_h=_crossing(h_m, h_k1), n_th_v=_crossing(v_m, v_k1))


def threshold_eta_form(spec: AutomatonSpec, budget: PhotonBudget) -> ThresholdSet:
    """Same thresholds written through eta = Ndc / Nc."""
    budget.require_signal()
    eta = budget.eta
    nc = budget.mean_signal
    c2, s2 = spec.cos2, spec.sin2
    denom_h = math.log(1.0 + eta) - math.log(c2 + eta) if c2 + eta > 0 else math.inf
    denom_v = math.log(s2 + eta) - math.log(eta) if eta > 0 else math.inf
    return ThresholdSet(n_th_h=nc * s2 / denom_h, n_th_v=nc * s2 / denom_v)


def _check_detector(detector) -> Detector:
    if isinstance(detector, str):
        try:
            return Detector(detector.upper())
        except ValueError:
            raise DomainError(f"unknown detector {detector!r}") from None
    return detector


# Fuzz for floor() of products that are mathematically integers, e.g.
# Nc * cos^2(pi/3) with cos^2(pi/3) = 0.25 + 1 ulp.
_FLOOR_SNAP = 1e-9


def _snap_floor(x: float) -> int:
    r = round(x)
    if abs(x - r) <= _FLOOR_SNAP * max(1.0, abs(x)):
        return int(r)
    return math.floor(x)


def ideal_condition(spec: AutomatonSpec, detector, nc: int) -> bool:
    """Noiseless zero-error condition on the integer parts of the thresholds."""
    detector = _check_detector(detector)
    if detector is Detector.H:
        c2 = spec.cos2
        return _snap_floor(nc * (1.0 + c2) / 2.0) > _snap_floor(nc * c2)
    s2 = spec.sin2
    return _snap_floor(nc * s2 / 2.0) < _snap_floor(nc * s2)


def _scan(condition, cap: int) -> int:
    for nc in range(1, cap + 1):
        if condition(nc):
            return nc
    raise SearchCapError(f"no photon number <= {cap} satisfies the condition")


def ideal_min_photons(spec: AutomatonSpec, detector, cap: int = DEFAULT_SEARCH_CAP) -> int:
    """Least integer Nc for which the noiseless floor inequality holds."""
    detector = _check_detector(detector)
    return _scan(lambda nc: ideal_condition(spec, detector, nc), cap)


def binary_regime_condition(spec: AutomatonSpec, mean_dark: float, detector, nc: float) -> bool:
    """Two-sigma separation between a^(k2) and a^m at one detector."""
    detector = _check_detector(detector)
    if spec.m < 3:
        raise DomainError("the binary regime needs m >= 3 (k2 = 2 mod m is otherwise in L_m)")
    if not mean_dark >= 0:
        raise DomainError(f"mean_dark must be >= 0, got {mean_dark!r}")
    budget = PhotonBudget(nc, mean_dark)
    correct = mean_counts(spec, spec.m, budget)
    second = mean_counts(spec, spec.m + 2, budget)
    if detector is Detector.H:
        return second.mu_h + 2.0 * math.sqrt(second.mu_h) < correct.mu_h - 2.0 * math.sqrt(correct.mu_h)
    return correct.mu_v + 2.0 * math.sqrt(correct.mu_v) < second.mu_v - 2.0 * math.sqrt(second.mu_v)


def binary_regime_min_photons(
    spec: AutomatonSpec, mean_dark: float, detector, cap: int = DEFAULT_SEARCH_CAP
) -> int:
    """Least integer Nc making the problem effectively a^m versus a^(k1)."""
    detector = _check_detector(detector)
    binary_regime_condition(spec, mean_dark, detector, 1)  # argument validation
    return _scan(lambda nc: binary_regime_condition(spec, mean_dark, detector, nc), cap)


def detection_frequency(counts: int, budget: PhotonBudget) -> float:
    budget.require_signal()
    if counts < 0:
        raise DomainError(f"counts must be >= 0, got {counts!r}")
    return counts / budget.mean_signal


def threshold_frequency(spec: AutomatonSpec, detector) -> float:
    detector = _check_detector(detector)
    if detector is Detector.H:
        return (1.0 + spec.cos2) / 2.0
    return spec.sin2 / 2.0
