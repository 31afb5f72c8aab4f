"""Seeded simulation of experimental runs and empirical error rates.

Random streams
--------------
All draws come from numpy's PCG64 bit generator.  Each (word, detector) pair
gets its own stream, derived from the master seed as

    SeedSequence(seed, spawn_key=(k, detector_index))

with detector_index 0 for H and 1 for V.  Adding or removing words therefore
never perturbs the counts of any other word.  Poisson variates come from
``Generator.poisson``, which samples exactly at every mean (no normal
approximation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from .automaton import AutomatonSpec
from .errors import DomainError
from .photon import PhotonBudget, ThresholdSet, mean_counts, threshold
from .strategies import (
    Decision,
    DetectorCounts,
    Strategy,
    decide,
    error_probability,
)

__all__ = [
    "RNG_ID",
    "DEFAULT_RUN_REPETITIONS",
    "DEFAULT_ERROR_REPETITIONS",
    "RunConfig",
    "RunRecord",
    "EmpiricalReport",
    "word_stream",
    "simulate_counts",
    "simulate_runs",
    "empirical_error",
    "empirical_errors",
]

RNG_ID = f"numpy-{np.__version__}/PCG64/SeedSequence(seed, spawn_key=(k, detector))"
DEFAULT_RUN_REPETITIONS = 100
DEFAULT_ERROR_REPETITIONS = 10_000
_DETECTOR_INDEX = {"H": 0, "V": 1}
_SEED_MAX = 2**64 - 1


@dataclass(frozen=True)
class RunConfig:
    spec: AutomatonSpec
    budget: PhotonBudget
    k: int
    repetitions: int = DEFAULT_RUN_REPETITIONS
    seed: int = 0

    def __post_init__(self):
        if self.repetitions < 1:
            raise DomainError(f"repetitions must be >= 1, got {self.repetitions}")
        if not 0 <= self.seed <= _SEED_MAX:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.k < 0:
            raise DomainError(f"word length must be >= 0, got {self.k}")


@dataclass(frozen=True)
class RunRecord:
    rep_index: int
    counts: DetectorCounts
    decisions: Dict[Strategy, Decision]


@dataclass(frozen=True)
class EmpiricalReport:
    strategy: Strategy
    repetitions: int
    misaccept_rate: float
    reject_rate: float
    empirical: float
    standard_error: float
    analytic: float
    agrees: bool


def word_stream(seed: int, k: int, detector: str) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(k, _DETECTOR_INDEX[detector]))
    return np.random.Generator(np.random.PCG64(sequence))


def simulate_counts(config: RunConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-repetition (n_h, n_v) arrays for one word."""
    means = mean_counts(config.spec, config.k, config.budget)
    n_h = word_stream(config.seed, config.k, "H").poisson(means.mu_h, size=config.repetitions)
    n_v = word_stream(config.seed, config.k, "V").poisson(means.mu_v, size=config.repetitions)
    return n_h, n_v


def simulate_runs(config: RunConfig, thresholds: ThresholdSet | None = None) -> List[RunRecord]:
    if thresholds is None:
        thresholds = threshold(config.spec, config.budget)
    n_h, n_v = simulate_counts(config)
    records = []
    for rep, (h, v) in enumerate(zip(n_h.tolist(), n_v.tolist())):
        counts = DetectorCounts(h, v)
        records.append(
            RunRecord(rep, counts, {s: decide(s, counts, thresholds) for s in Strategy})
        )
    return records


def _verdicts(config: RunConfig, thresholds: ThresholdSet):
    n_h, n_v = simulate_counts(config)
    return n_h > thresholds.floor_h, n_v <= thresholds.floor_v


def _agrees(empirical: float, analytic: float, se: float, repetitions: int) -> bool:
    if se == 0.0:
        # degenerate sample: no event seen, or every run an event
        return abs(empirical - analytic) < 1.0 / repetitions
    return abs(empirical - analytic) < 3.0 * se


def empirical_errors(
    spec: AutomatonSpec,
    budget: PhotonBudget,
    repetitions: int = DEFAULT_ERROR_REPETITIONS,
    seed: int = 0,
) -> Dict[Strategy, EmpiricalReport]:
    """Simulate a^m and a^(k1) and compare error rates with the closed forms.

    The two words use k = m and k = m + 1; both draw from streams derived
    from the same master seed.  Equal priors are assumed.
    """
    thresholds = threshold(spec, budget)
    correct = RunConfig(spec, budget, spec.m, repetitions, seed)
    worst = RunConfig(spec, budget, spec.m + 1, repetitions, seed)
    h_correct, v_correct = _verdicts(correct, thresholds)
    h_worst, v_worst = _verdicts(worst, thresholds)

    outcomes = {
        # (accepted a^k1, rejected a^m); joint counts only unanimous verdicts
        Strategy.H: (h_worst, ~h_correct),
        Strategy.V: (v_worst, ~v_correct),
        Strategy.JOINT: (h_worst & v_worst, ~h_correct & ~v_correct),
    }
    reports = {}
    for strategy, (misaccepted, rejected) in outcomes.items():
        misaccept_rate = float(misaccepted.mean())
        reject_rate = float(rejected.mean())
        p_hat = 0.5 * (misaccept_rate + reject_rate)
        se = math.sqrt(p_hat * (1.0 - p_hat) / repetitions)
        analytic = error_probability(spec, budget, strategy)
        reports[strategy] = EmpiricalReport(
            strategy=strategy,
            repetitions=repetitions,
            misaccept_rate=misaccept_rate,
            reject_rate=reject_rate,
            empirical=p_hat,
            standard_error=se,
            analytic=analytic,
            agrees=_agrees(p_hat, analytic, se, repetitions),
        )
    return reports


def empirical_error(
    spec: AutomatonSpec,
    budget: PhotonBudget,
    strategy,
    repetitions: int = DEFAULT_ERROR_REPETITIONS,
    seed: int = 0,
) -> EmpiricalReport:
    return empirical_errors(spec, budget, repetitions, seed)[Strategy.parse(strategy)]
