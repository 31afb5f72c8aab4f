"""Photonic measure-once quantum finite automaton for unary periodic languages."""

__version__ = "0.1.0"

from .automaton import (  # noqa: E402
    AutomatonSpec,
    CutPoint,
    QfaState,
    Variant,
    accept_probability,
    cut_point,
    evolve,
    unitary_matrix,
)
from .errors import DomainError, SearchCapError  # noqa: E402
from .photon import (  # noqa: E402
    Detector,
    MeanCounts,
    PhotonBudget,
    ThresholdSet,
    binary_regime_min_photons,
    detection_frequency,
    ideal_min_photons,
    mean_counts,
    threshold,
    threshold_frequency,
)
from .special import poisson_cdf, poisson_pmf, regularized_gamma_q  # noqa: E402
from .strategies import (  # noqa: E402
    Decision,
    DetectorCounts,
    ErrorProbabilities,
    Strategy,
    confusion_matrix,
    decide,
    error_probabilities,
    error_probability_h,
    error_probability_joint,
    error_probability_v,
)
