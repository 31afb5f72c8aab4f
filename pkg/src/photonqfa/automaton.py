"""Measure-once one-way quantum finite automaton for the unary language L_m.

L_m = {a^k : k mod m == 0}.  The automaton starts in |H>, applies the
rotation U_m = exp(-i theta_m sigma_y) once per input symbol and is measured
once at the end.  Two variants are provided: A1 projects onto |H>, A2 accepts
on the complement of |V>.  Both share the acceptance law cos^2(k theta_m).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Variant",
    "AutomatonSpec",
    "QfaState",
    "CutPoint",
    "unitary_matrix",
    "evolve",
    "accept_probability",
    "cut_point",
    "in_language",
]


class Variant(enum.Enum):
    A1 = "A1-H-projector"
    A2 = "A2-V-complement"


@dataclass(frozen=True)
class AutomatonSpec:
    m: int
    variant: Variant = Variant.A1

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, (int, np.integer)):
            raise DomainError(f"m must be an integer, got {self.m!r}")
        if self.m < 2:
            raise DomainError(f"m must be >= 2, got {self.m}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def theta_m(self) -> float:
        return math.pi / self.m

    @property
    def cos2(self) -> float:
        """Erroneous acceptance probability of the worst-case word a^(k1)."""
        return _cos2_residue(1, self.m)

    @property
    def sin2(self) -> float:
        return _sin2_residue(1, self.m)


@dataclass(frozen=True)
class QfaState:
    amp_h: float
    amp_v: float

    def __post_init__(self):
        norm = self.amp_h**2 + self.amp_v**2
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"state is not normalised (norm^2 = {norm!r})")

    def as_vector(self) -> np.ndarray:
        return np.array([self.amp_h, self.amp_v])


@dataclass(frozen=True)
class CutPoint:
    lam: float
    rho: float


def _check_word(k) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise DomainError(f"word length must be an integer, got {k!r}")
    if k < 0:
        raise DomainError(f"word length must be >= 0, got {k}")
    return int(k)


def _angle(k: int, m: int) -> float:
    # reduce mod 2m first: cos/sin of k*pi/m lose precision for huge k
    return (k % (2 * m)) * math.pi / m


def _cos2_residue(k: int, m: int) -> float:
    if k % m == 0:
        return 1.0
    if 2 * (k % m) == m:
        return 0.0
    return math.cos(_angle(k, m)) ** 2


def _sin2_residue(k: int, m: int) -> float:
    if k % m == 0:
        return 0.0
    if 2 * (k % m) == m:
        return 1.0
    return math.sin(_angle(k, m)) ** 2


def unitary_matrix(spec: AutomatonSpec) -> np.ndarray:
    """Return the real 2x2 rotation applied per input symbol."""
    c, s = math.cos(spec.theta_m), math.sin(spec.theta_m)
    return np.array([[c, s], [-s, c]])


def evolve(spec: AutomatonSpec, k: int) -> QfaState:
    """State cos(k theta)|H> + sin(k theta)|V> after reading a^k.

    The sign convention follows the polarisation-rotator picture; it differs
    from U_m^k |H> by a reflection of the V amplitude, which leaves every
    measurement probability unchanged.
    """
    k = _check_word(k)
    angle = _angle(k, spec.m)
    return QfaState(math.cos(angle), math.sin(angle))


def accept_probability(spec: AutomatonSpec, k: int) -> float:
    """Probability that a^k is accepted.

    A1 reads |<H|U^k|H>|^2 and A2 reads 1 - |<V|U^k|H>|^2.  Since
    I - P_V == P_H both are evaluated through the same cos^2 expression so
    the two variants agree bit for bit.
    """
    return _cos2_residue(_check_word(k), spec.m)


def in_language(spec: AutomatonSpec, k: int) -> bool:
    return _check_word(k) % spec.m == 0


def cut_point(spec: AutomatonSpec) -> CutPoint:
    c2 = spec.cos2
    return CutPoint(lam=(1.0 + c2) / 2.0, rho=(1.0 - c2) / 2.0)
