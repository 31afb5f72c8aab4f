"""Poisson probabilities and the regularized incomplete gamma function.

The incomplete gamma ratios are evaluated with the classical power series for
x < a + 1 and a modified-Lentz continued fraction otherwise.  In each region
the ratio that is small is computed directly and the other one is taken as the
complement, so neither P nor Q suffers cancellation.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = [
    "poisson_pmf",
    "poisson_logpmf",
    "poisson_cdf",
    "poisson_sf",
    "poisson_cdf_sf",
    "regularized_gamma_p",
    "regularized_gamma_q",
]

EPS = 2.220446049250313e-16
FPMIN = 1e-300
MAX_ITER = 100_000
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _log1pmx(t: float, ratio: float) -> float:
    """log(1 + t) - t where ratio == 1 + t, accurate for small |t|."""
    if abs(t) > 0.1:
        # log of the ratio itself: log1p(t) is ill-conditioned as t -> -1
        return math.log(ratio) - t
    # alternating series -t^2/2 + t^3/3 - ...
    total = 0.0
    power = t
    n = 1
    while True:
        n += 1
        power *= -t
        term = power / n
        total += term
        if abs(term) <= EPS * abs(total):
            return total


def _stirling_error(a: float) -> float:
    """lgamma(a) minus its Stirling approximation (a - 1/2) ln a - a + ln sqrt(2 pi)."""
    if a < 10.0:
        return math.lgamma(a) - ((a - 0.5) * math.log(a) - a + _HALF_LOG_2PI)
    inv = 1.0 / a
    inv2 = inv * inv
    return inv * (
        1.0 / 12.0
        - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0)))
    )


def _log_prefactor(a: float, x: float) -> float:
    """log(x^a e^-x / Gamma(a)) without the cancellation of the naive form."""
    t = (x - a) / a
    return a * _log1pmx(t, x / a) + 0.5 * math.log(a) - _HALF_LOG_2PI - _stirling_error(a)


def _series_p(a: float, x: float) -> float:
    ap = a
    term = total = 1.0 / a
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            return total * math.exp(_log_prefactor(a, x))
    raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _continued_fraction_q(a: float, x: float) -> float:
    b = x + 1.0 - a
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h * math.exp(_log_prefactor(a, x))
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")


def _check_gamma_args(a: float, x: float) -> None:
    if not a > 0:
        raise DomainError(f"incomplete gamma requires a > 0, got {a!r}")
    if not x >= 0:
        raise DomainError(f"incomplete gamma requires x >= 0, got {x!r}")


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return 1.0 - _series_p(a, x)
    return _continued_fraction_q(a, x)


def regularized_gamma_p(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x) = 1 - Q(a, x)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _series_p(a, x)
    return 1.0 - _continued_fraction_q(a, x)


def _check_poisson_args(n, mu) -> int:
    if not mu >= 0:
        raise DomainError(f"Poisson mean must be >= 0, got {mu!r}")
    if n < 0:
        raise DomainError(f"count must be >= 0, got {n!r}")
    return int(n)


def poisson_logpmf(n: int, mu: float) -> float:
    n = _check_poisson_args(n, mu)
    if mu == 0.0:
        return 0.0 if n == 0 else -math.inf
    return n * math.log(mu) - mu - math.lgamma(n + 1)


def poisson_pmf(n: int, mu: float) -> float:
    """Poi(n; mu) = mu^n e^-mu / n!."""
    n = _check_poisson_args(n, mu)
    if mu == 0.0:
        return 1.0 if n == 0 else 0.0
    if n > 30 or mu > 30:
        return math.exp(poisson_logpmf(n, mu))
    return mu**n * math.exp(-mu) / math.factorial(n)


def poisson_cdf(n: int, mu: float) -> float:
    """P(N <= n) for N ~ Poisson(mu), via Q(n + 1, mu)."""
    n = _check_poisson_args(n, mu)
    if mu == 0.0:
        return 1.0
    return regularized_gamma_q(n + 1.0, mu)


def poisson_sf(n: int, mu: float) -> float:
    """P(N > n) for N ~ Poisson(mu), via P(n + 1, mu)."""
    n = _check_poisson_args(n, mu)
    if mu == 0.0:
        return 0.0
    return regularized_gamma_p(n + 1.0, mu)


def poisson_cdf_sf(n: int, mu: float) -> tuple[float, float]:
    """(P(N <= n), P(N > n)) from a single incomplete gamma evaluation."""
    n = _check_poisson_args(n, mu)
    if mu == 0.0:
        return 1.0, 0.0
    a = n + 1.0
    if mu < a + 1.0:
        p = _series_p(a, mu)
        return 1.0 - p, p
    q = _continued_fraction_q(a, mu)
    return q, 1.0 - q
