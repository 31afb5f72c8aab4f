import math
from fractions import Fraction

import mpmath
import pytest

from photonqfa.errors import DomainError
from photonqfa.special import (
    poisson_cdf,
    poisson_cdf_sf,
    poisson_logpmf,
    poisson_pmf,
    poisson_sf,
    regularized_gamma_p,
    regularized_gamma_q,
)

mpmath.mp.dps = 40


def summed_cdf(n, mu):
    """Direct summation oracle in plain floats."""
    term = math.exp(-mu)
    total = term
    for j in range(1, n + 1):
        term *= mu / j
        total += term
    return total


def exact_pmf(n, mu):
    return float(mpmath.exp(-mpmath.mpf(mu)) * mpmath.mpf(mu) ** n / mpmath.factorial(n))


def test_pmf_examples():
    assert poisson_pmf(0, 0) == 1.0
    assert poisson_pmf(3, 0) == 0.0
    assert poisson_pmf(0, 1) == pytest.approx(math.exp(-1), rel=1e-15)
    assert poisson_pmf(100, 100) == pytest.approx(0.039861, abs=1e-6)


def test_pmf_small_scale_matches_rational_arithmetic():
    # mu^n e^-mu / n! with the rational part exact
    for n in range(0, 25):
        for mu in (1, 2, 7):
            rational = Fraction(mu) ** n / math.factorial(n)
            assert poisson_pmf(n, mu) == pytest.approx(float(rational) * math.exp(-mu), rel=1e-13)


@pytest.mark.parametrize("n,mu", [(100, 100), (31, 5.5), (5, 31.0), (2000, 2100.0), (0, 700.0)])
def test_pmf_log_space(n, mu):
    assert poisson_pmf(n, mu) == pytest.approx(exact_pmf(n, mu), rel=1e-11)


def test_logpmf_degenerate():
    assert poisson_logpmf(0, 0) == 0.0
    assert poisson_logpmf(1, 0) == -math.inf


def test_cdf_examples():
    assert poisson_cdf(0, 0) == 1.0
    assert poisson_cdf(57, 0) == 1.0
    assert poisson_cdf(0, 1) == pytest.approx(math.exp(-1), rel=1e-14)
    # direct-summation oracle over j = 0..118
    assert poisson_cdf(118, 139.69) == pytest.approx(summed_cdf(118, 139.69), rel=1e-11)
    assert poisson_cdf(118, 139.69) == pytest.approx(0.0338628009, abs=1e-10)


def test_gamma_examples():
    assert regularized_gamma_q(1, 0) == 1.0
    assert regularized_gamma_q(1, 1) == pytest.approx(math.exp(-1), rel=1e-14)
    assert regularized_gamma_q(5, 5) == pytest.approx(summed_cdf(4, 5.0), rel=1e-13)
    assert regularized_gamma_q(5, 5) == pytest.approx(0.440493, abs=1e-6)


def test_domain_errors():
    with pytest.raises(DomainError):
        regularized_gamma_q(0, 1)
    with pytest.raises(DomainError):
        regularized_gamma_q(1, -1)
    with pytest.raises(DomainError):
        poisson_pmf(1, -0.5)
    with pytest.raises(DomainError):
        poisson_cdf(1, -0.5)


@pytest.mark.parametrize("a", [1, 2, 7, 30, 99, 150, 200])
def test_gamma_relative_accuracy_integer_a(a):
    for x in (0.01, 0.5, 1.0, 5.0, 20.0, a - 0.5, a + 1.0, a + 3 * math.sqrt(a), 2.0 * a, 400.0):
        ref_q = float(mpmath.gammainc(a, x, mpmath.inf, regularized=True))
        ref_p = float(mpmath.gammainc(a, 0, x, regularized=True))
        if ref_q > 1e-290:
            assert regularized_gamma_q(a, x) == pytest.approx(ref_q, rel=1e-12)
        if ref_p > 1e-290:
            assert regularized_gamma_p(a, x) == pytest.approx(ref_p, rel=1e-12)


@pytest.mark.parametrize("a,x", [(0.3, 0.1), (2.5, 4.0), (17.7, 12.0), (500.5, 520.0), (3000.0, 2900.0)])
def test_gamma_non_integer_a(a, x):
    ref = float(mpmath.gammainc(a, x, mpmath.inf, regularized=True))
    assert regularized_gamma_q(a, x) == pytest.approx(ref, rel=1e-11)


def test_cdf_plus_sf_is_one():
    for mu in (0.3, 4.0, 139.7, 2500.0):
        for n in (0, 3, 100, 2400):
            assert poisson_cdf(n, mu) + poisson_sf(n, mu) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("mu", [0.1, 3.0, 50.0, 600.0])
def test_pmf_normalised(mu):
    upper = int(mu + 12 * math.sqrt(mu)) + 20
    assert math.fsum(poisson_pmf(n, mu) for n in range(upper + 1)) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n,mu", [(0, 0.0), (0, 2.0), (118, 139.69), (579, 560.3), (3000, 2900.0)])
def test_paired_cdf_sf(n, mu):
    assert poisson_cdf_sf(n, mu) == (poisson_cdf(n, mu), poisson_sf(n, mu))
