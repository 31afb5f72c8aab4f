import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonqfa.automaton import (
    AutomatonSpec,
    QfaState,
    Variant,
    accept_probability,
    cut_point,
    evolve,
    in_language,
    unitary_matrix,
)
from photonqfa.errors import DomainError


def test_spec_rejects_small_m():
    for m in (1, 0, -3):
        with pytest.raises(DomainError):
            AutomatonSpec(m)
    with pytest.raises(DomainError):
        AutomatonSpec(2.5)


def test_theta_is_derived_from_m():
    assert AutomatonSpec(7).theta_m == math.pi / 7


def test_unitary_examples():
    np.testing.assert_allclose(unitary_matrix(AutomatonSpec(2)), [[0, 1], [-1, 0]], atol=1e-15)
    r = math.sqrt(2) / 2
    np.testing.assert_allclose(unitary_matrix(AutomatonSpec(4)), [[r, r], [-r, r]], atol=1e-15)
    u = unitary_matrix(AutomatonSpec(11))
    assert u[0, 0] == pytest.approx(0.959493, abs=1e-6)
    assert u[0, 1] == pytest.approx(0.281733, abs=1e-6)


@pytest.mark.parametrize("m", [2, 3, 5, 11, 50])
def test_unitary_has_unit_determinant(m):
    assert np.linalg.det(unitary_matrix(AutomatonSpec(m))) == pytest.approx(1.0, abs=1e-12)


def test_evolve_examples():
    s = evolve(AutomatonSpec(11), 11)
    assert abs(s.amp_h) == pytest.approx(1.0, abs=1e-15)
    assert s.amp_v == pytest.approx(0.0, abs=1e-15)
    assert evolve(AutomatonSpec(11), 0) == QfaState(1.0, 0.0)
    s = evolve(AutomatonSpec(5), 2)
    assert s.amp_h == pytest.approx(0.309017, abs=1e-6)
    assert s.amp_v == pytest.approx(0.951057, abs=1e-6)


def test_state_must_be_normalised():
    with pytest.raises(DomainError):
        QfaState(1.0, 0.1)


def test_accept_probability_examples():
    assert accept_probability(AutomatonSpec(11), 22) == 1.0
    assert accept_probability(AutomatonSpec(2), 1) == pytest.approx(0.0, abs=1e-30)
    assert accept_probability(AutomatonSpec(11), 12) == pytest.approx(0.920627, abs=1e-6)
    assert accept_probability(AutomatonSpec(11), 0) == 1.0


def test_negative_word_rejected():
    with pytest.raises(DomainError):
        accept_probability(AutomatonSpec(3), -1)


def test_cut_point():
    cp = cut_point(AutomatonSpec(2))
    assert (cp.lam, cp.rho) == pytest.approx((0.5, 0.5), abs=1e-15)
    cp = cut_point(AutomatonSpec(11))
    assert cp.lam == pytest.approx(0.960313, abs=1e-6)
    assert cp.rho == pytest.approx(0.039687, abs=1e-6)


def test_isolation_shrinks_with_m():
    rho = [cut_point(AutomatonSpec(m)).rho for m in (3, 10, 100)]
    assert rho[0] > rho[1] > rho[2] > 0


def test_huge_k_uses_reduced_angle():
    spec = AutomatonSpec(7)
    k = 7 * 10**15 + 1
    assert accept_probability(spec, k) == pytest.approx(accept_probability(spec, 1), abs=1e-15)


def test_in_language():
    spec = AutomatonSpec(4)
    assert [in_language(spec, k) for k in range(9)] == [k % 4 == 0 for k in range(9)]


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 60), st.integers(0, 10**6))
def test_periodicity_and_variants(m, k):
    a1 = AutomatonSpec(m, Variant.A1)
    a2 = AutomatonSpec(m, Variant.A2)
    p = accept_probability(a1, k)
    assert p == accept_probability(a2, k)
    assert p == pytest.approx(accept_probability(a1, k % m), abs=1e-10)
    cp = cut_point(a1)
    assert cp.lam + cp.rho == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 60), st.integers(0, 10**4))
def test_worst_case_bound(m, k):
    spec = AutomatonSpec(m)
    p = accept_probability(spec, k)
    r = k % m
    if r == 0:
        assert p == 1.0
    else:
        assert p <= spec.cos2 + 1e-12
        if r in (1, m - 1):
            assert p == pytest.approx(spec.cos2, abs=1e-12)
        else:
            assert p < spec.cos2 - 1e-12


@pytest.mark.parametrize("m", [2, 3, 5, 11, 37])
def test_matrix_power_consistency(m):
    spec = AutomatonSpec(m)
    u = unitary_matrix(spec)
    vec = np.array([1.0, 0.0])
    for k in range(1001):
        s = evolve(spec, k)
        # U^k |H> = (cos k theta, -sin k theta): the rotator picture reflects V
        assert s.amp_h == pytest.approx(vec[0], abs=1e-8)
        assert s.amp_v == pytest.approx(-vec[1], abs=1e-8)
        assert accept_probability(spec, k) == pytest.approx(vec[0] ** 2, abs=1e-8)
        vec = u @ vec
