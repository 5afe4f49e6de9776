"""Coupling-function values, identities, branch structure and error bounds."""

from __future__ import annotations

import math

import mpmath as mp
import pytest

from conftest import mp_eta
from etaspec import (
    BranchSign,
    DomainError,
    SpinMode,
    SubcriticalCouplingError,
    eta,
    eta_identity_residual,
)

MINUS = BranchSign.SOMMERFELD
PLUS = BranchSign.HYDRINO


def test_alpha_zero_spinless_is_exact_integer():
    assert eta(SpinMode.SPINLESS, 1, 0.0, MINUS).eta == -1.0


def test_alpha_zero_spin_half_is_exact_integer():
    assert eta(SpinMode.SPIN_HALF, -1, 0.0, MINUS).eta == 0.0


@pytest.mark.parametrize("l", range(7))
def test_alpha_zero_limit_spinless(l):
    assert eta(SpinMode.SPINLESS, l, 0.0, MINUS).eta == -float(l)


@pytest.mark.parametrize("kappa", [-6, -3, -1, 1, 3, 6])
def test_alpha_zero_limit_spin_half(kappa):
    assert eta(SpinMode.SPIN_HALF, kappa, 0.0, MINUS).eta == 1.0 - abs(kappa)


def test_spinless_ground_value_against_quadratic_oracle(constants):
    # Independent route: solve x*(1-x) = alpha^2 - l(l+1) at 50 digits.
    alpha = constants.alpha
    value = eta(SpinMode.SPINLESS, 0, alpha, MINUS).eta
    a = mp.mpf(alpha) ** 2
    oracle = (1 - mp.sqrt(1 - 4 * a)) / 2  # smaller root of x^2 - x + a = 0
    # The value is produced by cancellation against the 1/2 midpoint, so the
    # bound is absolute at the midpoint's ulp scale.
    assert abs(value - float(oracle)) <= 2 * math.ulp(0.5)
    assert value == pytest.approx(5.3254e-5, rel=5e-5)


@pytest.mark.parametrize("mode, angular", [
    (SpinMode.SPINLESS, 0), (SpinMode.SPINLESS, 3),
    (SpinMode.SPIN_HALF, -1), (SpinMode.SPIN_HALF, 2),
])
@pytest.mark.parametrize("branch", [MINUS, PLUS])
@pytest.mark.parametrize("alpha", [0.0, 0.1, 0.4, 7.2973525693e-3])
def test_matches_extended_precision_reference(mode, angular, branch, alpha):
    value = eta(mode, angular, alpha, branch).eta
    reference = mp_eta(int(mode), angular, alpha, branch.sign)
    assert abs(value - float(reference)) <= 4 * math.ulp(max(1.0, abs(value)))


def test_identity_residual_zero_at_alpha_zero():
    value = eta(SpinMode.SPINLESS, 2, 0.0, MINUS)
    assert eta_identity_residual(value) == 0.0


def test_identity_residual_examples(constants):
    assert eta_identity_residual(
        eta(SpinMode.SPIN_HALF, -2, constants.alpha, MINUS)) <= 1e-14
    assert eta_identity_residual(
        eta(SpinMode.SPINLESS, 5, 0.4, PLUS)) <= 1e-13


@pytest.mark.parametrize("alpha", [0.0, 0.1, 0.4, 7.2973525693e-3])
@pytest.mark.parametrize("branch", [MINUS, PLUS])
def test_identity_residual_sweep(alpha, branch):
    for l in range(21):
        value = eta(SpinMode.SPINLESS, l, alpha, branch)
        assert eta_identity_residual(value) <= 1e-12
    for abs_k in range(1, 21):
        for kappa in (-abs_k, abs_k):
            value = eta(SpinMode.SPIN_HALF, kappa, alpha, branch)
            assert eta_identity_residual(value) <= 1e-12 * max(1.0, kappa * kappa)


@pytest.mark.parametrize("mode, angulars", [
    (SpinMode.SPINLESS, range(6)),
    (SpinMode.SPIN_HALF, [-1, 1, -2, 2, -5, 5]),
])
def test_branch_sum_equals_midpoint_times_two(mode, angulars, constants):
    eps = int(mode)
    for angular in angulars:
        minus = eta(mode, angular, constants.alpha, MINUS).eta
        plus = eta(mode, angular, constants.alpha, PLUS).eta
        assert abs((minus + plus) - (1 + eps)) <= 2 * math.ulp(1.0 + eps)


def test_minus_branch_monotone_in_angular(constants):
    values = [eta(SpinMode.SPINLESS, l, constants.alpha, MINUS).eta
              for l in range(10)]
    assert all(a > b for a, b in zip(values, values[1:]))
    kg1 = [eta(SpinMode.SPIN_HALF, -k, constants.alpha, MINUS).eta
           for k in range(1, 10)]
    assert all(a > b for a, b in zip(kg1, kg1[1:]))


def test_pure_function_bit_identical(constants):
    a = eta(SpinMode.SPINLESS, 3, constants.alpha, PLUS)
    b = eta(SpinMode.SPINLESS, 3, constants.alpha, PLUS)
    assert a == b
    assert a.eta == b.eta


def test_subcritical_bound_reported():
    with pytest.raises(SubcriticalCouplingError) as excinfo:
        eta(SpinMode.SPINLESS, 0, 0.5, MINUS)
    assert "alpha < 0.5" in str(excinfo.value)
    with pytest.raises(SubcriticalCouplingError):
        eta(SpinMode.SPINLESS, 0, 0.7, MINUS)
    # comfortably subcritical values pass for higher angular momentum
    assert eta(SpinMode.SPINLESS, 1, 0.7, MINUS).eta < 0.5


@pytest.mark.parametrize("mode, angular", [
    (SpinMode.SPINLESS, -1),
    (SpinMode.SPIN_HALF, 0),
])
def test_invalid_angular_rejected(mode, angular):
    with pytest.raises(DomainError):
        eta(mode, angular, 0.01, MINUS)


def test_negative_alpha_rejected():
    with pytest.raises(DomainError):
        eta(SpinMode.SPINLESS, 0, -0.1, MINUS)
