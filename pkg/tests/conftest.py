"""Shared fixtures: CODATA constants and extended-precision reference formulas."""

from __future__ import annotations

import mpmath as mp
import pytest

from etaspec import load_constants

mp.mp.dps = 50


@pytest.fixture(scope="session")
def constants():
    return load_constants()


def mp_eta(eps: int, angular: int, alpha: float, sign: int) -> mp.mpf:
    """Coupling value at 50 digits; `alpha` enters with its exact binary value."""
    base = mp.mpf(angular) + (1 - eps) / mp.mpf(2)
    return (1 + eps) / mp.mpf(2) + sign * mp.sqrt(base**2 - mp.mpf(alpha) ** 2)


def mp_energy_ratio(eps: int, angular: int, nr: int, alpha: float,
                    sign: int = -1) -> mp.mpf:
    eta = mp_eta(eps, angular, alpha, sign)
    d = nr + 1 - eta
    return (1 + (mp.mpf(alpha) / d) ** 2) ** mp.mpf("-0.5")


def mp_binding_ev(eps: int, angular: int, nr: int, alpha: float,
                  rest_energy_ev: float, sign: int = -1) -> mp.mpf:
    ratio = mp_energy_ratio(eps, angular, nr, alpha, sign)
    return (ratio - 1) * mp.mpf(rest_energy_ev)
