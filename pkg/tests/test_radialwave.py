"""Radial series: recurrence, termination, evaluation, nodes, normalization."""

from __future__ import annotations

import math
from dataclasses import replace

import mpmath as mp
import numpy as np
import pytest
from scipy import special

from conftest import mp_eta
from etaspec import (
    BoundState,
    BranchSign,
    DomainError,
    SpinMode,
    TerminationError,
    count_nodes,
    energy_eigenvalue,
    length_scale,
    map_total_angular_momentum,
    normalize,
    ode_residual,
    radial_eval,
    series_coefficients,
    termination_residual,
)
from etaspec.coupling import CouplingValue

MINUS = BranchSign.SOMMERFELD
PLUS = BranchSign.HYDRINO


def build(state, constants):
    energy = energy_eigenvalue(state, constants)
    scale = length_scale(energy, constants)
    series = series_coefficients(state, energy, scale)
    return energy, scale, series


def suite_states():
    states = [BoundState(SpinMode.SPINLESS, nr, l)
              for l in range(3) for nr in range(4)]
    for n in range(1, 4):
        for abs_k in range(1, n + 1):
            for kappa in (-abs_k, abs_k):
                if kappa > 0 and n == abs_k:
                    continue
                states.append(BoundState(SpinMode.SPIN_HALF, n - abs_k, kappa))
    return states


def test_degree_zero_series_is_single_term(constants):
    state = map_total_angular_momentum(1, 1, -1)
    energy, scale, series = build(state, constants)
    assert series.coefficients == (1.0,)
    assert termination_residual(state, energy, scale) <= 1e-13


def test_first_coefficient_formula_and_sign(constants):
    # 2S: a1/a0 = 2[(1-eta)/r0 - lam]/(2-2*eta), negative (one node)
    state = map_total_angular_momentum(2, 1, -1)
    energy, scale, series = build(state, constants)
    eta = mp_eta(1, -1, constants.alpha, -1)
    r0 = mp.mpf(1) / mp.sqrt(1 - mp.mpf(energy.e_ratio) ** 2)
    lam = mp.mpf(energy.e_ratio) * mp.mpf(constants.alpha)
    reference = 2 * ((1 - eta) / r0 - lam) / (2 - 2 * eta)
    assert series.coefficients[1] == pytest.approx(float(reference), rel=1e-12)
    assert series.coefficients[1] < 0.0


@pytest.mark.parametrize("factor", [1.001, 0.999])
def test_perturbed_energy_breaks_termination(factor, constants):
    state = map_total_angular_momentum(2, 1, -1)
    energy = energy_eigenvalue(state, constants)
    scale = length_scale(energy, constants)
    bad = replace(energy, e_ratio=energy.e_ratio * factor)
    # three orders past the 1e-12 termination budget
    assert termination_residual(state, bad, scale) > 1e-9
    with pytest.raises(TerminationError):
        series_coefficients(state, bad, scale)


def test_exact_energy_passes_perturbed_fails_both_directions(constants):
    for state in [BoundState(SpinMode.SPINLESS, 2, 0),
                  map_total_angular_momentum(3, 3, -1)]:
        energy = energy_eigenvalue(state, constants)
        scale = length_scale(energy, constants)
        assert termination_residual(state, energy, scale) <= 1e-12
        for factor in (1 + 1e-3, 1 - 1e-3):
            bad = replace(energy, e_ratio=energy.e_ratio * factor)
            assert termination_residual(state, bad, scale) > 1e-12


def test_hydrino_full_perturbed_pipeline_residual(constants):
    # Deep state: the x1.001 energy stays bound, so the perturbed length
    # scale exists and the termination defect is macroscopic.
    state = BoundState(SpinMode.SPINLESS, 0, 0, PLUS)
    energy = energy_eigenvalue(state, constants)
    bad = replace(energy, e_ratio=energy.e_ratio * 1.001)
    bad_scale = length_scale(bad, constants)
    assert termination_residual(state, bad, bad_scale) > 1e-4


def test_state_mismatch_rejected(constants):
    state = BoundState(SpinMode.SPINLESS, 1, 0)
    other = BoundState(SpinMode.SPINLESS, 1, 1)
    energy = energy_eigenvalue(state, constants)
    scale = length_scale(energy, constants)
    with pytest.raises(DomainError):
        series_coefficients(other, energy, scale)


def test_radial_eval_decays_at_infinity(constants):
    _, scale, series = build(BoundState(SpinMode.SPINLESS, 0, 0), constants)
    far = radial_eval(series, 60.0 * scale.r0_dimensionless)
    near = radial_eval(series, scale.r0_dimensionless)
    assert abs(far) < 1e-20 * abs(near)


def test_radial_eval_rejects_nonpositive_radius(constants):
    _, _, series = build(BoundState(SpinMode.SPINLESS, 0, 0), constants)
    with pytest.raises(DomainError):
        radial_eval(series, 0.0)
    with pytest.raises(DomainError):
        radial_eval(series, np.array([1.0, -2.0]))


def test_small_alpha_ground_state_is_simple_exponential():
    from etaspec import load_constants
    constants = load_constants({"alpha": 1e-4})
    state = BoundState(SpinMode.SPINLESS, 0, 0)
    _, scale, series = build(state, constants)
    r0 = scale.r0_dimensionless
    r = np.array([0.5, 1.0, 2.0, 5.0]) * r0
    values = radial_eval(series, r)
    expected = values[0] * np.exp(-(r - r[0]) / r0)
    # r^(-eta) with eta ~ alpha^2 perturbs the pure exponential only weakly
    assert np.allclose(values, expected, rtol=1e-6)


def test_ode_residual_small_at_eigenstate(constants):
    for state in suite_states():
        energy, scale, series = build(state, constants)
        radii = np.logspace(math.log10(0.1), math.log10(20.0), 16) \
            * scale.r0_dimensionless
        residual = np.abs(ode_residual(series, energy, radii))
        assert residual.max() <= 1e-8, state


def test_ode_residual_at_r0_tight(constants):
    energy, scale, series = build(map_total_angular_momentum(1, 1, -1), constants)
    assert abs(ode_residual(series, energy, scale.r0_dimensionless)) <= 1e-10


def test_ode_residual_small_alpha_simple_case():
    # alpha much below ~1e-4 is unusable here: 1 - e_ratio^2 falls to the
    # rounding floor of e_ratio and the (energy, scale) pair decoheres.
    from etaspec import load_constants
    constants = load_constants({"alpha": 1e-3})
    energy, scale, series = build(BoundState(SpinMode.SPINLESS, 0, 0), constants)
    assert abs(ode_residual(series, energy, scale.r0_dimensionless)) <= 1e-12


def test_finite_difference_residual_confirms_analytic_route(constants):
    # Independent derivative route: build the radial operator from central
    # differences of radial_eval alone and check it also annihilates R.
    energy, scale, series = build(map_total_angular_momentum(2, 1, -1), constants)
    r0 = scale.r0_dimensionless
    eta = energy.eta.eta
    lam = energy.lam
    e = energy.e_ratio
    for r in (0.5 * r0, 1.7 * r0, 6.0 * r0):
        h = 1e-4 * r0
        stencil = np.array([r - 2 * h, r - h, r, r + h, r + 2 * h])
        big_r = radial_eval(series, stencil)
        d1 = (big_r[3] - big_r[1]) / (2 * h)
        d2 = (-big_r[4] + 16 * big_r[3] - 30 * big_r[2]
              + 16 * big_r[1] - big_r[0]) / (12 * h * h)
        w = e * e - 1.0 + 2.0 * lam / r + eta * (1.0 - eta) / (r * r)
        residual = d2 + 2.0 * d1 / r + w * big_r[2]
        scale_term = max(abs(d2), abs(w * big_r[2]))
        assert abs(residual) / scale_term < 1e-5


def test_perturbed_eta_inflates_residual(constants):
    state = map_total_angular_momentum(2, 1, -1)
    energy, scale, series = build(state, constants)
    bumped = replace(energy, eta=replace(energy.eta, eta=energy.eta.eta + 1e-3))
    r = 1.3 * scale.r0_dimensionless
    assert abs(ode_residual(series, bumped, r)) > 1e-4
    assert abs(ode_residual(series, energy, r)) <= 1e-10


def test_perturbed_energy_inflates_residual(constants):
    state = map_total_angular_momentum(2, 1, -1)
    energy, scale, series = build(state, constants)
    bad = replace(energy, e_ratio=energy.e_ratio * 1.001)
    radii = np.logspace(math.log10(0.1), math.log10(20.0), 16) \
        * scale.r0_dimensionless
    assert np.max(np.abs(ode_residual(series, bad, radii))) > 1e-4


def test_node_count_equals_degree(constants):
    for state in suite_states():
        _, _, series = build(state, constants)
        assert count_nodes(series) == state.radial_degree, state


def test_node_count_against_polynomial_root_oracle(constants):
    for state in suite_states():
        if state.radial_degree == 0:
            continue
        _, _, series = build(state, constants)
        roots = np.roots(list(reversed(series.coefficients)))
        positive_real = [z for z in roots
                         if abs(z.imag) < 1e-9 * max(1.0, abs(z.real))
                         and z.real > 0.0]
        assert count_nodes(series) == len(positive_real), state


def test_normalization_unit_integral_via_gamma_oracle(constants):
    # Exact integral of R^2 r^2 via term-by-term Gamma functions.
    for state in [BoundState(SpinMode.SPINLESS, 0, 0),
                  BoundState(SpinMode.SPINLESS, 3, 1),
                  map_total_angular_momentum(3, 3, -1),
                  BoundState(SpinMode.SPINLESS, 0, 0, PLUS)]:
        _, _, series = build(state, constants)
        series = normalize(series)
        integral = _gamma_norm_integral(series)
        assert integral == pytest.approx(1.0, abs=1e-8), state
        assert series.normalization > 0.0


def _gamma_norm_integral(series):
    a = np.asarray(series.coefficients)
    sq = np.convolve(a, a)
    eta = series.eta.eta
    total = 0.0
    for j, cj in enumerate(sq):
        s = 3.0 - 2.0 * eta + j
        total += cj * (series.r0 / 2.0) ** s * special.gamma(s)
    return series.normalization ** 2 * total


def test_normalization_idempotent(constants):
    _, _, series = build(BoundState(SpinMode.SPINLESS, 2, 1), constants)
    once = normalize(series)
    twice = normalize(once)
    assert twice.normalization == pytest.approx(once.normalization, rel=1e-10)


def test_normalization_small_alpha_matches_hydrogenic_value():
    from etaspec import load_constants
    constants = load_constants({"alpha": 1e-4})
    _, scale, series = build(BoundState(SpinMode.SPINLESS, 0, 0), constants)
    series = normalize(series)
    # pure exponential: integral e^(-2r/r0) r^2 dr = r0^3/4 => N = 2 r0^(-3/2)
    reference = 2.0 * scale.r0_dimensionless ** -1.5
    assert series.normalization == pytest.approx(reference, rel=1e-4)


def test_non_integrable_plus_branch_rejected(constants):
    # eta ~ 2 for this spin-half hydrino state: R^2 r^2 ~ r^-2 at the origin
    state = BoundState(SpinMode.SPIN_HALF, 2, -1, PLUS)
    _, _, series = build(state, constants)
    with pytest.raises(DomainError):
        normalize(series)


def test_same_recurrence_for_both_modes(constants):
    # One code path parameterized by eta: identical coefficients when the
    # same numeric eta is injected under different mode tags.
    state0 = BoundState(SpinMode.SPINLESS, 2, 0)
    energy0, scale0, series0 = build(state0, constants)
    fake_cv = CouplingValue(eta=energy0.eta.eta, mode=SpinMode.SPIN_HALF,
                            angular=-1, branch=MINUS,
                            alpha_used=energy0.eta.alpha_used)
    state1 = BoundState(SpinMode.SPIN_HALF, 2, -1)
    energy1 = replace(energy0, state=state1, eta=fake_cv)
    series1 = series_coefficients(state1, energy1, scale0)
    assert series1.coefficients == series0.coefficients