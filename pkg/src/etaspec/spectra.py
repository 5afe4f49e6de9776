"""Closed-form energy eigenvalues, length scales and spectral-line helpers.

Every energy is first formed as the dimensionless ratio
E/(m0 c^2) = [1 + alpha^2 / D^2]^(-1/2) with D = radial_degree + 1 - eta;
eV values are produced only through the cancellation-safe binding formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import coupling
from .core import BoundState, BranchSign, DomainError, PhysicalConstants, SpinMode


@dataclass(frozen=True)
class EnergyResult:
    """One eigenvalue with the intermediates downstream modules need.

    e_ratio is E/(m0 c^2); binding_ev = (e_ratio - 1) * m0 c^2 evaluated by
    the stable route; denominator is D = radial_degree + 1 - eta.
    """

    e_ratio: float
    binding_ev: float
    denominator: float
    state: BoundState
    eta: coupling.CouplingValue

    @property
    def lam(self) -> float:
        """Coulomb strength e_ratio * alpha appearing in the radial ODE."""
        return self.e_ratio * self.eta.alpha_used


@dataclass(frozen=True)
class LengthScale:
    """Exponential decay scale of the bound radial function."""

    r0_nm: float
    r0_dimensionless: float


def binding_energy_stable(x: float, constants: PhysicalConstants) -> float:
    """Binding energy m0c^2 * ((1+x)^(-1/2) - 1) in eV, safe for tiny x.

    Uses (1+x)^(-1/2) - 1 = -x / (sqrt(1+x) * (1 + sqrt(1+x))), which avoids
    the catastrophic cancellation the naive difference suffers at x ~ 5e-5.
    """
    if x < 0.0:
        raise DomainError(f"x must be >= 0, got {x}")
    s = math.sqrt(1.0 + x)
    return constants.electron_rest_energy_ev * (-x / (s * (1.0 + s)))


def energy_eigenvalue(state: BoundState, constants: PhysicalConstants) -> EnergyResult:
    """Closed-form eigenvalue for a bound state of either mode.

    Raises:
        SubcriticalCouplingError: propagated from the coupling function.
        DomainError: D <= 0, i.e. no bound solution with these quantum
            numbers on this branch.
    """
    cv = coupling.eta(state.mode, state.angular, constants.alpha, state.branch)
    d = state.radial_degree + 1.0 - cv.eta
    return _from_denominator(d, state, cv, constants)


def dirac_form_energy(n_principal: int, kappa: int, constants: PhysicalConstants,
                      strict: bool = True) -> EnergyResult:
    """Eigenvalue in the (n, kappa) form, D = n - |kappa| + sqrt(kappa^2 - alpha^2).

    This is an independent evaluation route; agreement with
    energy_eigenvalue of the mapped spin-half state is a tested claim,
    not an implementation shortcut.
    """
    if kappa == 0:
        raise DomainError("kappa must be nonzero")
    abs_k = abs(kappa)
    if n_principal < abs_k:
        raise DomainError(f"n = {n_principal} must be >= |kappa| = {abs_k}")
    if strict and kappa > 0 and n_principal == abs_k:
        raise DomainError(
            f"n = |kappa| with kappa > 0 is excluded under strict validity")
    alpha = constants.alpha
    if alpha >= abs_k:
        raise coupling.SubcriticalCouplingError(
            f"requires alpha < |kappa| = {abs_k}, got alpha={alpha}")
    gamma = math.sqrt((abs_k - alpha) * (abs_k + alpha))
    d = (n_principal - abs_k) + gamma
    state = BoundState(mode=SpinMode.SPIN_HALF, radial_degree=n_principal - abs_k,
                       angular=kappa)
    cv = coupling.CouplingValue(eta=1.0 - gamma, mode=SpinMode.SPIN_HALF,
                                angular=kappa, branch=BranchSign.SOMMERFELD,
                                alpha_used=alpha)
    return _from_denominator(d, state, cv, constants)


def _from_denominator(d: float, state: BoundState, cv: coupling.CouplingValue,
                      constants: PhysicalConstants) -> EnergyResult:
    if d == 0.0:
        raise DomainError("denominator D = radial_degree + 1 - eta is zero")
    if d < 0.0:
        if state.branch is BranchSign.SOMMERFELD:
            raise RuntimeError(
                f"internal error: negative D = {d} on the Sommerfeld branch")
        raise DomainError(
            f"no bound solution: D = {d} < 0 for {state} (plus-branch states "
            f"need radial_degree large enough to keep D positive)")
    x = (constants.alpha / d) ** 2
    e_ratio = 1.0 / math.sqrt(1.0 + x)
    binding = binding_energy_stable(x, constants)
    return EnergyResult(e_ratio=e_ratio, binding_ev=binding, denominator=d,
                        state=state, eta=cv)


def fine_structure_expansion(state: BoundState, constants: PhysicalConstants) -> float:
    """Fourth-order-in-alpha binding energy of a Sommerfeld spin-half state, in eV.

    Returns -(alpha^2 m0c^2 / 2n^2) * [1 + (alpha^2/n^2)(n/|kappa| - 3/4)],
    the standard expansion of the closed form; a cross-check only.
    """
    if state.mode is not SpinMode.SPIN_HALF:
        raise DomainError("expansion defined for spin-half states only")
    if state.branch is not BranchSign.SOMMERFELD:
        raise DomainError("expansion defined on the Sommerfeld branch only")
    alpha = constants.alpha
    n = state.n_principal
    abs_k = abs(state.angular)
    a2 = alpha * alpha
    leading = -a2 * constants.electron_rest_energy_ev / (2.0 * n * n)
    return leading * (1.0 + (a2 / (n * n)) * (n / abs_k - 0.75))


def length_scale(result: EnergyResult, constants: PhysicalConstants) -> LengthScale:
    """Decay length r0 = hbar*c / sqrt(m0^2 c^4 - E^2), and its dimensionless form.

    1 - e_ratio^2 is evaluated as (1 - e)(1 + e); the first factor is exact
    in IEEE arithmetic for e >= 1/2, so the scale stays consistent with the
    denominator D to roundoff.
    """
    e = result.e_ratio
    if not (0.0 < e < 1.0):
        raise DomainError(f"length scale defined for 0 < E_ratio < 1, got {e}")
    one_minus_e2 = (1.0 - e) * (1.0 + e)
    r0_dim = 1.0 / math.sqrt(one_minus_e2)
    return LengthScale(r0_nm=constants.compton_nm * r0_dim, r0_dimensionless=r0_dim)


@dataclass(frozen=True)
class TransitionResult:
    """Spectral line between two computed states.

    delta_ev = E_a - E_b (signed); wavelength and frequency are None for a
    degenerate pair.  wavelength_nm = 2*pi*hbar_c / |delta|.
    """

    delta_ev: float
    wavelength_nm: Optional[float]
    frequency_hz: Optional[float]
    degenerate: bool


def transition(a: EnergyResult, b: EnergyResult,
               constants: PhysicalConstants) -> TransitionResult:
    """Energy difference, wavelength and frequency of the a -> b line.

    The difference is taken between stable binding energies, so the rest
    mass cancels exactly and fine-structure splittings keep full precision.
    """
    if a.state == b.state:
        raise DomainError("transition requires two distinct states")
    delta = a.binding_ev - b.binding_ev
    if delta == 0.0:
        return TransitionResult(delta_ev=0.0, wavelength_nm=None,
                                frequency_hz=None, degenerate=True)
    wavelength = 2.0 * math.pi * constants.hbar_c_ev_nm / abs(delta)
    frequency = abs(delta) / constants.planck_ev_per_hz
    return TransitionResult(delta_ev=delta, wavelength_nm=wavelength,
                            frequency_hz=frequency, degenerate=False)
