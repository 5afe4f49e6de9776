"""Closed-form radial eigenfunctions: power * exponential * terminating polynomial.

A bound radial function is R(r) = N * r^(-eta) * exp(-r/r0) * sum a_k r^k
in dimensionless units.  Substituting that form into the radial equation
gives the two-term recurrence

    a_{k+1} * (k+1) * (k+2-2*eta) = 2 * [(k+1-eta)/r0 - lam] * a_k

with lam = e_ratio * alpha.  At an eigenvalue the recurrence terminates:
applying it once more past the polynomial degree yields a vanishing
coefficient, and that termination is checked, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np
from scipy import integrate, special

from .core import BoundState, DomainError
from .coupling import CouplingValue
from .spectra import EnergyResult, LengthScale

ArrayLike = Union[float, np.ndarray]

# Relative size at which the (n_r+1)-th coefficient counts as vanished.
TERMINATION_TOL = 1e-12


class TerminationError(DomainError):
    """The series does not terminate: (state, energy) pair is inconsistent."""


@dataclass(frozen=True)
class RadialSeries:
    """Closed-form radial eigenfunction in dimensionless units."""

    eta: CouplingValue
    r0: float
    coefficients: tuple[float, ...]
    lam: float
    normalization: float = 1.0


def _next_coefficient(k: int, a_k: float, eta: float, r0: float, lam: float) -> float:
    denom = (k + 1) * (k + 2 - 2.0 * eta)
    if abs(denom) < 1e-12:
        raise DomainError(
            f"degenerate indicial clash: recurrence denominator vanishes at k={k} "
            f"(eta={eta})")
    return 2.0 * ((k + 1 - eta) / r0 - lam) * a_k / denom


def _build_coefficients(n_r: int, eta: float, r0: float,
                        lam: float) -> tuple[tuple[float, ...], float]:
    """Return (a_0..a_{n_r}, relative termination residual)."""
    coeffs = [1.0]
    for k in range(n_r):
        coeffs.append(_next_coefficient(k, coeffs[k], eta, r0, lam))
    overshoot = _next_coefficient(n_r, coeffs[n_r], eta, r0, lam)
    residual = abs(overshoot) / max(abs(c) for c in coeffs)
    return tuple(coeffs), residual


def termination_residual(state: BoundState, energy: EnergyResult,
                         scale: LengthScale) -> float:
    """Relative size of the coefficient the recurrence should have killed.

    Small (<= 1e-12) only when `energy` is the true eigenvalue for `state`;
    exposed separately so sensitivity probes can read the value instead of
    catching the exception series_coefficients raises.
    """
    _, residual = _build_coefficients(state.radial_degree, energy.eta.eta,
                                      scale.r0_dimensionless, energy.lam)
    return residual


def series_coefficients(state: BoundState, energy: EnergyResult,
                        scale: LengthScale) -> RadialSeries:
    """Construct the polynomial coefficients for one eigenstate.

    Raises:
        TerminationError: the recurrence does not terminate at the stated
            degree, i.e. energy/scale were not computed for this state.
        DomainError: degenerate indicial clash (guarded; cannot occur on
            the Sommerfeld branch at subcritical alpha).
    """
    if energy.state != state:
        raise DomainError(
            f"energy was computed for {energy.state}, not for {state}")
    coeffs, residual = _build_coefficients(state.radial_degree, energy.eta.eta,
                                           scale.r0_dimensionless, energy.lam)
    if residual > TERMINATION_TOL:
        raise TerminationError(
            f"series does not terminate at degree {state.radial_degree}: "
            f"relative residual {residual:.3e} > {TERMINATION_TOL:.1e} "
            f"(inconsistent state/energy pair)")
    return RadialSeries(eta=energy.eta, r0=scale.r0_dimensionless,
                        coefficients=coeffs, lam=energy.lam)


def _poly_eval(coeffs: Sequence[float], r: np.ndarray,
               derivative: int = 0) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    for _ in range(derivative):
        c = np.polynomial.polynomial.polyder(c)
    return np.polynomial.polynomial.polyval(r, c)


def _as_positive_radii(r: ArrayLike) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("radius must be strictly positive")
    return arr


def radial_eval(series: RadialSeries, r: ArrayLike) -> ArrayLike:
    """Evaluate R(r) at dimensionless radii r > 0 (scalar or array)."""
    arr = _as_positive_radii(r)
    eta = series.eta.eta
    # r^(-eta) via exp(-eta*log r); r = 0 is outside the domain by contract.
    value = (series.normalization
             * np.exp(-eta * np.log(arr) - arr / series.r0)
             * _poly_eval(series.coefficients, arr))
    return value if isinstance(r, np.ndarray) else float(value)


def _eval_with_derivatives(series: RadialSeries,
                           r: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """R, R', R'' by analytic differentiation of the closed form."""
    eta = series.eta.eta
    r0 = series.r0
    p = _poly_eval(series.coefficients, r)
    dp = _poly_eval(series.coefficients, r, derivative=1)
    ddp = _poly_eval(series.coefficients, r, derivative=2)
    f = series.normalization * np.exp(-eta * np.log(r) - r / r0)
    g = -(eta / r + 1.0 / r0)                      # f'/f
    h = eta * (eta + 1.0) / r**2 + 2.0 * eta / (r * r0) + 1.0 / r0**2  # f''/f
    big_r = f * p
    d_r = f * (dp + g * p)
    dd_r = f * (ddp + 2.0 * g * dp + h * p)
    return big_r, d_r, dd_r


def ode_residual(series: RadialSeries, energy: EnergyResult, r: ArrayLike) -> ArrayLike:
    """Defect of the radial equation at r, normalized by its largest term.

    Evaluates (1/r^2)(r^2 R')' + [e^2 - 1 + 2*e*alpha/r + eta(1-eta)/r^2] R
    with analytic derivatives of the closed form; e and alpha are read from
    `energy` so a perturbed energy shows up directly in the residual.
    """
    arr = _as_positive_radii(r)
    big_r, d_r, dd_r = _eval_with_derivatives(series, arr)
    e = energy.e_ratio
    lam = energy.lam
    eta = energy.eta.eta
    terms = (
        dd_r,
        2.0 * d_r / arr,
        (e * e - 1.0) * big_r,
        (2.0 * lam / arr) * big_r,
        (eta * (1.0 - eta) / arr**2) * big_r,
    )
    scale = np.max(np.abs(np.stack(terms)), axis=0)
    residual = sum(terms) / scale
    return residual if isinstance(r, np.ndarray) else float(residual)


def normalize(series: RadialSeries) -> RadialSeries:
    """Rescale so the L2 weight integral(R^2 r^2 dr) over (0, inf) equals one.

    Adaptive quadrature on (0, 40*r0] plus an analytic upper-incomplete-gamma
    estimate of the exponential tail beyond.

    Raises:
        DomainError: non-integrable singularity at the origin (needs
            2 - 2*eta > -1; always true on the Sommerfeld branch).
    """
    eta = series.eta.eta
    if 2.0 - 2.0 * eta <= -1.0:
        raise DomainError(
            f"R^2 r^2 is not integrable at the origin for eta = {eta} >= 3/2")
    r0 = series.r0
    cutoff = 40.0 * r0

    def integrand(r: float) -> float:
        p = _poly_eval(series.coefficients, np.asarray(r))
        return float((series.normalization * p) ** 2
                     * math.exp((2.0 - 2.0 * eta) * math.log(r) - 2.0 * r / r0))

    head, _ = integrate.quad(integrand, 0.0, cutoff, epsabs=0.0, epsrel=1e-13,
                             limit=400)
    tail = _tail_estimate(series, cutoff)
    total = head + tail
    if not (total > 0.0) or not math.isfinite(total):
        raise DomainError(f"normalization integral is not finite/positive: {total}")
    return replace(series, normalization=series.normalization / math.sqrt(total))


def _tail_estimate(series: RadialSeries, cutoff: float) -> float:
    """Exact tail of the norm integral past the cutoff, term by term.

    integral_c^inf r^p exp(-2r/r0) dr = (r0/2)^(p+1) * Gamma(p+1, 2c/r0),
    summed over the monomials of the squared polynomial.
    """
    eta = series.eta.eta
    r0 = series.r0
    a = np.asarray(series.coefficients)
    sq = np.convolve(a, a)
    z = 2.0 * cutoff / r0
    total = 0.0
    for j, cj in enumerate(sq):
        s = 3.0 - 2.0 * eta + j
        upper = special.gammaincc(s, z) * special.gamma(s)
        total += cj * (r0 / 2.0) ** s * upper
    return series.normalization ** 2 * total


def count_nodes(series: RadialSeries) -> int:
    """Number of strictly positive roots of the polynomial factor.

    Sign changes on a fine grid over (0, root bound], each confirmed by
    bisection refinement.  The grid is log-spaced: the Cauchy bound can sit
    orders of magnitude above the actual roots.
    """
    coeffs = series.coefficients
    degree = len(coeffs) - 1
    if degree == 0:
        return 0
    a_top = coeffs[-1]
    bound = 1.0 + max(abs(c) for c in coeffs[:-1]) / abs(a_top)  # Cauchy bound
    grid = np.logspace(math.log10(bound) - 16.0, math.log10(bound), 8192)
    values = _poly_eval(coeffs, grid)
    nodes = 0
    for i in range(len(grid) - 1):
        lo, hi = values[i], values[i + 1]
        if lo == 0.0:
            raise DomainError(
                f"polynomial root sits on the counting grid at r={grid[i]!r}; "
                f"cannot resolve by bisection")
        if lo * hi < 0.0:
            _bisect_root(coeffs, grid[i], grid[i + 1])
            nodes += 1
    return nodes


def _bisect_root(coeffs: Sequence[float], lo: float, hi: float) -> float:
    f_lo = float(_poly_eval(coeffs, np.asarray(lo)))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = float(_poly_eval(coeffs, np.asarray(mid)))
        if f_mid == 0.0 or (hi - lo) < 1e-14 * max(1.0, abs(mid)):
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)
