"""The coupling function that packages angular momentum into the radial ODE.

For a spinless state with orbital number l the value eta satisfies
eta*(1-eta) = alpha^2 - l*(l+1); for a spin-half state with Dirac number
kappa it satisfies (eta-1)^2 = kappa^2 - alpha^2.  Both sign branches of
the defining square root are supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import BranchSign, DomainError, SpinMode

# Square-root arguments below this are treated as supercritical: the
# resulting r^(-eta) exponents would be numerically meaningless.
_NEAR_CRITICAL = 1e-30


class SubcriticalCouplingError(DomainError):
    """alpha is at or beyond the bound where the square root turns imaginary."""


@dataclass(frozen=True)
class CouplingValue:
    """eta with full provenance of how it was produced."""

    eta: float
    mode: SpinMode
    angular: int
    branch: BranchSign
    alpha_used: float


def _validate_angular(mode: SpinMode, angular: int) -> None:
    if mode is SpinMode.SPINLESS and angular < 0:
        raise DomainError(f"l must be >= 0, got {angular}")
    if mode is SpinMode.SPIN_HALF and angular == 0:
        raise DomainError("kappa must be nonzero")


def eta(mode: SpinMode, angular: int, alpha: float, branch: BranchSign) -> CouplingValue:
    """Evaluate the coupling function for one state family.

    eta = (1+eps)/2 +- sqrt((angular + (1-eps)/2)^2 - alpha^2), with the
    minus sign on the Sommerfeld branch.  The argument is computed as
    (b - alpha)*(b + alpha) with b = |angular + (1-eps)/2| to avoid
    cancellation near the subcritical boundary.

    Raises:
        SubcriticalCouplingError: square-root argument <= 0 (or within
            1e-30 of it), reported with the offending alpha bound.
    """
    _validate_angular(mode, angular)
    if alpha < 0.0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    eps = int(mode)
    base = abs(angular + (1 - eps) / 2.0)
    arg = (base - alpha) * (base + alpha)
    if arg <= _NEAR_CRITICAL:
        raise SubcriticalCouplingError(
            f"coupling undefined for mode={mode.cli_name}, angular={angular}: "
            f"requires alpha < {base}, got alpha={alpha}")
    value = (1 + eps) / 2.0 + branch.sign * math.sqrt(arg)
    return CouplingValue(eta=value, mode=mode, angular=angular, branch=branch,
                         alpha_used=alpha)


def eta_identity_residual(value: CouplingValue) -> float:
    """Absolute defect of the defining algebraic identity, a regression guard.

    Returns |eta*(1-eta) - (alpha^2 - l(l+1))| for spinless values and
    |(eta-1)^2 - (kappa^2 - alpha^2)| for spin-half values.
    """
    a2 = value.alpha_used * value.alpha_used
    if value.mode is SpinMode.SPINLESS:
        l = value.angular
        return abs(value.eta * (1.0 - value.eta) - (a2 - l * (l + 1)))
    kappa = value.angular
    return abs((value.eta - 1.0) ** 2 - (kappa * kappa - a2))
