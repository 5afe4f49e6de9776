"""Relativistic hydrogen bound states from a single coupling function.

Closed-form energies and radial wavefunctions for the spinless and
spin-corrected relativistic Coulomb problem, validated against independent
shooting and finite-difference eigenvalue oracles.
"""

from .core import (
    BoundState,
    BranchSign,
    DomainError,
    PhysicalConstants,
    SpinMode,
    dirac_valid,
    load_constants,
    map_total_angular_momentum,
)
from .coupling import CouplingValue, SubcriticalCouplingError, eta, eta_identity_residual
from .oracle import (
    BracketError,
    FdGrid,
    ShootingConfig,
    VerificationReport,
    fd_spectrum,
    run_suite,
    shoot_eigenvalue,
    verify_state,
)
from .radialwave import (
    RadialSeries,
    TerminationError,
    count_nodes,
    normalize,
    ode_residual,
    radial_eval,
    series_coefficients,
    termination_residual,
)
from .spectra import (
    EnergyResult,
    LengthScale,
    TransitionResult,
    binding_energy_stable,
    dirac_form_energy,
    energy_eigenvalue,
    fine_structure_expansion,
    length_scale,
    transition,
)

__all__ = [
    "BoundState",
    "BracketError",
    "BranchSign",
    "CouplingValue",
    "DomainError",
    "EnergyResult",
    "FdGrid",
    "LengthScale",
    "PhysicalConstants",
    "RadialSeries",
    "ShootingConfig",
    "SpinMode",
    "SubcriticalCouplingError",
    "TerminationError",
    "TransitionResult",
    "VerificationReport",
    "binding_energy_stable",
    "count_nodes",
    "dirac_form_energy",
    "dirac_valid",
    "energy_eigenvalue",
    "eta",
    "eta_identity_residual",
    "fd_spectrum",
    "fine_structure_expansion",
    "length_scale",
    "load_constants",
    "map_total_angular_momentum",
    "normalize",
    "ode_residual",
    "radial_eval",
    "run_suite",
    "series_coefficients",
    "shoot_eigenvalue",
    "termination_residual",
    "transition",
    "verify_state",
]

__version__ = "0.1.0"
