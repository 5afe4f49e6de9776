"""Physical constants, unit conventions and quantum-number types.

All spectra are computed internally in dimensionless form: energies as
ratios E/(m0 c^2) in (0, 1), lengths in units of the reduced Compton
wavelength hbar/(m0 c).  Physical constants enter only when converting
results at the I/O boundary (eV, nm, Hz).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Mapping, Optional


class DomainError(ValueError):
    """A physically invalid input or an unbound/undefined regime."""


# CODATA 2018 reference values.  This is the single place where physical
# constants appear as literals; everything else receives a PhysicalConstants.
DEFAULT_CONSTANTS_DOC: dict[str, float] = {
    "alpha": 7.2973525693e-3,               # fine-structure constant
    "electron_rest_energy_eV": 510998.95000,  # m0 c^2
    "hbar_c_eV_nm": 197.3269804,            # hbar c
    "planck_eV_per_Hz": 4.135667696923859e-15,  # h, exact in SI-2019
}

_CONSTANT_KEYS = frozenset(DEFAULT_CONSTANTS_DOC)


@dataclass(frozen=True)
class PhysicalConstants:
    """Validated constants with provenance, injected into all report paths.

    Attributes:
        alpha: dimensionless fine-structure constant, 0 < alpha < 0.5.
        electron_rest_energy_ev: electron rest energy m0 c^2 in eV.
        hbar_c_ev_nm: hbar*c in eV*nm.
        planck_ev_per_hz: Planck constant h in eV/Hz, for line frequencies.
        provenance: human-readable origin string for report headers.
    """

    alpha: float
    electron_rest_energy_ev: float
    hbar_c_ev_nm: float
    planck_ev_per_hz: float
    provenance: str = "CODATA-2018 defaults"

    def __post_init__(self) -> None:
        for name in ("alpha", "electron_rest_energy_ev", "hbar_c_ev_nm",
                     "planck_ev_per_hz"):
            value = getattr(self, name)
            if not (value > 0.0):
                raise DomainError(f"constant {name} must be strictly positive, got {value!r}")
        # alpha < 1/2 keeps sqrt(1/4 - alpha^2) real for the l=0 spinless states.
        if self.alpha >= 0.5:
            raise DomainError(f"alpha must be < 0.5, got {self.alpha!r}")

    @property
    def compton_nm(self) -> float:
        """Reduced Compton wavelength hbar/(m0 c) in nm; the internal length unit."""
        return self.hbar_c_ev_nm / self.electron_rest_energy_ev


def load_constants(source: Optional[Mapping[str, float]] = None) -> PhysicalConstants:
    """Build PhysicalConstants from a flat key-value document.

    Keys not present in `source` fall back to the CODATA-2018 defaults.
    Recognized keys: alpha, electron_rest_energy_eV, hbar_c_eV_nm,
    planck_eV_per_Hz.

    Raises:
        DomainError: unrecognized key, non-numeric or non-positive value,
            or alpha >= 0.5.
    """
    doc = dict(DEFAULT_CONSTANTS_DOC)
    overridden: list[str] = []
    if source:
        for key, value in source.items():
            if key not in _CONSTANT_KEYS:
                raise DomainError(
                    f"unrecognized constants key {key!r}; expected one of "
                    f"{sorted(_CONSTANT_KEYS)}")
            try:
                doc[key] = float(value)
            except (TypeError, ValueError) as exc:
                raise DomainError(f"constants key {key!r} is not numeric: {value!r}") from exc
            overridden.append(key)
    if overridden:
        provenance = "CODATA-2018 defaults with overrides: " + ", ".join(sorted(overridden))
    else:
        provenance = "CODATA-2018 defaults"
    return PhysicalConstants(
        alpha=doc["alpha"],
        electron_rest_energy_ev=doc["electron_rest_energy_eV"],
        hbar_c_ev_nm=doc["hbar_c_eV_nm"],
        planck_ev_per_hz=doc["planck_eV_per_Hz"],
        provenance=provenance,
    )


class SpinMode(IntEnum):
    """Which radial equation family a state belongs to.

    SPINLESS (0) couples orbital angular momentum l; SPIN_HALF (1) couples
    the Dirac quantum number kappa.
    """

    SPINLESS = 0
    SPIN_HALF = 1

    @property
    def cli_name(self) -> str:
        return "kg0" if self is SpinMode.SPINLESS else "kg1"

    @classmethod
    def from_cli_name(cls, name: str) -> "SpinMode":
        try:
            return {"kg0": cls.SPINLESS, "kg1": cls.SPIN_HALF}[name]
        except KeyError:
            raise DomainError(f"unknown mode {name!r}; expected kg0 or kg1") from None


class BranchSign(Enum):
    """Sign choice in the coupling function's square root.

    SOMMERFELD is the minus root (the historical spectrum); HYDRINO is the
    plus root (anomalous deep binding).
    """

    SOMMERFELD = "sommerfeld"
    HYDRINO = "hydrino"

    @property
    def sign(self) -> int:
        return -1 if self is BranchSign.SOMMERFELD else +1

    @classmethod
    def from_name(cls, name: str) -> "BranchSign":
        try:
            return cls(name.lower())
        except ValueError:
            raise DomainError(
                f"unknown branch {name!r}; expected sommerfeld or hydrino") from None


@dataclass(frozen=True)
class BoundState:
    """Complete label of one eigenstate.

    `angular` is l >= 0 for SPINLESS states and kappa != 0 for SPIN_HALF
    states.  `radial_degree` is the degree of the terminating polynomial
    factor, which equals the radial node count.
    """

    mode: SpinMode
    radial_degree: int
    angular: int
    branch: BranchSign = BranchSign.SOMMERFELD

    def __post_init__(self) -> None:
        if self.radial_degree < 0:
            raise DomainError(f"radial_degree must be >= 0, got {self.radial_degree}")
        if self.mode is SpinMode.SPINLESS:
            if self.angular < 0:
                raise DomainError(f"l must be >= 0 for spinless states, got {self.angular}")
        else:
            if self.angular == 0:
                raise DomainError("kappa must be nonzero for spin-half states")

    @property
    def n_principal(self) -> int:
        """Principal quantum number: nr + l + 1 (spinless) or N + |kappa|."""
        if self.mode is SpinMode.SPINLESS:
            return self.radial_degree + self.angular + 1
        return self.radial_degree + abs(self.angular)


def dirac_valid(state: BoundState) -> bool:
    """True unless the state is a kappa > 0, zero-degree spin-half state.

    The coupled first-order system that the spin-half family mirrors has no
    solution there; the flag gates whether such states are enumerated.
    """
    return not (state.mode is SpinMode.SPIN_HALF
                and state.angular > 0
                and state.radial_degree == 0)


def map_total_angular_momentum(n_principal: int, two_j: int, kappa_sign: int,
                               strict: bool = True) -> BoundState:
    """Build the SPIN_HALF state for principal number n and total momentum j.

    Half-integers are passed doubled (two_j = 2j) so the arithmetic stays
    exact: kappa = sign * (j + 1/2) and the radial degree is n - j - 1/2.

    Raises:
        DomainError: two_j not an odd positive integer, kappa_sign not +-1,
            j too large for n, or a strict-validity violation.
    """
    if two_j < 1 or two_j % 2 == 0:
        raise DomainError(f"two_j must be an odd positive integer (j half-integer), got {two_j}")
    if kappa_sign not in (-1, 1):
        raise DomainError(f"kappa_sign must be +1 or -1, got {kappa_sign}")
    abs_kappa = (two_j + 1) // 2
    radial_degree = n_principal - abs_kappa
    if radial_degree < 0:
        raise DomainError(
            f"j = {two_j}/2 too large for n = {n_principal}: radial degree would be negative")
    state = BoundState(mode=SpinMode.SPIN_HALF, radial_degree=radial_degree,
                       angular=kappa_sign * abs_kappa)
    if strict and not dirac_valid(state):
        raise DomainError(
            f"kappa = +{abs_kappa} with radial degree 0 is excluded under strict validity "
            f"(pass strict=False to explore it)")
    return state
