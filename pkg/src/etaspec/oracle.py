"""Trust-nothing validation: solve the radial problem numerically and compare.

Two independent routes confirm the closed forms.  The shooting solver
integrates u = r*R outward from a series start and inward from the
asymptotic tail, then root-finds on the log-derivative mismatch at a match
point; the potential is rebuilt for every trial energy because the energy
enters it both linearly and quadratically.  The finite-difference route
discretizes the same equation and solves the resulting quadratic
eigenproblem by companion linearization.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp
from scipy.optimize import brentq
from scipy.sparse.linalg import eigs

from . import coupling, radialwave, spectra
from .core import BoundState, BranchSign, DomainError, PhysicalConstants, SpinMode

PASS_REL_ERR = 1e-9
PASS_RESIDUAL = 1e-8


class BracketError(DomainError):
    """No usable energy bracket; carries the scanned mismatch curve."""

    def __init__(self, message: str, scan: Optional[list[tuple[float, int, float]]] = None):
        super().__init__(message)
        self.scan = scan or []


@dataclass(frozen=True)
class ShootingConfig:
    """Shooting-solver knobs; the radii are in units of the state's r0."""

    r_min: float = 1e-4
    match_point: float = 8.0
    r_max: float = 30.0
    step_tolerance: float = 1e-12
    root_tolerance: float = 1e-12
    bracket: Optional[tuple[float, float]] = None

    def __post_init__(self) -> None:
        if not (0.0 < self.r_min < self.match_point < self.r_max):
            raise DomainError(
                f"need 0 < r_min < match_point < r_max, got "
                f"{self.r_min}, {self.match_point}, {self.r_max}")
        for name in ("step_tolerance", "root_tolerance"):
            tol = getattr(self, name)
            if not (0.0 < tol <= 1e-6):
                raise DomainError(f"{name} must be in (0, 1e-6], got {tol}")
        if self.bracket is not None:
            lo, hi = self.bracket
            if not (0.0 < lo < hi < 1.0):
                raise DomainError(f"bracket must satisfy 0 < lo < hi < 1, got {self.bracket}")


@dataclass(frozen=True)
class VerificationReport:
    """Closed form vs shooting oracle vs wavefunction residuals for one state."""

    state: BoundState
    e_closed: float
    e_shoot: float
    rel_err: float
    residual_max: float
    node_count_ok: bool
    passed: bool
    error: Optional[str] = None


def _frobenius_start(eta_val: float, e: float, lam: float,
                     r_a: float) -> tuple[float, float]:
    """u and u' at the series start, scaled by r_a^-(1-eta) (the ODE is linear).

    u ~ r^(1-eta) * sum c_k r^k with
    c_k = -(2*lam*c_{k-1} + (e^2-1)*c_{k-2}) / (k*(k+1-2*eta)).
    """
    s = 1.0 - eta_val
    c = [1.0]
    for k in range(1, 9):
        denom = k * (k + 1 - 2.0 * eta_val)
        if abs(denom) < 1e-8:
            break
        prev2 = c[k - 2] if k >= 2 else 0.0
        c.append(-(2.0 * lam * c[k - 1] + (e * e - 1.0) * prev2) / denom)
    u = sum(ck * r_a**k for k, ck in enumerate(c))
    du = sum(ck * (s + k) * r_a ** (k - 1) for k, ck in enumerate(c))
    return u, du


def _count_sign_changes(values: np.ndarray, noise_floor: float = 0.0) -> int:
    if noise_floor > 0.0:
        values = values[np.abs(values) > noise_floor * np.max(np.abs(values))]
    signs = np.sign(values)
    signs = signs[signs != 0.0]
    if signs.size < 2:
        return 0
    return int(np.sum(signs[:-1] != signs[1:]))


class _Shooter:
    """Integrations for one (mode, angular, branch) family on a fixed grid."""

    def __init__(self, eta_val: float, alpha: float, r_a: float, r_m: float,
                 r_b: float, rtol: float):
        self.eta_val = eta_val
        self.eta_prod = eta_val * (1.0 - eta_val)
        self.alpha = alpha
        self.r_a = r_a
        self.r_m = r_m
        self.r_b = r_b
        self.rtol = rtol
        # Node counting tolerates a looser local error than root refinement.
        self.rtol_classify = max(rtol, 1e-10)
        self.node_grid_out = np.linspace(math.log(r_a), math.log(r_m), 700)
        self.node_grid_in = np.linspace(r_b, r_m, 700)

    def _rhs(self, e: float, lam: float) -> Callable[[float, np.ndarray], list]:
        eta_prod = self.eta_prod

        def rhs(r: float, y: np.ndarray) -> list:
            w = e * e - 1.0 + 2.0 * lam / r + eta_prod / (r * r)
            return [y[1], -w * y[0]]

        return rhs

    def _rhs_log(self, e: float, lam: float) -> Callable[[float, np.ndarray], list]:
        # In x = ln r the origin singularity flattens: v'' - v' + r^2 W v = 0.
        eta_prod = self.eta_prod

        def rhs(x: float, y: np.ndarray) -> list:
            r = math.exp(x)
            r2w = (e * e - 1.0) * r * r + 2.0 * lam * r + eta_prod
            return [y[1], y[1] - r2w * y[0]]

        return rhs

    def outward(self, e: float, with_nodes: bool, rtol: float) -> tuple[float, int]:
        """Log-derivative at the match point and (optionally) the node count."""
        lam = e * self.alpha
        u0, du0 = _frobenius_start(self.eta_val, e, lam, self.r_a)
        sol = solve_ivp(self._rhs_log(e, lam),
                        (math.log(self.r_a), math.log(self.r_m)),
                        [u0, self.r_a * du0],
                        method="DOP853", rtol=rtol, atol=1e-9,
                        t_eval=self.node_grid_out if with_nodes else None,
                        dense_output=False)
        if not sol.success:
            raise BracketError(f"outward integration failed at E_ratio={e}: {sol.message}")
        v_m, dv_m = sol.y[0, -1], sol.y[1, -1]
        if v_m == 0.0:
            raise BracketError(f"outward solution vanishes at the match point for E_ratio={e}")
        nodes = _count_sign_changes(sol.y[0]) if with_nodes else -1
        return dv_m / (self.r_m * v_m), nodes

    def inward(self, e: float, with_nodes: bool, rtol: float) -> tuple[float, int]:
        """Log-derivative (and node count) of the decaying tail solution."""
        lam = e * self.alpha
        decay = math.sqrt((1.0 - e) * (1.0 + e))
        nu = lam / decay  # Coulomb power correction u ~ r^nu exp(-decay*r)
        y0 = [1.0, nu / self.r_b - decay]
        sol = solve_ivp(self._rhs(e, lam), (self.r_b, self.r_m), y0,
                        method="DOP853", rtol=rtol, atol=1e-9,
                        t_eval=self.node_grid_in if with_nodes else None,
                        dense_output=False)
        if not sol.success:
            raise BracketError(f"inward integration failed at E_ratio={e}: {sol.message}")
        u_m, du_m = sol.y[0, -1], sol.y[1, -1]
        if u_m == 0.0:
            raise BracketError(f"inward solution vanishes at the match point for E_ratio={e}")
        nodes = _count_sign_changes(sol.y[0]) if with_nodes else -1
        return du_m / u_m, nodes

    def classify(self, e: float) -> tuple[int, float]:
        """(node count over both segments, log-derivative mismatch)."""
        y_out, nodes_out = self.outward(e, with_nodes=True, rtol=self.rtol_classify)
        y_in, nodes_in = self.inward(e, with_nodes=True, rtol=self.rtol_classify)
        return nodes_out + nodes_in, y_out - y_in

    def mismatch(self, e: float) -> float:
        y_out, _ = self.outward(e, with_nodes=False, rtol=self.rtol)
        y_in, _ = self.inward(e, with_nodes=False, rtol=self.rtol)
        return y_out - y_in


def _auto_bracket(mode: SpinMode, angular: int, target_nodes: int,
                  branch: BranchSign, alpha: float) -> tuple[float, float]:
    if branch is BranchSign.HYDRINO:
        raise BracketError(
            "auto-bracketing uses the non-relativistic estimate, which is valid "
            "on the Sommerfeld branch only; supply ShootingConfig.bracket")
    if mode is SpinMode.SPINLESS:
        n_p = target_nodes + angular + 1
    else:
        n_p = target_nodes + abs(angular)
    binding = alpha * alpha / (2.0 * n_p * n_p)
    return 1.0 - 1.2 * binding, 1.0 - 0.8 * binding


def shoot_eigenvalue(mode: SpinMode, angular: int, target_nodes: int,
                     branch: BranchSign, config: ShootingConfig,
                     constants: PhysicalConstants) -> float:
    """Bound-state energy ratio with `target_nodes` radial nodes, by shooting.

    The log-derivative mismatch g(E) is strictly decreasing between its
    poles (the energy derivative of the potential term is positive
    everywhere), and every pole coincides with a node crossing the match
    point on one of the two segments.  Hence

        score(E) = nodes_outward + nodes_inward + (1 if g(E) < 0 else 0)

    counts the family's eigenvalues below E exactly, and bisection on
    score <= target always converges to the intended state; when both ends
    of the interval carry the target node count, a bracketed secant (Brent)
    refinement on g finishes superlinearly.

    Raises:
        BracketError: the bracket does not contain the target state
            (reported with the scanned mismatch curve), or integration failed.
    """
    if target_nodes < 0:
        raise DomainError(f"target_nodes must be >= 0, got {target_nodes}")
    cv = coupling.eta(mode, angular, constants.alpha, branch)
    if config.bracket is not None:
        lo, hi = config.bracket
    else:
        lo, hi = _auto_bracket(mode, angular, target_nodes, branch, constants.alpha)
    e_center = 0.5 * (lo + hi)
    r0_ref = 1.0 / math.sqrt((1.0 - e_center) * (1.0 + e_center))
    shooter = _Shooter(cv.eta, constants.alpha, config.r_min * r0_ref,
                       config.match_point * r0_ref, config.r_max * r0_ref,
                       config.step_tolerance)

    def below_eigenvalue(nodes: int, g: float) -> bool:
        score = nodes + (1 if g < 0.0 else 0)
        return score <= target_nodes

    nodes_lo, g_lo = shooter.classify(lo)
    nodes_hi, g_hi = shooter.classify(hi)
    scan = [(lo, nodes_lo, g_lo), (hi, nodes_hi, g_hi)]
    if not below_eigenvalue(nodes_lo, g_lo):
        raise BracketError(
            f"the target state lies below the bracket "
            f"(lower end already has {nodes_lo} nodes, mismatch {g_lo:+.3e})",
            _scan_for_report(shooter, lo, hi))
    if below_eigenvalue(nodes_hi, g_hi):
        raise BracketError(
            f"the target state lies above the bracket "
            f"(upper end has {nodes_hi} nodes, mismatch {g_hi:+.3e})",
            _scan_for_report(shooter, lo, hi))

    for _ in range(200):
        if (nodes_lo == target_nodes and nodes_hi == target_nodes
                and g_lo > 0.0 > g_hi):
            return float(brentq(shooter.mismatch, lo, hi, xtol=5e-18,
                                rtol=max(config.root_tolerance,
                                         4 * np.finfo(float).eps)))
        if hi - lo <= config.root_tolerance * e_center:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        nodes_mid, g_mid = shooter.classify(mid)
        scan.append((mid, nodes_mid, g_mid))
        if below_eigenvalue(nodes_mid, g_mid):
            lo, nodes_lo, g_lo = mid, nodes_mid, g_mid
        else:
            hi, nodes_hi, g_hi = mid, nodes_mid, g_mid
    raise BracketError("bisection on the mismatch discriminator did not converge",
                       scan)


def _scan_for_report(shooter: _Shooter, lo: float,
                     hi: float) -> list[tuple[float, int, float]]:
    """A coarse (energy, nodes, mismatch) curve for bracket-failure reports."""
    out = []
    for e in np.linspace(lo, hi, 17):
        try:
            nodes, g = shooter.classify(float(e))
        except BracketError:
            continue
        out.append((float(e), nodes, g))
    return out


@dataclass(frozen=True)
class FdGrid:
    """Uniform grid r_i = i*h, i = 1..point_count, with h = r_max/(point_count+1)."""

    r_max: float
    point_count: int

    def __post_init__(self) -> None:
        if self.r_max <= 0.0 or self.point_count < 16:
            raise DomainError(f"need r_max > 0 and point_count >= 16, got {self}")


def fd_spectrum(mode: SpinMode, angular: int, branch: BranchSign, grid: FdGrid,
                count: int, constants: PhysicalConstants,
                richardson_guard: bool = True) -> list[float]:
    """Lowest `count` bound energy ratios from the discretized radial problem.

    The energy enters the equation quadratically, so the second-order
    finite-difference operator yields (E^2 A + E B + C) u = 0, linearized in
    companion form and solved by shift-inverted Arnoldi near the bound window.
    Candidates are filtered to real E in (0, 1) and identified by node count.
    With `richardson_guard`, a half-resolution solve must agree to within a
    quarter of the binding, otherwise the grid is rejected as too coarse.
    """
    if not (1 <= count <= 5):
        raise DomainError(f"count must be in 1..5, got {count}")
    if branch is BranchSign.HYDRINO:
        raise DomainError(
            "the grid oracle imposes a regular origin condition and resolves "
            "the Sommerfeld family only")
    values = _fd_solve(mode, angular, grid, count, constants)
    if richardson_guard:
        coarse_points = (grid.point_count - 1) // 2
        coarse = _fd_solve(mode, angular, FdGrid(grid.r_max, coarse_points),
                           count, constants)
        for e_fine, e_coarse in zip(values, coarse):
            est_err = abs(e_fine - e_coarse) / 3.0  # order-2 Richardson estimate
            if est_err > 0.25 * (1.0 - e_fine):
                raise DomainError(
                    f"grid too coarse: Richardson pair disagreement estimates an "
                    f"error of {est_err:.2e} against a binding of {1.0 - e_fine:.2e}")
    return values


def _fd_solve(mode: SpinMode, angular: int, grid: FdGrid, count: int,
              constants: PhysicalConstants) -> list[float]:
    cv = coupling.eta(mode, angular, constants.alpha, BranchSign.SOMMERFELD)
    eta_prod = cv.eta * (1.0 - cv.eta)
    alpha = constants.alpha
    m = grid.point_count
    h = grid.r_max / (m + 1)
    r = h * np.arange(1, m + 1)

    inv_h2 = 1.0 / (h * h)
    c_diag = -2.0 * inv_h2 + eta_prod / r**2 - 1.0
    b_diag = 2.0 * alpha / r

    # Companion form with interleaved unknowns (u_i, v_i = E u_i) keeps the
    # matrix banded for the sparse LU inside shift-invert.
    n2 = 2 * m
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    u_idx = 2 * np.arange(m)
    v_idx = u_idx + 1
    rows.append(u_idx); cols.append(v_idx); vals.append(np.ones(m))
    rows.append(v_idx); cols.append(u_idx); vals.append(-c_diag)
    rows.append(v_idx[:-1]); cols.append(u_idx[1:]); vals.append(np.full(m - 1, -inv_h2))
    rows.append(v_idx[1:]); cols.append(u_idx[:-1]); vals.append(np.full(m - 1, -inv_h2))
    rows.append(v_idx); cols.append(v_idx); vals.append(-b_diag)
    companion = sparse.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n2, n2))

    sigma = 1.0 - alpha * alpha  # just below the deepest Sommerfeld binding
    k_request = min(max(2 * count + 6, 12), n2 - 2)
    v0 = np.ones(n2) / math.sqrt(n2)
    eigenvalues, eigenvectors = eigs(companion, k=k_request, sigma=sigma,
                                     which="LM", v0=v0)

    by_nodes: dict[int, float] = {}
    for value, vec in zip(eigenvalues, eigenvectors.T):
        if abs(value.imag) > 1e-9:
            continue
        e = float(value.real)
        if not (0.0 < e < 1.0 - 1e-12):
            continue
        nodes = _count_sign_changes(np.real(vec[0::2]))
        if nodes in by_nodes:
            by_nodes[nodes] = min(by_nodes[nodes], e)
        else:
            by_nodes[nodes] = e
    out = []
    for j in range(count):
        if j not in by_nodes:
            raise DomainError(
                f"grid too coarse: no converged bound state with {j} nodes "
                f"(point_count={grid.point_count})")
        out.append(by_nodes[j])
    return out


def verify_state(state: BoundState, config: ShootingConfig,
                 constants: PhysicalConstants,
                 closed_branch_override: Optional[BranchSign] = None) -> VerificationReport:
    """Full cross-check of one state; sub-failures land in the report, not past it.

    `closed_branch_override` swaps the branch used on the closed-form side
    only; it exists for fault-injection negative controls.
    """
    notes: list[str] = []
    e_closed = math.nan
    e_shoot = math.nan
    residual_max = math.inf
    node_count_ok = False

    closed_state = state if closed_branch_override is None else replace(
        state, branch=closed_branch_override)
    try:
        energy = spectra.energy_eigenvalue(closed_state, constants)
        e_closed = energy.e_ratio
        scale = spectra.length_scale(energy, constants)
        series = radialwave.series_coefficients(closed_state, energy, scale)
        radii = np.logspace(math.log10(0.1), math.log10(20.0), 16) * scale.r0_dimensionless
        residual_max = float(np.max(np.abs(radialwave.ode_residual(series, energy, radii))))
        node_count_ok = radialwave.count_nodes(series) == closed_state.radial_degree
    except Exception as exc:  # embedded in the report by contract
        notes.append(f"closed form: {exc}")

    try:
        e_shoot = shoot_eigenvalue(state.mode, state.angular, state.radial_degree,
                                   state.branch, config, constants)
    except Exception as exc:
        notes.append(f"shooting: {exc}")

    if math.isnan(e_closed) or math.isnan(e_shoot) or e_closed == 0.0:
        rel_err = math.inf
    else:
        rel_err = abs(e_shoot - e_closed) / e_closed
    passed = (not notes and rel_err <= PASS_REL_ERR
              and residual_max <= PASS_RESIDUAL and node_count_ok)
    return VerificationReport(
        state=state, e_closed=e_closed, e_shoot=e_shoot, rel_err=rel_err,
        residual_max=residual_max, node_count_ok=node_count_ok, passed=passed,
        error="; ".join(notes) if notes else None)


def run_suite(states: Sequence[BoundState], config: ShootingConfig,
              constants: PhysicalConstants,
              max_workers: Optional[int] = None) -> list[VerificationReport]:
    """Verify many states; order of the reports matches the input order.

    Each verification is stateless and results are deterministic regardless
    of scheduling.  Runs serially by default: the integrator's right-hand
    side is Python-level, so interpreter-lock contention makes threads
    slower here, not faster.  Pass max_workers > 1 to opt into a pool.
    """
    if max_workers is None or max_workers <= 1:
        return [verify_state(s, config, constants) for s in states]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda s: verify_state(s, config, constants), states))
