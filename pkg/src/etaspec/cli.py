"""Command-line front end: eta, energy, table, lines, wavefunction, verify.

Data goes to stdout, diagnostics (constants provenance, strict-validity
setting) to stderr.  Machine formats print floats with shortest
round-trip (up to 17 significant digit) representations so CSV and JSON
rows parse back bit-exactly.  Exit codes: 0 ok, 1 domain or verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import oracle, radialwave, spectra
from .core import (
    BoundState,
    BranchSign,
    DomainError,
    PhysicalConstants,
    SpinMode,
    dirac_valid,
    load_constants,
)
from .coupling import eta as coupling_eta
from .coupling import eta_identity_residual

CONSTANTS_ENV_VAR = "ETASPEC_CONSTANTS"

# Orbital letters in spectroscopic order (j is skipped by convention).
_L_LETTERS = "SPDFGHIKLMNOQRTUVWXYZ"


def spectroscopic_label(n: int, kappa: int) -> str:
    """Standard label like 2S1/2 from (n, kappa); l = kappa or -kappa-1."""
    if kappa == 0:
        raise DomainError("kappa must be nonzero")
    l = kappa if kappa > 0 else -kappa - 1
    if l >= len(_L_LETTERS):
        raise DomainError(f"no spectroscopic letter for l = {l}")
    two_j = 2 * abs(kappa) - 1
    return f"{n}{_L_LETTERS[l]}{two_j}/2"


@dataclass(frozen=True)
class ReportRow:
    """One table row; field names double as the CSV/JSON keys."""

    mode: str
    branch: str
    n: int
    angular: str
    D: float
    E_ratio: float
    binding_eV: float
    source: str

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "branch": self.branch,
            "n": self.n,
            "angular": self.angular,
            "D": self.D,
            "E_ratio": self.E_ratio,
            "binding_eV": self.binding_eV,
            "source": self.source,
        }


def _fmt(value: object) -> str:
    """Shortest round-trip text for floats; plain str otherwise."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _angular_label(state: BoundState, strict: bool) -> str:
    if state.mode is SpinMode.SPINLESS:
        return f"l={state.angular}"
    label = spectroscopic_label(state.n_principal, state.angular)
    text = f"kappa={state.angular:+d}({label})"
    if not dirac_valid(state):
        text += "[non-Dirac]"
    return text


def _row_for_state(state: BoundState, constants: PhysicalConstants,
                   strict: bool) -> ReportRow:
    energy = spectra.energy_eigenvalue(state, constants)
    return ReportRow(
        mode=state.mode.cli_name,
        branch=state.branch.value,
        n=state.n_principal,
        angular=_angular_label(state, strict),
        D=energy.denominator,
        E_ratio=energy.e_ratio,
        binding_eV=energy.binding_ev,
        source="closed-form",
    )


def _emit_rows(rows: Sequence[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows) + "\n")
        return
    if not rows:
        return
    header = list(rows[0].keys())
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row[key]) for key in header])
        return
    widths = [max(len(key), *(len(_text_cell(row[key])) for row in rows))
              for key in header]
    out.write("  ".join(key.ljust(w) for key, w in zip(header, widths)).rstrip() + "\n")
    for row in rows:
        out.write("  ".join(_text_cell(row[key]).ljust(w)
                            for key, w in zip(header, widths)).rstrip() + "\n")


def _text_cell(value: object) -> str:
    if isinstance(value, float):
        if value != value:  # NaN
            return "nan"
        return f"{value:.12g}"
    return str(value)


def _parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
        else:
            lo = hi = int(text)
    except ValueError:
        raise DomainError(f"cannot parse range {text!r}; use N or LO..HI") from None
    if hi < lo:
        raise DomainError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _parse_state(text: str, default_branch: BranchSign) -> BoundState:
    """Parse 'kg1,n=2,kappa=-1' or 'kg0,l=0,nr=1', optional ',branch=...'."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise DomainError(f"empty state descriptor {text!r}")
    mode = SpinMode.from_cli_name(parts[0])
    fields: dict[str, str] = {}
    for part in parts[1:]:
        if "=" not in part:
            raise DomainError(f"bad state field {part!r} in {text!r}")
        key, value = part.split("=", 1)
        fields[key.strip()] = value.strip()
    branch = (BranchSign.from_name(fields.pop("branch"))
              if "branch" in fields else default_branch)
    try:
        if mode is SpinMode.SPINLESS:
            l = int(fields.pop("l"))
            nr = int(fields.pop("nr"))
            state = BoundState(mode=mode, radial_degree=nr, angular=l, branch=branch)
        else:
            n = int(fields.pop("n"))
            kappa = int(fields.pop("kappa"))
            if n - abs(kappa) < 0:
                raise DomainError(f"n={n} must be >= |kappa|={abs(kappa)}")
            state = BoundState(mode=mode, radial_degree=n - abs(kappa),
                               angular=kappa, branch=branch)
    except KeyError as exc:
        raise DomainError(f"state descriptor {text!r} is missing field {exc}") from None
    except ValueError as exc:
        raise DomainError(f"bad state descriptor {text!r}: {exc}") from None
    if fields:
        raise DomainError(f"unrecognized state fields {sorted(fields)} in {text!r}")
    return state


def _enumerate_kg1(ns: Sequence[int], branch: BranchSign,
                   strict: bool) -> list[BoundState]:
    states = []
    for n in ns:
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        for abs_k in range(1, n + 1):
            for sign in (-1, +1):
                state = BoundState(mode=SpinMode.SPIN_HALF,
                                   radial_degree=n - abs_k,
                                   angular=sign * abs_k, branch=branch)
                if strict and not dirac_valid(state):
                    continue
                states.append(state)
    return states


def _load_cli_constants(args: argparse.Namespace) -> PhysicalConstants:
    path = args.constants or os.environ.get(CONSTANTS_ENV_VAR)
    if not path:
        return load_constants()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise DomainError(f"cannot read constants file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"constants file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DomainError(f"constants file {path!r} must hold a JSON object")
    constants = load_constants(doc)
    return PhysicalConstants(
        alpha=constants.alpha,
        electron_rest_energy_ev=constants.electron_rest_energy_ev,
        hbar_c_ev_nm=constants.hbar_c_ev_nm,
        planck_ev_per_hz=constants.planck_ev_per_hz,
        provenance=f"{constants.provenance} (from {path})")


def _diagnostics(args: argparse.Namespace, constants: PhysicalConstants) -> None:
    print(f"constants: {constants.provenance}", file=sys.stderr)
    print(f"strict-validity: {args.strict_validity}", file=sys.stderr)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--constants", metavar="PATH", default=None,
                        help=f"JSON constants file (fallback: ${CONSTANTS_ENV_VAR})")
    common.add_argument("--branch", choices=["sommerfeld", "hydrino"],
                        default="sommerfeld", help="coupling-root branch")
    common.add_argument("--format", choices=["json", "csv", "text"], default=None,
                        help="output format (default depends on the subcommand)")
    common.add_argument("--strict-validity", choices=["on", "off"], default="on",
                        dest="strict_validity",
                        help="exclude kappa>0 zero-degree spin-half states (default on)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="etaspec",
        description="Relativistic hydrogen bound-state energies and wavefunctions")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eta = sub.add_parser("eta", parents=[common],
                           help="coupling value and identity residual")
    p_eta.add_argument("--mode", choices=["kg0", "kg1"], required=True)
    p_eta.add_argument("--angular", type=int, required=True,
                       help="l for kg0, kappa for kg1")

    p_energy = sub.add_parser("energy", parents=[common],
                              help="single-state eigenvalue")
    p_energy.add_argument("--mode", choices=["kg0", "kg1"], required=True)
    p_energy.add_argument("--l", type=int, default=None)
    p_energy.add_argument("--nr", type=int, default=None)
    p_energy.add_argument("--n", type=int, default=None)
    p_energy.add_argument("--kappa", type=int, default=None)

    p_table = sub.add_parser("table", parents=[common],
                             help="eigenvalue table over quantum-number ranges")
    p_table.add_argument("--mode", choices=["kg0", "kg1"], required=True)
    p_table.add_argument("--n", default=None, metavar="LO..HI",
                         help="principal quantum numbers (kg1)")
    p_table.add_argument("--l", default=None, metavar="LO..HI",
                         help="orbital numbers (kg0)")
    p_table.add_argument("--nr", default=None, metavar="LO..HI",
                         help="radial degrees (kg0)")

    p_lines = sub.add_parser("lines", parents=[common],
                             help="transition energies, wavelengths, frequencies")
    p_lines.add_argument("--pair", action="append", required=True,
                         metavar="STATE..STATE",
                         help="e.g. 'kg1,n=2,kappa=-1..kg1,n=1,kappa=-1' (repeatable)")

    p_wave = sub.add_parser("wavefunction", parents=[common],
                            help="sampled normalized radial function")
    p_wave.add_argument("--state", required=True,
                        help="e.g. 'kg1,n=2,kappa=-1' or 'kg0,l=0,nr=1'")
    p_wave.add_argument("--samples", type=int, default=200)
    p_wave.add_argument("--rmax", type=float, default=20.0,
                        help="outer radius in units of r0 (default 20)")

    p_verify = sub.add_parser("verify", parents=[common],
                              help="cross-check closed forms against the shooting oracle")
    p_verify.add_argument("--suite", choices=["quick", "full"], default="quick")
    p_verify.add_argument("--workers", type=int, default=None,
                          help="thread count for the suite (default: pool default)")

    return parser


def _cmd_eta(args: argparse.Namespace, constants: PhysicalConstants, out) -> int:
    mode = SpinMode.from_cli_name(args.mode)
    branch = BranchSign.from_name(args.branch)
    value = coupling_eta(mode, args.angular, constants.alpha, branch)
    payload = {
        "mode": args.mode,
        "angular": args.angular,
        "branch": branch.value,
        "alpha": value.alpha_used,
        "eta": value.eta,
        "identity_residual": eta_identity_residual(value),
    }
    fmt = args.format or "json"
    if fmt == "json":
        out.write(json.dumps(payload) + "\n")
    else:
        _emit_rows([payload], fmt, out)
    return 0


def _state_from_energy_args(args: argparse.Namespace) -> BoundState:
    mode = SpinMode.from_cli_name(args.mode)
    branch = BranchSign.from_name(args.branch)
    if mode is SpinMode.SPINLESS:
        if args.l is None or args.nr is None:
            raise DomainError("kg0 states need --l and --nr")
        return BoundState(mode=mode, radial_degree=args.nr, angular=args.l,
                          branch=branch)
    if args.n is None or args.kappa is None:
        raise DomainError("kg1 states need --n and --kappa")
    if args.n - abs(args.kappa) < 0:
        raise DomainError(f"n={args.n} must be >= |kappa|={abs(args.kappa)}")
    return BoundState(mode=mode, radial_degree=args.n - abs(args.kappa),
                      angular=args.kappa, branch=branch)


def _cmd_energy(args: argparse.Namespace, constants: PhysicalConstants, out) -> int:
    state = _state_from_energy_args(args)
    strict = args.strict_validity == "on"
    if strict and not dirac_valid(state):
        raise DomainError(
            "kappa > 0 with radial degree 0 is excluded under strict validity; "
            "pass --strict-validity off to explore it")
    row = _row_for_state(state, constants, strict)
    fmt = args.format or "json"
    if fmt == "json":
        out.write(json.dumps(row.to_dict()) + "\n")
    else:
        _emit_rows([row.to_dict()], fmt, out)
    return 0


def _cmd_table(args: argparse.Namespace, constants: PhysicalConstants, out) -> int:
    mode = SpinMode.from_cli_name(args.mode)
    branch = BranchSign.from_name(args.branch)
    strict = args.strict_validity == "on"
    if mode is SpinMode.SPIN_HALF:
        if args.n is None:
            raise DomainError("kg1 tables need --n LO..HI")
        states = _enumerate_kg1(_parse_range(args.n), branch, strict)
    else:
        if args.l is None or args.nr is None:
            raise DomainError("kg0 tables need --l LO..HI and --nr LO..HI")
        states = [BoundState(mode=mode, radial_degree=nr, angular=l, branch=branch)
                  for l in _parse_range(args.l) for nr in _parse_range(args.nr)]
    rows = [_row_for_state(state, constants, strict).to_dict() for state in states]
    _emit_rows(rows, args.format or "csv", out)
    if (args.format or "csv") == "text" and mode is SpinMode.SPIN_HALF:
        out.write("note: spectroscopic labels use the standard relativistic "
                  "l(kappa) convention, adopted for labeling only\n")
    return 0


def _cmd_lines(args: argparse.Namespace, constants: PhysicalConstants, out) -> int:
    branch = BranchSign.from_name(args.branch)
    rows = []
    for pair_text in args.pair:
        if ".." not in pair_text:
            raise DomainError(f"pair {pair_text!r} must be 'STATE..STATE'")
        a_text, b_text = pair_text.split("..", 1)
        state_a = _parse_state(a_text, branch)
        state_b = _parse_state(b_text, branch)
        result = spectra.transition(spectra.energy_eigenvalue(state_a, constants),
                                    spectra.energy_eigenvalue(state_b, constants),
                                    constants)
        rows.append({
            "from": a_text.strip(),
            "to": b_text.strip(),
            "delta_eV": result.delta_ev,
            "wavelength_nm": "degenerate" if result.degenerate else result.wavelength_nm,
            "frequency_GHz": "degenerate" if result.degenerate
                             else result.frequency_hz / 1e9,
        })
    _emit_rows(rows, args.format or "csv", out)
    return 0


def _cmd_wavefunction(args: argparse.Namespace, constants: PhysicalConstants,
                      out) -> int:
    state = _parse_state(args.state, BranchSign.from_name(args.branch))
    if args.samples < 1:
        raise DomainError(f"--samples must be >= 1, got {args.samples}")
    if args.rmax <= 0:
        raise DomainError(f"--rmax must be > 0, got {args.rmax}")
    energy = spectra.energy_eigenvalue(state, constants)
    scale = spectra.length_scale(energy, constants)
    series = radialwave.normalize(
        radialwave.series_coefficients(state, energy, scale))
    radii = np.linspace(args.rmax / args.samples, args.rmax,
                        args.samples) * scale.r0_dimensionless
    radial_values = radialwave.radial_eval(series, radii)
    residuals = radialwave.ode_residual(series, energy, radii)
    rows = [{
        "r": float(r),
        "R": float(big_r),
        "r2R2": float(r * r * big_r * big_r),
        "residual": float(res),
    } for r, big_r, res in zip(radii, radial_values, residuals)]
    _emit_rows(rows, args.format or "csv", out)
    return 0


_QUICK_SUITE_KG1_N = (1, 2)
_FULL_SUITE_KG1_N = (1, 2, 3)


def _suite_states(name: str) -> list[BoundState]:
    states: list[BoundState] = []
    if name == "quick":
        spinless = [(0, 0), (0, 1)]
        kg1_ns = _QUICK_SUITE_KG1_N
    else:
        spinless = [(l, nr) for l in range(3) for nr in range(4)]
        kg1_ns = _FULL_SUITE_KG1_N
    for l, nr in spinless:
        states.append(BoundState(mode=SpinMode.SPINLESS, radial_degree=nr, angular=l))
    states.extend(_enumerate_kg1(kg1_ns, BranchSign.SOMMERFELD, strict=True))
    return states


def _cmd_verify(args: argparse.Namespace, constants: PhysicalConstants, out) -> int:
    states = _suite_states(args.suite)
    config = oracle.ShootingConfig()
    reports = oracle.run_suite(states, config, constants, max_workers=args.workers)
    fmt = args.format or "text"
    rows = []
    for report in reports:
        state = report.state
        rows.append({
            "mode": state.mode.cli_name,
            "branch": state.branch.value,
            "n": state.n_principal,
            "angular": _angular_label(state, True),
            "e_closed": report.e_closed,
            "e_shoot": report.e_shoot,
            "rel_err": report.rel_err,
            "residual_max": report.residual_max,
            "node_count_ok": report.node_count_ok,
            "passed": report.passed,
            "error": report.error or "",
        })
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row) + "\n")
    else:
        _emit_rows(rows, fmt, out)
    failed = sum(1 for report in reports if not report.passed)
    if fmt == "text":
        out.write(f"{len(reports) - failed} passed, {failed} failed\n")
    return 1 if failed else 0


_COMMANDS = {
    "eta": _cmd_eta,
    "energy": _cmd_energy,
    "table": _cmd_table,
    "lines": _cmd_lines,
    "wavefunction": _cmd_wavefunction,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str], out=None) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        constants = _load_cli_constants(args)
        _diagnostics(args, constants)
        return _COMMANDS[args.command](args, constants, out)
    except DomainError as exc:
        print(f"etaspec: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
