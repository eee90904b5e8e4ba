"""Command-line front end.

Subcommands: ``figure1``, ``check-bc``, ``superpose``, ``evolve``, ``bands``.
Exit status is 0 on success, 1 on a usage error and 2 when the output cannot
be written.  Boundary-condition verdicts are data and never change the exit
status.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from ._io import csv_text, json_text
from .bands import band_diagram, shift_invariance_check
from .boundary import DEFAULT_TOLERANCE, classify
from .core import GaugeTag, PhysicsParams, PlaneWaveState, make_grid
from .dynamics import TRAJECTORY_COLUMNS, QuasiEigenstate, trajectory
from .superpose import RawSuperposition, admissibility_oracle, lattice_check

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    hbar: float = 1.0
    inertia: float = 1.0
    torque: float = 0.0
    grid_size: int = 256
    tolerance: float = DEFAULT_TOLERANCE
    output_path: str | None = None
    format: str | None = None

    def __post_init__(self):
        if self.grid_size < 8:
            raise UsageError(f"--grid must be at least 8, got {self.grid_size}")
        if not self.tolerance > 0:
            raise UsageError(f"--tol must be positive, got {self.tolerance}")

    @property
    def params(self) -> PhysicsParams:
        return PhysicsParams(self.hbar, self.inertia, self.torque)

    def resolve_format(self, allowed, default):
        fmt = self.format or default
        if fmt not in allowed:
            raise UsageError(f"--format {fmt} not supported here; choose from {', '.join(allowed)}")
        return fmt


def cmd_figure1(config: RunConfig, lam: float, k_over_hbar: float, samples: int) -> str:
    """Parametric curves of ``u`` (momentum gauge) and ``psi`` (torque gauge), theta from -pi to pi inclusive."""
    if samples < 16:
        raise UsageError(f"--samples must be at least 16, got {samples}")
    theta = np.linspace(-np.pi, np.pi, samples)
    u = np.exp(1j * lam * theta)
    psi = u * np.exp(1j * k_over_hbar * theta)
    rows = zip(theta, u.real, u.imag, psi.real, psi.imag)
    fmt = config.resolve_format(("csv", "json"), "csv")
    header = ("theta", "re_u", "im_u", "re_psi", "im_psi")
    if fmt == "json":
        return json_text([dict(zip(header, r)) for r in rows])
    return csv_text(header, rows)


def cmd_check_bc(config: RunConfig, gauge: str, lam: float, k_over_hbar: float, amplitude: complex = 1.0) -> str:
    try:
        tag = GaugeTag.parse(gauge)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config.resolve_format(("json",), "json")
    params = config.params
    state = PlaneWaveState(amplitude, lam, k_over_hbar * params.hbar, tag)
    summary = classify(state, params, config.tolerance)
    out = {
        "gauge": tag.value,
        "lambda": lam,
        "k_over_hbar": k_over_hbar,
        "mu": state.exponent(params.hbar),
    }
    out.update(summary.to_dict())
    return json_text(out)


def _parse_list(text: str, kind, what: str):
    try:
        return [kind(part.strip().replace(" ", "")) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {what} list {text!r}") from None


def cmd_superpose(config: RunConfig, k_list: str, coeff_list: str | None = None) -> str:
    params = config.params
    config.resolve_format(("json",), "json")
    ks = _parse_list(k_list, float, "k/hbar")
    coeffs = _parse_list(coeff_list, complex, "coefficient") if coeff_list else [1.0] * len(ks)
    if len(coeffs) != len(ks):
        raise UsageError(f"{len(ks)} k values but {len(coeffs)} coefficients")
    try:
        s = RawSuperposition.from_k_over_hbar(ks, coeffs, params.hbar)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lattice = lattice_check(s, params)
    oracle = admissibility_oracle(s, params, make_grid(config.grid_size), config.tolerance)
    if lattice.admissible:
        lattice_out = {
            "admissible": True,
            "k0_over_hbar": lattice.k0 / params.hbar,
            "bands": [n for n, _ in lattice.bands],
        }
    else:
        lattice_out = {
            "admissible": False,
            "pair": list(lattice.pair),
            "defect": lattice.defect / params.hbar,
        }
    out = {
        "k_over_hbar": ks,
        "coefficients": [[c.real, c.imag] for c in map(complex, coeffs)],
        "lattice": lattice_out,
        "oracle": {
            "verdict": "pass" if oracle.passed else "fail",
            "residuals": oracle.residuals,
            "tolerance": oracle.tolerance,
        },
        "agree": lattice.admissible == oracle.passed,
    }
    return json_text(out)


def cmd_evolve(config: RunConfig, n: int, k0: float, t_final: float, dt: float, every: int = 1) -> str:
    if not dt > 0:
        raise UsageError(f"--dt must be positive, got {dt}")
    if t_final < 0:
        raise UsageError(f"--t-final must be non-negative, got {t_final}")
    if every < 1:
        raise UsageError(f"--every must be at least 1, got {every}")
    steps = int(round(t_final / dt))
    if abs(steps * dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise UsageError("--t-final must be an integer multiple of --dt")
    if config.grid_size <= 2 * abs(n) + 2:
        raise UsageError(f"--grid {config.grid_size} too small for band {n}")
    fmt = config.resolve_format(("csv", "json"), "csv")
    rows, max_err = trajectory(
        QuasiEigenstate(n, k0), config.params, make_grid(config.grid_size), dt, steps, every, config.tolerance
    )
    if fmt == "json":
        return json_text({
            "rows": [dict(zip(TRAJECTORY_COLUMNS, r)) for r in rows],
            "max_phase_error": max_err,
        })
    return csv_text(TRAJECTORY_COLUMNS, rows, trailer=[f"max_phase_error,{max_err:.17g}"])


def cmd_bands(config: RunConfig, n_min: int, n_max: int, k0_steps: int) -> str:
    params = config.params
    try:
        diagram = band_diagram(n_min, n_max, k0_steps, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    verdict = "pass" if shift_invariance_check(diagram, params).passed else "fail"
    fmt = config.resolve_format(("csv", "json"), "csv")
    if fmt == "json":
        return json_text({
            "points": [{"n": p.n, "k0": p.k0, "energy": p.energy} for p in diagram],
            "shift_invariance": verdict,
        })
    rows = [(p.n, p.k0, p.energy) for p in diagram]
    return csv_text(("n", "k0", "energy"), rows, trailer=[f"shift_invariance,{verdict}"])


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--inertia", type=float, default=1.0)
    common.add_argument("--torque", type=float, default=0.0)
    common.add_argument("--grid", type=int, default=256, help="grid size N (>= 8)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="pass/fail tolerance")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    parser = _Parser(prog="rotorlab", description="Quantum rotator gauge and boundary-condition laboratory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("figure1", parents=[common], help="complex-plane curves of u and psi")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--k-over-hbar", type=float, default=-0.15)
    p.add_argument("--samples", type=int, default=201)

    p = sub.add_parser("check-bc", parents=[common], help="classify a plane wave under all three boundary conditions")
    p.add_argument("--gauge", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--k-over-hbar", type=float, default=0.0)
    p.add_argument("--amplitude", type=complex, default=1.0)

    p = sub.add_parser("superpose", parents=[common], help="lattice rule and density oracle for a superposition")
    p.add_argument("--k", dest="k_list", required=True, help="comma-separated k/hbar values")
    p.add_argument("--coeffs", default=None, help="comma-separated complex coefficients (default all 1)")

    p = sub.add_parser("evolve", parents=[common], help="torque-driven quasi-eigenstate trajectory")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--k0", type=float, default=0.0)
    p.add_argument("--t-final", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--every", type=int, default=1, help="write every N-th step")

    p = sub.add_parser("bands", parents=[common], help="free-rotator band structure")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k0-steps", type=int, required=True)
    return parser


def _dispatch(args) -> str:
    config = RunConfig(args.hbar, args.inertia, args.torque, args.grid, args.tol, args.out, args.format)
    if args.command == "figure1":
        return cmd_figure1(config, args.lam, args.k_over_hbar, args.samples)
    if args.command == "check-bc":
        return cmd_check_bc(config, args.gauge, args.lam, args.k_over_hbar, args.amplitude)
    if args.command == "superpose":
        return cmd_superpose(config, args.k_list, args.coeffs)
    if args.command == "evolve":
        return cmd_evolve(config, args.n, args.k0, args.t_final, args.dt, args.every)
    return cmd_bands(config, args.n_min, args.n_max, args.k0_steps)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _dispatch(args)
    except (UsageError, ValueError) as exc:
        print(f"rotorlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"rotorlab: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
