"""Command-line interface: ``qbrach {distance,solve,evolve,audit}``.

State files are JSON documents ``{"dim": n, "re": [...], "im": [...]}``.
Reports are JSON; trajectories are CSV.  Output files are written to a
temporary sibling and renamed into place, so a failing command never
leaves a partial file behind.

Exit codes: 0 success, 2 unreadable input, 3 dimension mismatch,
4 degenerate pair (states coincide), 5 audit found a violation.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .audit import AuditConfig, Verdict, run_audit
from .brachistochrone import SpreadConvention, solve
from .evolution import sample_analytic_trajectory
from .exceptions import DegeneratePairError
from .geometry import fs_distance

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_DEGENERATE = 4
EXIT_VIOLATION = 5

DEGENERATE_MESSAGE = "states coincide; tau = 0; H = 0"


def _warn(message: str) -> None:
    print(f"qbrach: warning: {message}", file=sys.stderr)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def read_state(path, strict: bool = False) -> np.ndarray:
    """Parse a state file, normalising it (with a warning) unless ``strict``."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        dim = doc["dim"]
        re, im = doc["re"], doc["im"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise ValueError(f"dim must be a positive integer, got {dim!r}")
        if len(re) != dim or len(im) != dim:
            raise ValueError(f"expected {dim} real and imaginary parts, got {len(re)} and {len(im)}")
        vec = np.array(re, dtype=np.float64) + 1j * np.array(im, dtype=np.float64)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CliError(f"{path}: cannot parse state file: {exc}", EXIT_PARSE) from exc
    if not np.all(np.isfinite(vec)):
        raise CliError(f"{path}: non-finite amplitude", EXIT_PARSE)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise CliError(f"{path}: zero vector", EXIT_PARSE)
    if abs(norm - 1.0) > 1e-6:
        if strict:
            raise CliError(f"{path}: state norm {norm:.12g} is not 1 (--strict)", EXIT_PARSE)
        _warn(f"{path}: state norm {norm:.12g} is not 1; normalising")
    return vec / norm


def state_record(vec: np.ndarray) -> dict:
    return {"dim": int(vec.size), "re": vec.real.tolist(), "im": vec.imag.tolist()}


def matrix_record(mat: np.ndarray) -> dict:
    return {"re": mat.real.tolist(), "im": mat.imag.tolist()}


def _read_pair(args) -> tuple[np.ndarray, np.ndarray]:
    a = read_state(args.file_i, args.strict)
    b = read_state(args.file_f, args.strict)
    if a.size != b.size:
        raise CliError(f"dimension mismatch: {a.size} vs {b.size}", EXIT_DIMENSION)
    return a, b


def _write(out: str, text: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        os.unlink(tmp)
        raise


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _solve(args):
    psi_i, psi_f = _read_pair(args)
    try:
        return solve(psi_i, psi_f, omega=args.omega, convention=SpreadConvention(args.convention), hbar=args.hbar)
    except DegeneratePairError as exc:
        raise CliError(DEGENERATE_MESSAGE, EXIT_DEGENERATE) from exc


def cmd_distance(args) -> int:
    a = read_state(args.file_a, args.strict)
    b = read_state(args.file_b, args.strict)
    if a.size != b.size:
        raise CliError(f"dimension mismatch: {a.size} vs {b.size}", EXIT_DIMENSION)
    theta = fs_distance(a, b)
    print(f"theta = {theta:.17g} rad = {math.degrees(theta):.17g} deg")
    print(json.dumps({"theta": theta, "theta_degrees": math.degrees(theta)}))
    return EXIT_OK


def cmd_solve(args) -> int:
    sol = _solve(args)
    sign = 1.0 if args.schrodinger_sign == "plus" else -1.0
    report = {
        "theta": sol.theta,
        "phi": sol.decomposition.phi,
        "omega": sol.omega,
        "hbar": sol.hbar,
        "convention": sol.convention.value,
        "schrodinger_sign": args.schrodinger_sign,
        "hamiltonian": matrix_record(sign * sol.hamiltonian),
        "e_plus": state_record(sol.e_plus),
        "e_minus": state_record(sol.e_minus),
        "lambda_plus": sign * sol.lambda_plus,
        "lambda_minus": sign * sol.lambda_minus,
        "xi": sol.xi,
        "delta_h": sol.delta_h,
        "tau": sol.tau,
    }
    _write(args.out, _dump(report))
    return EXIT_OK


def cmd_evolve(args) -> int:
    if args.samples < 2:
        raise CliError("--samples must be at least 2", EXIT_PARSE)
    sol = _solve(args)
    samples = sample_analytic_trajectory(sol, args.samples)
    dim = sol.decomposition.dim
    buf = io.StringIO(newline="\n")
    header = ["t", "fidelity_to_target", "delta_h", "fs_speed"]
    for k in range(dim):
        header += [f"re_{k}", f"im_{k}"]
    buf.write(",".join(header) + "\n")
    for s in samples:
        row = [s.t, s.fidelity, s.delta_h, s.fs_speed]
        for z in s.state:
            row += [z.real, z.imag]
        buf.write(",".join(f"{x:.17g}" for x in row) + "\n")
    _write(args.out, buf.getvalue())
    return EXIT_OK


def cmd_audit(args) -> int:
    psi_i, psi_f = _read_pair(args)
    cfg = AuditConfig(
        n_random=args.trials,
        n_local_steps=args.local_steps,
        seed=args.seed,
        t_max_factor=args.tmax_factor,
        threshold=args.threshold,
    )
    try:
        report = run_audit(psi_i, psi_f, args.omega, SpreadConvention(args.convention), cfg, args.hbar)
    except DegeneratePairError as exc:
        raise CliError(DEGENERATE_MESSAGE, EXIT_DEGENERATE) from exc
    doc = {
        "omega": args.omega,
        "hbar": args.hbar,
        "convention": args.convention,
        "seed": args.seed,
        "threshold": args.threshold,
        "t_max_factor": args.tmax_factor,
        **report.to_dict(),
    }
    _write(args.out, _dump(doc))
    if report.verdict is Verdict.VIOLATION_FOUND:
        _warn(f"audit found {report.n_beaten} competitor(s) faster than the optimal Hamiltonian")
        return EXIT_VIOLATION
    return EXIT_OK


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbrach", description="Time-optimal Hamiltonians for pure-state transfer.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pair=True):
        if pair:
            p.add_argument("file_i", help="initial state file")
            p.add_argument("file_f", help="final state file")
        p.add_argument("--strict", action="store_true", help="reject non-normalised states")

    def physics(p):
        p.add_argument("--omega", type=_positive_float, default=1.0)
        p.add_argument("--hbar", type=_positive_float, default=1.0)
        p.add_argument("--convention", choices=[c.value for c in SpreadConvention], default="eq8")

    p = sub.add_parser("distance", help="Fubini-Study angle between two states")
    p.add_argument("file_a")
    p.add_argument("file_b")
    common(p, pair=False)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("solve", help="optimal Hamiltonian and minimal time")
    common(p)
    physics(p)
    p.add_argument(
        "--schrodinger-sign",
        choices=["plus", "minus"],
        default="plus",
        help="report H for exp(+iHt/hbar) (default) or exp(-iHt/hbar) evolution",
    )
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evolve", help="trajectory CSV on [0, tau]")
    common(p)
    physics(p)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("audit", help="race the optimal Hamiltonian against competitors")
    common(p)
    physics(p)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--local-steps", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tmax-factor", type=float, default=4.0)
    p.add_argument("--threshold", type=float, default=1.0 - 1e-6)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"qbrach: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"qbrach: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
