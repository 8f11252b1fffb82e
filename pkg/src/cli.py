"""
Command-line front end.

Every subcommand prints one JSON document on stdout and writes CSV
artifacts under --out (default $BERNOULLI_LAB_OUT or ./out). Exit codes:
0 success (including an infeasible interior problem), 1 solver error,
2 usage or configuration error; verify exits 1 unless every check passed.
"""

import asyncio
import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np
import yaml

from .convex_geometry import parse_body_spec, sample_support
from .errors import BernoulliLabError
from .exterior_fbp import solve_exterior
from .harness import get_registry
from .interior_fbp import bernoulli_constant, is_subsolution, lambda_ball, solve_interior
from .minkowski_comb import combine_solutions, gradient_harmonic_mean_check
from .ring_solver import boundary_gradient, matrix_rows, solve_ring
from .serialization import (
    GRADIENT_COLUMNS,
    MARGIN_COLUMNS,
    QUANTITY_COLUMNS,
    RING_COLUMNS,
    SUPPORT_COLUMNS,
    artifact_stem,
    write_csv,
    write_json,
)
from .settings import LabSettings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad arguments or configuration (exit code 2)."""


def load_document(value: str) -> Any:
    """
    Parse a JSON string or load a JSON/YAML file.

    Files ending in .yaml or .yml are read with yaml.safe_load.
    """
    try:
        if value.lstrip().startswith(("{", "[")):
            return json.loads(value)
        path = Path(value)
        if path.is_file():
            text = path.read_text()
            if path.suffix in (".yaml", ".yml"):
                return yaml.safe_load(text)
            return json.loads(text)
        raise UsageError(f"No such file: {value}")
    except (OSError, ValueError, yaml.YAMLError) as e:
        raise UsageError(f"Could not parse {value!r}: {e}")


def _add_settings_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("discretization")
    group.add_argument("--M", type=int, help="Number of directions (even, >= 16; default 256)")
    group.add_argument("--L", type=int, help="Number of t-intervals of the ring grid (default 128)")
    group.add_argument("--newton-tol", type=float, help="Ring residual tolerance (default 1e-8)")
    group.add_argument("--fp-tol", type=float, help="Free-boundary gradient tolerance (default 1e-6)")
    group.add_argument("--bisect-tol", type=float, help="Relative bracket width for Lambda (default 1e-4)")
    group.add_argument("--out", type=str, help="Output directory for CSV artifacts")
    group.add_argument("--jobs", type=int, help="Concurrent suite cases (verify only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bernoulli-lab",
        description="Bernoulli free-boundary problems for the p-Laplacian on planar convex domains",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Closed-form constant of a disk
  python main.py ball --R 1 --p 2

  # Bernoulli constant of a domain
  python main.py lambda --body '{"disk": {"R": 1}}' --p 2

  # Exterior and interior problems
  python main.py exterior --body '{"ellipse": {"a": 2, "b": 1}}' --tau 1 --p 2
  python main.py interior --body body.json --tau 4 --p 3

  # Levelwise combination of two rings
  python main.py combine --rings rings.json --p 2

  # Verification suites
  python main.py verify --suite bm --config pairs.json --jobs 4
  python main.py verify --suite all
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ball = sub.add_parser("ball", help="Closed-form Bernoulli constant of a ball")
    ball.add_argument("--R", type=float, required=True, help="Ball radius")
    ball.add_argument("--p", type=float, required=True, help="Exponent p > 1")
    ball.add_argument("--N", type=int, default=2, help="Space dimension (default 2)")

    for name, help_text in (("exterior", "Solve the exterior problem for (K, tau)"),
                            ("interior", "Solve the interior problem for (Omega, tau)")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--body", required=True, help="Body spec: JSON string or JSON/YAML file")
        cmd.add_argument("--tau", type=float, required=True, help="Prescribed boundary gradient")
        cmd.add_argument("--p", type=float, required=True, help="Exponent p > 1")
        _add_settings_flags(cmd)

    lam = sub.add_parser("lambda", help="Bernoulli constant of a domain")
    lam.add_argument("--body", required=True, help="Body spec: JSON string or JSON/YAML file")
    lam.add_argument("--p", type=float, required=True, help="Exponent p > 1")
    _add_settings_flags(lam)

    combine = sub.add_parser("combine", help="Levelwise Minkowski combination of ring solutions")
    combine.add_argument("--rings", required=True,
                         help='List of {"outer": body, "inner": body, "weight": w}: JSON string or file')
    combine.add_argument("--p", type=float, required=True, help="Exponent p > 1")
    _add_settings_flags(combine)

    verify = sub.add_parser("verify", help="Run named verification suites")
    verify.add_argument("--suite", action="append", required=True,
                        help="Suite name (repeatable); 'all' runs every suite")
    verify.add_argument("--config", help="Suite configuration: JSON string or JSON/YAML file")
    _add_settings_flags(verify)

    return parser


def _settings(args: argparse.Namespace) -> LabSettings:
    try:
        return LabSettings.from_env().with_overrides(
            M=getattr(args, "M", None),
            L=getattr(args, "L", None),
            newton_tol=getattr(args, "newton_tol", None),
            fp_tol=getattr(args, "fp_tol", None),
            bisect_tol=getattr(args, "bisect_tol", None),
            out_dir=getattr(args, "out", None),
            jobs=getattr(args, "jobs", None),
        )
    except ValueError as e:
        raise UsageError(str(e))


def _body(value: str):
    return parse_body_spec(load_document(value))


def _out(settings: LabSettings) -> Path:
    return Path(settings.out_dir)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ball(args: argparse.Namespace, settings: LabSettings) -> Dict[str, Any]:
    try:
        value = lambda_ball(args.R, args.p, args.N)
    except ValueError as e:
        raise UsageError(str(e))
    return {"lambda": value, "R": args.R, "p": args.p, "N": args.N}


def cmd_lambda(args: argparse.Namespace, settings: LabSettings) -> Dict[str, Any]:
    body = _body(args.body)
    h = sample_support(body, settings.grid())
    result = bernoulli_constant(h, args.p, settings=settings)
    return {"body": body.to_dict(), "p": args.p, **result.to_dict()}


def cmd_exterior(args: argparse.Namespace, settings: LabSettings) -> Dict[str, Any]:
    body = _body(args.body)
    sol = solve_exterior(sample_support(body, settings.grid()), args.tau, settings.plaplace(args.p),
                         settings=settings)
    out = _out(settings)
    artifacts = {
        "h_Omega": write_csv(out / "exterior_h_omega.csv", SUPPORT_COLUMNS, sol.h_Omega.to_rows()),
        "gradient": write_csv(out / "exterior_gradient.csv", GRADIENT_COLUMNS, sol.gradient_rows()),
        "ring": write_csv(out / "exterior_ring.csv", RING_COLUMNS, sol.ring.to_rows()),
    }
    return {"body": body.to_dict(), "p": args.p, **sol.summary(), "artifacts": {k: str(v) for k, v in artifacts.items()}}


def cmd_interior(args: argparse.Namespace, settings: LabSettings) -> Dict[str, Any]:
    body = _body(args.body)
    sol = solve_interior(sample_support(body, settings.grid()), args.tau, settings.plaplace(args.p),
                         settings=settings)
    summary = {"body": body.to_dict(), "p": args.p, **sol.summary()}
    if not sol.feasible:
        logger.info(f"tau={args.tau} is infeasible ({sol.reason})")
        return summary
    out = _out(settings)
    artifacts = {
        "h_K": write_csv(out / "interior_h_k.csv", SUPPORT_COLUMNS, sol.h_K.to_rows()),
        "gradient": write_csv(out / "interior_gradient.csv", GRADIENT_COLUMNS, sol.gradient_rows()),
        "ring": write_csv(out / "interior_ring.csv", RING_COLUMNS, sol.ring.to_rows()),
    }
    summary["artifacts"] = {k: str(v) for k, v in artifacts.items()}
    return summary


def cmd_combine(args: argparse.Namespace, settings: LabSettings) -> Dict[str, Any]:
    entries = load_document(args.rings)
    if not isinstance(entries, list) or len(entries) < 2:
        raise UsageError("--rings must be a list of at least two {outer, inner, weight} entries")
    try:
        weights = [float(e["weight"]) for e in entries]
        pairs = [(parse_body_spec(e["outer"]), parse_body_spec(e["inner"])) for e in entries]
    except (KeyError, TypeError) as e:
        raise UsageError(f"Malformed ring entry: {e}")

    grid = settings.grid()
    params = settings.plaplace(args.p)
    rings = [solve_ring(sample_support(outer, grid), sample_support(inner, grid), params) for outer, inner in pairs]
    H = combine_solutions(weights, rings)
    identity = gradient_harmonic_mean_check(rings, weights, settings.hm_tol)
    tau_mix = 1.0 / sum(w / float(np.max(boundary_gradient(r, "inner"))) for w, r in zip(weights, rings))
    membership = is_subsolution(H, tau_mix, params, settings.sign_tol_rel, 2.0 * settings.fp_tol)
    path = write_csv(_out(settings) / "combined_ring.csv", RING_COLUMNS, matrix_rows(H, params))
    return {
        "p": args.p,
        "weights": weights,
        "rings": [r.summary() for r in rings],
        "harmonic_mean": identity.to_dict(),
        "tau_lambda": tau_mix,
        "subsolution": membership.to_dict(),
        "artifacts": {"ring": str(path)},
    }


def cmd_verify(args: argparse.Namespace, settings: LabSettings) -> Dict[str, Any]:
    config: Dict[str, Any] = load_document(args.config) if args.config else {}
    if not isinstance(config, dict):
        raise UsageError("Suite configuration must be an object")
    registry = get_registry()
    names = args.suite
    if len(names) == 1 and names[0] != "all" and names[0] not in config:
        config = {names[0]: config}
    try:
        cases = registry.expand(names, config, settings)
    except (KeyError, ValueError) as e:
        raise UsageError(str(e).strip("'\""))

    reports = asyncio.run(registry.run_cases(cases, settings.jobs))
    out = _out(settings)
    for report in reports:
        stem = artifact_stem(report.name)
        write_csv(out / f"{stem}_margins.csv", MARGIN_COLUMNS, report.margin_rows())
        write_csv(out / f"{stem}_quantities.csv", QUANTITY_COLUMNS, report.quantity_rows())
        for table_name, table in sorted(report.tables.items()):
            write_csv(out / f"{stem}_{table_name}.csv", table.columns, table.rows)
    return {
        "suites": names,
        "passed": all(r.ok for r in reports),
        "counts": {status: sum(1 for r in reports if r.status.value == status)
                   for status in ("passed", "failed", "error", "info")},
        "reports": [r.to_dict() for r in reports],
    }


COMMANDS = {
    "ball": cmd_ball,
    "lambda": cmd_lambda,
    "exterior": cmd_exterior,
    "interior": cmd_interior,
    "combine": cmd_combine,
    "verify": cmd_verify,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the subcommand, print its JSON summary and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        settings = _settings(args)
        summary = COMMANDS[args.command](args, settings)
        summary["settings"] = settings.to_dict()
        write_json(summary)
        if args.command == "verify" and not summary["passed"]:
            return EXIT_FAILURE
        return EXIT_OK
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        write_json({"kind": "usage_error", "detail": str(e), "context": {}})
        return EXIT_USAGE
    except BernoulliLabError as e:
        logger.error(f"{e.kind}: {e.detail}")
        write_json(e.to_dict())
        return EXIT_FAILURE
    except ValueError as e:
        logger.error(f"Invalid argument: {e}")
        write_json({"kind": "usage_error", "detail": str(e), "context": {}})
        return EXIT_USAGE
