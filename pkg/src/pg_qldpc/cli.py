"""Command-line front end: generate, verify, analyze, distance and simulate."""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.rule import Rule
from rich.table import Table

from pg_qldpc import __version__
from pg_qldpc.classical import (
    EnumerationBudgetError,
    ParityCheckMatrix,
    build_construction,
    code_record,
    distance_summary,
    distance_witness,
    min_distance_oracle,
    verify_record,
    with_distance,
)
from pg_qldpc.configuration import ENV_PREFIX, MAX_CODE_S, Configuration, Construction, Family, family_constructions
from pg_qldpc.css import CssCode, NotOrthogonalError, build_family, claim_report, quantum_distance_exact, with_distance as with_quantum_distance
from pg_qldpc.decoder import run_monte_carlo, write_curve_csv
from pg_qldpc.geometry import (
    IRREDUCIBLE_POLYNOMIALS,
    GeometryInvariantError,
    HyperovalPartition,
    PlaneModel,
    UnsupportedFieldError,
    build_plane,
    polynomial_str,
    regular_hyperoval,
)
from pg_qldpc.gf2 import ShapeMismatchError, block_diagonal
from pg_qldpc.state import ClaimCheck, CodeReport, Verdict
from pg_qldpc.tanner import analyze
from pg_qldpc.utils import parse_p_grid, parse_p_list, stamp_metadata, write_alist, write_json
from pg_qldpc.verifier import run_verification

console = Console()

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

VERDICT_STYLE = {
    Verdict.PASS: "green",
    Verdict.FAIL: "bold red",
    Verdict.FLAG: "yellow",
    Verdict.UNVERIFIED: "cyan",
}

# Flags that map one-to-one onto Configuration fields.
CONFIG_FLAGS = ("jobs", "distance_cap", "trials", "seed", "bp_max_iters", "bp_clip", "bp_damping", "stamp")


##########################
# Helpers
##########################

def _configuration(args: argparse.Namespace) -> Configuration:
    """Resolve settings from the environment, then apply flags given on the command line."""
    overrides = {}
    for name in CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is not None and value is not False:
            overrides[name] = value
    base = Configuration.from_runnable_config()
    return Configuration.model_validate({**base.model_dump(), **overrides})


def _geometry(s: int) -> tuple[PlaneModel, HyperovalPartition]:
    if not 1 <= s <= MAX_CODE_S:
        raise UnsupportedFieldError(f"codes are built for 1 <= s <= {MAX_CODE_S}, got s={s}")
    plane = build_plane(s)
    return plane, regular_hyperoval(plane)


def _base_report(subject: str, s: int, n: int, config: Configuration) -> CodeReport:
    return CodeReport(
        subject=subject,
        s=s,
        q=2**s,
        n=n,
        field_polynomial=polynomial_str(IRREDUCIBLE_POLYNOMIALS[s]),
        version=__version__,
        metadata=stamp_metadata() if config.stamp else {},
    )


def _render_checks(title: str, checks: Sequence[ClaimCheck]) -> None:
    table = Table(title=title, show_lines=False)
    table.add_column("check")
    table.add_column("stated")
    table.add_column("computed")
    table.add_column("verdict")
    table.add_column("note", style="dim")
    for check in checks:
        style = VERDICT_STYLE[check.verdict]
        table.add_row(check.name, check.claim, check.computed, f"[{style}]{check.verdict.value}[/{style}]", check.note)
    console.print(table)


def _render_stats(title: str, stats: dict[str, Any]) -> None:
    table = Table(title=title)
    table.add_column("measure")
    table.add_column("value")
    for key, value in stats.items():
        table.add_row(key, str(value))
    console.print(table)


def _classical_matrix(args: argparse.Namespace) -> ParityCheckMatrix:
    plane, partition = _geometry(args.s)
    return build_construction(Construction(args.construction), plane, partition)


def _quantum_code(args: argparse.Namespace) -> CssCode:
    plane, partition = _geometry(args.s)
    return build_family(Family(args.family), args.s, plane, partition)


def _out_stem(path: str) -> Path:
    target = Path(path)
    return target.with_suffix("") if target.suffix in (".csv", ".json") else target


##########################
# Subcommands
##########################

def cmd_generate(args: argparse.Namespace, config: Configuration) -> int:
    """Write alist matrices and a JSON report."""
    prefix = args.out_prefix
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    plane, partition = _geometry(args.s)

    if args.family:
        family = Family(args.family)
        code = build_family(family, args.s, plane, partition)
        write_alist(code.H_X.H, f"{prefix}.hx.alist")
        write_alist(code.H_Z.H, f"{prefix}.hz.alist")
        report = _base_report(family.value, args.s, code.n, config)
        records = [code_record(H, witness=distance_witness(H.construction, plane, partition)) for H in {code.H_X.construction: code.H_X, code.H_Z.construction: code.H_Z}.values()]
        report = report.model_copy(
            update={
                "classical": [r.to_summary() for r in records],
                "K": code.K,
                "stabilizer_count": code.stabilizer_count,
                "distance": distance_summary(code.claim.D, None),
                "tanner": {
                    "H_X": analyze(code.H_X.H).as_dict(),
                    "H_Z": analyze(code.H_Z.H).as_dict(),
                    "stabilizer": analyze(block_diagonal(code.H_X.H, code.H_Z.H)).as_dict(),
                },
                "checks": claim_report(code) + [c for r in records for c in verify_record(r)],
            }
        )
        console.print(f"[green]{family.value}[/green] s={args.s}: [[{code.n}, {code.K}]] with {code.stabilizer_count} stabilizers")
    else:
        construction = Construction(args.construction)
        H = build_construction(construction, plane, partition)
        write_alist(H.H, f"{prefix}.alist")
        record = code_record(H, witness=distance_witness(construction, plane, partition))
        report = _base_report(construction.value, args.s, H.n, config).model_copy(
            update={
                "classical": [record.to_summary()],
                "tanner": {"H": analyze(H.H).as_dict()},
                "checks": verify_record(record),
            }
        )
        console.print(f"[green]{construction.value}[/green] s={args.s}: {H.shape[0]}x{H.shape[1]}, rank {record.rank}, k={record.k}")

    write_json(report, f"{prefix}.json")
    console.print(f"[dim]wrote {prefix}.*[/dim]")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: Configuration) -> int:
    """Run the claim sweep and exit nonzero on any FAIL."""
    families = list(Family) if args.all or not args.family else [Family(f) for f in args.family]
    console.print(Rule(f"[bold blue]Verifying PG(2,{2**args.s}) codes[/bold blue]"))
    result = run_verification(args.s, families, {"configurable": config.model_dump()})
    _render_checks(f"s={args.s}", result.checks)

    summary = ", ".join(f"{v.value}: {result.count(v)}" for v in Verdict)
    style = "red" if result.exit_code else "green"
    console.print(Panel(summary, title="Verification", style=style))
    if args.out:
        report = {
            "s": args.s,
            "families": [f.value for f in families],
            "checks": [c.model_dump(mode="json") for c in result.checks],
            "tanner": result.tanner,
            "version": __version__,
        }
        if config.stamp:
            report["metadata"] = stamp_metadata()
        write_json(report, args.out)
    return result.exit_code


def cmd_analyze(args: argparse.Namespace, config: Configuration) -> int:
    """Emit Tanner graph statistics."""
    if args.family:
        code = _quantum_code(args)
        stats = {
            "H_X": analyze(code.H_X.H).as_dict(),
            "H_Z": analyze(code.H_Z.H).as_dict(),
            "stabilizer": analyze(block_diagonal(code.H_X.H, code.H_Z.H)).as_dict(),
        }
    else:
        stats = {"H": analyze(_classical_matrix(args).H).as_dict()}
    for name, values in stats.items():
        _render_stats(f"{args.family or args.construction} s={args.s} {name}", values)
    if args.out:
        payload = {"subject": args.family or args.construction, "s": args.s, "tanner": stats}
        if config.stamp:
            payload["metadata"] = stamp_metadata()
        write_json(payload, args.out)
    return EXIT_OK


def cmd_distance(args: argparse.Namespace, config: Configuration) -> int:
    """Compute a classical or quantum minimum distance."""
    cap = config.distance_cap
    if args.family:
        code = _quantum_code(args)
        result = quantum_distance_exact(code, cap=cap, budget_bits=config.enumeration_budget_bits, jobs=config.jobs)
        code = with_quantum_distance(code, result)
        checks = [c for c in claim_report(code) if c.name.endswith(".D")]
        summary = distance_summary(code.claim.D, result)
    else:
        H = _classical_matrix(args)
        result = min_distance_oracle(H, cap=cap, budget_bits=config.enumeration_budget_bits, jobs=config.jobs)
        record = with_distance(code_record(H), result)
        checks = [c for c in verify_record(record) if c.name.endswith(".d")]
        summary = distance_summary(record.claim.d, result)

    if result.exact is not None and math.isinf(result.exact):
        console.print("distance: [bold]inf[/bold] (no nonzero logical or codeword)")
    elif result.exact is not None:
        console.print(f"distance: [bold]{int(result.exact)}[/bold] ({result.method})")
    else:
        console.print(f"distance: [bold]>= {int(result.lower_bound)}[/bold] ({result.method})")
    _render_checks("stated distance", checks)
    if args.out:
        write_json(summary, args.out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, config: Configuration) -> int:
    """Estimate logical error rates under depolarizing noise."""
    grid = parse_p_list(args.p_list) if args.p_list else parse_p_grid(args.p_grid)
    code = _quantum_code(args)
    console.print(f"simulating {code.family.value} s={args.s} [[{code.n}, {code.K}]] at {len(grid)} points, {config.trials} trials each")
    curve = run_monte_carlo(code, grid, config.trials, config.seed, config)

    stem = _out_stem(args.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    write_curve_csv(curve, stem.with_suffix(".csv"))
    payload = curve.model_dump(mode="json")
    if config.stamp:
        payload["metadata"] = stamp_metadata()
    write_json(payload, stem.with_suffix(".json"))

    table = Table(title="logical error rate")
    for column in ("p", "failures", "rate", "95% CI", "exact recovery"):
        table.add_column(column)
    for point in curve.points:
        table.add_row(f"{point.p:.4g}", str(point.failures), f"{point.rate:.4g}", f"[{point.ci_low:.3g}, {point.ci_high:.3g}]", f"{point.exact_recovery_rate:.4g}")
    console.print(table)
    return EXIT_OK


##########################
# Parser
##########################

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--s", type=int, required=True, help=f"Field exponent, q = 2^s (1..{MAX_CODE_S})")
    parser.add_argument("--jobs", type=int, help=f"Worker processes (default: ${ENV_PREFIX}JOBS or 1)")
    parser.add_argument("--stamp", action="store_true", help="Add generation metadata to JSON output")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")


def _add_subject(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--family", choices=[f.value for f in Family], help="Quantum code family")
    group.add_argument("--construction", choices=[c.value for c in Construction], help="Classical construction")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(prog="pg-qldpc", description="Classical and quantum LDPC codes from PG(2,2^s)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    generate = sub.add_parser("generate", help="Export parity-check matrices (alist) and a JSON report")
    _add_common(generate)
    _add_subject(generate)
    generate.add_argument("--out-prefix", required=True, help="Output path prefix")

    verify = sub.add_parser("verify", help="Check every stated parameter")
    _add_common(verify)
    selection = verify.add_mutually_exclusive_group()
    selection.add_argument("--family", action="append", choices=[f.value for f in Family], help="Family to verify (repeatable)")
    selection.add_argument("--all", action="store_true", help="Verify all four families")
    verify.add_argument("--distance-cap", type=int, help="Weight cap for searches beyond the enumeration budget")
    verify.add_argument("--out", help="Write the check list as JSON")

    analyze_cmd = sub.add_parser("analyze", help="Tanner graph statistics")
    _add_common(analyze_cmd)
    _add_subject(analyze_cmd)
    analyze_cmd.add_argument("--out", help="Write statistics as JSON")

    distance = sub.add_parser("distance", help="Minimum distance of a construction or family")
    _add_common(distance)
    _add_subject(distance)
    distance.add_argument("--cap", dest="distance_cap", type=int, help="Weight cap for searches beyond the enumeration budget")
    distance.add_argument("--out", help="Write the distance summary as JSON")

    simulate = sub.add_parser("simulate", help="Monte Carlo decoding under depolarizing noise")
    _add_common(simulate)
    simulate.add_argument("--family", required=True, choices=[f.value for f in Family], help="Quantum code family")
    grid = simulate.add_mutually_exclusive_group(required=True)
    grid.add_argument("--p-grid", help="start:stop:count, linearly spaced")
    grid.add_argument("--p-list", help="Comma-separated probabilities")
    simulate.add_argument("--trials", type=int, help="Trials per grid point")
    simulate.add_argument("--seed", type=int, help="Master seed")
    simulate.add_argument("--bp-max-iters", type=int, help="Decoder iteration limit")
    simulate.add_argument("--bp-clip", type=float, help="LLR clipping magnitude")
    simulate.add_argument("--bp-damping", type=float, help="Check-to-bit message damping in [0, 1)")
    simulate.add_argument("--out", required=True, help="Output path stem for .csv and .json")
    return parser


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "analyze": cmd_analyze,
    "distance": cmd_distance,
    "simulate": cmd_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the pg-qldpc command and return its exit code."""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )
    try:
        config = _configuration(args)
        return COMMANDS[args.command](args, config)
    except ValidationError as exc:
        console.print(f"[red]Invalid option: {exc.errors()[0]['loc'][0]}: {exc.errors()[0]['msg']}[/red]")
        return EXIT_USAGE
    except (UnsupportedFieldError, NotOrthogonalError, ShapeMismatchError, EnumerationBudgetError, ValueError) as exc:
        console.print(f"[red]Error: {exc}[/red]")
        return EXIT_USAGE
    except GeometryInvariantError as exc:
        console.print(f"[red]Geometry invariant violated: {exc}[/red]")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
