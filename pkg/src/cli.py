"""
Command-line front end for the verification engine.

Every command prints a human-readable summary, or with --json a single
report document. Exit codes: 0 when every check passed, 1 on a failed
verdict or table mismatch, 2 on bad input (including a seed file that
leaves a quotient degree uncovered), 3 when a resource or precision limit
was hit.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# Load environment variables from .env file before anything else
load_dotenv()

from src.engine import __version__
from src.engine.calculus.arith import WS_EXACT_K_LIMIT
from src.engine.engine import VerificationEngine
from src.engine.config import load_settings
from src.engine.errors import (
    InadmissibleInputError, InsufficientPrecisionError, MissingQuotientBoundError, ResourceLimitError
)
from src.engine.groups.fixtures import SUITES
from src.engine.models.certificate import BoundCertificate, bound_mode_str_map
from src.engine.models.report import Report

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

DEFAULT_PROFILE_LIMIT = 20


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a machine-readable report")
    common.add_argument("--verbose", action="store_true", help="progress messages and debug logging")
    common.add_argument("--seeds", metavar="PATH", help="seed constant file (replaces the bundled one)")
    common.add_argument("--mode", choices=sorted(bound_mode_str_map), help="row evaluation mode")

    parser = argparse.ArgumentParser(prog="engine", description="generation-bound verification engine")
    commands = parser.add_subparsers(dest="command", required=True)

    esol = commands.add_parser(
        "esol", parents=[common],
        help=f"factorization statistics and E_sol(s, 2); ws is evaluated exactly only for K(s) <= {WS_EXACT_K_LIMIT}",
    )
    esol.add_argument("s", type=int)

    thresh = commands.add_parser("threshold", parents=[common], help="floor(sqrt(3)/2 * n / sqrt(log2 n))")
    thresh.add_argument("n", type=int)
    thresh.add_argument("--precision", type=int, default=64, metavar="BITS", help="initial working precision")

    profiles = commands.add_parser("profiles", parents=[common], help="applicable rows and orbit profiles")
    profiles.add_argument("m", type=int)
    profiles.add_argument("--row", type=int)
    profiles.add_argument("--limit", type=int, default=DEFAULT_PROFILE_LIMIT, help="profiles shown per row")
    profiles.add_argument("--all", action="store_true", help="show every profile")

    bound = commands.add_parser("bound", parents=[common], help="certificate for one exceptional degree")
    bound.add_argument("n", type=int)

    chain = commands.add_parser("verify-chain", parents=[common], help="inductive sweep over the families")
    chain.add_argument("--family", choices=["5", "15", "all"], default="all")

    groups = commands.add_parser("verify-groups", parents=[common], help="brute-force group suites")
    groups.add_argument("--suite", default=",".join(SUITES), help=f"comma-separated subset of {','.join(SUITES)}")

    commands.add_parser("checkpoints", parents=[common], help="replay the published 2^17*5 values")
    commands.add_parser("version", parents=[common], help="print the engine version")
    return parser


def _rational(value: Dict[str, Any]) -> str:
    if value["denominator"] == 1:
        return str(value["numerator"])
    return f"{value['numerator']}/{value['denominator']} ({value['decimal']})"


def _print_certificate(certificate: BoundCertificate) -> None:
    print(f"degree {certificate.degree} (quotient degree {certificate.quotient_degree}, {certificate.mode.value} mode)")
    quotient = certificate.quotient
    print(f"  quotient bound: {quotient.bound} [{quotient.provenance.value}] {quotient.source}")
    for row in certificate.row_maxima:
        print(f"  row {row.row_id:>2} [{row.method}]: {row.value}  ({row.instances} instances)")
    if certificate.witness is not None:
        print(f"  witness: row {certificate.witness.row_id} {certificate.witness.assignment}")
        print(f"  witness profile: {certificate.witness.profile}")
    print(f"  total: {certificate.total}  threshold: {certificate.threshold}  margin: {certificate.margin}")
    print(f"  verdict: {certificate.verdict.value}")
    for note in certificate.notes:
        print(f"  note: {note}")


def _run(args: argparse.Namespace, engine: VerificationEngine) -> Report:
    mode = bound_mode_str_map[args.mode] if args.mode else engine.settings.mode
    inputs: Dict[str, Any] = {}
    ok = True

    if args.command == "esol":
        inputs = {"s": args.s}
        results = engine.esol_report(args.s)
        if not args.json:
            print(f"s = {results['s']} = {results['factorization']}")
            print(f"omega = {results['omega']}, omega1 = {results['omega1']}, K = {results['K']}")
            if results["ws"] is None:
                print(f"ws = not evaluated ({results['ws_note']})")
            else:
                print(f"ws = {_rational(results['ws'])}")
            print(f"s_2 = {results['s_2']}")
            print(f"E_sol = {_rational(results['e_sol'])}")

    elif args.command == "threshold":
        inputs = {"n": args.n, "precision": args.precision}
        results = engine.threshold_report(args.n, args.precision)
        ok = results["stable_under_doubling"]
        if not args.json:
            print(f"threshold({args.n}) = {results['threshold']}")
            print(f"enclosure at {args.precision} bits: [{results['enclosure'][0]}, {results['enclosure'][1]}]")
            print(f"stable under precision doubling: {results['stable_under_doubling']}")

    elif args.command == "profiles":
        limit = None if args.all else args.limit
        inputs = {"m": args.m, "row": args.row, "limit": limit}
        results = engine.profiles_report(args.m, args.row, limit)
        if not args.json:
            for row in results["rows"]:
                print(f"row {row['row_id']} ({row['degree_expression']}): {row['profile_count']} profiles")
                for entry in row["profiles"]:
                    print(f"  {entry['assignment']} -> {entry['profile']}")
                if row["truncated"]:
                    print(f"  ... {row['profile_count'] - len(row['profiles'])} more (use --all)")

    elif args.command == "bound":
        inputs = {"n": args.n, "mode": mode.value, "seeds": args.seeds}
        certificate = engine.bound(args.n, mode)
        results = certificate.model_dump(mode="json")
        ok = certificate.passed
        if not args.json:
            _print_certificate(certificate)

    elif args.command == "verify-chain":
        families = [5, 15] if args.family == "all" else [int(args.family)]
        inputs = {"family": args.family, "mode": mode.value, "seeds": args.seeds}
        certificates = engine.verify_chain(families, mode)
        passed = sum(1 for c in certificates if c.passed)
        ok = passed == len(certificates)
        results = {
            "passed": passed,
            "count": len(certificates),
            "certificates": [c.model_dump(mode="json") for c in certificates],
        }
        if not args.json:
            for certificate in certificates:
                print(certificate.summary_line())
                for note in certificate.notes:
                    print(f"    note: {note}")
            print(f"{passed}/{len(certificates)} PASS")

    elif args.command == "verify-groups":
        suites = [s.strip() for s in args.suite.split(",") if s.strip()]
        inputs = {"suites": suites}
        outcomes = engine.verify_groups(suites)
        ok = all(o.passed for o in outcomes)
        results = {
            "passed": sum(1 for o in outcomes if o.passed),
            "count": len(outcomes),
            "outcomes": [o.model_dump(mode="json") for o in outcomes],
        }
        if not args.json:
            for outcome in outcomes:
                status = "ok" if outcome.passed else "MISMATCH"
                print(f"{outcome.suite:<5} {outcome.name:<28} {outcome.observed} {status}")
                if outcome.law is not None:
                    print(f"      law {outcome.law}: {'agrees' if outcome.law_matched else 'DISAGREES'}")
                for note in outcome.notes:
                    print(f"      note: {note}")
            print(f"{results['passed']}/{results['count']} fixtures match")

    elif args.command == "checkpoints":
        inputs = {"seeds": args.seeds}
        results = engine.checkpoints()
        ok = results["ok"]
        if not args.json:
            for check in results["checkpoints"]:
                print(f"{check['description']:<48} {check['floor']:>8} (expected {check['expected']}) "
                      f"{'ok' if check['ok'] else 'MISMATCH'}")
            print(f"maximum {results['maximum']}, certificate total {results['certificate_total']}, "
                  f"threshold {results['threshold']}: {results['verdict']}")

    else:
        results = {"version": __version__}
        if not args.json:
            print(__version__)

    return Report(
        engine_version=__version__,
        command=args.command,
        inputs=inputs,
        results=results,
        seed_digest=engine.seed_digest,
        ok=ok,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        settings = load_settings()
        engine = VerificationEngine(settings, seeds_path=args.seeds, verbose=args.verbose and not args.json)
        report = _run(args, engine)
    except MissingQuotientBoundError as exc:
        print(f"error: {exc}; add a seed constant for degree {exc.degree}", file=sys.stderr)
        return EXIT_INPUT
    except InadmissibleInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResourceLimitError, InsufficientPrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if args.json:
        print(report.to_json())
    return EXIT_OK if report.ok else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
