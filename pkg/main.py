#!/usr/bin/env python3
"""
Command-line entrypoint for the elliptic Springer verifier

JSON reports go to standard output, logging to standard error.
Exit codes: 0 pass, 1 mismatch or unverified, 2 usage error.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import BaseModel

from analysis.affine_roots import AffineRootSystem, Slope
from analysis.alcove_plot import clan_picture
from analysis.root_data import build_root_datum
from analysis.verification_orchestrator import VerificationOrchestrator
from backend.config import settings as default_settings

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--deep', action='store_true', help='Use the deep budgets (E7/E8 centralizers, large W_c)')
    common.add_argument('--seed', type=int, help='Seed of every randomized path (default from SPRINGER_SEED)')
    common.add_argument('--verbose', action='store_true', help='Enable verbose logging')

    parser = argparse.ArgumentParser(description='Exact verifier for elliptic affine Springer fiber data')
    commands = parser.add_subparsers(dest='command', required=True)

    classify = commands.add_parser('classify', parents=[common], help='Elliptic numbers and torsion data of a type')
    classify.add_argument('type', help='Cartan type letter A..G')
    classify.add_argument('rank', type=int)

    verify = commands.add_parser('verify334', parents=[common], help='Antisymmetrization identity at slope K/M')
    verify.add_argument('type')
    verify.add_argument('rank', type=int)
    verify.add_argument('m', type=int)
    verify.add_argument('k', type=int)

    for name, text in (('clans', 'Clan table of the W^c alcoves'), ('chi', 'Euler characteristics and total')):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument('type')
        sub.add_argument('rank', type=int)
        sub.add_argument('k', type=int)
        sub.add_argument('m', type=int)
        sub.add_argument('--radius', type=int, default=5, help='Word length bound of the alcove walk (default: 5)')
        if name == 'clans':
            sub.add_argument('--plot', metavar='FILE', help='Save a picture of the clans (rank 2 only)')

    checkmod = commands.add_parser('checkmod', parents=[common], help='Check a module definition file')
    checkmod.add_argument('file')

    commands.add_parser('selftest', parents=[common], help='Run the full golden suite')
    return parser


def emit(report: BaseModel) -> None:
    print(json.dumps(report.model_dump(), indent=2, sort_keys=True, default=str))


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and print its JSON report

    Args:
        argv: argument list (defaults to sys.argv[1:])

    Returns:
        exit code
    """
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    settings = default_settings
    if args.deep:
        settings = settings.deepened()
    if args.seed is not None:
        settings = settings.with_seed(args.seed)
    orchestrator = VerificationOrchestrator(settings)

    try:
        if args.command == 'classify':
            report = orchestrator.classify(args.type, args.rank)
            emit(report)
            failed = [row.m for row in report.rows if row.error and not row.budget_exceeded]
            return EXIT_MISMATCH if failed else EXIT_PASS

        if args.command == 'verify334':
            verdict = orchestrator.verify334(args.type, args.rank, args.m, args.k)
            emit(verdict)
            return EXIT_PASS if verdict.passed else EXIT_MISMATCH

        if args.command == 'clans':
            report = orchestrator.clans(args.type, args.rank, args.k, args.m, args.radius)
            if args.plot:
                system = AffineRootSystem(build_root_datum(args.type, args.rank), Slope(args.k, args.m))
                clan_picture(system, args.radius, args.plot)
            emit(report)
            failed = [name for name, check in report.checks.items() if not check['passed']]
            return EXIT_MISMATCH if failed else EXIT_PASS

        if args.command == 'chi':
            report = orchestrator.chi(args.type, args.rank, args.k, args.m, args.radius)
            if not report.frontier_zero:
                logger.warning(f"Alcoves at radius {args.radius} still contribute; increase --radius")
            emit(report)
            return EXIT_PASS

        if args.command == 'checkmod':
            verdict = orchestrator.checkmod(args.file)
            emit(verdict)
            return EXIT_PASS if verdict.passed else EXIT_MISMATCH

        verdict = orchestrator.selftest()
        emit(verdict)
        return EXIT_PASS if verdict.passed else EXIT_MISMATCH

    except (ValueError, FileNotFoundError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
