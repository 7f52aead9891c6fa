#!/usr/bin/env python3
"""
Demo script walking through the G2 and C2 tables
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(__file__)))

import logging

import pandas as pd

from analysis.affine_roots import Slope, parse_word
from analysis.daha_check import builtin_modules, verify_module
from analysis.localization import Localizer
from analysis.verification_orchestrator import VerificationOrchestrator, classification_table, clan_table

logging.basicConfig(level=logging.WARNING, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')


def print_separator(title):
    """Print a formatted separator with title"""
    print("\n" + "=" * 60)
    print(f" {title}")
    print("=" * 60)


def print_subsection(title):
    """Print a formatted subsection title"""
    print(f"\n--- {title} ---")


def demo_classification(orchestrator, type_label, rank):
    print_separator(f"CLASSIFICATION: {type_label}{rank}")
    report = orchestrator.classify(type_label, rank)
    print(f"Degrees: {report.degrees}   Coxeter number: {report.coxeter_number}   |W| = {report.weyl_order}")
    print(f"Elliptic numbers: {report.elliptic_numbers}")
    print(f"Regular numbers:  {report.regular_numbers}")
    print(f"Exhaustive scan agrees: {report.exhaustive}")
    print_subsection("Per elliptic number")
    print(classification_table(report).to_string())


def demo_clans(orchestrator, type_label, rank, k, m, radius):
    print_separator(f"CLANS: {type_label}{rank} c={k}/{m}")
    report = orchestrator.clans(type_label, rank, k, m, radius)
    print(f"n_c = {report.n_c}")
    print(f"Delta_c^+ = {', '.join(report.delta_c_plus) or '(empty)'}")
    print(f"D_c       = {', '.join(report.frak_d_c)}")
    print_subsection(f"Clans within radius {radius}")
    print(clan_table(report).to_string(index=False))


def demo_point_counts(orchestrator, type_label, rank, k, m, words, radius):
    print_separator(f"LOCALIZATION: {type_label}{rank} c={k}/{m}")
    localizer = Localizer(orchestrator.weyl_group(type_label, rank), Slope(k, m))
    verdict = localizer.verify_334()
    print(f"Antisymmetrization identity: {verdict['status']} (|W_c| = {verdict.get('wc_order')})")
    point = localizer.generic_point()
    rows = []
    for word in words:
        alcove = localizer.affine.from_word(parse_word(word))
        rows.append({"alcove": word, "|D_c,w|": len(localizer.affine.frak_d_cw(alcove)),
                     "chi": localizer.chi_fiber(alcove, point)})
    print(pd.DataFrame(rows).to_string(index=False))
    totals = localizer.total_chi(radius)
    print(f"\nTotal Euler characteristic within radius {radius}: {totals['total']}")


def demo_modules():
    print_separator("MODULE RELATIONS")
    rows = []
    for module in builtin_modules():
        result = verify_module(module)
        rows.append({"module": module.name, "dim": module.dim, "relations": result["checked"],
                     "passed": result["passed"]})
    print(pd.DataFrame(rows).to_string(index=False))


def main():
    """Main demo function"""
    print_separator("ELLIPTIC SPRINGER VERIFIER - DEMO")
    orchestrator = VerificationOrchestrator()

    try:
        demo_classification(orchestrator, "G", 2)
        demo_classification(orchestrator, "C", 2)

        demo_clans(orchestrator, "G", 2, 1, 2, 5)
        demo_clans(orchestrator, "G", 2, 1, 3, 4)
        demo_clans(orchestrator, "C", 2, 1, 2, 4)

        demo_point_counts(orchestrator, "G", 2, 1, 2, ["1", "s0", "s0 s2", "s0 s2 s1", "s0 s2 s1 s2"], 5)
        demo_point_counts(orchestrator, "G", 2, 1, 3, ["1", "s0", "s0 s2"], 5)
        demo_point_counts(orchestrator, "C", 2, 1, 2, ["1", "s0", "s2 s0"], 5)

        demo_modules()

        print_separator("DEMO COMPLETED")
        print("Run `python main.py selftest` for the full golden suite.")

    except Exception as e:
        print(f"\nDemo failed with error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
