"""
Verification orchestrator that combines the analysis components into command reports
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(__file__)))

import logging
from math import gcd
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from analysis.affine_roots import AffineRootSystem, Slope, parse_word
from analysis.daha_check import builtin_modules, perturb, verify_module
from analysis.localization import Localizer
from analysis.root_data import build_root_datum, format_root
from analysis.torsion import TorsionAnalyzer
from analysis.weyl_group import BudgetExceededError, WeylGroup, create_weyl_group
from backend.config import Settings, settings as default_settings
from backend.golden.golden_store import GoldenStore, load_module
from backend.golden.models import (
    ChiReport,
    ClanReport,
    ClanRow,
    ClassifyReport,
    GoldenRecord,
    MRow,
    Verdict,
)

logger = logging.getLogger(__name__)

PERTURBATIONS_PER_MODULE = 20
INEQUALITY_RADIUS = 4


def second_numerator(m: int) -> int:
    """Smallest k >= 2 coprime to m"""
    k = 2
    while gcd(k, m) != 1:
        k += 1
    return k


class VerificationOrchestrator:
    """Orchestrates root data, Weyl group, torsion, affine, localization and module checks"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or default_settings
        self.store = GoldenStore(self.settings)
        self._groups: Dict[str, WeylGroup] = {}

    def weyl_group(self, type_label: str, rank: int) -> WeylGroup:
        key = f"{type_label}{rank}"
        if key not in self._groups:
            self._groups[key] = create_weyl_group(type_label, rank, self.settings)
        return self._groups[key]

    # ------------------------------------------------------------------ classify

    def classify(self, type_label: str, rank: int) -> ClassifyReport:
        """
        Elliptic numbers and per-m torsion data for one type

        Args:
            type_label: Cartan type letter
            rank: rank of the type

        Returns:
            ClassifyReport with one row per elliptic number
        """
        logger.info(f"Starting classification for {type_label}{rank}")
        weyl_group = self.weyl_group(type_label, rank)
        datum = weyl_group.datum

        en_report = weyl_group.elliptic_numbers_report(seed=self.settings.seed)
        regular = sorted(weyl_group.regular_numbers(seed=self.settings.seed))
        seed_words = weyl_group.check_seed_words()
        rows = [self._perform_m_row(weyl_group, m) for m in en_report["elliptic_numbers"]]

        report = ClassifyReport(
            type_label=type_label,
            rank=rank,
            degrees=list(datum.degrees),
            coxeter_number=datum.coxeter_number,
            weyl_order=datum.weyl_order,
            elliptic_numbers=en_report["elliptic_numbers"],
            regular_numbers=regular,
            exhaustive=en_report["complete"],
            seed_words=seed_words,
            rows=rows,
        )
        logger.info(f"Classification completed for {type_label}{rank}: EN={report.elliptic_numbers}")
        return report

    def _perform_m_row(self, weyl_group: WeylGroup, m: int) -> MRow:
        """Torsion groups, centralizer and orbit data for one elliptic number"""
        datum = weyl_group.datum
        analyzer = TorsionAnalyzer(weyl_group)
        try:
            w = weyl_group.elliptic_rep(m, seed=self.settings.seed)
            summary = analyzer.summary(w)
            row = MRow(
                m=m,
                i_m=datum.i_m(m),
                a_m=summary["a_m"],
                a_m_circ=summary["a_m_circ"],
                subsystem_type=Localizer(weyl_group, Slope(1, m)).subsystem_type(),
                representative=w.matrix.tolist(),
            )
        except Exception as e:
            logger.error(f"Error in classification row {datum.label} m={m}: {e}")
            return MRow(m=m, i_m=datum.i_m(m), error=str(e))

        # centralizers of non-central classes in E7/E8 need the deep budgets
        try:
            centralizer = weyl_group.centralizer(w)
            row.centralizer_order = centralizer.order
            row.orbit_sizes = analyzer.orbit_decomposition(w, centralizer)
            row.spherical_factors = len(row.orbit_sizes)
        except BudgetExceededError as e:
            logger.warning(f"Centralizer of {datum.label} m={m} not computed: {e}")
            row.error = str(e)
            row.budget_exceeded = True
        except Exception as e:
            logger.error(f"Error in centralizer orbits for {datum.label} m={m}: {e}")
            row.error = str(e)
        return row

    # ------------------------------------------------------------------ verify334

    def verify334(self, type_label: str, rank: int, m: int, k: int) -> Verdict:
        """
        Antisymmetrization identity at slope k/m, with the point count at the base alcove

        Args:
            type_label, rank: type
            m, k: slope c = k/m with k > 0

        Returns:
            Verdict with status holds / fails / unverified
        """
        slope = Slope(k, m)
        weyl_group = self.weyl_group(type_label, rank)
        if m not in weyl_group.candidate_numbers(elliptic=True):
            raise ValueError(f"m={m} is not an elliptic number candidate for {type_label}{rank}")
        localizer = Localizer(weyl_group, slope)
        result = localizer.verify_334()
        details = dict(result)
        failures = []
        if result["status"] == "holds":
            base = localizer.affine.fundamental_alcove()
            count = localizer.point_count(base)
            details["point_count_base"] = count
            if count != result["a_m_circ_order"]:
                failures.append(f"point count at w=1 is {count}, expected |A_m°| = {result['a_m_circ_order']}")
        elif result["status"] == "fails":
            failures.append(f"identity fails: {result.get('reason') or result.get('witness')}")
        else:
            failures.append(f"unverified: {result['reason']}")
        return Verdict(
            command="verify334",
            passed=result["status"] == "holds" and not failures,
            status=result["status"],
            details={"type": f"{type_label}{rank}", "slope": str(slope), **details},
            failures=failures,
        )

    # ------------------------------------------------------------------ clans and chi

    def clans(self, type_label: str, rank: int, k: int, m: int, radius: int) -> ClanReport:
        """Clan table of the W^c alcoves within the radius"""
        datum = build_root_datum(type_label, rank)
        system = AffineRootSystem(datum, Slope(k, m))
        rows = [
            ClanRow(
                words=clan["words"],
                size=len(clan["members"]),
                bounded=clan["bounded"],
                frak_d=[str(alpha) for alpha in clan["frak_d"]],
                touches_frontier=clan["touches_frontier"],
            )
            for clan in system.enumerate_clans(radius)
        ]
        checks = {}
        if k > 0:
            checks["inequality_w0"] = system.check_335a(radius)
        else:
            checks["dominant_chamber"] = system.check_negative_slope_dominant(radius)
        return ClanReport(
            type_label=type_label,
            rank=rank,
            slope=str(system.slope),
            radius=radius,
            n_c=system.n_c,
            delta_c_plus=[str(beta) for beta in system.delta_c_plus],
            frak_d_c=[str(alpha) for alpha in system.frak_d_c],
            clans=rows,
            checks=checks,
        )

    def chi(self, type_label: str, rank: int, k: int, m: int, radius: int) -> ChiReport:
        """Euler characteristics per clan and their total over W^c within the radius"""
        weyl_group = self.weyl_group(type_label, rank)
        localizer = Localizer(weyl_group, Slope(k, m))
        totals = localizer.total_chi(radius)
        by_word = {row["word"]: row["chi"] for row in totals["contributions"]}
        per_clan = []
        for clan in localizer.affine.enumerate_clans(radius):
            values = [by_word.get(word, 0) for word in clan["words"]]
            per_clan.append({"words": clan["words"], "chi_each": values[0], "chi_sum": sum(values),
                             "bounded": clan["bounded"]})
        return ChiReport(
            type_label=type_label,
            rank=rank,
            slope=str(localizer.slope),
            radius=radius,
            total=totals["total"],
            frontier_zero=totals["frontier_zero"],
            wc_order=totals["wc_order"],
            contributions=totals["contributions"],
            clans=per_clan,
        )

    # ------------------------------------------------------------------ modules

    def checkmod(self, path: str) -> Verdict:
        module = load_module(path)
        result = verify_module(module)
        return Verdict(
            command="checkmod",
            passed=result["passed"],
            status="pass" if result["passed"] else "fail",
            details={"name": module.name, "type": f"{module.type_label}{module.rank}", "c": str(module.c),
                     "dim": module.dim, "checked": result["checked"], "first_failure": result["first_failure"]},
            failures=result["failures"],
        )

    # ------------------------------------------------------------------ selftest

    def selftest(self) -> Verdict:
        """
        Run every golden comparison and the module catalog

        Returns:
            Verdict that fails on any mismatch
        """
        logger.info("Starting self-test over the golden data")
        sections = {
            "elliptic_numbers": self._perform_elliptic_number_checks(),
            "torsion": self._perform_torsion_checks(),
            "affine": self._perform_affine_checks(),
            "inequality_sweep": self._perform_inequality_sweep(),
            "localization": self._perform_localization_checks(),
            "modules": self._perform_module_checks(),
        }
        failures: List[str] = []
        for name, section in sections.items():
            if "error" in section:
                failures.append(f"{name}: {section['error']}")
            failures.extend(section.get("failures", []))

        table = self.section_table(sections)
        logger.info(f"Self-test summary:\n{table.to_string(index=False)}")
        return Verdict(
            command="selftest",
            passed=not failures,
            status="pass" if not failures else "mismatch",
            details={"sections": table.to_dict("records")},
            failures=failures,
        )

    @staticmethod
    def section_table(sections: Dict[str, Dict]) -> pd.DataFrame:
        rows = []
        for name, section in sections.items():
            rows.append({
                "section": name,
                "checked": section.get("checked", 0),
                "failures": len(section.get("failures", [])) + int("error" in section),
            })
        return pd.DataFrame(rows)

    def _compare(self, record: GoldenRecord, field: str, computed, expected, failures: List[str]) -> None:
        if computed == expected:
            return
        message = f"{record.label} {field}: computed {computed}, expected {expected} [{record.citation}]"
        logger.error(f"Golden mismatch: {message}")
        failures.append(message)

    def _perform_elliptic_number_checks(self) -> Dict:
        """Constructive EN, exhaustive completeness, seed words, exponent fact and EN in RN"""
        try:
            failures: List[str] = []
            checked = 0
            for record in self.store.records("elliptic_numbers"):
                weyl_group = self.weyl_group(record.type_label, record.rank)
                report = weyl_group.elliptic_numbers_report(seed=self.settings.seed)
                self._compare(record, "elliptic_numbers", report["elliptic_numbers"],
                              record.expected.elliptic_numbers, failures)
                if report["complete"] is False:
                    self._compare(record, "exhaustive scan", report["exhaustive"],
                                  report["elliptic_numbers"], failures)
                divisible = {m: e for m, e in weyl_group.exponent_fact(report["elliptic_numbers"]).items() if e}
                self._compare(record, "exponents divisible by m", divisible, {}, failures)
                regular = weyl_group.regular_numbers(seed=self.settings.seed)
                self._compare(record, "EN outside RN", sorted(set(report["elliptic_numbers"]) - regular), [],
                              failures)
                for seed in weyl_group.check_seed_words():
                    if seed["expected_order"] is not None and not seed["certified"]:
                        self._compare(record, f"seed {seed['class']}", seed["order"], seed["expected_order"],
                                      failures)
                checked += 1
            return {"checked": checked, "failures": failures}
        except Exception as e:
            logger.error(f"Error in elliptic number checks: {e}")
            return {"error": str(e)}

    def _perform_torsion_checks(self) -> Dict:
        try:
            failures: List[str] = []
            checked = 0
            for record in self.store.records("torsion"):
                weyl_group = self.weyl_group(record.type_label, record.rank)
                expected = record.expected
                w = weyl_group.elliptic_rep(record.m, seed=self.settings.seed)
                analyzer = TorsionAnalyzer(weyl_group)
                summary = analyzer.summary(w)
                if expected.i_m is not None:
                    self._compare(record, "I_m", weyl_group.datum.i_m(record.m), expected.i_m, failures)
                if expected.a_m is not None:
                    self._compare(record, "A_m", summary["a_m"], expected.a_m, failures)
                if expected.a_m_circ is not None:
                    self._compare(record, "A_m°", summary["a_m_circ"], expected.a_m_circ, failures)
                if expected.orbit_sizes is not None:
                    self._compare(record, "orbit sizes", analyzer.orbit_decomposition(w), expected.orbit_sizes,
                                  failures)
                checked += 1
            return {"checked": checked, "failures": failures}
        except Exception as e:
            logger.error(f"Error in torsion checks: {e}")
            return {"error": str(e)}

    def _perform_affine_checks(self) -> Dict:
        try:
            failures: List[str] = []
            checked = 0
            for record in self.store.records("affine"):
                datum = build_root_datum(record.type_label, record.rank)
                system = AffineRootSystem(datum, Slope(record.k, record.m))
                expected = record.expected
                if expected.n_c is not None:
                    self._compare(record, "n_c", system.n_c, expected.n_c, failures)
                if expected.delta_c_plus is not None:
                    computed = sorted((format_root(b.a), b.level) for b in system.delta_c_plus)
                    self._compare(record, "Delta_c^+", computed, sorted(tuple(x) for x in expected.delta_c_plus),
                                  failures)
                if expected.frak_d_c1 is not None:
                    base = system.fundamental_alcove()
                    computed = sorted((format_root(a.a), a.level) for a in system.frak_d_cw(base))
                    self._compare(record, "D_c,1", computed, sorted(tuple(x) for x in expected.frak_d_c1), failures)
                if expected.clans is not None:
                    self._check_clans(record, system, failures)
                inequality = system.check_335a(INEQUALITY_RADIUS)
                if not inequality["passed"]:
                    self._compare(record, "|D_c,w| >= n_c on W_0", inequality["counterexample"], None, failures)
                checked += 1
            return {"checked": checked, "failures": failures}
        except Exception as e:
            logger.error(f"Error in affine checks: {e}")
            return {"error": str(e)}

    def _perform_inequality_sweep(self) -> Dict:
        """|D_c,w| >= n_c on W_0 for every golden type and every m in its elliptic numbers"""
        try:
            failures: List[str] = []
            checked = 0
            for record in self.store.records("elliptic_numbers"):
                datum = build_root_datum(record.type_label, record.rank)
                for m in record.expected.elliptic_numbers or []:
                    report = AffineRootSystem(datum, Slope(1, m)).check_335a(INEQUALITY_RADIUS)
                    if not report["passed"]:
                        self._compare(record, f"|D_c,w| >= n_c on W_0 at m={m}", report["counterexample"], None,
                                      failures)
                    checked += 1
            return {"checked": checked, "failures": failures}
        except Exception as e:
            logger.error(f"Error in inequality sweep: {e}")
            return {"error": str(e)}

    def _check_clans(self, record: GoldenRecord, system: AffineRootSystem, failures: List[str]) -> None:
        """Each golden clan equals an enumerated bounded clan, compared by alcove centers"""
        clans = system.enumerate_clans(record.radius)
        by_keys = {frozenset(a.key for a in clan["members"]): clan for clan in clans}
        expected_keys = set()
        for words in record.expected.clans:
            keys = frozenset(system.from_word(parse_word(word)).key for word in words)
            expected_keys.add(keys)
            clan = by_keys.get(keys)
            if clan is None:
                self._compare(record, f"clan {words}", None, words, failures)
            elif not clan["bounded"]:
                self._compare(record, f"clan {words} bounded", False, True, failures)
        if record.expected.clans_exact:
            extra = [clan["words"] for keys, clan in by_keys.items() if clan["bounded"] and keys not in expected_keys]
            self._compare(record, "extra bounded clans", extra, [], failures)

    def _perform_localization_checks(self) -> Dict:
        try:
            failures: List[str] = []
            checked = 0
            for record in self.store.records("localization"):
                weyl_group = self.weyl_group(record.type_label, record.rank)
                localizer = Localizer(weyl_group, Slope(record.k, record.m))
                expected = record.expected
                if expected.identity_holds is not None:
                    numerators = [record.k]
                    if record.k == 1:
                        numerators.append(second_numerator(record.m))
                    for k in numerators:
                        target = localizer if k == record.k else Localizer(weyl_group, Slope(k, record.m))
                        status = target.verify_334()["status"]
                        self._compare(record, f"identity at k={k}", status == "holds", expected.identity_holds,
                                      failures)
                point = localizer.generic_point()
                for word, count in (expected.point_counts or {}).items():
                    alcove = localizer.affine.from_word(parse_word(word))
                    self._compare(record, f"point count at {word}", localizer.point_count(alcove, point), count,
                                  failures)
                for word, value in (expected.chi or {}).items():
                    alcove = localizer.affine.from_word(parse_word(word))
                    self._compare(record, f"chi at {word}", localizer.chi_fiber(alcove, point), value, failures)
                if expected.total_chi is not None:
                    totals = localizer.total_chi(record.radius)
                    self._compare(record, "total chi", totals["total"], expected.total_chi, failures)
                    if not totals["frontier_zero"]:
                        self._compare(record, "frontier contributions vanish", False, True, failures)
                checked += 1
            return {"checked": checked, "failures": failures}
        except Exception as e:
            logger.error(f"Error in localization checks: {e}")
            return {"error": str(e)}

    def _perform_module_checks(self) -> Dict:
        """Catalog modules and golden module files pass; random perturbations fail"""
        try:
            failures: List[str] = []
            modules = builtin_modules() + [load_module(path) for path in self.store.module_paths()]
            rng = np.random.default_rng(self.settings.seed)
            for module in modules:
                result = verify_module(module)
                if not result["passed"]:
                    message = f"module '{module.name}' fails {result['first_failure']} [{module.source}]"
                    logger.error(f"Module mismatch: {message}")
                    failures.append(message)
                for _ in range(PERTURBATIONS_PER_MODULE):
                    perturbed, where = perturb(module, rng)
                    if verify_module(perturbed)["passed"]:
                        message = f"module '{module.name}' still passes after perturbing {where}"
                        logger.error(f"Module mismatch: {message}")
                        failures.append(message)
            return {"checked": len(modules), "failures": failures}
        except Exception as e:
            logger.error(f"Error in module checks: {e}")
            return {"error": str(e)}


def classification_table(report: ClassifyReport) -> pd.DataFrame:
    """Per-m rows of a classify report as a DataFrame"""
    frame = pd.DataFrame([row.model_dump(exclude={"representative", "spherical_factors_note"}) for row in report.rows])
    return frame.set_index("m") if not frame.empty else frame


def clan_table(report: ClanReport) -> pd.DataFrame:
    rows = [{"clan": " | ".join(row.words), "size": row.size, "bounded": row.bounded,
             "D_c,w": ", ".join(row.frak_d)} for row in report.clans]
    return pd.DataFrame(rows)
