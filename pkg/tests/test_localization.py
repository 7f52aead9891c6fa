from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from analysis.affine_roots import Slope, parse_word
from analysis.localization import LinFormProduct, Localizer, TruncatedSeries
from analysis.torsion import TorsionAnalyzer
from analysis.weyl_group import create_weyl_group
from backend.config import settings


def localizer(type_label, rank, k, m, config=None):
    return Localizer(create_weyl_group(type_label, rank, config), Slope(k, m))


def test_series_inverse():
    series = TruncatedSeries([2, 3, 1], 4)
    product = series * series.inverse()
    assert product.coefficients == [1, 0, 0, 0, 0]
    assert TruncatedSeries.linear(-1, 3).inverse().coefficients == [1, 1, 1, 1]


def test_series_shift_and_coefficients():
    series = TruncatedSeries([5, 7], 2).shift(-1)
    assert series.coefficient(-1) == 5
    assert series.coefficient(0) == 7
    assert series.coefficient(-3) == 0
    with pytest.raises(ValueError):
        series.coefficient(5)
    assert (series * Fraction(1, 5)).coefficient(-1) == 1


def test_series_addition_needs_same_valuation():
    with pytest.raises(ValueError):
        TruncatedSeries([1], 2) + TruncatedSeries([1], 2, 1)
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries([0, 1], 2).inverse()


@pytest.mark.parametrize("type_label,rank,k,m", [
    ("C", 2, 1, 2), ("C", 2, 3, 2), ("G", 2, 1, 3), ("G", 2, 2, 3), ("G", 2, 1, 2), ("G", 2, 1, 6),
    ("D", 4, 1, 4), ("F", 4, 1, 8), ("F", 4, 3, 8), ("E", 6, 1, 9),
])
def test_identity_holds(type_label, rank, k, m):
    verdict = localizer(type_label, rank, k, m).verify_334()
    assert verdict["status"] == "holds"


@pytest.mark.deep
def test_identity_holds_e7_m2():
    config = settings.deepened()
    verdict = localizer("E", 7, 1, 2, config).verify_334()
    assert verdict["status"] == "holds"
    assert verdict["wc_order"] == 40320


def test_identity_fails_with_wrong_torsion_order():
    verdict = localizer("G", 2, 1, 2).verify_334(a_m_circ_order=3)
    assert verdict["status"] == "fails"
    assert verdict["lhs"] != verdict["rhs"]


def test_identity_unverified_when_wc_exceeds_budget():
    verdict = localizer("G", 2, 1, 2, replace(settings, wc_budget=1)).verify_334()
    assert verdict["status"] == "unverified"


def test_identity_needs_positive_k():
    with pytest.raises(ValueError):
        localizer("G", 2, -1, 2).verify_334()


@pytest.mark.parametrize("type_label,rank,k,m,word,count", [
    ("G", 2, 1, 2, "1", 4), ("G", 2, 1, 2, "s0", 4), ("G", 2, 1, 2, "s0 s2", 4),
    ("G", 2, 1, 3, "1", 3), ("G", 2, 1, 3, "s0", 3),
    ("C", 2, 1, 2, "1", 2), ("C", 2, 1, 2, "s2 s0", 2),
    ("G", 2, 1, 6, "1", 1),
])
def test_point_counts(type_label, rank, k, m, word, count):
    loc = localizer(type_label, rank, k, m)
    assert loc.point_count(loc.affine.from_word(parse_word(word))) == count


@pytest.mark.parametrize("type_label,rank,m", [("G", 2, 2), ("G", 2, 3), ("C", 2, 2), ("D", 4, 4)])
def test_point_count_at_identity_is_torsion_order(type_label, rank, m):
    loc = localizer(type_label, rank, 1, m)
    w = loc.weyl_group.elliptic_rep(m)
    assert loc.point_count(loc.affine.fundamental_alcove()) == TorsionAnalyzer(loc.weyl_group).a_m_circ(w).order


def test_point_count_is_independent_of_the_point():
    loc = localizer("G", 2, 1, 2)
    alcove = loc.affine.from_word([0, 2])
    assert {loc.point_count(alcove, loc.generic_point()) for _ in range(100)} == {4}


def test_point_count_rejects_rank_mismatch():
    loc = localizer("G", 2, 1, 2)
    with pytest.raises(ValueError):
        loc.point_count(loc.affine.from_word([0, 2, 1]))


@pytest.mark.parametrize("type_label,rank,k,m,word,chi", [
    ("G", 2, 1, 2, "s0 s2 s1", 2), ("G", 2, 1, 2, "s0 s2 s1 s2", 4), ("G", 2, 1, 3, "s0 s2", 2),
    ("C", 2, 1, 2, "s0", 2),
])
def test_chi_fiber(type_label, rank, k, m, word, chi):
    loc = localizer(type_label, rank, k, m)
    assert loc.chi_fiber(loc.affine.from_word(parse_word(word))) == chi


def test_chi_agrees_with_point_count_at_full_rank():
    loc = localizer("G", 2, 1, 2)
    point = loc.generic_point()
    for word in ("1", "s0", "s0 s2"):
        alcove = loc.affine.from_word(parse_word(word))
        assert loc.chi_fiber(alcove, point) == loc.point_count(alcove, point)


def test_chi_fiber_rejects_alcoves_outside_wc():
    loc = localizer("C", 2, 1, 2)
    with pytest.raises(ValueError):
        loc.chi_fiber(loc.affine.from_word([0, 1]))


@pytest.mark.parametrize("type_label,rank,k,m,radius,total", [
    ("C", 2, 1, 2, 4, 6), ("G", 2, 1, 2, 5, 18), ("G", 2, 1, 3, 5, 8),
    ("G", 2, 1, 6, 4, 1), ("A", 3, 1, 4, 4, 1), ("B", 3, 1, 6, 4, 1),
    ("C", 2, 3, 2, 15, 54), ("G", 2, 2, 3, 12, 32),
])
def test_total_chi(type_label, rank, k, m, radius, total):
    totals = localizer(type_label, rank, k, m).total_chi(radius)
    assert totals["total"] == total
    assert totals["frontier_zero"]


def test_total_chi_needs_positive_k():
    with pytest.raises(ValueError):
        localizer("C", 2, -1, 2).total_chi(3)


@pytest.mark.parametrize("type_label,rank,k,m", [("G", 2, 1, 2), ("G", 2, 1, 3), ("C", 2, 1, 2), ("C", 2, 3, 2),
                                                 ("D", 4, 1, 4), ("F", 4, 1, 8)])
def test_alternating_sum_is_antisymmetric(type_label, rank, k, m):
    loc = localizer(type_label, rank, k, m)
    forms = LinFormProduct(loc.datum, [alpha.a for alpha in loc.affine.frak_d_cw(loc.affine.fundamental_alcove())])
    for _ in range(100):
        y = loc.generic_point()
        base = loc.alternating_sum(forms, y)
        for sign, matrix in loc.wc_elements():
            assert loc.alternating_sum(forms, loc.transform_point(matrix, y)) == sign * base


def test_wc_elements_have_unit_determinants():
    loc = localizer("G", 2, 1, 2)
    elements = loc.wc_elements()
    assert len(elements) == loc.wc.order == 4
    assert sorted(sign for sign, _ in elements) == [-1, -1, 1, 1]
    for _, matrix in elements:
        assert np.array_equal(matrix @ matrix @ matrix @ matrix, np.eye(2, dtype=np.int64))


@pytest.mark.parametrize("type_label,rank,m,expected", [("G", 2, 2, "A1^2"), ("G", 2, 3, "A1"), ("G", 2, 6, ""),
                                                        ("C", 2, 2, "A1")])
def test_subsystem_type(type_label, rank, m, expected):
    assert localizer(type_label, rank, 1, m).subsystem_type() == expected


def test_spherical_factor_count():
    assert localizer("G", 2, 1, 2).spherical_factor_count() == 2
    assert localizer("C", 2, 1, 2).spherical_factor_count() == 2


def test_total_chi_grows_until_the_frontier_vanishes():
    loc = localizer("C", 2, 3, 2)
    truncated = loc.total_chi(10)
    assert not truncated["frontier_zero"]
    assert loc.total_chi(15)["total"] == 54


@pytest.mark.deep
def test_total_chi_e7_subregular():
    loc = localizer("E", 7, 1, 14)
    assert loc.total_chi(5)["total"] == 8
    totals = loc.total_chi(7)
    assert totals["total"] == 9
    assert totals["frontier_zero"]
