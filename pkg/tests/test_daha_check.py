from fractions import Fraction

import numpy as np
import pytest

from analysis.daha_check import (AffinePresentation, DahaChecker, builtin_modules, fraction_matrix, perturb,
                                 sign_type_module, to_fraction, trivial_type_module, verify_module)
from analysis.root_data import build_root_datum
from backend.golden.golden_store import GoldenStore, load_module

PERTURBATIONS = 20


def test_to_fraction():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(-2) == Fraction(-2)
    assert to_fraction(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(ValueError):
        to_fraction(0.5)


def test_fraction_matrix_must_be_square():
    with pytest.raises(ValueError):
        fraction_matrix([[1, 2]])


@pytest.mark.parametrize("module", builtin_modules(), ids=lambda module: module.name)
def test_catalog_modules_satisfy_relations(module):
    result = verify_module(module)
    assert result["passed"], result["first_failure"]
    assert result["checked"] > 0


@pytest.mark.parametrize("module", builtin_modules(), ids=lambda module: module.name)
def test_perturbed_modules_fail(module, rng):
    for _ in range(PERTURBATIONS):
        perturbed, where = perturb(module, rng)
        assert not verify_module(perturbed)["passed"], where


@pytest.mark.parametrize("type_label,rank", [("A", 1), ("A", 3), ("B", 2), ("C", 3), ("D", 5), ("E", 6), ("G", 2)])
def test_one_dimensional_modules_pass_only_at_their_slope(type_label, rank):
    datum = build_root_datum(type_label, rank)
    h = datum.coxeter_number
    for c in (Fraction(1, h), Fraction(-1, h), Fraction(1, h + 1), Fraction(2, h)):
        assert verify_module(trivial_type_module(datum, c))["passed"] == (c == Fraction(1, h))
        assert verify_module(sign_type_module(datum, c))["passed"] == (c == Fraction(-1, h))


@pytest.mark.parametrize("type_label,rank", [("A", 1), ("A", 4), ("B", 3), ("C", 2), ("D", 4), ("E", 6), ("E", 7),
                                             ("E", 8), ("F", 4), ("G", 2)])
def test_presentation_self_consistency(type_label, rank):
    result = AffinePresentation(build_root_datum(type_label, rank)).self_consistency()
    assert result["passed"], result["failures"]


def test_pairing_with_fundamental_weights():
    presentation = AffinePresentation(build_root_datum("F", 4))
    basis = dict(presentation.basis())
    for j in range(1, 5):
        for i in range(1, 5):
            assert presentation.pairing(basis[f"o{j}"], i) == (1 if i == j else 0)
    assert presentation.pairing(basis["delta"], 0) == 0


def test_affine_reflection_moves_level():
    presentation = AffinePresentation(build_root_datum("G", 2))
    basis = dict(presentation.basis())
    mu, level = presentation.act(0, basis["o1"])
    assert level == -presentation.pairing(basis["o1"], 0)
    assert presentation.act(0, (mu, level)) == basis["o1"]


def test_dimension_mismatch_is_rejected():
    datum = build_root_datum("C", 2)
    module = trivial_type_module(datum, Fraction(1, 4))
    module.S[1] = np.array([[Fraction(-1), Fraction(0)], [Fraction(0), Fraction(-1)]], dtype=object)
    with pytest.raises(ValueError):
        DahaChecker(AffinePresentation(datum)).verify_module(module)


def test_missing_generator_is_rejected():
    datum = build_root_datum("C", 2)
    module = trivial_type_module(datum, Fraction(1, 4))
    del module.Xi["o2"]
    with pytest.raises(ValueError):
        verify_module(module)


def test_golden_module_files_pass():
    paths = GoldenStore().module_paths()
    assert len(paths) == 4
    for path in paths:
        module = load_module(path)
        result = verify_module(module)
        assert result["passed"], f"{path}: {result['first_failure']}"
